#pragma once

// The family of separation sets S_ij between live positives (rows) and
// negatives (columns), and the relevance cascade R_ij -> R_i -> R computed over it.
//
// A literal l belongs to S_ij with membership
//     mu_ij(l) = max(0, eval_literal(l, u_i) - eval_literal(l, v_j)),
// so S_ij is never stored: it is recomputed from the two instances, which keeps the
// table at O(I*n + J*n + I*J) memory instead of O(I*J*n).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "ubrain/error.hpp"
#include "ubrain/instance.hpp"

namespace ubrain {

/// Probability weights over the 2n candidate literals, indexed by Literal::index().
class RelevanceDistribution {
 public:
  RelevanceDistribution() = default;
  explicit RelevanceDistribution(std::size_t arity) : weights_(2 * arity, 0.0) {}
  explicit RelevanceDistribution(std::vector<double> weights) : weights_(std::move(weights)) {}

  std::size_t arity() const noexcept { return weights_.size() / 2; }
  double weight(Literal lit) const { return weights_.at(lit.index()); }
  double& operator[](std::size_t index) { return weights_[index]; }
  double operator[](std::size_t index) const { return weights_[index]; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<double> weights() noexcept { return weights_; }

  double sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

  friend bool operator==(const RelevanceDistribution&, const RelevanceDistribution&) = default;

 private:
  std::vector<double> weights_;
};

namespace detail {
inline std::uint64_t next_row_version() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}
}  // namespace detail

/// Membership degrees of the plain and negated literal of one variable in S_ij.
struct VariableMembership {
  double plain;
  double negated;
};

inline VariableMembership variable_membership(double u, double v) noexcept {
  return {std::max(0.0, u - v), std::max(0.0, (1.0 - u) - (1.0 - v))};
}

class SeparationTable {
 public:
  /// Builds S_ij for every (positive, negative) pair. Throws InseparablePairError
  /// when some S_ij is empty.
  static SeparationTable build(std::span<const Instance> positives, std::span<const Instance> negatives) {
    return build(positives, negatives, [](std::size_t rows, auto&& fill) { fill(0, rows); });
  }

  /// Same as above, with the row fill handed to `run_blocks(row_count, fill)`, which must call
  /// fill(first, last) over disjoint ranges covering every row. The result does not depend on
  /// how the rows are split.
  template <class BlockRunner>
  static SeparationTable build(std::span<const Instance> positives, std::span<const Instance> negatives,
                               BlockRunner&& run_blocks) {
    if (positives.empty() || negatives.empty())
      throw Error(ErrorCode::empty_set, "separation table needs at least one positive and one negative");
    const std::size_t n = positives.front().arity();
    SeparationTable t(n, positives.size(), negatives.size());
    for (std::size_t i = 0; i < positives.size(); ++i) {
      if (positives[i].arity() != n) throw Error(ErrorCode::arity, "positive arity mismatch");
      std::copy(positives[i].values.begin(), positives[i].values.end(), t.positives_.begin() + i * n);
    }
    for (std::size_t j = 0; j < negatives.size(); ++j) {
      if (negatives[j].arity() != n) throw Error(ErrorCode::arity, "negative arity mismatch");
      std::copy(negatives[j].values.begin(), negatives[j].values.end(), t.negatives_.begin() + j * n);
    }
    run_blocks(t.rows_, [&t](std::size_t first, std::size_t last) { t.fill_rows(first, last); });
    t.check_separable();
    return t;
  }

  std::size_t arity() const noexcept { return arity_; }
  std::size_t row_count() const noexcept { return rows_; }
  std::size_t column_count() const noexcept { return cols_; }

  std::span<const double> positive(std::size_t i) const { return {positives_.data() + i * arity_, arity_}; }
  std::span<const double> negative(std::size_t j) const { return {negatives_.data() + j * arity_, arity_}; }

  /// mu_ij(l); zero when l is not in S_ij.
  double membership(std::size_t i, std::size_t j, Literal lit) const {
    if (lit.variable == 0 || lit.variable > arity_) throw Error(ErrorCode::arity, "literal outside table arity");
    const auto m = variable_membership(positive(i)[lit.variable - 1], negative(j)[lit.variable - 1]);
    return lit.is_negated() ? m.negated : m.plain;
  }

  bool contains(std::size_t i, std::size_t j, Literal lit) const { return membership(i, j, lit) > 0.0; }

  /// Sum of memberships over S_ij (the normaliser of R_ij).
  double cell_mass(std::size_t i, std::size_t j) const { return mass_[i * cols_ + j]; }

  /// The materialised set S_ij as (literal, membership) pairs in literal order.
  std::vector<std::pair<Literal, double>> cell(std::size_t i, std::size_t j) const {
    std::vector<std::pair<Literal, double>> out;
    const auto u = positive(i);
    const auto v = negative(j);
    for (std::size_t k = 0; k < arity_; ++k) {
      const auto m = variable_membership(u[k], v[k]);
      const auto var = static_cast<std::uint32_t>(k + 1);
      if (m.plain > 0.0) out.emplace_back(Literal::plain(var), m.plain);
      if (m.negated > 0.0) out.emplace_back(Literal::negated(var), m.negated);
    }
    return out;
  }

  bool row_live(std::size_t i) const { return row_live_[i] != 0; }
  bool cell_live(std::size_t i, std::size_t j) const {
    if (!row_live(i)) return false;
    const auto& cols = live_columns_[i];
    return std::binary_search(cols.begin(), cols.end(), static_cast<std::uint32_t>(j));
  }

  /// Live columns of row i, ascending. Empty for retired rows.
  std::span<const std::uint32_t> live_columns(std::size_t i) const { return live_columns_[i]; }

  /// Changes whenever the live column set of row i changes; unique across all tables.
  std::uint64_t row_version(std::size_t i) const { return row_version_[i]; }

  /// Rows that are live and still hold at least one live cell, ascending.
  std::vector<std::size_t> active_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows_; ++i)
      if (row_live(i) && !live_columns_[i].empty()) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> live_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows_; ++i)
      if (row_live(i)) out.push_back(i);
    return out;
  }

  std::size_t live_cell_count() const {
    std::size_t total = 0;
    for (std::size_t i = 0; i < rows_; ++i) total += live_columns_[i].size();
    return total;
  }

  /// Retires every live row whose positive does not satisfy `lit` (degree <= 0.5).
  /// Returns the number of rows retired.
  std::size_t retire_rows_not_satisfying(Literal lit) {
    std::size_t retired = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!row_live(i) || eval_literal(lit, positive(i)) > 0.5) continue;
      row_live_[i] = 0;
      live_columns_[i].clear();
      row_version_[i] = detail::next_row_version();
      ++retired;
    }
    return retired;
  }

  /// Retires the live cells (i, j) with lit in S_ij for rows in [first, last).
  /// Rows are independent, so disjoint ranges may run concurrently.
  std::size_t retire_cells_containing(Literal lit, std::size_t first, std::size_t last) {
    const std::size_t k = lit.variable - 1;
    std::size_t retired = 0;
    for (std::size_t i = first; i < last; ++i) {
      auto& cols = live_columns_[i];
      if (cols.empty()) continue;
      const double u = positives_[i * arity_ + k];
      const auto before = cols.size();
      std::erase_if(cols, [&](std::uint32_t j) {
        const auto m = variable_membership(u, negatives_[j * arity_ + k]);
        return (lit.is_negated() ? m.negated : m.plain) > 0.0;
      });
      if (cols.size() != before) {
        retired += before - cols.size();
        row_version_[i] = detail::next_row_version();
      }
    }
    return retired;
  }

  std::size_t retire_cells_containing(Literal lit) { return retire_cells_containing(lit, 0, rows_); }

 private:
  SeparationTable(std::size_t arity, std::size_t rows, std::size_t cols)
      : arity_(arity),
        rows_(rows),
        cols_(cols),
        positives_(rows * arity),
        negatives_(cols * arity),
        mass_(rows * cols),
        row_live_(rows, 1),
        live_columns_(rows),
        row_version_(rows) {}

  void fill_rows(std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      const auto u = positive(i);
      auto& cols = live_columns_[i];
      cols.resize(cols_);
      std::iota(cols.begin(), cols.end(), std::uint32_t{0});
      for (std::size_t j = 0; j < cols_; ++j) {
        const auto v = negative(j);
        double mass = 0.0;
        for (std::size_t k = 0; k < arity_; ++k) {
          const auto m = variable_membership(u[k], v[k]);
          mass += m.plain;
          mass += m.negated;
        }
        mass_[i * cols_ + j] = mass;
      }
      row_version_[i] = detail::next_row_version();
    }
  }

  void check_separable() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(mass_[i * cols_ + j] > 0.0)) throw InseparablePairError(i, j);
  }

  std::size_t arity_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> positives_;  // row-major rows_ x arity_
  std::vector<double> negatives_;  // row-major cols_ x arity_
  std::vector<double> mass_;       // row-major rows_ x cols_
  std::vector<std::uint8_t> row_live_;
  std::vector<std::vector<std::uint32_t>> live_columns_;
  std::vector<std::uint64_t> row_version_;
};

inline SeparationTable build_separation_sets(std::span<const Instance> positives,
                                             std::span<const Instance> negatives) {
  return SeparationTable::build(positives, negatives);
}

/// R_ij(l) = mu_ij(l) / sum of mu_ij over S_ij.
inline RelevanceDistribution pair_relevance(const SeparationTable& table, std::size_t i, std::size_t j) {
  if (!table.cell_live(i, j))
    throw Error(ErrorCode::empty_set, "cell (" + std::to_string(i) + "," + std::to_string(j) + ") is not live");
  RelevanceDistribution r(table.arity());
  const double mass = table.cell_mass(i, j);
  const auto u = table.positive(i);
  const auto v = table.negative(j);
  for (std::size_t k = 0; k < table.arity(); ++k) {
    const auto m = variable_membership(u[k], v[k]);
    if (m.plain > 0.0) r[2 * k] = m.plain / mass;
    if (m.negated > 0.0) r[2 * k + 1] = m.negated / mass;
  }
  return r;
}

/// Writes R_i into `out` (size 2n): the mean of R_ij over the live columns of row i,
/// accumulated in ascending column order.
inline void row_relevance_into(const SeparationTable& table, std::size_t i, std::span<double> out) {
  const auto cols = table.live_columns(i);
  if (cols.empty())
    throw Error(ErrorCode::empty_set, "row " + std::to_string(i) + " has no live cells");
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t n = table.arity();
  const auto u = table.positive(i);
  for (const auto j : cols) {
    const auto v = table.negative(j);
    const double mass = table.cell_mass(i, j);
    for (std::size_t k = 0; k < n; ++k) {
      const auto m = variable_membership(u[k], v[k]);
      if (m.plain > 0.0) out[2 * k] += m.plain / mass;
      if (m.negated > 0.0) out[2 * k + 1] += m.negated / mass;
    }
  }
  const double count = static_cast<double>(cols.size());
  for (auto& w : out) w /= count;
}

inline RelevanceDistribution row_relevance(const SeparationTable& table, std::size_t i) {
  RelevanceDistribution r(table.arity());
  row_relevance_into(table, i, r.weights());
  return r;
}

/// R = mean of R_i over the active rows, summed in ascending row order.
inline RelevanceDistribution total_relevance(const SeparationTable& table) {
  const auto rows = table.active_rows();
  if (rows.empty()) throw Error(ErrorCode::empty_set, "separation table has no live cells");
  RelevanceDistribution total(table.arity());
  std::vector<double> row(2 * table.arity());
  for (const auto i : rows) {
    row_relevance_into(table, i, row);
    for (std::size_t l = 0; l < row.size(); ++l) total[l] += row[l];
  }
  const double count = static_cast<double>(rows.size());
  for (auto& w : total.weights()) w /= count;
  return total;
}

/// Argmax of R. Weights within `epsilon` of the maximum tie; ties go to the literal whose
/// variable ranks first in `priority` (identity when empty), plain before negated.
inline Literal choose_literal(const RelevanceDistribution& r, double epsilon = 1e-9,
                              std::span<const std::uint32_t> priority = {}) {
  const auto w = r.weights();
  const auto best = std::max_element(w.begin(), w.end());
  if (best == w.end() || !(*best > 0.0)) throw Error(ErrorCode::empty_set, "relevance distribution is all zero");
  const double cutoff = *best - epsilon;
  if (priority.empty()) {
    for (std::size_t l = 0; l < w.size(); ++l)
      if (w[l] >= cutoff) return Literal::from_index(l);
  }
  if (priority.size() != r.arity()) throw Error(ErrorCode::config, "tie priority must rank every variable");
  for (const auto var : priority) {
    if (var == 0 || var > r.arity()) throw Error(ErrorCode::config, "tie priority names an unknown variable");
    for (const auto lit : {Literal::plain(var), Literal::negated(var)})
      if (w[lit.index()] >= cutoff) return lit;
  }
  throw Error(ErrorCode::config, "tie priority is not a permutation of the variables");
}

}  // namespace ubrain
