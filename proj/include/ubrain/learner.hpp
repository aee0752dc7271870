#pragma once

// Greedy relevance-driven DNF induction:
//
//   f = FALSE
//   while positives remain:
//     fill missing bits that a class agrees on; collapse duplicates
//     build S_ij for (remaining positives) x (negatives)
//     grow a term literal by literal from the relevance cascade until no S_ij is live
//     add the term; drop the positives it covers; re-verify it rejects every negative
//   check f against the prepared data

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ubrain/error.hpp"
#include "ubrain/instance.hpp"
#include "ubrain/parallel.hpp"
#include "ubrain/separation.hpp"

namespace ubrain {

struct LearnerConfig {
  /// Upper bound on the number of terms; 0 means "number of positives".
  std::size_t max_terms = 0;
  std::size_t worker_count = 1;
  bool use_cache = true;
  /// Relevance weights closer than this to the maximum count as tied.
  double epsilon = 1e-9;
  /// Tie order over variables (1-based); empty means ascending index.
  std::vector<std::uint32_t> tie_priority;
};

/// One chosen literal.
struct TraceEvent {
  std::size_t term = 0;       // 1-based term number
  std::size_t iteration = 0;  // 1-based literal number within the term
  Literal literal;
  double weight = 0.0;
  std::size_t live_cells = 0;  // before the literal was applied
};

inline std::ostream& operator<<(std::ostream& out, const TraceEvent& e) {
  return out << "term=" << e.term << " iter=" << e.iteration << " literal=" << to_string(e.literal)
             << " weight=" << e.weight << " live_cells=" << e.live_cells;
}

using TraceSink = std::function<void(const TraceEvent&)>;

// ---------------------------------------------------------------------------
// Preprocessing

namespace detail {
inline void reduce_class(std::vector<Instance>& instances, std::size_t arity) {
  for (std::size_t k = 0; k < arity; ++k) {
    std::optional<double> agreed;
    bool unanimous = true;
    bool missing = false;
    for (const auto& x : instances) {
      const double v = x.values[k];
      if (v == kMissing) {
        missing = true;
      } else if (v == 0.0 || v == 1.0) {
        if (agreed && *agreed != v) unanimous = false;
        agreed = v;
      }
    }
    if (!missing || !agreed || !unanimous) continue;
    for (auto& x : instances)
      if (x.values[k] == kMissing) x.values[k] = *agreed;
  }
}
}  // namespace detail

/// Replaces each missing bit by the value that every same-class instance crisp at that
/// position agrees on. Positions with no crisp witness, or with disagreement, are left alone.
inline Dataset uncertainty_reduction(const Dataset& d) {
  Dataset out = d;
  detail::reduce_class(out.mutable_positives(), d.arity());
  detail::reduce_class(out.mutable_negatives(), d.arity());
  return out;
}

/// Collapses exact duplicates within each class (first occurrence kept). A positive that
/// exactly equals a negative raises InconsistencyError naming both.
inline Dataset repetition_deletion(const Dataset& d) {
  Dataset out(d.arity());
  std::map<std::vector<double>, const Instance*> seen_positive;
  std::map<std::vector<double>, bool> seen_negative;
  for (const auto& x : d.positives())
    if (seen_positive.emplace(x.values, &x).second) out.add(x);
  for (const auto& x : d.negatives()) {
    if (auto hit = seen_positive.find(x.values); hit != seen_positive.end())
      throw InconsistencyError(hit->second->id, x.id,
                               "positive '" + hit->second->id + "' and negative '" + x.id + "' are identical");
    if (seen_negative.emplace(x.values, true).second) out.add(x);
  }
  return out;
}

/// Uncertainty reduction followed by repetition deletion: the data the learner fits.
inline Dataset prepare_dataset(const Dataset& d) { return repetition_deletion(uncertainty_reduction(d)); }

// ---------------------------------------------------------------------------
// Term growth

/// Grows one term over `table` (mutated: rows and cells are retired as literals are chosen).
/// `term_number` only labels trace events.
inline Term grow_term(SeparationTable& table, const LearnerConfig& config, ParallelEngine& engine,
                      const TraceSink& trace = {}, std::size_t term_number = 1) {
  Term term;
  std::size_t iteration = 0;
  for (std::size_t live = table.live_cell_count(); live > 0; live = table.live_cell_count()) {
    const auto r = engine.total_relevance(table);
    const auto lit = choose_literal(r, config.epsilon, config.tie_priority);
    ++iteration;
    if (trace) trace(TraceEvent{term_number, iteration, lit, r.weight(lit), live});
    if (term.contains(lit.complement()))
      throw Error(ErrorCode::contradiction, "both polarities of x" + std::to_string(lit.variable) +
                                                " selected for one term");
    term.add(lit);
    const std::size_t rows = table.retire_rows_not_satisfying(lit);
    const std::size_t cells = engine.retire_cells_containing(table, lit);
    if (rows == 0 && cells == 0)
      throw Error(ErrorCode::stall, "literal " + to_string(lit) + " retired nothing");
  }
  return term;
}

inline Term grow_term(SeparationTable& table, const LearnerConfig& config = {}, const TraceSink& trace = {}) {
  ParallelEngine engine(config.worker_count, config.use_cache);
  return grow_term(table, config, engine, trace);
}

// ---------------------------------------------------------------------------
// Consistency

struct ConsistencyViolation {
  Label expected;
  std::size_t index;  // into positives() or negatives() of the checked dataset
  std::string id;
  double degree;
};

struct ConsistencyReport {
  std::vector<ConsistencyViolation> violations;
  bool consistent() const noexcept { return violations.empty(); }
};

/// Lists positives with degree <= 0.5 and negatives with degree > 0.5.
inline ConsistencyReport consistency_check(const Formula& f, const Dataset& d) {
  ConsistencyReport report;
  for (std::size_t i = 0; i < d.positives().size(); ++i) {
    const double deg = eval_formula(f, d.positives()[i]);
    if (!(deg > 0.5)) report.violations.push_back({Label::positive, i, d.positives()[i].id, deg});
  }
  for (std::size_t j = 0; j < d.negatives().size(); ++j) {
    const double deg = eval_formula(f, d.negatives()[j]);
    if (deg > 0.5) report.violations.push_back({Label::negative, j, d.negatives()[j].id, deg});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Outer loop

struct LearnResult {
  Formula formula;
  /// The dataset after uncertainty reduction and repetition deletion.
  Dataset prepared;
};

/// Learns a DNF consistent with `d`. Missing bits are resolved once, up front, so every
/// term is verified against the same negatives it was grown from. The final check runs
/// against the prepared data.
inline LearnResult learn_detailed(const Dataset& d, const LearnerConfig& config = {}, const TraceSink& trace = {}) {
  if (config.worker_count == 0) throw Error(ErrorCode::config, "worker count must be at least 1");
  LearnResult result{{}, prepare_dataset(d)};
  const auto& negatives = result.prepared.negatives();
  std::vector<Instance> remaining = result.prepared.positives();
  if (remaining.empty()) return result;
  if (negatives.empty()) {
    result.formula.add(Term{});
    return result;
  }
  const std::size_t max_terms = config.max_terms ? config.max_terms : remaining.size();

  ParallelEngine engine(config.worker_count, config.use_cache);
  while (!remaining.empty()) {
    if (result.formula.size() >= max_terms)
      throw Error(ErrorCode::resource, "term limit " + std::to_string(max_terms) + " reached with " +
                                           std::to_string(remaining.size()) + " positives uncovered");
    auto table = engine.build_table(remaining, negatives);
    Term term = grow_term(table, config, engine, trace, result.formula.size() + 1);

    const auto before = remaining.size();
    std::erase_if(remaining, [&](const Instance& u) { return eval_term(term, u) > 0.5; });
    if (remaining.size() == before)
      throw Error(ErrorCode::stall, "term " + render_term(term) + " covers no remaining positive");

    for (const auto& v : negatives)
      if (eval_term(term, v) > 0.5)
        throw InconsistencyError("", v.id, "term " + render_term(term) + " accepts negative '" + v.id + "'");
    result.formula.add(std::move(term));
  }

  const auto report = consistency_check(result.formula, result.prepared);
  if (!report.consistent()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::inconsistency, "learned formula misclassifies " + std::string(to_string(v.expected)) +
                                              " '" + v.id + "'");
  }
  return result;
}

inline Formula learn(const Dataset& d, const LearnerConfig& config = {}, const TraceSink& trace = {}) {
  return learn_detailed(d, config, trace).formula;
}

}  // namespace ubrain
