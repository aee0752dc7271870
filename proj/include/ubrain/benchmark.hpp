#pragma once

// Wall-clock speed-up of learn() across worker counts.

#include <algorithm>
#include <chrono>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ubrain/error.hpp"
#include "ubrain/harness.hpp"
#include "ubrain/learner.hpp"

namespace ubrain {

struct BenchmarkRow {
  std::size_t workers = 1;
  double median_seconds = 0.0;
  double speedup = 1.0;  // T_1 / T_W
  std::vector<double> samples;
  std::string formula;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  /// Every run at every worker count produced the same rendered formula.
  bool identical_formulas = true;
};

inline constexpr double kMinBaselineSeconds = 0.1;

/// Times learn() `repetitions` times per worker count (W = 1 is always measured first, as the
/// baseline). Throws timer_resolution when the single-worker median is under 100 ms.
inline BenchmarkReport benchmark_speedup(const Dataset& d, std::span<const std::size_t> worker_counts,
                                         std::size_t repetitions, LearnerConfig config = {}) {
  if (repetitions == 0) throw Error(ErrorCode::config, "repetitions must be at least 1");
  std::vector<std::size_t> counts{1};
  for (auto w : worker_counts) {
    if (w == 0) throw Error(ErrorCode::config, "worker count must be at least 1");
    if (std::find(counts.begin(), counts.end(), w) == counts.end()) counts.push_back(w);
  }

  BenchmarkReport report;
  std::string reference;
  for (auto w : counts) {
    BenchmarkRow row;
    row.workers = w;
    config.worker_count = w;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      const auto f = learn(d, config);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      row.samples.push_back(elapsed.count());
      row.formula = render_formula(f);
      if (reference.empty()) reference = row.formula;
      if (row.formula != reference) report.identical_formulas = false;
    }
    auto sorted = row.samples;
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();
    row.median_seconds = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    if (w == 1 && row.median_seconds < kMinBaselineSeconds)
      throw Error(ErrorCode::timer_resolution, "single-worker run took " + std::to_string(row.median_seconds) +
                                                   " s; need at least 0.1 s for a meaningful speed-up");
    report.rows.push_back(std::move(row));
  }
  const double base = report.rows.front().median_seconds;
  for (auto& row : report.rows) row.speedup = base / row.median_seconds;
  return report;
}

/// Balanced random-DNF dataset sized for timing runs.
inline Dataset make_benchmark_dataset(std::size_t positives, std::size_t negatives, std::size_t arity,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GroundTruthSpec spec;
  spec.arity = arity;
  spec.formula = random_dnf(arity, 6, 3, 4, rng);
  const std::size_t count = positives + negatives;
  spec.positive_fraction = static_cast<double>(positives) / static_cast<double>(count);
  return generate_dnf_dataset(spec, count, seed + 1);
}

inline void write_benchmark_text(std::ostream& out, const BenchmarkReport& r) {
  out << "worker_count\tmedian_seconds\tspeedup\n";
  for (const auto& row : r.rows) out << row.workers << '\t' << row.median_seconds << '\t' << row.speedup << '\n';
}

inline nlohmann::json benchmark_json(const BenchmarkReport& r) {
  nlohmann::json j;
  j["identical_formulas"] = r.identical_formulas;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"worker_count", row.workers},
                         {"median_seconds", row.median_seconds},
                         {"speedup", row.speedup},
                         {"samples", row.samples}});
  return j;
}

}  // namespace ubrain
