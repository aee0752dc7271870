#pragma once

// Experiment plumbing: stratified k-fold plans, cross-validation reports in the
// "rule / training error / validation error" shape, synthetic DNF and eddy-current
// data generators, and classification of new signal records.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ubrain/ec_preprocess.hpp"
#include "ubrain/error.hpp"
#include "ubrain/instance.hpp"
#include "ubrain/learner.hpp"

namespace ubrain {

// ---------------------------------------------------------------------------
// Fold plans

struct Fold {
  std::vector<std::size_t> positives;  // indices into the class lists
  std::vector<std::size_t> negatives;
};

struct FoldPlan {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::vector<Fold> folds;
};

/// Seeded shuffle per class, then round-robin over folds. Negatives continue the rotation
/// where the positives stopped so fold sizes stay balanced overall.
inline FoldPlan kfold_split(std::size_t positive_count, std::size_t negative_count, std::size_t k,
                            std::uint64_t seed) {
  if (k == 0) throw Error(ErrorCode::split, "k must be at least 1");
  if (positive_count < k || negative_count < k)
    throw Error(ErrorCode::split, "each class needs at least k=" + std::to_string(k) + " instances (have " +
                                      std::to_string(positive_count) + " positive, " +
                                      std::to_string(negative_count) + " negative)");
  FoldPlan plan{k, seed, std::vector<Fold>(k)};
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pos(positive_count);
  std::vector<std::size_t> neg(negative_count);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::iota(neg.begin(), neg.end(), std::size_t{0});
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  for (std::size_t t = 0; t < pos.size(); ++t) plan.folds[t % k].positives.push_back(pos[t]);
  const std::size_t offset = positive_count % k;
  for (std::size_t t = 0; t < neg.size(); ++t) plan.folds[(t + offset) % k].negatives.push_back(neg[t]);
  for (auto& f : plan.folds) {
    std::sort(f.positives.begin(), f.positives.end());
    std::sort(f.negatives.begin(), f.negatives.end());
  }
  return plan;
}

inline FoldPlan kfold_split(const Dataset& d, std::size_t k, std::uint64_t seed) {
  return kfold_split(d.positives().size(), d.negatives().size(), k, seed);
}

/// Training and validation index sets of fold f. With k = 1 both are the whole data.
struct FoldSplit {
  Fold training;
  Fold validation;
};

inline FoldSplit fold_split(const FoldPlan& plan, std::size_t f) {
  FoldSplit s;
  s.validation = plan.folds.at(f);
  for (std::size_t g = 0; g < plan.folds.size(); ++g) {
    if (g == f && plan.k > 1) continue;
    const auto& src = plan.folds[g];
    s.training.positives.insert(s.training.positives.end(), src.positives.begin(), src.positives.end());
    s.training.negatives.insert(s.training.negatives.end(), src.negatives.begin(), src.negatives.end());
  }
  std::sort(s.training.positives.begin(), s.training.positives.end());
  std::sort(s.training.negatives.begin(), s.training.negatives.end());
  return s;
}

inline Dataset subset(const Dataset& d, const Fold& f) {
  Dataset out(d.arity());
  for (auto i : f.positives) out.add(d.positives().at(i));
  for (auto j : f.negatives) out.add(d.negatives().at(j));
  return out;
}

// ---------------------------------------------------------------------------
// Reports

struct FoldResult {
  std::size_t index = 0;  // 1-based
  Formula rule;
  double training_error = 0.0;
  double validation_error = 0.0;
  std::size_t training_size = 0;
  std::size_t validation_size = 0;
};

struct EvaluationReport {
  std::vector<FoldResult> folds;
  double mean_training_error = 0.0;
  double mean_validation_error = 0.0;

  void finalize() {
    double tr = 0.0;
    double va = 0.0;
    for (const auto& f : folds) {
      tr += f.training_error;
      va += f.validation_error;
    }
    const double n = folds.empty() ? 1.0 : static_cast<double>(folds.size());
    mean_training_error = tr / n;
    mean_validation_error = va / n;
  }
};

/// Misclassified fraction at the 0.5 threshold.
inline double error_rate(const Formula& f, const Dataset& d) {
  if (d.size() == 0) return 0.0;
  std::size_t wrong = 0;
  for (const auto& x : d.positives()) wrong += classify(f, x) != Label::positive;
  for (const auto& x : d.negatives()) wrong += classify(f, x) != Label::negative;
  return static_cast<double>(wrong) / static_cast<double>(d.size());
}

inline double round4(double v) { return std::round(v * 1e4) / 1e4; }

/// Tab-separated table; errors shown with two decimals.
inline void write_report_text(std::ostream& out, const EvaluationReport& r) {
  out << "Test\tRule\tTraining Error\tValidation Error\n";
  out << std::fixed << std::setprecision(2);
  for (const auto& f : r.folds)
    out << f.index << '\t' << render_formula(f.rule) << '\t' << f.training_error << '\t' << f.validation_error
        << '\n';
  out << "Mean\t\t" << r.mean_training_error << '\t' << r.mean_validation_error << '\n';
  out << std::defaultfloat << std::setprecision(6);
}

inline nlohmann::json report_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["folds"] = nlohmann::json::array();
  for (const auto& f : r.folds)
    j["folds"].push_back({{"test", f.index},
                          {"rule", render_formula(f.rule)},
                          {"terms", f.rule.size()},
                          {"training_error", round4(f.training_error)},
                          {"validation_error", round4(f.validation_error)},
                          {"training_size", f.training_size},
                          {"validation_size", f.validation_size}});
  j["mean"] = {{"training_error", round4(r.mean_training_error)},
               {"validation_error", round4(r.mean_validation_error)}};
  return j;
}

namespace detail {
template <class Fn>
auto in_fold(std::size_t fold, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "fold " + std::to_string(fold) + ": " + e.what());
  }
}
}  // namespace detail

/// Trains on k-1 folds and validates on the held-out one, for every fold in order.
inline EvaluationReport cross_validate(const Dataset& d, std::size_t k, std::uint64_t seed,
                                       const LearnerConfig& config = {}) {
  const auto plan = kfold_split(d, k, seed);
  EvaluationReport report;
  for (std::size_t f = 0; f < k; ++f) {
    const auto split = fold_split(plan, f);
    const Dataset train = subset(d, split.training);
    const Dataset valid = subset(d, split.validation);
    FoldResult r;
    r.index = f + 1;
    r.rule = detail::in_fold(f + 1, [&] { return learn(train, config); });
    r.training_error = error_rate(r.rule, train);
    r.validation_error = error_rate(r.rule, valid);
    r.training_size = train.size();
    r.validation_size = valid.size();
    report.folds.push_back(std::move(r));
  }
  report.finalize();
  return report;
}

struct SignalEncodingOptions {
  ec::SignalFormat format;
  std::size_t band_count = ec::kDefaultBandCount;
  std::size_t bit_depth = ec::kDefaultBitDepth;
  /// Fit the quantizer on every record instead of only the training folds.
  bool fit_on_all = false;
};

/// Cross-validation straight from labelled signal records: per fold the quantizer is fitted
/// on the training records (or on all of them with fit_on_all), then both sides are encoded.
inline EvaluationReport cross_validate_signals(std::span<const ec::SignalRecord> records, std::size_t k,
                                               std::uint64_t seed, const LearnerConfig& config = {},
                                               const SignalEncodingOptions& options = {}) {
  std::vector<std::size_t> pos_records;
  std::vector<std::size_t> neg_records;
  std::vector<ec::BandStats> stats;
  stats.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (!records[r].label) throw Error(ErrorCode::config, "record '" + records[r].id + "' has no class label");
    ec::validate(records[r], options.format);
    (*records[r].label == Label::positive ? pos_records : neg_records).push_back(r);
    stats.push_back(ec::record_band_statistics(records[r], options.band_count));
  }
  const auto plan = kfold_split(pos_records.size(), neg_records.size(), k, seed);

  auto fit = [&](const Fold& fold) {
    std::vector<double> averages;
    auto add = [&](std::size_t r) {
      for (const auto& b : stats[r].bands) averages.push_back(b.average);
    };
    for (auto i : fold.positives) add(pos_records[i]);
    for (auto j : fold.negatives) add(neg_records[j]);
    ec::EncodingModel m;
    m.sample_count = options.format.sample_count;
    m.sample_rate = options.format.sample_rate;
    m.band_count = options.band_count;
    m.bit_depth = options.bit_depth;
    m.quantizer = ec::fit_quantizer(averages, std::size_t{1} << options.bit_depth);
    return m;
  };
  auto encode = [&](const Fold& fold, const ec::EncodingModel& m) {
    Dataset d(m.arity());
    auto add = [&](std::size_t r) {
      Instance x = ec::encode(stats[r], m);
      x.id = records[r].id;
      x.label = *records[r].label;
      d.add(std::move(x));
    };
    for (auto i : fold.positives) add(pos_records[i]);
    for (auto j : fold.negatives) add(neg_records[j]);
    return d;
  };

  Fold everything;
  everything.positives.resize(pos_records.size());
  everything.negatives.resize(neg_records.size());
  std::iota(everything.positives.begin(), everything.positives.end(), std::size_t{0});
  std::iota(everything.negatives.begin(), everything.negatives.end(), std::size_t{0});
  std::optional<ec::EncodingModel> global;
  if (options.fit_on_all) global = fit(everything);

  EvaluationReport report;
  for (std::size_t f = 0; f < k; ++f) {
    const auto split = fold_split(plan, f);
    FoldResult r = detail::in_fold(f + 1, [&] {
      const auto model = global ? *global : fit(split.training);
      const Dataset train = encode(split.training, model);
      const Dataset valid = encode(split.validation, model);
      FoldResult out;
      out.index = f + 1;
      out.rule = learn(train, config);
      out.training_error = error_rate(out.rule, train);
      out.validation_error = error_rate(out.rule, valid);
      out.training_size = train.size();
      out.validation_size = valid.size();
      return out;
    });
    report.folds.push_back(std::move(r));
  }
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------
// Synthetic DNF data

struct GroundTruthSpec {
  Formula formula;
  std::size_t arity = 0;
  /// Target share of positives; negative means "whatever uniform sampling gives".
  double positive_fraction = -1.0;
  /// Probability of flipping each label, in [0, 0.5).
  double noise = 0.0;
};

inline void validate(const GroundTruthSpec& spec) {
  if (spec.formula.empty()) throw Error(ErrorCode::config, "ground-truth formula must be nonempty");
  if (spec.arity == 0 || spec.formula.max_variable() > spec.arity)
    throw Error(ErrorCode::config, "ground-truth formula does not fit the arity");
  if (!(spec.noise >= 0.0 && spec.noise < 0.5)) throw Error(ErrorCode::config, "noise rate must be in [0, 0.5)");
  if (spec.positive_fraction > 1.0) throw Error(ErrorCode::config, "positive fraction must be at most 1");
}

/// Random DNF: `terms` terms, each over distinct variables with a length in [min_len, max_len].
inline Formula random_dnf(std::size_t arity, std::size_t terms, std::size_t min_len, std::size_t max_len,
                          std::mt19937_64& rng) {
  if (arity == 0 || min_len == 0 || min_len > max_len || max_len > arity)
    throw Error(ErrorCode::config, "random DNF shape does not fit the arity");
  std::vector<std::uint32_t> vars(arity);
  std::iota(vars.begin(), vars.end(), std::uint32_t{1});
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::bernoulli_distribution negate(0.5);
  Formula f;
  for (std::size_t t = 0; t < terms; ++t) {
    std::shuffle(vars.begin(), vars.end(), rng);
    Term term;
    const auto size = len(rng);
    for (std::size_t l = 0; l < size; ++l)
      term.add(negate(rng) ? Literal::negated(vars[l]) : Literal::plain(vars[l]));
    f.add(std::move(term));
  }
  return f;
}

/// The complete truth table of the ground truth: every point of {0,1}^n, bit k-1 of the
/// point index giving x_k.
inline Dataset generate_truth_table(const GroundTruthSpec& spec) {
  validate(spec);
  if (spec.arity > 24) throw Error(ErrorCode::config, "truth table too large");
  Dataset d(spec.arity);
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << spec.arity); ++p) {
    Instance x;
    x.id = "p" + std::to_string(p);
    x.values.resize(spec.arity);
    for (std::size_t k = 0; k < spec.arity; ++k) x.values[k] = (p >> k) & 1u ? 1.0 : 0.0;
    x.label = classify(spec.formula, x);
    d.add(std::move(x));
  }
  return d;
}

/// Uniform random points labelled by the ground truth, optionally balanced by rejection and
/// label-flipped at the noise rate. Deterministic per seed.
inline Dataset generate_dnf_dataset(const GroundTruthSpec& spec, std::size_t count, std::uint64_t seed) {
  validate(spec);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(0.5);
  std::bernoulli_distribution flip(spec.noise);
  Dataset d(spec.arity);
  const bool balanced = spec.positive_fraction >= 0.0;
  const auto want_pos = balanced ? static_cast<std::size_t>(std::llround(spec.positive_fraction * count)) : 0;
  const auto want_neg = count - want_pos;
  std::size_t have_pos = 0;
  std::size_t have_neg = 0;
  const std::size_t max_draws = std::max<std::size_t>(count, 1) * 10000;
  for (std::size_t draw = 0; d.size() < count; ++draw) {
    if (draw >= max_draws) throw Error(ErrorCode::config, "cannot reach the requested class balance");
    Instance x;
    x.values.resize(spec.arity);
    for (auto& v : x.values) v = bit(rng) ? 1.0 : 0.0;
    x.label = classify(spec.formula, x);
    if (balanced) {
      if (x.label == Label::positive ? have_pos >= want_pos : have_neg >= want_neg) continue;
      (x.label == Label::positive ? have_pos : have_neg) += 1;
    }
    if (spec.noise > 0.0 && flip(rng)) x.label = x.label == Label::positive ? Label::negative : Label::positive;
    x.id = "s" + std::to_string(d.size());
    d.add(std::move(x));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Synthetic eddy-current signals

struct Tone {
  double frequency_hz = 0.0;
  double amplitude = 0.0;
};

struct ClassProfile {
  std::string name;
  Label label = Label::positive;
  std::vector<Tone> tones;
  /// Standard deviation of the complex white noise per channel.
  double noise_floor = 0.0;
  /// Each tone amplitude is scaled by 1 + U(-jitter, jitter) per record.
  double amplitude_jitter = 0.1;
};

/// Frequency of the bin at the centre of `band`, so a tone there does not leak.
inline double band_center_frequency(std::size_t band, const ec::SignalFormat& format = {},
                                    std::size_t band_count = ec::kDefaultBandCount) {
  const auto [first, last] = ec::band_bins(band, format.sample_count, band_count);
  const std::size_t bin = (first + last - 1) / 2;
  return static_cast<double>(bin) * format.sample_rate / static_cast<double>(format.sample_count);
}

/// Two classes whose strong lines sit in disjoint band sets.
inline std::vector<ClassProfile> profiles_from_bands(std::span<const std::size_t> positive_bands,
                                                     std::span<const std::size_t> negative_bands,
                                                     const ec::SignalFormat& format = {}, double noise_floor = 0.05) {
  auto make = [&](std::string name, Label label, std::span<const std::size_t> bands) {
    ClassProfile p{std::move(name), label, {}, noise_floor, 0.1};
    for (auto b : bands) p.tones.push_back({band_center_frequency(b, format), 1.0 - 0.02 * static_cast<double>(b)});
    return p;
  };
  return {make("perpendicular", Label::positive, positive_bands), make("oblique", Label::negative, negative_bands)};
}

/// Default two-class scenario: perpendicular-notch records ring in the even bands,
/// oblique-notch records in the odd ones.
inline std::vector<ClassProfile> default_ec_profiles(const ec::SignalFormat& format = {}) {
  std::vector<std::size_t> even;
  std::vector<std::size_t> odd;
  for (std::size_t b = 0; b < ec::kDefaultBandCount; ++b) (b % 2 ? odd : even).push_back(b);
  return profiles_from_bands(even, odd, format);
}

/// Random disjoint band split into two profiles, each with 8..12 tone bands.
inline std::vector<ClassProfile> random_ec_profiles(std::mt19937_64& rng, const ec::SignalFormat& format = {}) {
  std::vector<std::size_t> bands(ec::kDefaultBandCount);
  std::iota(bands.begin(), bands.end(), std::size_t{0});
  std::shuffle(bands.begin(), bands.end(), rng);
  std::uniform_int_distribution<std::size_t> size(8, 12);
  const auto a = size(rng);
  const auto b = size(rng);
  std::vector<std::size_t> pos(bands.begin(), bands.begin() + static_cast<std::ptrdiff_t>(a));
  std::vector<std::size_t> neg(bands.begin() + static_cast<std::ptrdiff_t>(a),
                               bands.begin() + static_cast<std::ptrdiff_t>(a + b));
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  return profiles_from_bands(pos, neg, format);
}

/// `count_per_class` records per profile, profiles in order. Record n of profile p carries the
/// id "<name>-<n>" (zero-padded).
inline std::vector<ec::SignalRecord> generate_ec_signals(std::span<const ClassProfile> profiles,
                                                         std::size_t count_per_class, std::uint64_t seed,
                                                         const ec::SignalFormat& format = {}) {
  if (profiles.size() < 2) throw Error(ErrorCode::config, "need at least two class profiles");
  for (const auto& p : profiles) {
    for (const auto& t : p.tones)
      if (!(t.frequency_hz >= 0.0 && t.frequency_hz < format.sample_rate))
        throw Error(ErrorCode::config, "profile '" + p.name + "' has a tone outside [0, Fs)");
    if (p.noise_floor < 0.0 || p.amplitude_jitter < 0.0)
      throw Error(ErrorCode::config, "profile '" + p.name + "' has negative noise or jitter");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ec::SignalRecord> out;
  for (const auto& p : profiles) {
    for (std::size_t c = 0; c < count_per_class; ++c) {
      ec::SignalRecord r;
      std::ostringstream id;
      id << p.name << '-' << std::setw(3) << std::setfill('0') << c;
      r.id = id.str();
      r.sample_rate = format.sample_rate;
      r.label = p.label;
      r.samples.assign(format.sample_count, {0.0, 0.0});
      for (const auto& t : p.tones) {
        const double amp = t.amplitude * (1.0 + p.amplitude_jitter * unit(rng));
        const double phi = phase(rng);
        const double step = 2.0 * std::numbers::pi * t.frequency_hz / format.sample_rate;
        for (std::size_t n = 0; n < format.sample_count; ++n)
          r.samples[n] += std::polar(amp, step * static_cast<double>(n) + phi);
      }
      if (p.noise_floor > 0.0)
        for (auto& z : r.samples) z += std::complex<double>(p.noise_floor * gauss(rng), p.noise_floor * gauss(rng));
      out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deployment

struct Classification {
  std::string id;
  Label label = Label::negative;
  double degree = 0.0;
};

inline std::vector<Classification> classify_records(const ec::EncodingModel& model, const Formula& f,
                                                    std::span<const ec::SignalRecord> records) {
  if (f.max_variable() > model.arity())
    throw Error(ErrorCode::arity, "formula uses x" + std::to_string(f.max_variable()) + " but the model encodes " +
                                      std::to_string(model.arity()) + " variables");
  std::vector<Classification> out;
  for (const auto& r : records) {
    const auto x = ec::encode_record(r, model);
    const double degree = eval_formula(f, x);
    out.push_back({r.id, degree > 0.5 ? Label::positive : Label::negative, degree});
  }
  return out;
}

/// Loads the model, the first formula of `formula_path`, and the signals, then classifies.
inline std::vector<Classification> classify_signals(const std::filesystem::path& model_path,
                                                    const std::filesystem::path& formula_path,
                                                    const std::filesystem::path& signal_source) {
  const auto model = ec::load_model(model_path);
  std::ifstream in(formula_path);
  if (!in) throw Error(ErrorCode::io, "cannot open formula '" + formula_path.string() + "'");
  const auto formulas = read_formulas(in);
  if (formulas.empty()) throw Error(ErrorCode::io, "formula file '" + formula_path.string() + "' is empty");
  const auto records = ec::load_signals(signal_source, {model.sample_count, model.sample_rate});
  return classify_records(model, formulas.front(), records);
}

}  // namespace ubrain
