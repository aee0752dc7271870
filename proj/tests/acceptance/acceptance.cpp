// Acceptance suite: one PASS/FAIL line per criterion. `acceptance --only N` runs a single one.

#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "support/oracles.hpp"
#include "ubrain/ubrain.hpp"

using namespace ubrain;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

// Thresholds.
constexpr double kParsevalRelTol = 1e-6;
constexpr double kMinSpeedupAt4 = 1.5;
constexpr double kMinSpeedupAt2 = 1.0;

std::vector<std::vector<bool>> bits_of(const std::vector<Instance>& xs) {
  std::vector<std::vector<bool>> out;
  for (const auto& x : xs) {
    std::vector<bool> b;
    for (double v : x.values) b.push_back(v == 1.0);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<std::complex<double>> random_samples(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::complex<double>> z(n);
  for (auto& v : z) v = {g(rng), g(rng)};
  return z;
}

// 1 ------------------------------------------------------------------------
Outcome training_error_is_zero() {
  std::mt19937_64 rng(1001);
  std::size_t folds = 0;
  std::size_t dnf_sets = 0;
  std::size_t ec_sets = 0;
  for (int set = 0; set < 100; ++set) {
    const std::uint64_t seed = rng();
    EvaluationReport report;
    if (set % 10 < 7) {
      std::uniform_int_distribution<std::size_t> arity_d(10, 100);
      std::uniform_int_distribution<std::size_t> half_d(10, 100);
      const auto n = arity_d(rng);
      const auto half = half_d(rng);
      GroundTruthSpec spec;
      spec.arity = n;
      spec.formula = random_dnf(n, 1 + rng() % 4, 1, std::min<std::size_t>(4, n), rng);
      spec.positive_fraction = 0.5;
      report = cross_validate(generate_dnf_dataset(spec, 2 * half, seed), 10, seed);
      ++dnf_sets;
    } else {
      std::uniform_int_distribution<std::size_t> per_class(10, 100);
      const auto profiles = random_ec_profiles(rng);
      report = cross_validate_signals(generate_ec_signals(profiles, per_class(rng), seed), 10, seed);
      ++ec_sets;
    }
    for (const auto& f : report.folds) {
      ++folds;
      if (f.training_error != 0.0) {
        std::ostringstream msg;
        msg << "dataset " << set << " fold " << f.index << " training error " << f.training_error;
        return {false, msg.str()};
      }
    }
  }
  std::ostringstream msg;
  msg << dnf_sets << " DNF + " << ec_sets << " EC datasets, " << folds << " folds, all training errors 0.00";
  return {true, msg.str()};
}

// 2 ------------------------------------------------------------------------
Outcome ec_validation_error_is_zero() {
  const auto records = generate_ec_signals(default_ec_profiles(), 40, 2002);
  const auto report = cross_validate_signals(records, 10, 2002);
  std::ostringstream msg;
  msg << "80 records, k=10, mean training error " << report.mean_training_error << ", mean validation error "
      << report.mean_validation_error;
  return {report.mean_validation_error == 0.0 && report.folds.front().rule.max_variable() <= 100, msg.str()};
}

// 3 ------------------------------------------------------------------------
Outcome truth_table_equivalence() {
  std::mt19937_64 rng(3003);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial) % 7;
    GroundTruthSpec spec;
    spec.arity = n;
    spec.formula = random_dnf(n, 1 + rng() % 4, 1, std::min<std::size_t>(4, n), rng);
    const auto f = learn(generate_truth_table(spec));
    if (!oracle::equivalent(f, spec.formula, n))
      return {false, "n=" + std::to_string(n) + " truth " + render_formula(spec.formula) + " learned " + render_formula(f)};
  }
  return {true, "50 ground truths over n in [4, 10], all exhaustively equivalent"};
}

// 4 ------------------------------------------------------------------------
Outcome worker_invariance() {
  const auto d = make_benchmark_dataset(200, 200, 120, 4004);
  std::string reference;
  for (std::size_t w : {1u, 2u, 4u, 8u}) {
    LearnerConfig config;
    config.worker_count = w;
    const auto text = render_formula(learn(d, config));
    if (reference.empty()) reference = text;
    if (text != reference) return {false, "W=" + std::to_string(w) + " rendered a different formula"};
  }
  return {true, "W in {1,2,4,8} rendered identically (" + std::to_string(reference.size()) + " chars)"};
}

// 5 ------------------------------------------------------------------------
Outcome speedup_shape() {
  const auto d = make_benchmark_dataset(600, 600, 100, 5005);
  const std::vector<std::size_t> workers{2, 4};
  const auto report = benchmark_speedup(d, workers, 3);
  double s2 = 0.0;
  double s4 = 0.0;
  std::ostringstream msg;
  msg << std::fixed << std::setprecision(3) << "hardware threads " << std::thread::hardware_concurrency() << ";";
  for (const auto& row : report.rows) {
    msg << " W=" << row.workers << " " << row.median_seconds << "s S=" << row.speedup;
    if (row.workers == 2) s2 = row.speedup;
    if (row.workers == 4) s4 = row.speedup;
  }
  const bool pass = report.identical_formulas && s4 > kMinSpeedupAt4 && s2 >= kMinSpeedupAt2;
  return {pass, msg.str()};
}

// 6 ------------------------------------------------------------------------
Outcome preprocessing_determinism() {
  std::mt19937_64 rng(6006);
  const auto records = generate_ec_signals(default_ec_profiles(), 25, 6006);
  const auto model = ec::fit_encoding_model(records);
  const auto again = ec::fit_encoding_model(generate_ec_signals(default_ec_profiles(), 25, 6006));
  if (!(model == again)) return {false, "refitting on regenerated records changed the model"};

  std::vector<ec::SignalRecord> probes = records;
  for (int r = 0; r < 50; ++r) {
    ec::SignalRecord rec;
    rec.id = "random" + std::to_string(r);
    rec.samples = random_samples(rng, ec::kDefaultSampleCount);
    probes.push_back(std::move(rec));
  }
  for (const auto& rec : probes) {
    const auto x = ec::encode_record(rec, model);
    if (x.values.size() != 100) return {false, rec.id + " encoded to " + std::to_string(x.values.size()) + " bits"};
    for (double v : x.values)
      if (v != 0.0 && v != 1.0) return {false, rec.id + " has a non-crisp bit"};
    if (ec::encode_record(rec, model).values != x.values) return {false, rec.id + " encodes differently on rerun"};
  }

  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const auto z = random_samples(rng, ec::kDefaultSampleCount);
    double time = 0.0;
    for (const auto& v : z) time += std::norm(v);
    double freq = 0.0;
    for (const auto& c : ec::dft(z)) freq += std::norm(c);
    worst = std::max(worst, std::abs(freq / static_cast<double>(z.size()) - time) / time);
  }
  std::ostringstream msg;
  msg << probes.size() << " records -> 100 crisp bits, reruns identical; Parseval worst relative error " << worst;
  return {worst <= kParsevalRelTol, msg.str()};
}

// 7 ------------------------------------------------------------------------
Outcome quantizer_equal_frequency() {
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::set<double> distinct;
  while (distinct.size() < 1600) distinct.insert(u(rng));
  std::vector<double> values(distinct.begin(), distinct.end());
  std::shuffle(values.begin(), values.end(), rng);
  const auto q = ec::fit_quantizer(values, 16);
  std::vector<int> counts(16, 0);
  for (double v : values) ++counts[ec::quantize(v, q)];
  for (std::size_t b = 0; b < counts.size(); ++b)
    if (counts[b] != 100) return {false, "bin " + std::to_string(b) + " holds " + std::to_string(counts[b])};
  std::uniform_real_distribution<double> probe(-100.0, 1100.0);
  for (int p = 0; p < 10000; ++p) {
    double a = probe(rng);
    double b = probe(rng);
    if (a > b) std::swap(a, b);
    if (ec::quantize(a, q) > ec::quantize(b, q)) return {false, "monotonicity broken"};
  }
  return {true, "16 bins x 100 values; 10000 probes monotone"};
}

// 8 ------------------------------------------------------------------------
Outcome micro_traces() {
  const auto x1 = Literal::plain(1);
  const auto nx2 = Literal::negated(2);
  const std::vector<Instance> pos{{{1, 0, 1}, Label::positive, "u1"}};
  const std::vector<Instance> neg{{{0, 0, 1}, Label::negative, "v1"}, {{1, 1, 1}, Label::negative, "v2"}};
  auto t = build_separation_sets(pos, neg);
  using Cell = std::vector<std::pair<Literal, double>>;
  if (t.cell(0, 0) != Cell{{x1, 1.0}} || t.cell(0, 1) != Cell{{nx2, 1.0}}) return {false, "separation sets"};
  const auto r11 = pair_relevance(t, 0, 0);
  const auto r12 = pair_relevance(t, 0, 1);
  if (r11.weight(x1) != 1.0 || r11.sum() != 1.0 || r12.weight(nx2) != 1.0 || r12.sum() != 1.0)
    return {false, "pair relevances"};
  const auto r1 = row_relevance(t, 0);
  const auto r = total_relevance(t);
  if (r1.weight(x1) != 0.5 || r1.weight(nx2) != 0.5 || !(r == r1)) return {false, "row/total relevance"};
  if (choose_literal(r) != x1) return {false, "first choice"};

  std::vector<TraceEvent> events;
  const auto term = grow_term(t, {}, [&](const TraceEvent& e) { events.push_back(e); });
  if (events.size() != 2 || events[0].literal != x1 || events[0].weight != 0.5 || events[1].literal != nx2 ||
      events[1].weight != 1.0)
    return {false, "term trace"};
  Dataset d(3);
  d.add(pos[0]);
  d.add(neg[0]);
  d.add(neg[1]);
  const auto f = learn(d);
  if (render_formula(f) != "x1~x2" || !(term == Term{x1, nx2})) return {false, "formula " + render_formula(f)};

  Dataset xor_data(2);
  xor_data.add({{1, 0}, Label::positive, "a"});
  xor_data.add({{0, 1}, Label::positive, "b"});
  xor_data.add({{0, 0}, Label::negative, "c"});
  xor_data.add({{1, 1}, Label::negative, "d"});
  const auto g = learn(xor_data);
  if (!oracle::equivalent(g, parse_formula("x1~x2 + ~x1x2"), 2)) return {false, "xor learned " + render_formula(g)};
  return {true, "S, R_ij, R_i, R, choices x1 then ~x2, formula x1~x2; XOR -> " + render_formula(g)};
}

// 9 ------------------------------------------------------------------------
Outcome fuzzy_reduces_to_crisp() {
  std::mt19937_64 rng(9009);
  std::bernoulli_distribution bit(0.5);
  std::size_t literals = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng() % 9;
    const std::size_t per_class = 2 + rng() % 14;
    std::set<std::vector<double>> seen;
    Dataset d(n);
    for (Label label : {Label::positive, Label::negative})
      for (std::size_t c = 0, tries = 0; c < per_class && tries < 10000; ++tries) {
        std::vector<double> v(n);
        for (auto& b : v) b = bit(rng) ? 1.0 : 0.0;
        if (!seen.insert(v).second) continue;
        d.add({v, label, std::to_string(seen.size())});
        ++c;
      }
    std::vector<std::size_t> trace;
    const auto f = learn(d, {}, [&](const TraceEvent& e) { trace.push_back(e.literal.index()); });
    const auto ref = oracle::crisp_learn(bits_of(d.positives()), bits_of(d.negatives()));
    if (trace != ref.trace || !(f == ref.formula))
      return {false, "dataset " + std::to_string(trial) + ": " + render_formula(f) + " vs " + render_formula(ref.formula)};
    literals += trace.size();
  }
  return {true, "100 crisp datasets, " + std::to_string(literals) + " chosen literals, traces identical"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int a = 1; a < argc; ++a)
    if (std::strcmp(argv[a], "--only") == 0 && a + 1 < argc) only = std::atoi(argv[++a]);

  const std::vector<Criterion> criteria{
      {1, "training error 0 on separable data", 120.0, training_error_is_zero},
      {2, "EC ten-fold validation error 0", 60.0, ec_validation_error_is_zero},
      {3, "truth-table equivalence", 120.0, truth_table_equivalence},
      {4, "worker invariance", 120.0, worker_invariance},
      {5, "parallel speed-up shape", 300.0, speedup_shape},
      {6, "preprocessing determinism and arity", 60.0, preprocessing_determinism},
      {7, "quantizer equal frequency", 10.0, quantizer_equal_frequency},
      {8, "hand-worked micro-traces", 1.0, micro_traces},
      {9, "fuzzy engine matches crisp reference", 60.0, fuzzy_reduces_to_crisp},
  };

  int failures = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (elapsed.count() > c.limit_seconds) {
      out.pass = false;
      out.detail += " [over time limit]";
    }
    std::cout << "criterion " << c.id << " " << (out.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << out.detail
              << " (" << std::fixed << std::setprecision(2) << elapsed.count() << " s, limit " << c.limit_seconds
              << " s)\n"
              << std::defaultfloat;
    failures += !out.pass;
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
