// ubrain: command-line front end for the DNF learner and the eddy-current pipeline.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "ubrain/ubrain.hpp"

namespace {

using namespace ubrain;

struct Common {
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t k = 10;
  std::size_t max_terms = 0;
  std::string output = "text";

  bool structured() const { return output == "structured"; }
  LearnerConfig learner() const {
    LearnerConfig c;
    c.worker_count = workers;
    c.max_terms = max_terms;
    return c;
  }
};

// Writes to `path`, or stdout when it is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  fn(out);
  if (!out) throw Error(ErrorCode::io, "write to '" + path + "' failed");
}

Dataset load_dataset(const std::string& path) {
  if (path == "-") return read_dataset(std::cin, "<stdin>");
  return read_dataset_file(path);
}

std::string label_name(Label l) { return l == Label::positive ? "positive" : "negative"; }

void add_common(CLI::App* app, Common& c, bool learner_flags = true) {
  app->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
  app->add_option("--output", c.output, "Report format")->check(CLI::IsMember({"text", "structured"}))->capture_default_str();
  if (!learner_flags) return;
  app->add_option("--workers", c.workers, "Worker threads for the learner")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--max-terms", c.max_terms, "Term budget (0 = number of positives)")->capture_default_str();
}

int run(int argc, char** argv) {
  CLI::App app{"U-BRAIN DNF learner with eddy-current signal preprocessing"};
  app.require_subcommand(1);
  Common common;

  // synth-dnf ---------------------------------------------------------------
  auto* synth_dnf = app.add_subcommand("synth-dnf", "Generate a dataset labelled by a DNF");
  std::size_t arity = 20;
  std::size_t count = 200;
  std::size_t terms = 3;
  std::size_t min_len = 2;
  std::size_t max_len = 4;
  double noise = 0.0;
  double balance = 0.5;
  bool truth_table = false;
  std::string formula_text;
  std::string dnf_out;
  std::string truth_out;
  add_common(synth_dnf, common, false);
  synth_dnf->add_option("--arity", arity, "Number of variables")->capture_default_str();
  synth_dnf->add_option("--count", count, "Number of instances")->capture_default_str();
  synth_dnf->add_option("--terms", terms, "Terms in the random ground truth")->capture_default_str();
  synth_dnf->add_option("--min-len", min_len)->capture_default_str();
  synth_dnf->add_option("--max-len", max_len)->capture_default_str();
  synth_dnf->add_option("--formula", formula_text, "Ground truth instead of a random DNF");
  synth_dnf->add_option("--noise", noise, "Label flip probability")->capture_default_str();
  synth_dnf->add_option("--balance", balance, "Positive share (negative: unbalanced)")->capture_default_str();
  synth_dnf->add_flag("--truth-table", truth_table, "Emit all 2^n points instead of a sample");
  synth_dnf->add_option("-o,--out", dnf_out, "Dataset file (default stdout)");
  synth_dnf->add_option("--truth-out", truth_out, "Write the ground-truth formula here");

  // synth-ec ----------------------------------------------------------------
  auto* synth_ec = app.add_subcommand("synth-ec", "Generate labelled eddy-current signal records");
  std::size_t per_class = 40;
  bool random_profiles = false;
  bool binary = false;
  std::string ec_out;
  add_common(synth_ec, common, false);
  synth_ec->add_option("--per-class", per_class, "Records per class")->capture_default_str();
  synth_ec->add_flag("--random-profiles", random_profiles, "Draw random disjoint band sets from the seed");
  synth_ec->add_flag("--binary", binary, "Write float32 records instead of CSV");
  synth_ec->add_option("-o,--out", ec_out, "Output directory")->required();

  // preprocess --------------------------------------------------------------
  auto* preprocess = app.add_subcommand("preprocess", "Encode signal records into a dataset");
  std::string signals;
  std::string model_path;
  bool fit = false;
  std::string pre_out;
  add_common(preprocess, common, false);
  preprocess->add_option("--signals", signals, "Signal file or directory")->required();
  preprocess->add_option("--model", model_path, "Encoding model file")->required();
  preprocess->add_flag("--fit", fit, "Fit the model on these signals and save it");
  preprocess->add_option("-o,--out", pre_out, "Dataset file (default stdout)");

  // train -------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Learn a DNF formula from a dataset");
  std::string data;
  std::string train_out;
  bool trace = false;
  add_common(train, common);
  train->add_option("--data", data, "Dataset file ('-' for stdin)")->required();
  train->add_option("-o,--out", train_out, "Formula file (default stdout)");
  train->add_flag("--trace", trace, "Print each chosen literal to stderr");

  // crossval ----------------------------------------------------------------
  auto* crossval = app.add_subcommand("crossval", "Stratified k-fold cross-validation");
  std::string cv_data;
  std::string cv_signals;
  bool fit_all = false;
  std::string cv_out;
  add_common(crossval, common);
  crossval->add_option("--k", common.k, "Number of folds")->capture_default_str();
  auto* cv_data_opt = crossval->add_option("--data", cv_data, "Dataset file");
  auto* cv_signals_opt = crossval->add_option("--signals", cv_signals, "Labelled signal directory");
  cv_data_opt->excludes(cv_signals_opt);
  crossval->add_flag("--fit-all", fit_all, "Fit the quantizer on all records, not only the training folds");
  crossval->add_option("-o,--out", cv_out, "Report file (default stdout)");

  // classify ----------------------------------------------------------------
  auto* classify_cmd = app.add_subcommand("classify", "Label signal records with a stored model and formula");
  std::string cls_model;
  std::string cls_formula;
  std::string cls_signals;
  add_common(classify_cmd, common, false);
  classify_cmd->add_option("--model", cls_model, "Encoding model file")->required();
  classify_cmd->add_option("--formula", cls_formula, "Formula file")->required();
  classify_cmd->add_option("--signals", cls_signals, "Signal file or directory")->required();

  // bench -------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Measure parallel speed-up of the learner");
  std::size_t bench_pos = 500;
  std::size_t bench_neg = 500;
  std::size_t bench_arity = 100;
  std::vector<std::size_t> worker_counts{1, 2, 4, 8};
  std::size_t reps = 3;
  std::string bench_data;
  add_common(bench, common);
  bench->add_option("--positives", bench_pos)->capture_default_str();
  bench->add_option("--negatives", bench_neg)->capture_default_str();
  bench->add_option("--arity", bench_arity)->capture_default_str();
  bench->add_option("--worker-counts", worker_counts, "Worker counts to time")->delimiter(',')->capture_default_str();
  bench->add_option("--reps", reps, "Timed runs per worker count")->capture_default_str();
  bench->add_option("--data", bench_data, "Time this dataset instead of a generated one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  if (synth_dnf->parsed()) {
    std::mt19937_64 rng(common.seed);
    GroundTruthSpec spec;
    spec.arity = arity;
    spec.noise = noise;
    spec.positive_fraction = balance;
    spec.formula = formula_text.empty() ? random_dnf(arity, terms, min_len, max_len, rng)
                                        : parse_formula(formula_text, arity);
    const Dataset d = truth_table ? generate_truth_table(spec) : generate_dnf_dataset(spec, count, common.seed);
    emit(dnf_out, [&](std::ostream& out) { write_dataset(out, d); });
    if (!truth_out.empty()) emit(truth_out, [&](std::ostream& out) { out << render_formula(spec.formula) << '\n'; });
    return 0;
  }

  if (synth_ec->parsed()) {
    std::mt19937_64 rng(common.seed);
    const auto profiles = random_profiles ? random_ec_profiles(rng) : default_ec_profiles();
    const auto records = generate_ec_signals(profiles, per_class, common.seed);
    ec::write_signal_directory(ec_out, records, binary);
    if (common.structured()) {
      nlohmann::json j;
      j["records"] = records.size();
      j["directory"] = ec_out;
      for (const auto& p : profiles) {
        auto& jp = j["profiles"][p.name];
        for (const auto& t : p.tones) jp.push_back({{"frequency_hz", t.frequency_hz}, {"amplitude", t.amplitude}});
      }
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "wrote " << records.size() << " records to " << ec_out << '\n';
    }
    return 0;
  }

  if (preprocess->parsed()) {
    const auto records = ec::load_signals(signals);
    ec::EncodingModel model;
    if (fit) {
      model = ec::fit_encoding_model(records);
      ec::save_model(model_path, model);
    } else {
      model = ec::load_model(model_path);
    }
    const Dataset d = ec::encode_records(records, model);
    emit(pre_out, [&](std::ostream& out) { write_dataset(out, d); });
    return 0;
  }

  if (train->parsed()) {
    const Dataset d = load_dataset(data);
    TraceSink sink;
    if (trace) sink = [](const TraceEvent& e) { std::cerr << e << '\n'; };
    const auto f = learn(d, common.learner(), sink);
    emit(train_out, [&](std::ostream& out) {
      if (common.structured()) {
        nlohmann::json j;
        j["formula"] = render_formula(f);
        j["terms"] = f.size();
        j["training_error"] = error_rate(f, d);
        out << j.dump(2) << '\n';
      } else {
        out << render_formula(f) << '\n';
      }
    });
    return 0;
  }

  if (crossval->parsed()) {
    if (cv_data.empty() == cv_signals.empty()) throw Error(ErrorCode::config, "give exactly one of --data or --signals");
    EvaluationReport report;
    if (!cv_data.empty()) {
      report = cross_validate(load_dataset(cv_data), common.k, common.seed, common.learner());
    } else {
      SignalEncodingOptions options;
      options.fit_on_all = fit_all;
      report = cross_validate_signals(ec::load_signals(cv_signals), common.k, common.seed, common.learner(), options);
    }
    emit(cv_out, [&](std::ostream& out) {
      if (common.structured()) out << report_json(report).dump(2) << '\n';
      else write_report_text(out, report);
    });
    return 0;
  }

  if (classify_cmd->parsed()) {
    const auto results = classify_signals(cls_model, cls_formula, cls_signals);
    if (common.structured()) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : results) j.push_back({{"id", r.id}, {"label", label_name(r.label)}, {"degree", r.degree}});
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "id\tlabel\tdegree\n";
      for (const auto& r : results) std::cout << r.id << '\t' << label_name(r.label) << '\t' << r.degree << '\n';
    }
    return 0;
  }

  if (bench->parsed()) {
    const Dataset d = bench_data.empty() ? make_benchmark_dataset(bench_pos, bench_neg, bench_arity, common.seed)
                                         : load_dataset(bench_data);
    const auto report = benchmark_speedup(d, worker_counts, reps, common.learner());
    if (common.structured()) std::cout << benchmark_json(report).dump(2) << '\n';
    else write_benchmark_text(std::cout, report);
    if (!report.identical_formulas) {
      std::cerr << "error: formulas differ across worker counts\n";
      return 2;
    }
    return 0;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ubrain::Error& e) {
    std::cerr << e.what() << '\n';
    return ubrain::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
