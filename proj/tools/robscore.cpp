#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "robscore/bbm_rs.hpp"
#include "robscore/cart.hpp"
#include "robscore/csv.hpp"
#include "robscore/errors.hpp"
#include "robscore/harness.hpp"
#include "robscore/model_io.hpp"
#include "robscore/models.hpp"
#include "robscore/random.hpp"
#include "robscore/robustness.hpp"
#include "robscore/separation.hpp"
#include "robscore/stumps.hpp"
#include "robscore/theory.hpp"

namespace fs = std::filesystem;
using namespace robscore;

namespace {

struct DataArgs {
  std::string input;
  std::string label = "label";
  std::string positive = "1";
};

struct Common {
  std::string out = "robscore_out";
  std::string invocation;
};

void add_data_options(CLI::App* app, DataArgs& data, bool required = true) {
  auto* opt = app->add_option("-i,--input", data.input, "CSV file with a header row");
  if (required) opt->required()->check(CLI::ExistingFile);
  app->add_option("--label", data.label, "Label column name")->capture_default_str();
  app->add_option("--positive", data.positive, "Label value mapped to +1")->capture_default_str();
}

void add_experiment_options(CLI::App* app, ExperimentConfig& cfg, std::string& algorithm) {
  app->add_option("--algorithm", algorithm, "bbm_rs or cart")->capture_default_str();
  app->add_option("--grid", cfg.grid, "Grid of T (BBM-RS) or max depth (CART)")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--tau", cfg.tau, "Noise level for BBM-RS")->capture_default_str();
  app->add_option("--gamma-bbm", cfg.gamma_bbm, "Edge assumed by the BBM weights")->capture_default_str();
  app->add_option("--repeats", cfg.repeats, "Random train/test splits")->capture_default_str();
  app->add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();
  app->add_option("--k", cfg.k, "Correct test rows sampled for ER")->capture_default_str();
  app->add_option("--seed", cfg.seed, "Base seed")->capture_default_str();
  app->add_flag("--clip", cfg.clip, "Confine perturbations to [0,1]^d");
  app->add_flag("--strict-no-leak", cfg.strict_no_leak, "Fit normalization on training splits only");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  std::cout << "wrote " << path.string() << "\n";
}

RunManifest base_manifest(const Common& common, const std::string& sub) {
  RunManifest m;
  m.command = common.invocation;
  m.add("subcommand", sub);
  m.add("compiler", ROBSCORE_COMPILER);
  m.add("cli11", CLI11_VERSION);
  return m;
}

void describe_data(RunManifest& m, const DataArgs& args, const LabeledDataset& ds) {
  m.add("input", args.input);
  m.add("label_column", args.label);
  m.add("positive_value", args.positive);
  m.add("dataset_hash", dataset_fingerprint(ds));
  m.add("n", std::to_string(ds.size()));
  m.add("d", std::to_string(ds.dim()));
}

fs::path prepare_out(const Common& common) {
  fs::create_directories(common.out);
  return fs::path(common.out);
}

std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (auto i : v) s += (s.empty() ? "" : " ") + std::to_string(i);
  return s;
}

int cmd_ingest(const Common& common, const DataArgs& args, bool raw) {
  const auto ds = ingest_csv(args.input, args.label, args.positive);
  const auto out = prepare_out(common);
  const auto prepared = raw ? ds : normalize(ds).data;
  write_file(out / "dataset.csv", to_csv(prepared, args.label));
  const std::string summary =
      "n,d,positive_portion,binary_features,normalized,dataset_hash\n" + std::to_string(ds.size()) + "," +
      std::to_string(ds.dim()) + "," +
      csv::format_shortest(static_cast<double>(ds.count_positive()) / static_cast<double>(ds.size())) + "," +
      std::to_string(count_binary_features(ds)) + "," + (raw ? "false" : "true") + "," +
      dataset_fingerprint(ds) + "\n";
  write_file(out / "ingest.csv", summary);
  auto m = base_manifest(common, "ingest");
  describe_data(m, args, ds);
  m.add("normalized", raw ? "false" : "true");
  write_file(out / "ingest.manifest.txt", m.render());
  return 0;
}

int cmd_separate(const Common& common, const DataArgs& args, double r) {
  const auto raw = ingest_csv(args.input, args.label, args.positive);
  const auto ds = normalize(raw).data;
  const auto rep = measure_separation(ds, r, fs::path(args.input).stem().string());
  const auto out = prepare_out(common);
  write_file(out / "separation.csv", separation_csv(rep));
  write_file(out / "removed.csv", "kind,indices\nr," + join_indices(rep.removed_indices_r) + "\nlinear," +
                                      join_indices(rep.removed_indices_linear) + "\n");
  auto m = base_manifest(common, "separate");
  describe_data(m, args, raw);
  m.add("r", csv::format_shortest(r));
  m.add("normalization", "whole_data");
  m.add("gamma_ok", rep.gamma_ok ? "true" : "false");
  write_file(out / "separate.manifest.txt", m.render());
  return 0;
}

int cmd_train(const Common& common, const DataArgs& args, ExperimentConfig cfg, const std::string& algorithm,
              std::size_t h) {
  cfg.algorithm = parse_algorithm(algorithm);
  const auto raw = ingest_csv(args.input, args.label, args.positive);
  const auto norm = normalize(raw);
  const auto& ds = norm.data;
  const auto out = prepare_out(common);
  auto m = base_manifest(common, "train");
  describe_data(m, args, raw);
  add_config(m, cfg);
  m.add("h", std::to_string(h));
  std::string ranges;
  for (const auto& iv : norm.ranges) {
    ranges += (ranges.empty() ? "" : ";") + csv::format_shortest(iv.lo) + ":" + csv::format_shortest(iv.hi);
  }
  m.add("normalization_ranges", ranges);

  Model model;
  if (cfg.algorithm == Algorithm::kBbmRs) {
    BbmRsConfig bc;
    bc.rounds = h;
    bc.tau = cfg.tau;
    bc.gamma_bbm = cfg.gamma_bbm;
    bc.seed = cfg.seed;
    const auto rep = train_bbm_rs(ds, bc);
    model = rep.model;
    write_file(out / "round_log.csv", format_round_log(rep));
    write_file(out / "scorecard.txt", render_scorecard(rep.model, ds.feature_names()));
    write_file(out / "ic_curve.csv", ic_curve_csv(ic_accuracy_curve(rep, ds)));
    m.add("rounds_run", std::to_string(rep.rounds_run));
    m.add("stop_reason", to_string(rep.stop_reason));
    m.add("certified_violation",
          csv::format_shortest(certified_radius_check(rep.model, ds, inject_noise(ds, cfg.tau), cfg.tau)));
  } else {
    TreeTrainConfig tc;
    tc.max_depth = h;
    model = train_cart(ds, tc);
  }
  m.add("train_accuracy", csv::format_shortest(accuracy(model, ds)));
  m.add("ic", std::to_string(interpretation_complexity(model)));
  write_file(out / "model.txt", serialize_model(model, ds.feature_names()));
  write_file(out / "train.manifest.txt", m.render());
  return 0;
}

int cmd_eval(const Common& common, const DataArgs& args, ExperimentConfig cfg, const std::string& algorithm) {
  cfg.algorithm = parse_algorithm(algorithm);
  validate(cfg);
  const auto ds = ingest_csv(args.input, args.label, args.positive);
  const auto rep = run_experiment(ds, cfg);
  const auto out = prepare_out(common);
  write_file(out / "eval.csv", eval_report_csv(rep));
  auto m = base_manifest(common, "eval");
  describe_data(m, args, ds);
  add_config(m, cfg);
  std::size_t warnings = 0;
  for (const auto& r : rep.repeats) {
    for (const auto& w : r.warnings) m.add("warning", "repeat " + std::to_string(r.repeat) + ": " + w);
    warnings += r.warnings.size();
  }
  m.add("warnings", std::to_string(warnings));
  write_file(out / "eval.manifest.txt", m.render());
  return 0;
}

int cmd_robustness(const Common& common, const DataArgs& args, const std::string& model_path,
                   const ExperimentConfig& cfg, double radius, bool no_normalize) {
  std::ifstream in(model_path, std::ios::binary);
  if (!in) throw Error("cannot open " + model_path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto doc = deserialize_model(text);
  const auto raw = ingest_csv(args.input, args.label, args.positive);
  const auto ds = no_normalize ? raw : normalize(raw).data;
  ErOptions opts;
  opts.clip = cfg.clip;
  const auto rep = empirical_robustness(doc.model, ds, cfg.k, cfg.seed, radius, opts);
  std::string table = "row,er\n";
  for (std::size_t s = 0; s < rep.indices.size(); ++s) {
    table += std::to_string(rep.indices[s]) + "," + csv::format_shortest(rep.er[s]) + "\n";
  }
  table += "\nmean_er,radius,astuteness,correct,sampled,non_flippable,accuracy\n" +
           csv::format_shortest(rep.mean_er) + "," + csv::format_shortest(rep.radius) + "," +
           csv::format_shortest(rep.astuteness) + "," + std::to_string(rep.correct) + "," +
           std::to_string(rep.indices.size()) + "," + (rep.non_flippable ? "true" : "false") + "," +
           csv::format_shortest(accuracy(doc.model, ds)) + "\n";
  const auto out = prepare_out(common);
  write_file(out / "robustness.csv", table);
  auto m = base_manifest(common, "robustness");
  describe_data(m, args, raw);
  m.add("model", model_path);
  m.add("k", std::to_string(cfg.k));
  m.add("seed", std::to_string(cfg.seed));
  m.add("clip", cfg.clip ? "true" : "false");
  m.add("normalization", no_normalize ? "none" : "whole_data");
  write_file(out / "robustness.manifest.txt", m.render());
  return 0;
}

int cmd_sweep(const Common& common, const DataArgs& args, ExperimentConfig cfg, const std::vector<double>& taus) {
  cfg.algorithm = Algorithm::kBbmRs;
  validate(cfg);
  const auto ds = ingest_csv(args.input, args.label, args.positive);
  const auto rows = tau_sweep(ds, taus, cfg);
  const auto out = prepare_out(common);
  write_file(out / "sweep.csv", tau_sweep_csv(rows));
  auto m = base_manifest(common, "sweep");
  describe_data(m, args, ds);
  add_config(m, cfg);
  std::string list;
  for (double t : taus) list += (list.empty() ? "" : ",") + csv::format_shortest(t);
  m.add("taus", list);
  write_file(out / "sweep.manifest.txt", m.render());
  return 0;
}

int cmd_theory(const Common& common, std::size_t d, std::size_t n, double r, std::uint64_t seed) {
  std::string table = "check,parameter,value,bound,ok\n";
  auto row = [&](const std::string& check, const std::string& param, double value, double bound, bool ok) {
    table += check + "," + param + "," + csv::format_shortest(value) + "," + csv::format_shortest(bound) + "," +
             (ok ? "true" : "false") + "\n";
  };
  const auto parity = gen_parity(d);
  for (std::size_t depth : {2u, 4u, 6u, 8u}) {
    TreeTrainConfig tc;
    tc.max_depth = depth;
    const auto res = parity_size_bound_check(train_cart(parity, tc), d);
    const double bound = 0.5 + static_cast<double>(res.leaves) / std::ldexp(1.0, static_cast<int>(d) + 1);
    row("parity_accuracy", "max_depth=" + std::to_string(depth), res.accuracy, bound, res.bound_ok);
  }
  const auto stair = gen_staircase(n, 0.1);
  for (std::size_t s : {1u, 5u, 20u, 100u}) {
    TreeTrainConfig tc;
    tc.max_depth = 1000;
    tc.max_internal_nodes = s;
    const auto tree = train_cart(stair, tc);
    const double acc = accuracy(tree, stair);
    const double bound = 0.5 + 4.0 * static_cast<double>(tree.size() + 1) / static_cast<double>(n);
    row("staircase_accuracy", "max_internal_nodes=" + std::to_string(s), acc, bound, acc <= bound);
  }
  const auto lin = gen_linear_dataset(d, 0.1, 2000, seed, SampleDomain::kSymmetric);
  Rng rng(seed);
  double worst = best_stump(WeightedDataset::uniform(lin.data)).advantage;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> mu(lin.data.size());
    double total = 0.0;
    for (auto& v : mu) total += v = std::pow(exponential(rng), 4.0);
    for (auto& v : mu) v /= total;
    worst = std::min(worst, best_stump(WeightedDataset(lin.data, mu)).advantage);
  }
  row("weak_learner_min_advantage", "gamma=0.1", worst, 0.05, worst >= 0.05);
  // r-separated sample by rejection, then the grid tree.
  std::vector<double> f;
  std::vector<int> y;
  const std::size_t dims = std::min<std::size_t>(d, 3);
  for (std::size_t tries = 0; tries < 20000 && y.size() < 200; ++tries) {
    std::vector<double> x(dims);
    for (auto& v : x) v = uniform01(rng);
    const int label = uniform01(rng) < 0.5 ? 1 : -1;
    bool ok = true;
    for (std::size_t i = 0; i < y.size() && ok; ++i) {
      if (y[i] == label) continue;
      double dist = 0.0;
      for (std::size_t j = 0; j < dims; ++j) dist = std::max(dist, std::abs(f[i * dims + j] - x[j]));
      ok = dist >= 2 * r;
    }
    if (!ok) continue;
    f.insert(f.end(), x.begin(), x.end());
    y.push_back(label);
  }
  const LabeledDataset sep(dims, f, y, {}, std::vector<Interval>(dims, Interval{0.0, 1.0}));
  const auto tree = grid_tree(sep, r);
  const double depth_bound = grid_tree_depth_bound(dims, r, SampleDomain::kUnit);
  row("grid_tree_depth", "r=" + csv::format_shortest(r), static_cast<double>(tree.depth()), depth_bound,
      static_cast<double>(tree.depth()) <= depth_bound && accuracy(tree, sep) == 1.0);

  const auto out = prepare_out(common);
  write_file(out / "theory.csv", table);
  auto m = base_manifest(common, "theory");
  m.add("d", std::to_string(d));
  m.add("n", std::to_string(n));
  m.add("r", csv::format_shortest(r));
  m.add("seed", std::to_string(seed));
  write_file(out / "theory.manifest.txt", m.render());
  return 0;
}

int cmd_report(const Common& common, const std::vector<std::string>& inputs, const DataArgs& args,
               ExperimentConfig cfg, const std::vector<std::size_t>& depth_grid) {
  validate(cfg);
  std::vector<std::pair<std::string, EvalReport>> rows;
  auto m = base_manifest(common, "report");
  std::string separation;
  for (const auto& path : inputs) {
    const auto ds = ingest_csv(path, args.label, args.positive);
    const std::string name = fs::path(path).stem().string();
    m.add("input", path);
    m.add("dataset_hash." + name, dataset_fingerprint(ds));
    auto bc = cfg;
    bc.algorithm = Algorithm::kBbmRs;
    rows.emplace_back(name, run_experiment(ds, bc));
    auto cc = cfg;
    cc.algorithm = Algorithm::kCart;
    cc.grid = depth_grid;
    rows.emplace_back(name, run_experiment(ds, cc));
    const auto text = separation_csv(measure_separation(normalize(ds).data, 1e-5, name));
    separation += separation.empty() ? text : text.substr(text.find('\n') + 1);
  }
  add_config(m, cfg);
  std::string grid;
  for (auto h : depth_grid) grid += (grid.empty() ? "" : ",") + std::to_string(h);
  m.add("cart_grid", grid);
  const auto out = prepare_out(common);
  write_file(out / "comparison.csv", comparison_csv(rows));
  write_file(out / "separation.csv", separation);
  write_file(out / "report.manifest.txt", m.render());
  return 0;
}

void print_nested(const std::exception& e, int level = 0) {
  std::cerr << std::string(2 * static_cast<std::size_t>(level), ' ') << "error: " << e.what() << "\n";
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_nested(inner, level + 1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust interpretable risk scores and trees"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  Common common;
  for (int i = 0; i < argc; ++i) common.invocation += (i ? " " : "") + std::string(argv[i]);

  DataArgs data;
  ExperimentConfig cfg;
  std::string algorithm = "bbm_rs";
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("-o,--out", common.out, "Output directory")->capture_default_str();
  };

  bool raw = false;
  auto* ingest = app.add_subcommand("ingest", "Read a CSV, normalize it and summarize it");
  add_data_options(ingest, data);
  add_out(ingest);
  ingest->add_flag("--raw", raw, "Write the features without min-max scaling");

  double r = 1e-5;
  auto* separate = app.add_subcommand("separate", "Measure r-separateness, linear separateness and margin");
  add_data_options(separate, data);
  add_out(separate);
  separate->add_option("--r", r, "Separation radius")->capture_default_str();

  std::size_t h = 15;
  auto* train = app.add_subcommand("train", "Train one model on the whole dataset");
  add_data_options(train, data);
  add_out(train);
  add_experiment_options(train, cfg, algorithm);
  train->add_option("--hyper", h, "Rounds T (BBM-RS) or max depth (CART)")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Repeated split, cross-validation, IC / accuracy / ER");
  add_data_options(eval, data);
  add_out(eval);
  add_experiment_options(eval, cfg, algorithm);

  std::string model_path;
  double radius = 0.0;
  bool no_normalize = false;
  auto* robust = app.add_subcommand("robustness", "Exact ER of a saved model on a dataset");
  add_data_options(robust, data);
  add_out(robust);
  robust->add_option("--model", model_path, "Model file written by train")->required()->check(CLI::ExistingFile);
  robust->add_option("--k", cfg.k, "Correct rows sampled")->capture_default_str();
  robust->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  robust->add_option("--radius", radius, "Radius for astuteness")->capture_default_str();
  robust->add_flag("--clip", cfg.clip, "Confine perturbations to [0,1]^d");
  robust->add_flag("--no-normalize", no_normalize, "Use the features as given");

  std::vector<double> taus{0.0, 0.05, 0.1, 0.25};
  auto* sweep = app.add_subcommand("sweep", "BBM-RS over several noise levels");
  add_data_options(sweep, data);
  add_out(sweep);
  add_experiment_options(sweep, cfg, algorithm);
  sweep->add_option("--taus", taus, "Noise levels")->delimiter(',')->capture_default_str();

  std::size_t theory_d = 10, theory_n = 4000;
  double theory_r = 0.1;
  auto* theory = app.add_subcommand("theory", "Numerical checks of the tree-size and weak-learner bounds");
  add_out(theory);
  theory->add_option("--d", theory_d, "Parity dimension")->capture_default_str()->check(CLI::Range(1, 20));
  theory->add_option("--n", theory_n, "Staircase size (multiple of 4)")->capture_default_str();
  theory->add_option("--r", theory_r, "Grid-tree radius")->capture_default_str();
  theory->add_option("--seed", cfg.seed, "Seed")->capture_default_str();

  std::vector<std::string> inputs;
  std::vector<std::size_t> depth_grid{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto* report = app.add_subcommand("report", "BBM-RS vs CART comparison table over datasets");
  report->add_option("-i,--input", inputs, "CSV files")->required()->check(CLI::ExistingFile);
  report->add_option("--label", data.label, "Label column name")->capture_default_str();
  report->add_option("--positive", data.positive, "Label value mapped to +1")->capture_default_str();
  add_out(report);
  add_experiment_options(report, cfg, algorithm);
  report->add_option("--depth-grid", depth_grid, "CART depth grid")->delimiter(',')->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(common, data, raw);
    if (*separate) return cmd_separate(common, data, r);
    if (*train) return cmd_train(common, data, cfg, algorithm, h);
    if (*eval) return cmd_eval(common, data, cfg, algorithm);
    if (*robust) return cmd_robustness(common, data, model_path, cfg, radius, no_normalize);
    if (*sweep) return cmd_sweep(common, data, cfg, taus);
    if (*theory) return cmd_theory(common, theory_d, theory_n, theory_r, cfg.seed);
    if (*report) return cmd_report(common, inputs, data, cfg, depth_grid);
  } catch (const std::exception& e) {
    print_nested(e);
    return 2;
  }
  return 1;
}
