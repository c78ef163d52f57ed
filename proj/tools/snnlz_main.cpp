// snnlz command line: data generation, training, evaluation, LZC dumps,
// hyperparameter sweeps and result tables.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snnlz/classifier.hpp"
#include "snnlz/config.hpp"
#include "snnlz/error.hpp"
#include "snnlz/experiment.hpp"
#include "snnlz/fileutil.hpp"
#include "snnlz/lzc.hpp"
#include "snnlz/network.hpp"
#include "snnlz/numfmt.hpp"
#include "snnlz/report.hpp"
#include "snnlz/spike_io.hpp"

namespace fs = std::filesystem;
using namespace snnlz;

namespace {

std::string Percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

// The data files are authoritative for the time grid.
void AdoptDataGrid(ExperimentConfig& cfg, const Dataset& data) {
  cfg.n_bins = data.train.front().sequence.size();
  cfg.dt_ms = data.dt_ms;
}

int GenData(double rate_a, double rate_b, std::size_t bins, double dt_ms, int train, int val,
            int test, std::uint64_t seed, const fs::path& out) {
  ExperimentConfig cfg;
  cfg.rate_a_hz = rate_a;
  cfg.rate_b_hz = rate_b;
  cfg.n_bins = bins;
  cfg.dt_ms = dt_ms;
  cfg.train_count = train;
  cfg.val_count = val;
  cfg.test_count = test;
  cfg.master_seed = seed;
  const auto data = SynthesizeDataset(cfg, SeedSpec{seed, kDataStream});
  SaveDataset(out, data);
  std::cout << "wrote " << train << '/' << val << '/' << test << " sequences to "
            << out.string() << '\n';
  return 0;
}

int Train(const std::string& model, const std::string& rule, const fs::path& config,
          const fs::path& data_dir, const fs::path& out) {
  auto cfg = LoadConfig(config);
  cfg.model_kind = ParseModelKind(model);
  cfg.rule = ParseRule(rule);
  const auto data = LoadDataset(data_dir);
  AdoptDataGrid(cfg, data);
  cfg.Validate();

  const auto p = TrainPipeline(cfg, cfg.defaults, cfg.search.mode, data.train,
                               SeedSpec{cfg.master_seed, kRunStream}.Child(0));
  fs::create_directories(out);
  SaveModel(out / "model.snn", p.model);
  SaveClassifier(out / "classifier.clf", p.classifier);

  std::ostringstream report;
  report << "split,examples,accuracy\n";
  const double train_acc = EvaluateAccuracy(p, data.train, cfg);
  report << "train," << data.train.size() << ',' << FormatDouble(100 * train_acc) << '\n';
  std::cout << "train accuracy " << Percent(train_acc) << '\n';
  if (!data.val.empty()) {
    const double val_acc = EvaluateAccuracy(p, data.val, cfg);
    report << "val," << data.val.size() << ',' << FormatDouble(100 * val_acc) << '\n';
    std::cout << "val accuracy " << Percent(val_acc) << '\n';
  }
  WriteFileAtomic(out / "train_report.csv", report.str());
  if (!p.epoch_losses.empty()) {
    std::ostringstream losses;
    losses << "epoch,loss\n";
    for (std::size_t e = 0; e < p.epoch_losses.size(); ++e) {
      losses << e + 1 << ',' << FormatDouble(p.epoch_losses[e]) << '\n';
    }
    WriteFileAtomic(out / "losses.csv", losses.str());
  }
  return 0;
}

int Eval(const fs::path& model_path, const fs::path& clf_path, const fs::path& data_dir,
         const fs::path& report_path, const std::optional<fs::path>& config) {
  const auto model = LoadModel(model_path);
  const auto clf = LoadClassifier(clf_path);
  ExperimentConfig cfg = config ? LoadConfig(*config) : ExperimentConfig{};
  // A classifier over 2n features was fit with spike rates appended.
  cfg.readout_spike_counts = clf.feature_dim() == 2 * model.n;
  if (!cfg.readout_spike_counts && clf.feature_dim() != model.n) {
    throw Error(ErrorCode::kDimensionMismatch, "classifier dimension " +
                                                   std::to_string(clf.feature_dim()) +
                                                   " does not fit n=" + std::to_string(model.n));
  }
  const auto test = LoadSpikeTrains(data_dir / "test.spk");
  std::vector<Example> examples;
  for (const auto& rec : test.records) {
    if (!rec.label) throw Error(ErrorCode::kParse, "test.spk: record without label");
    examples.push_back(Example{rec.train.ToBits(), *rec.label});
  }
  const auto features = ExtractFeatures(model, examples, cfg);
  const double acc = clf.Accuracy(features);
  const auto confusion = clf.Confusion(features);
  std::size_t correct = 0;
  for (std::size_t c = 0; c < confusion.size(); ++c) correct += confusion[c][c];

  std::ostringstream o;
  o << "examples,correct,accuracy\n" << examples.size() << ',' << correct << ',';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * acc);
  o << buf << '\n';
  o << "truth,predicted,count\n";
  for (std::size_t t = 0; t < confusion.size(); ++t) {
    for (std::size_t p = 0; p < confusion[t].size(); ++p) {
      o << t << ',' << p << ',' << confusion[t][p] << '\n';
    }
  }
  if (report_path.has_parent_path()) fs::create_directories(report_path.parent_path());
  WriteFileAtomic(report_path, o.str());
  std::cout << "test accuracy " << Percent(acc) << " (" << correct << '/' << examples.size()
            << ")\n";
  return 0;
}

int Lzc(const fs::path& in, const std::string& format) {
  if (format != "csv") throw Error(ErrorCode::kInvalidConfig, "unsupported format " + format);
  const auto file = LoadSpikeTrains(in);
  std::cout << "index,n,C,c\n";
  for (std::size_t i = 0; i < file.records.size(); ++i) {
    const auto r = Lz76Parse(file.records[i].train.bits(), false);
    std::cout << i << ',' << r.n << ',' << r.component_count << ','
              << FormatDouble(r.normalized) << '\n';
  }
  return 0;
}

int Sweep(const std::string& mode, const fs::path& config, const fs::path& data_dir,
          std::optional<int> budget, std::optional<int> seeds, const fs::path& out,
          unsigned threads) {
  auto cfg = LoadConfig(config);
  cfg.search.mode = ParseSearchMode(mode);
  if (budget) cfg.search.budget = *budget;
  if (seeds) cfg.search.inner_seeds = *seeds;
  cfg.output_dir = out.string();
  const auto data = LoadDataset(data_dir);
  AdoptDataGrid(cfg, data);
  cfg.Validate();
  const auto r = RunSweep(cfg, data, threads);
  std::cout << ToString(cfg.model_kind) << ' ' << ToString(cfg.rule) << ' '
            << ToString(r.mode) << ": n=" << r.winner.n << " eta=" << FormatDouble(r.winner.eta)
            << " val " << Percent(r.val_accuracy) << " test " << Percent(r.test_accuracy)
            << '\n';
  return 0;
}

int Report(const fs::path& results, const fs::path& out, const std::optional<fs::path>& plot) {
  const auto table = ReportTables(results, out, plot);
  std::cout << AccuracyTableCsv(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiking network training with a Lempel-Ziv complexity readout"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "Synthesize a two-rate Poisson dataset");
  double rate_a = 20, rate_b = 50, dt_ms = 1;
  std::size_t bins = 1024;
  int n_train = 200, n_val = 100, n_test = 200;
  std::uint64_t seed = 1;
  fs::path gen_out;
  gen->add_option("--rate-a", rate_a, "Class 0 rate in Hz")->required();
  gen->add_option("--rate-b", rate_b, "Class 1 rate in Hz")->required();
  gen->add_option("--bins", bins, "Bins per sequence")->capture_default_str();
  gen->add_option("--dt-ms", dt_ms, "Bin width in ms")->capture_default_str();
  gen->add_option("--train", n_train, "Training sequences")->capture_default_str();
  gen->add_option("--val", n_val, "Validation sequences")->capture_default_str();
  gen->add_option("--test", n_test, "Test sequences")->capture_default_str();
  gen->add_option("--seed", seed, "Master seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train one model with the config defaults");
  std::string model_kind, rule;
  fs::path config, data_dir, out;
  train->add_option("--model", model_kind, "lif|meta")->required();
  train->add_option("--rule", rule, "bp|stdp|tempotron")->required();
  train->add_option("--config", config, "Config file")->required();
  train->add_option("--data", data_dir, "Dataset directory")->required();
  train->add_option("--out", out, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Score a trained model on the test split");
  fs::path model_file, clf_file, report_file;
  std::optional<fs::path> eval_config;
  eval->add_option("--model", model_file, "Model file")->required();
  eval->add_option("--classifier", clf_file, "Classifier file")->required();
  eval->add_option("--data", data_dir, "Dataset directory")->required();
  eval->add_option("--report", report_file, "Report CSV")->required();
  eval->add_option("--config", eval_config, "Config used in training (output delay)");

  auto* lzc = app.add_subcommand("lzc", "LZ76 complexity of every train in a file");
  fs::path lzc_in;
  std::string format = "csv";
  lzc->add_option("--in", lzc_in, "Spike-train file")->required();
  lzc->add_option("--format", format, "Output format")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Random hyperparameter search");
  std::string mode;
  std::optional<int> budget, seeds;
  unsigned threads = 0;
  sweep->add_option("--mode", mode, "baseline|extended")->required();
  sweep->add_option("--config", config, "Config file")->required();
  sweep->add_option("--data", data_dir, "Dataset directory")->required();
  sweep->add_option("--budget", budget, "Sampled configurations");
  sweep->add_option("--seeds", seeds, "Inner seeds per configuration");
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_option("--threads", threads, "Worker threads, 0 = all cores");

  auto* report = app.add_subcommand("report", "Aggregate result.csv files");
  fs::path results_dir, table_out;
  std::optional<fs::path> plot_dir;
  report->add_option("--results", results_dir, "Directory searched for result.csv")->required();
  report->add_option("--out", table_out, "Accuracy table CSV")->required();
  report->add_option("--plot", plot_dir, "Directory for layout tables and SVG charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return GenData(rate_a, rate_b, bins, dt_ms, n_train, n_val, n_test, seed, gen_out);
    if (*train) return Train(model_kind, rule, config, data_dir, out);
    if (*eval) return Eval(model_file, clf_file, data_dir, report_file, eval_config);
    if (*lzc) return Lzc(lzc_in, format);
    if (*sweep) return Sweep(mode, config, data_dir, budget, seeds, out, threads);
    if (*report) return Report(results_dir, table_out, plot_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
