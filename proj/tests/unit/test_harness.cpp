#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "snnlz/experiment.hpp"
#include "snnlz/fileutil.hpp"
#include "snnlz/lzc.hpp"
#include "snnlz/report.hpp"
#include "snnlz/spike_io.hpp"
#include "test_util.hpp"

using namespace snnlz;
namespace fs = std::filesystem;

namespace {

fs::path Scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("snnlz_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig Mini() {
  ExperimentConfig cfg;
  cfg.train_count = 20;
  cfg.val_count = 10;
  cfg.test_count = 10;
  cfg.rule = Rule::kTempotron;
  cfg.search.budget = 2;
  cfg.search.inner_seeds = 1;
  cfg.search.ranges["n"] = {8, 8};
  cfg.epochs = 1;
  cfg.master_seed = 5;
  return cfg;
}

int RunCli(const std::string& args, const std::string& stdout_path = "/dev/null") {
  const int status = std::system(
      (std::string(SNNLZ_CLI) + " " + args + " > " + stdout_path + " 2>/dev/null").c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("dataset sizes, balance and rates") {
  auto cfg = Mini();
  cfg.train_count = 200;
  cfg.val_count = 100;
  cfg.test_count = 200;
  const auto d = SynthesizeDataset(cfg, {1, kDataStream});
  CHECK(d.train.size() == 200);
  CHECK(d.val.size() == 100);
  CHECK(d.test.size() == 200);
  for (const auto* split : {&d.train, &d.val, &d.test}) {
    int ones = 0;
    for (const auto& ex : *split) {
      ones += ex.label;
      CHECK(ex.sequence.size() == 1024);
    }
    CHECK(ones * 2 == static_cast<int>(split->size()));
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = SynthesizeDataset(cfg, {seed, kDataStream});
    double mean[2] = {0, 0};
    for (const auto& ex : s.train) mean[ex.label] += static_cast<double>(SpikeCount(ex.sequence));
    CHECK(mean[1] > mean[0]);
  }
  CHECK(d.train[0].sequence != d.val[0].sequence);
  CHECK(d.train[0].sequence != d.test[0].sequence);

  cfg.rate_a_hz = 0;
  for (const auto& ex : SynthesizeDataset(cfg, {2, kDataStream}).train) {
    if (ex.label == 0) CHECK(SpikeCount(ex.sequence) == 0);
  }
}

TEST_CASE("equal rates are rejected before any work") {
  auto cfg = Mini();
  cfg.rate_b_hz = cfg.rate_a_hz;
  cfg.output_dir = Scratch("reject").string();
  CHECK_ERROR_CODE(RunExperiment(cfg, 1), ErrorCode::kInvalidConfig);
  CHECK(fs::is_empty(cfg.output_dir));
}

TEST_CASE("dataset directory round trip") {
  const auto dir = Scratch("data");
  const auto d = SynthesizeDataset(Mini(), {3, kDataStream});
  SaveDataset(dir, d);
  const auto back = LoadDataset(dir);
  CHECK(back.train.size() == d.train.size());
  CHECK(back.test.back().sequence == d.test.back().sequence);
  CHECK(back.val.back().label == d.val.back().label);
  CHECK_ERROR_CODE(LoadDataset(dir / "missing"), ErrorCode::kIo);
}

TEST_CASE("search with a budget of one returns its only candidate") {
  auto cfg = Mini();
  cfg.search.budget = 1;
  const auto d = SynthesizeDataset(cfg, {4, kDataStream});
  const auto r = HyperSearch(cfg, d, 1);
  REQUIRE(r.candidates.size() == 1);
  CHECK(r.winner == 0);
  const auto expected =
      SampleCandidate(cfg, cfg.ResolvedSearch(), SeedSpec{cfg.master_seed, kSearchStream}.Child(0));
  CHECK(r.candidates[0].params.eta == expected.eta);
}

TEST_CASE("search is deterministic and independent of thread count") {
  auto cfg = Mini();
  cfg.search.budget = 4;
  cfg.search.inner_seeds = 2;
  const auto d = SynthesizeDataset(cfg, {5, kDataStream});
  const auto a = HyperSearch(cfg, d, 1);
  const auto b = HyperSearch(cfg, d, 3);
  CHECK(a.winner == b.winner);
  for (std::size_t k = 0; k < a.candidates.size(); ++k) {
    CHECK(a.candidates[k].val_accuracies == b.candidates[k].val_accuracies);
  }
}

TEST_CASE("sampled n divides the sequence length") {
  auto cfg = Mini();
  cfg.search.ranges.erase("n");
  const auto space = cfg.ResolvedSearch();
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto hp = SampleCandidate(cfg, space, {9, k});
    CHECK(1024 % hp.n == 0);
    CHECK(hp.n >= 8);
    CHECK(hp.n <= 64);
    CHECK(hp.eta >= space.ranges.at("eta").min);
    CHECK(hp.eta <= space.ranges.at("eta").max);
  }
}

TEST_CASE("collapsed extended ranges reproduce the baseline") {
  // Tempotron learns no intrinsic parameters by gradient, so the only
  // difference between the modes is the extra sampled coordinates.
  for (auto kind : {ModelKind::kLif, ModelKind::kMeta}) {
    auto cfg = Mini();
    cfg.model_kind = kind;
    cfg.search.budget = 3;
    const auto d = SynthesizeDataset(cfg, {6, kDataStream});
    const auto base = RunTrial(cfg, d, 1);
    cfg.search.mode = SearchMode::kExtended;
    cfg.search.ranges["v_th"] = {cfg.defaults.v_th, cfg.defaults.v_th};
    cfg.search.ranges["tau_m_ms"] = {cfg.defaults.tau_m_ms, cfg.defaults.tau_m_ms};
    cfg.search.ranges["th_jump"] = {cfg.defaults.th_jump, cfg.defaults.th_jump};
    cfg.search.ranges["tau_adapt_ms"] = {cfg.defaults.tau_adapt_ms, cfg.defaults.tau_adapt_ms};
    const auto ext = RunTrial(cfg, d, 1);
    CHECK(ext.val_accuracy == base.val_accuracy);
    CHECK(ext.test_accuracy == base.test_accuracy);
    CHECK(ext.winner.n == base.winner.n);
    CHECK(ext.winner.eta == base.winner.eta);
  }
}

TEST_CASE("sweep output files, determinism and test hygiene") {
  auto cfg = Mini();
  cfg.rule = Rule::kBp;
  cfg.search.mode = SearchMode::kExtended;
  const auto start = std::chrono::steady_clock::now();
  const auto d = SynthesizeDataset(cfg, {cfg.master_seed, kDataStream});
  cfg.output_dir = Scratch("sweep_a").string();
  RunSweep(cfg, d, 1);
  cfg.output_dir = Scratch("sweep_b").string();
  RunSweep(cfg, d, 2);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(30));

  const fs::path a = fs::temp_directory_path() / "snnlz_harness_sweep_a";
  const fs::path b = fs::temp_directory_path() / "snnlz_harness_sweep_b";
  for (const char* f : {"result.csv", "candidates.csv", "confusion.csv", "model.snn",
                        "classifier.clf", "trace.log", "config.txt"}) {
    INFO(f);
    CHECK(ReadFile(a / f) == ReadFile(b / f));
  }
  CHECK_FALSE(fs::exists(a / "RUNNING"));
  CHECK(fs::exists(a / "timing.txt"));

  const auto trace = ReadFile(a / "trace.log");
  std::size_t test_touches = 0;
  for (std::size_t pos = trace.find("split=test"); pos != std::string::npos;
       pos = trace.find("split=test", pos + 1)) {
    ++test_touches;
  }
  CHECK(test_touches == 1);
  CHECK(trace.rfind("evaluate split=test\n") ==
        trace.size() - std::string("evaluate split=test\n").size());

  const auto rows = ParseResultCsv(ReadFile(a / "result.csv"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].rule == "BP");
  CHECK(rows[0].search_mode == "EXTENDED");
  CHECK(ReadFile(a / "result.csv")
            .rfind(
                "model_kind,rule,search_mode,seed,n,eta,v_th,tau_m_ms,th_jump,tau_adapt_ms,val_acc,"
                "test_acc\nLIF,BP,EXTENDED,5,8,",
                0) == 0);
}

TEST_CASE("failed sweep leaves the marker and no result") {
  auto cfg = Mini();
  cfg.output_dir = Scratch("fail").string();
  auto d = SynthesizeDataset(cfg, {7, kDataStream});
  d.test.clear();
  CHECK_ERROR_CODE(RunSweep(cfg, d, 1), ErrorCode::kEmptyTestSet);
  CHECK(fs::exists(fs::path(cfg.output_dir) / "RUNNING"));
  CHECK_FALSE(fs::exists(fs::path(cfg.output_dir) / "result.csv"));
}

TEST_CASE("report aggregation and uplift") {
  const auto dir = Scratch("report");
  auto write = [&](const std::string& sub, const std::string& kind, const std::string& rule,
                   const std::string& mode, const std::string& val, const std::string& test) {
    fs::create_directories(dir / sub);
    WriteFileAtomic(dir / sub / "result.csv",
                    "model_kind,rule,search_mode,seed,n,eta,v_th,tau_m_ms,th_jump,tau_adapt_ms,"
                    "val_acc,test_acc\n" +
                        kind + "," + rule + "," + mode + ",1,8,0.1,1,20,0.2,20," + val + "," +
                        test + "\n");
  };
  write("a", "LIF", "STDP", "BASELINE", "80.00", "85.50");
  write("b", "LIF", "STDP", "EXTENDED", "90.00", "96.50");
  write("c", "LIF", "BP", "BASELINE", "90.00", "95.00");
  write("d", "LIF", "BP", "EXTENDED", "99.00", "99.00");
  write("e", "LIF", "TEMPOTRON", "BASELINE", "88.00", "88.50");
  write("f", "LIF", "TEMPOTRON", "EXTENDED", "99.00", "99.50");
  const auto out = dir / "out" / "accuracy_table.csv";
  const auto table = ReportTables(dir, out, dir / "plots");
  CHECK(table.size() == 6);
  const auto csv = ReadFile(out);
  CHECK(csv.rfind("model_kind,rule,search_mode,val_acc,test_acc,uplift_pp\n", 0) == 0);
  CHECK(csv.find("LIF,STDP,EXTENDED,90.00,96.50,11.00\n") != std::string::npos);
  CHECK(csv.find("LIF,STDP,BASELINE,80.00,85.50,\n") != std::string::npos);
  const auto layout = ReadFile(dir / "plots" / "LIF_layout.csv");
  CHECK(layout ==
        "parameters,BP,TEMPOTRON,STDP\n"
        "BASELINE,95.00%,88.50%,85.50%\n"
        "EXTENDED,99.00% (4.00% ↑),99.50% (11.00% ↑),96.50% (11.00% ↑)\n");
  CHECK(ReadFile(dir / "plots" / "LIF_accuracy.svg").rfind("<svg", 0) == 0);

  const auto one = Scratch("report_one");
  fs::create_directories(one / "x");
  fs::copy_file(dir / "a" / "result.csv", one / "x" / "result.csv");
  ReportTables(one, one / "t.csv", std::nullopt);
  CHECK(ReadFile(one / "t.csv") ==
        "model_kind,rule,search_mode,val_acc,test_acc,uplift_pp\nLIF,STDP,BASELINE,80.00,85.50,\n");
  CHECK_ERROR_CODE(ReportTables(Scratch("report_empty"), one / "u.csv", std::nullopt),
                   ErrorCode::kNoResultsFound);
}

TEST_CASE("command line") {
  const auto dir = Scratch("cli");
  const auto d = dir.string();
  CHECK(RunCli("gen-data --rate-a 20 --rate-b 50 --bins 1024 --dt-ms 1 --train 20 --val 10 "
               "--test 10 --seed 3 --out " +
               d + "/data") == 0);
  CHECK(LoadSpikeTrains(dir / "data" / "train.spk").records.size() == 20);
  {
    std::ofstream cfg(dir / "c.cfg");
    cfg << "n = 8\nepochs = 1\nsearch.budget = 2\nsearch.inner_seeds = 1\n";
  }
  CHECK(RunCli("train --model lif --rule stdp --config " + d + "/c.cfg --data " + d +
               "/data --out " + d + "/tr") == 0);
  CHECK(fs::exists(dir / "tr" / "model.snn"));
  CHECK(RunCli("eval --model " + d + "/tr/model.snn --classifier " + d +
               "/tr/classifier.clf --data " + d + "/data --report " + d + "/ev.csv") == 0);
  CHECK(ReadFile(dir / "ev.csv").rfind("examples,correct,accuracy\n10,", 0) == 0);

  CHECK(RunCli("lzc --in " + d + "/data/val.spk --format csv", d + "/lzc.csv") == 0);
  const auto lz = ReadFile(dir / "lzc.csv");
  CHECK(lz.rfind("index,n,C,c\n0,1024,", 0) == 0);
  const auto file = LoadSpikeTrains(dir / "data" / "val.spk");
  CHECK(lz.find("\n9,1024," +
                std::to_string(Lz76Parse(file.records[9].train.bits()).component_count) + ",") !=
        std::string::npos);

  CHECK(RunCli("sweep --mode baseline --config " + d + "/c.cfg --data " + d +
               "/data --budget 2 "
               "--seeds 1 --out " +
               d + "/sw") == 0);
  CHECK(RunCli("report --results " + d + "/sw --out " + d + "/table.csv --plot " + d + "/plots") ==
        0);
  CHECK(fs::exists(dir / "plots" / "LIF_accuracy.svg"));

  {
    std::ofstream bad(dir / "bad.cfg");
    bad << "learning_rate = 0.1\n";
  }
  CHECK(RunCli("sweep --mode baseline --config " + d + "/bad.cfg --data " + d + "/data --out " + d +
               "/x") == 2);
  CHECK(RunCli("sweep --mode sideways --config " + d + "/c.cfg --data " + d + "/data --out " + d +
               "/x") == 2);
  CHECK(RunCli("train --model lif") == 2);
  CHECK(RunCli("lzc --in " + d + "/missing.spk --format csv") == 3);
  CHECK(RunCli("report --results " + d + "/nothing --out " + d + "/t.csv") == 3);
  {
    std::ofstream div(dir / "div.cfg");
    div << "n = 8\neta = 1e300\nlogit_scale = 1e10\nepochs = 3\n";
  }
  CHECK(RunCli("train --model lif --rule bp --config " + d + "/div.cfg --data " + d +
               "/data --out " + d + "/div") == 4);
}
