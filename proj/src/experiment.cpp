#include "snnlz/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "snnlz/bp.hpp"
#include "snnlz/encoding.hpp"
#include "snnlz/error.hpp"
#include "snnlz/fileutil.hpp"
#include "snnlz/numfmt.hpp"
#include "snnlz/spike_io.hpp"
#include "snnlz/stdp.hpp"
#include "snnlz/tempotron.hpp"

namespace snnlz {

namespace {

std::vector<Example> SynthesizeSplit(const ExperimentConfig& cfg, int count,
                                     const SeedSpec& seed) {
  TimeGrid grid{cfg.dt_ms, cfg.n_bins};
  std::vector<Example> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int label = i % 2;
    PoissonSpec spec{label == 0 ? cfg.rate_a_hz : cfg.rate_b_hz, grid};
    auto rng = DeriveRng(seed.Child(static_cast<std::uint64_t>(i)));
    out.push_back(Example{GeneratePoisson(spec, rng).ToBits(), label});
  }
  return out;
}

SpikeTrainFile ToFile(const std::vector<Example>& split, double dt_ms) {
  SpikeTrainFile file;
  file.grid = {dt_ms, split.empty() ? 1 : split.front().sequence.size()};
  for (const auto& ex : split) {
    file.records.push_back({SpikeTrain(file.grid, ex.sequence), ex.label});
  }
  return file;
}

std::vector<Example> FromFile(const SpikeTrainFile& file, const std::string& name) {
  std::vector<Example> out;
  for (const auto& rec : file.records) {
    if (!rec.label) {
      throw Error(ErrorCode::kParse, name + ": every record needs a class label");
    }
    out.push_back(Example{rec.train.ToBits(), *rec.label});
  }
  return out;
}

std::string Percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

void ThrowIfEmpty(const Dataset& data) {
  if (data.train.empty()) throw Error(ErrorCode::kEmptyDataset, "training split is empty");
  if (data.val.empty()) throw Error(ErrorCode::kEmptyDataset, "validation split is empty");
}

}  // namespace

Dataset SynthesizeDataset(const ExperimentConfig& cfg, const SeedSpec& seed) {
  cfg.Validate();
  Dataset d;
  d.dt_ms = cfg.dt_ms;
  d.train = SynthesizeSplit(cfg, cfg.train_count, seed.Child(0));
  d.val = SynthesizeSplit(cfg, cfg.val_count, seed.Child(1));
  d.test = SynthesizeSplit(cfg, cfg.test_count, seed.Child(2));
  return d;
}

void SaveDataset(const std::filesystem::path& dir, const Dataset& data) {
  std::filesystem::create_directories(dir);
  SaveSpikeTrains(dir / "train.spk", ToFile(data.train, data.dt_ms));
  SaveSpikeTrains(dir / "val.spk", ToFile(data.val, data.dt_ms));
  SaveSpikeTrains(dir / "test.spk", ToFile(data.test, data.dt_ms));
}

Dataset LoadDataset(const std::filesystem::path& dir) {
  Dataset d;
  const auto train = LoadSpikeTrains(dir / "train.spk");
  d.dt_ms = train.grid.dt_ms;
  d.train = FromFile(train, "train.spk");
  d.val = FromFile(LoadSpikeTrains(dir / "val.spk"), "val.spk");
  d.test = FromFile(LoadSpikeTrains(dir / "test.spk"), "test.spk");
  if (d.train.empty()) throw Error(ErrorCode::kEmptyDataset, "train.spk has no records");
  return d;
}

std::vector<double> ExtractFeatures(const NetworkModel& model, const Example& ex,
                                    const ExperimentConfig& cfg) {
  const auto inputs = DemuxInput(ex.sequence, model.n, model.grid.dt_ms);
  const auto trace = Forward(model, inputs, cfg.ForwardOptionsFor());
  auto features = OutputFeatures(trace);
  if (cfg.readout_spike_counts) {
    for (const auto& train : trace.output_trains) {
      features.push_back(static_cast<double>(SpikeCount(train)) /
                         static_cast<double>(train.size()));
    }
  }
  return features;
}

std::vector<LabeledFeature> ExtractFeatures(const NetworkModel& model,
                                            std::span<const Example> examples,
                                            const ExperimentConfig& cfg) {
  std::vector<LabeledFeature> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back({ExtractFeatures(model, ex, cfg), ex.label});
  return out;
}

Pipeline TrainPipeline(const ExperimentConfig& cfg, const HyperParams& hp, SearchMode mode,
                       std::span<const Example> train, const SeedSpec& run_seed) {
  if (train.empty()) throw Error(ErrorCode::kEmptyDataset, "training split is empty");
  const std::size_t length = train.front().sequence.size();
  if (hp.n == 0 || length % hp.n != 0) {
    throw Error(ErrorCode::kWidthDoesNotDivideSequence,
                "n=" + std::to_string(hp.n) + " does not divide " + std::to_string(length));
  }
  const TimeGrid grid{cfg.dt_ms, length / hp.n};
  const auto params = cfg.NeuronParamsFor(hp);
  auto model = NetworkModel::Create(hp.n, cfg.model_kind, grid, params);

  // Initial scale follows the configured default threshold, not the searched
  // one, so the searched threshold really moves the firing sensitivity.
  LifParams ref = params.base;
  ref.v_th = cfg.defaults.v_th;
  auto init_rng = DeriveRng(run_seed.Child(0));
  InitializeWeights(model, InitWeightScale(hp.n, ref, cfg.init_spike_prob), init_rng);

  auto rng = DeriveRng(run_seed.Child(1));
  const auto fwd = cfg.ForwardOptionsFor();
  Pipeline p;
  switch (cfg.rule) {
    case Rule::kBp: {
      BpConfig bp = cfg.bp;
      bp.eta = hp.eta;
      bp.epochs = cfg.epochs;
      bp.learn_intrinsic = mode == SearchMode::kExtended;
      auto r = BpTrain(std::move(model), train, bp, rng, fwd);
      model = std::move(r.model);
      p.epoch_losses = std::move(r.epoch_losses);
      break;
    }
    case Rule::kStdp: {
      StdpConfig sc = cfg.stdp;
      sc.rate = hp.eta;
      sc.epochs = cfg.epochs;
      model = StdpTrain(std::move(model), train, sc, rng, fwd);
      break;
    }
    case Rule::kTempotron: {
      TempotronConfig tc = cfg.tempotron;
      tc.eta = hp.eta;
      tc.epochs = cfg.epochs;
      model = TempotronTrain(std::move(model), train, tc, rng, fwd);
      break;
    }
  }
  const auto features = ExtractFeatures(model, train, cfg);
  p.classifier = CentroidClassifier::Fit(features);
  p.model = std::move(model);
  return p;
}

double EvaluateAccuracy(const Pipeline& pipeline, std::span<const Example> examples,
                        const ExperimentConfig& cfg) {
  const auto features = ExtractFeatures(pipeline.model, examples, cfg);
  return pipeline.classifier.Accuracy(features);
}

HyperParams SampleCandidate(const ExperimentConfig& cfg, const SearchSpace& space,
                            const SeedSpec& seed) {
  HyperParams hp = cfg.defaults;
  auto rng = DeriveRng(seed);
  for (const auto& name : SearchSpace::ParamNames(space.mode, cfg.model_kind)) {
    const auto it = space.ranges.find(name);
    if (it == space.ranges.end()) {
      throw Error(ErrorCode::kInvalidConfig, "no range for searched parameter " + name);
    }
    const ParamRange r = it->second;
    if (name == "n") {
      std::vector<std::size_t> choices;
      for (std::size_t d = 2; d <= cfg.n_bins; ++d) {
        if (cfg.n_bins % d == 0 && d >= r.min && d <= r.max) choices.push_back(d);
      }
      if (choices.empty()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "range.n contains no divisor of n_bins larger than 1");
      }
      hp.n = choices[rng.Below(choices.size())];
      continue;
    }
    const double x = rng.Uniform(r.min, r.max);
    if (name == "eta") hp.eta = x;
    else if (name == "v_th") hp.v_th = x;
    else if (name == "tau_m_ms") hp.tau_m_ms = x;
    else if (name == "th_jump") hp.th_jump = x;
    else if (name == "tau_adapt_ms") hp.tau_adapt_ms = x;
  }
  return hp;
}

SearchResult HyperSearch(const ExperimentConfig& cfg, const Dataset& data, unsigned threads,
                         const SplitTracer& trace) {
  ThrowIfEmpty(data);
  const auto space = cfg.ResolvedSearch();
  const SeedSpec search_seed{cfg.master_seed, kSearchStream};
  const SeedSpec run_seed{cfg.master_seed, kRunStream};

  SearchResult result;
  const auto budget = static_cast<std::size_t>(space.budget);
  result.candidates.resize(budget);
  for (std::size_t k = 0; k < budget; ++k) {
    result.candidates[k].index = k;
    result.candidates[k].params = SampleCandidate(cfg, space, search_seed.Child(k));
  }

  // Work items are (candidate, inner seed) pairs.
  const std::size_t seeds = static_cast<std::size_t>(space.inner_seeds);
  const std::size_t items = budget * seeds;
  std::vector<double> acc(items, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t item = next.fetch_add(1);
      if (item >= items) return;
      try {
        const auto& c = result.candidates[item / seeds];
        const auto p =
            TrainPipeline(cfg, c.params, space.mode, data.train, run_seed.Child(item % seeds));
        acc[item] = EvaluateAccuracy(p, data.val, cfg);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = items;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, items));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t k = 0; k < budget; ++k) {
    auto& c = result.candidates[k];
    c.val_accuracies.assign(acc.begin() + static_cast<std::ptrdiff_t>(k * seeds),
                            acc.begin() + static_cast<std::ptrdiff_t>((k + 1) * seeds));
    double sum = 0.0;
    for (double a : c.val_accuracies) sum += a;
    c.mean_val_accuracy = sum / static_cast<double>(seeds);
    if (trace) {
      for (std::size_t r = 0; r < seeds; ++r) {
        trace("search candidate=" + std::to_string(k) + " seed=" + std::to_string(r) +
              " split=train");
        trace("search candidate=" + std::to_string(k) + " seed=" + std::to_string(r) +
              " split=val");
      }
    }
  }

  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.mean_val_accuracy != b.mean_val_accuracy) {
      return a.mean_val_accuracy > b.mean_val_accuracy;
    }
    if (a.params.n != b.params.n) return a.params.n < b.params.n;
    if (a.params.eta != b.params.eta) return a.params.eta < b.params.eta;
    return a.index < b.index;
  };
  for (std::size_t k = 1; k < budget; ++k) {
    if (better(result.candidates[k], result.candidates[result.winner])) result.winner = k;
  }
  return result;
}

TrialResult RunTrial(const ExperimentConfig& cfg, const Dataset& data, unsigned threads,
                     const SplitTracer& trace) {
  cfg.Validate();
  const auto start = std::chrono::steady_clock::now();
  if (data.test.empty()) throw Error(ErrorCode::kEmptyTestSet, "test split is empty");
  TrialResult r;
  r.config_snapshot = DescribeConfig(cfg);
  r.mode = cfg.search.mode;
  r.search = HyperSearch(cfg, data, threads, trace);
  const auto& best = r.search.candidates[r.search.winner];
  r.winner = best.params;
  r.val_accuracy = best.mean_val_accuracy;

  if (trace) trace("retrain split=train");
  r.pipeline = TrainPipeline(cfg, r.winner, r.mode, data.train,
                             SeedSpec{cfg.master_seed, kRunStream}.Child(0));
  if (trace) trace("evaluate split=test");
  const auto test_features = ExtractFeatures(r.pipeline.model, data.test, cfg);
  r.test_accuracy = r.pipeline.classifier.Accuracy(test_features);
  r.confusion = r.pipeline.classifier.Confusion(test_features);
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string ResultCsv(const ExperimentConfig& cfg, const TrialResult& r) {
  std::ostringstream o;
  o << "model_kind,rule,search_mode,seed,n,eta,v_th,tau_m_ms,th_jump,tau_adapt_ms,"
       "val_acc,test_acc\n";
  const auto& w = r.winner;
  o << ToString(cfg.model_kind) << ',' << ToString(cfg.rule) << ',' << ToString(r.mode)
    << ',' << cfg.master_seed << ',' << w.n << ',' << FormatDouble(w.eta) << ','
    << FormatDouble(w.v_th) << ',' << FormatDouble(w.tau_m_ms) << ','
    << FormatDouble(w.th_jump) << ',' << FormatDouble(w.tau_adapt_ms) << ','
    << Percent(r.val_accuracy) << ',' << Percent(r.test_accuracy) << '\n';
  return o.str();
}

namespace {

std::string CandidatesCsv(const TrialResult& r) {
  std::ostringstream o;
  o << "index,n,eta,v_th,tau_m_ms,th_jump,tau_adapt_ms,mean_val_acc,val_accs\n";
  for (const auto& c : r.search.candidates) {
    o << c.index << ',' << c.params.n << ',' << FormatDouble(c.params.eta) << ','
      << FormatDouble(c.params.v_th) << ',' << FormatDouble(c.params.tau_m_ms) << ','
      << FormatDouble(c.params.th_jump) << ',' << FormatDouble(c.params.tau_adapt_ms) << ','
      << Percent(c.mean_val_accuracy) << ',';
    for (std::size_t i = 0; i < c.val_accuracies.size(); ++i) {
      o << (i ? ";" : "") << Percent(c.val_accuracies[i]);
    }
    o << '\n';
  }
  return o.str();
}

std::string ConfusionCsv(const TrialResult& r) {
  std::ostringstream o;
  o << "truth,predicted,count\n";
  for (std::size_t t = 0; t < r.confusion.size(); ++t) {
    for (std::size_t p = 0; p < r.confusion[t].size(); ++p) {
      o << t << ',' << p << ',' << r.confusion[t][p] << '\n';
    }
  }
  return o.str();
}

}  // namespace

TrialResult RunSweep(const ExperimentConfig& cfg, const Dataset& data, unsigned threads) {
  cfg.Validate();
  const std::filesystem::path dir = cfg.output_dir;
  std::filesystem::create_directories(dir);
  const auto marker = dir / "RUNNING";
  WriteFileAtomic(marker, "in progress\n");

  std::string trace_log;
  auto trace = [&trace_log](const std::string& event) { trace_log += event + '\n'; };
  auto r = RunTrial(cfg, data, threads, trace);

  WriteFileAtomic(dir / "config.txt", r.config_snapshot);
  WriteFileAtomic(dir / "trace.log", trace_log);
  WriteFileAtomic(dir / "candidates.csv", CandidatesCsv(r));
  WriteFileAtomic(dir / "confusion.csv", ConfusionCsv(r));
  SaveModel(dir / "model.snn", r.pipeline.model);
  SaveClassifier(dir / "classifier.clf", r.pipeline.classifier);
  WriteFileAtomic(dir / "timing.txt", "wall_seconds=" + FormatDouble(r.wall_seconds) + '\n');
  // result.csv last: its presence marks a complete run.
  WriteFileAtomic(dir / "result.csv", ResultCsv(cfg, r));
  std::filesystem::remove(marker);
  return r;
}

TrialResult RunExperiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.Validate();
  const auto data = SynthesizeDataset(cfg, SeedSpec{cfg.master_seed, kDataStream});
  return RunSweep(cfg, data, threads);
}

}  // namespace snnlz
