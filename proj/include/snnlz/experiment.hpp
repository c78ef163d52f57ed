#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "snnlz/classifier.hpp"
#include "snnlz/config.hpp"
#include "snnlz/core.hpp"
#include "snnlz/dataset.hpp"
#include "snnlz/network.hpp"

namespace snnlz {

// Stream ids under the master seed.
inline constexpr std::uint64_t kDataStream = 1;
inline constexpr std::uint64_t kSearchStream = 2;
inline constexpr std::uint64_t kRunStream = 3;

// Class 0 at rate_a_hz, class 1 at rate_b_hz; labels alternate so every
// split is balanced. Each split draws from its own child stream.
Dataset SynthesizeDataset(const ExperimentConfig& cfg, const SeedSpec& seed);

// Splits as spike-train files train.spk, val.spk, test.spk in `dir`.
void SaveDataset(const std::filesystem::path& dir, const Dataset& data);
// Throws kIo for missing files, kEmptyDataset for an empty train split.
Dataset LoadDataset(const std::filesystem::path& dir);

struct Pipeline {
  NetworkModel model;
  CentroidClassifier classifier;
  // Per-epoch BP losses, empty for the other rules.
  std::vector<double> epoch_losses;
};

// Readout features of one example: normalized LZC of every output train,
// followed by output spike rates when cfg.readout_spike_counts is set.
std::vector<double> ExtractFeatures(const NetworkModel& model, const Example& ex,
                                    const ExperimentConfig& cfg);
std::vector<LabeledFeature> ExtractFeatures(const NetworkModel& model,
                                            std::span<const Example> examples,
                                            const ExperimentConfig& cfg);

// Initializes a network for `hp`, trains it with cfg.rule on `train` and fits
// the centroid readout on the training features. `run_seed` drives weight
// initialization and data order. `mode` decides whether BP also descends on
// the intrinsic parameters.
Pipeline TrainPipeline(const ExperimentConfig& cfg, const HyperParams& hp, SearchMode mode,
                       std::span<const Example> train, const SeedSpec& run_seed);

double EvaluateAccuracy(const Pipeline& pipeline, std::span<const Example> examples,
                        const ExperimentConfig& cfg);

// Uniform draw from the resolved ranges, in the order of
// SearchSpace::ParamNames. n is drawn among the divisors of n_bins inside
// its range; parameters outside the mode keep their cfg.defaults values.
HyperParams SampleCandidate(const ExperimentConfig& cfg, const SearchSpace& space,
                            const SeedSpec& seed);

struct Candidate {
  std::size_t index = 0;
  HyperParams params;
  std::vector<double> val_accuracies;  // one per inner seed
  double mean_val_accuracy = 0.0;
};

struct SearchResult {
  std::vector<Candidate> candidates;
  std::size_t winner = 0;
};

// Records which split was read, for test-hygiene auditing.
using SplitTracer = std::function<void(const std::string& event)>;

// Random search over cfg.ResolvedSearch(). Candidates are evaluated on up to
// `threads` worker threads and reduced by candidate index. Winner: highest
// mean validation accuracy, ties to smaller n, then smaller eta, then lower
// index. Throws kEmptyDataset.
SearchResult HyperSearch(const ExperimentConfig& cfg, const Dataset& data,
                         unsigned threads = 0, const SplitTracer& trace = {});

struct TrialResult {
  std::string config_snapshot;
  SearchMode mode = SearchMode::kBaseline;
  SearchResult search;
  HyperParams winner;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;
  double wall_seconds = 0.0;
  Pipeline pipeline;
};

// Search, retrain the winner with inner seed 0 on the training split, then
// score the test split exactly once.
TrialResult RunTrial(const ExperimentConfig& cfg, const Dataset& data, unsigned threads = 0,
                     const SplitTracer& trace = {});

// RunTrial plus persistence into cfg.output_dir: result.csv, candidates.csv,
// confusion.csv, model.snn, classifier.clf, config.txt, trace.log and
// timing.txt. A RUNNING marker exists while the trial is in progress and
// stays behind if it fails. Files are written atomically.
TrialResult RunSweep(const ExperimentConfig& cfg, const Dataset& data, unsigned threads = 0);

// Synthesizes the dataset from cfg.master_seed, then RunSweep.
TrialResult RunExperiment(const ExperimentConfig& cfg, unsigned threads = 0);

// Header and row of result.csv. Accuracies are percentages with two
// decimals; nothing time-dependent is included.
std::string ResultCsv(const ExperimentConfig& cfg, const TrialResult& result);

}  // namespace snnlz
