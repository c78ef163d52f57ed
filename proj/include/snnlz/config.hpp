#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "snnlz/bp.hpp"
#include "snnlz/network.hpp"
#include "snnlz/stdp.hpp"
#include "snnlz/tempotron.hpp"

namespace snnlz {

enum class Rule { kBp, kStdp, kTempotron };
enum class SearchMode { kBaseline, kExtended };

std::string_view ToString(Rule rule);        // "BP" / "STDP" / "TEMPOTRON"
std::string_view ToString(SearchMode mode);  // "BASELINE" / "EXTENDED"
Rule ParseRule(std::string_view text);       // case-insensitive
SearchMode ParseSearchMode(std::string_view text);

struct ParamRange {
  double min = 0.0;
  double max = 0.0;
};

// One point of the search: global capacity and step size, plus the
// intrinsic neuron parameters that only the extended mode varies.
struct HyperParams {
  std::size_t n = 16;
  double eta = 0.05;
  double v_th = 1.0;
  double tau_m_ms = 20.0;
  double th_jump = 0.2;
  double tau_adapt_ms = 20.0;
};

struct SearchSpace {
  SearchMode mode = SearchMode::kBaseline;
  std::map<std::string, ParamRange> ranges;
  int budget = 20;
  int inner_seeds = 3;

  // Names of the searched parameters, in sampling order. BASELINE: n, eta.
  // EXTENDED adds v_th, tau_m_ms and, for META, th_jump, tau_adapt_ms.
  static std::vector<std::string> ParamNames(SearchMode mode, ModelKind kind);
};

// Flat declarative description of an experiment. Parsed from `key = value`
// lines; '#' starts a comment. Unknown keys are rejected.
struct ExperimentConfig {
  // task
  double rate_a_hz = 20.0;
  double rate_b_hz = 50.0;
  std::size_t n_bins = 1024;
  double dt_ms = 1.0;
  int train_count = 200;
  int val_count = 100;
  int test_count = 200;

  ModelKind model_kind = ModelKind::kLif;
  Rule rule = Rule::kBp;
  std::uint64_t master_seed = 1;
  std::string output_dir = "results";

  // defaults of the searched quantities
  HyperParams defaults;

  // fixed neuron constants
  double r_m = 10.0;
  double v_reset = 0.0;
  double v_rest = 0.0;
  double tau_mod_gain = 0.0;
  // Input spike probability per bin assumed by the weight initialization.
  double init_spike_prob = 0.035;

  int epochs = 3;
  BpConfig bp;
  StdpConfig stdp;
  TempotronConfig tempotron;

  bool output_delay = false;
  bool readout_spike_counts = false;

  // mode, budget and inner seeds; `ranges` holds only explicit
  // range.<param>.min/max overrides.
  SearchSpace search;

  // Search space with DefaultRanges(rule) overlaid by the overrides.
  SearchSpace ResolvedSearch() const;

  // Throws kInvalidConfig.
  void Validate() const;

  // Neuron parameters for a point of the search.
  MetaParams NeuronParamsFor(const HyperParams& hp) const;
  ForwardOptions ForwardOptionsFor() const;
};

// Range defaults depend on the rule through the learning-rate scale.
std::map<std::string, ParamRange> DefaultRanges(Rule rule);

// Parses config text. Throws kUnknownConfigKey for unknown keys and
// kInvalidConfig for malformed lines or values.
ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Canonical `key = value` listing of every setting, used as the config
// snapshot stored with results.
std::string DescribeConfig(const ExperimentConfig& cfg);

}  // namespace snnlz
