#include "snnlz/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

#include "snnlz/error.hpp"
#include "snnlz/fileutil.hpp"
#include "snnlz/numfmt.hpp"

namespace snnlz {

std::string_view ToString(Rule rule) {
  switch (rule) {
    case Rule::kBp: return "BP";
    case Rule::kStdp: return "STDP";
    case Rule::kTempotron: return "TEMPOTRON";
  }
  return "?";
}

std::string_view ToString(SearchMode mode) {
  return mode == SearchMode::kBaseline ? "BASELINE" : "EXTENDED";
}

namespace {

std::string Lower(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

Rule ParseRule(std::string_view text) {
  const auto s = Lower(text);
  if (s == "bp") return Rule::kBp;
  if (s == "stdp") return Rule::kStdp;
  if (s == "tempotron") return Rule::kTempotron;
  throw Error(ErrorCode::kInvalidConfig, "unknown rule '" + std::string(text) + "'");
}

SearchMode ParseSearchMode(std::string_view text) {
  const auto s = Lower(text);
  if (s == "baseline") return SearchMode::kBaseline;
  if (s == "extended") return SearchMode::kExtended;
  throw Error(ErrorCode::kInvalidConfig, "unknown search mode '" + std::string(text) + "'");
}

std::vector<std::string> SearchSpace::ParamNames(SearchMode mode, ModelKind kind) {
  std::vector<std::string> names{"n", "eta"};
  if (mode == SearchMode::kExtended) {
    names.insert(names.end(), {"v_th", "tau_m_ms"});
    if (kind == ModelKind::kMeta) names.insert(names.end(), {"th_jump", "tau_adapt_ms"});
  }
  return names;
}

std::map<std::string, ParamRange> DefaultRanges(Rule rule) {
  std::map<std::string, ParamRange> r{
      {"n", {8, 64}},
      {"v_th", {0.5, 1.25}},
      {"tau_m_ms", {5.0, 30.0}},
      {"th_jump", {0.0, 0.5}},
      {"tau_adapt_ms", {5.0, 50.0}},
  };
  switch (rule) {
    case Rule::kBp: r["eta"] = {0.01, 1.0}; break;
    case Rule::kStdp: r["eta"] = {0.5, 5.0}; break;
    case Rule::kTempotron: r["eta"] = {0.001, 0.1}; break;
  }
  return r;
}

SearchSpace ExperimentConfig::ResolvedSearch() const {
  SearchSpace s = search;
  s.ranges = DefaultRanges(rule);
  for (const auto& [k, v] : search.ranges) s.ranges[k] = v;
  return s;
}

void ExperimentConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
  };
  require(std::isfinite(rate_a_hz) && rate_a_hz >= 0 && std::isfinite(rate_b_hz) &&
              rate_b_hz >= 0,
          "rates must be finite and >= 0");
  require(rate_a_hz != rate_b_hz, "rate_a_hz must differ from rate_b_hz");
  require(train_count >= 1 && val_count >= 1 && test_count >= 1,
          "split counts must be >= 1");
  require(n_bins >= 1 && dt_ms > 0, "n_bins >= 1 and dt_ms > 0 required");
  require(epochs >= 0, "epochs must be >= 0");
  require(init_spike_prob > 0 && init_spike_prob <= 1, "init_spike_prob in (0, 1]");
  require(search.budget >= 1, "search.budget must be >= 1");
  require(search.inner_seeds >= 1, "search.inner_seeds must be >= 1");
  require(defaults.n >= 2 && n_bins % defaults.n == 0, "n must be >= 2 and divide n_bins");
  for (const auto& [name, r] : ResolvedSearch().ranges) {
    require(std::isfinite(r.min) && std::isfinite(r.max) && r.min <= r.max,
            "range." + name + " must satisfy min <= max");
  }
  NeuronParamsFor(defaults).Validate(dt_ms);
  bp.Validate();
  stdp.Validate();
  tempotron.Validate();
}

MetaParams ExperimentConfig::NeuronParamsFor(const HyperParams& hp) const {
  MetaParams p;
  p.base = {hp.tau_m_ms, r_m, hp.v_th, v_reset, v_rest};
  p.th_jump = hp.th_jump;
  p.tau_adapt_ms = hp.tau_adapt_ms;
  p.tau_mod_gain = tau_mod_gain;
  return p;
}

ForwardOptions ExperimentConfig::ForwardOptionsFor() const {
  ForwardOptions o;
  o.hidden_to_output_delay = output_delay;
  return o;
}

namespace {

bool ParseBool(std::string_view v) {
  const auto s = Lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error(ErrorCode::kInvalidConfig, "not a boolean: '" + std::string(v) + "'");
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = [] {
    std::map<std::string, Setter> m;
    auto dbl = [&m](const std::string& key, auto member) {
      m[key] = [member](ExperimentConfig& c, std::string_view v) {
        c.*member = ParseDouble(v);
      };
    };
    dbl("rate_a_hz", &ExperimentConfig::rate_a_hz);
    dbl("rate_b_hz", &ExperimentConfig::rate_b_hz);
    dbl("dt_ms", &ExperimentConfig::dt_ms);
    dbl("r_m", &ExperimentConfig::r_m);
    dbl("v_reset", &ExperimentConfig::v_reset);
    dbl("v_rest", &ExperimentConfig::v_rest);
    dbl("tau_mod_gain", &ExperimentConfig::tau_mod_gain);
    dbl("init_spike_prob", &ExperimentConfig::init_spike_prob);
    m["n_bins"] = [](ExperimentConfig& c, std::string_view v) { c.n_bins = ParseUint(v); };
    m["train_count"] = [](ExperimentConfig& c, std::string_view v) {
      c.train_count = static_cast<int>(ParseInt(v));
    };
    m["val_count"] = [](ExperimentConfig& c, std::string_view v) {
      c.val_count = static_cast<int>(ParseInt(v));
    };
    m["test_count"] = [](ExperimentConfig& c, std::string_view v) {
      c.test_count = static_cast<int>(ParseInt(v));
    };
    m["model_kind"] = [](ExperimentConfig& c, std::string_view v) {
      c.model_kind = ParseModelKind(v);
    };
    m["rule"] = [](ExperimentConfig& c, std::string_view v) { c.rule = ParseRule(v); };
    m["seed"] = [](ExperimentConfig& c, std::string_view v) { c.master_seed = ParseUint(v); };
    m["output_dir"] = [](ExperimentConfig& c, std::string_view v) {
      c.output_dir = std::string(v);
    };
    m["n"] = [](ExperimentConfig& c, std::string_view v) { c.defaults.n = ParseUint(v); };
    m["eta"] = [](ExperimentConfig& c, std::string_view v) { c.defaults.eta = ParseDouble(v); };
    m["v_th"] = [](ExperimentConfig& c, std::string_view v) {
      c.defaults.v_th = ParseDouble(v);
    };
    m["tau_m_ms"] = [](ExperimentConfig& c, std::string_view v) {
      c.defaults.tau_m_ms = ParseDouble(v);
    };
    m["th_jump"] = [](ExperimentConfig& c, std::string_view v) {
      c.defaults.th_jump = ParseDouble(v);
    };
    m["tau_adapt_ms"] = [](ExperimentConfig& c, std::string_view v) {
      c.defaults.tau_adapt_ms = ParseDouble(v);
    };
    m["epochs"] = [](ExperimentConfig& c, std::string_view v) {
      c.epochs = static_cast<int>(ParseInt(v));
    };
    m["a_plus"] = [](ExperimentConfig& c, std::string_view v) { c.stdp.a_plus = ParseDouble(v); };
    m["a_minus"] = [](ExperimentConfig& c, std::string_view v) {
      c.stdp.a_minus = ParseDouble(v);
    };
    m["tau_plus_ms"] = [](ExperimentConfig& c, std::string_view v) {
      c.stdp.tau_plus_ms = ParseDouble(v);
    };
    m["tau_minus_ms"] = [](ExperimentConfig& c, std::string_view v) {
      c.stdp.tau_minus_ms = ParseDouble(v);
    };
    m["w_min"] = [](ExperimentConfig& c, std::string_view v) { c.stdp.w_min = ParseDouble(v); };
    m["w_max"] = [](ExperimentConfig& c, std::string_view v) { c.stdp.w_max = ParseDouble(v); };
    m["tau_ms"] = [](ExperimentConfig& c, std::string_view v) {
      c.tempotron.tau_ms = ParseDouble(v);
    };
    m["tau_s_ms"] = [](ExperimentConfig& c, std::string_view v) {
      c.tempotron.tau_s_ms = ParseDouble(v);
    };
    m["surrogate_width"] = [](ExperimentConfig& c, std::string_view v) {
      c.bp.surrogate_width = ParseDouble(v);
    };
    m["batch_size"] = [](ExperimentConfig& c, std::string_view v) {
      c.bp.batch_size = static_cast<int>(ParseInt(v));
    };
    m["logit_scale"] = [](ExperimentConfig& c, std::string_view v) {
      c.bp.logit_scale = ParseDouble(v);
    };
    m["output_delay"] = [](ExperimentConfig& c, std::string_view v) {
      c.output_delay = ParseBool(v);
    };
    m["readout.spike_counts"] = [](ExperimentConfig& c, std::string_view v) {
      c.readout_spike_counts = ParseBool(v);
    };
    m["search.mode"] = [](ExperimentConfig& c, std::string_view v) {
      c.search.mode = ParseSearchMode(v);
    };
    m["search.budget"] = [](ExperimentConfig& c, std::string_view v) {
      c.search.budget = static_cast<int>(ParseInt(v));
    };
    m["search.inner_seeds"] = [](ExperimentConfig& c, std::string_view v) {
      c.search.inner_seeds = static_cast<int>(ParseInt(v));
    };
    for (const std::string param :
         {"n", "eta", "v_th", "tau_m_ms", "th_jump", "tau_adapt_ms"}) {
      m["range." + param + ".min"] = [param](ExperimentConfig& c, std::string_view v) {
        auto it = c.search.ranges.find(param);
        if (it == c.search.ranges.end()) {
          it = c.search.ranges.emplace(param, DefaultRanges(c.rule).at(param)).first;
        }
        it->second.min = ParseDouble(v);
      };
      m["range." + param + ".max"] = [param](ExperimentConfig& c, std::string_view v) {
        auto it = c.search.ranges.find(param);
        if (it == c.search.ranges.end()) {
          it = c.search.ranges.emplace(param, DefaultRanges(c.rule).at(param)).first;
        }
        it->second.max = ParseDouble(v);
      };
    }
    return m;
  }();
  return setters;
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::pair<std::string, std::string>> entries;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (!Setters().contains(key)) {
      throw Error(ErrorCode::kUnknownConfigKey,
                  "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  // The rule decides default ranges, so it is applied first.
  std::stable_partition(entries.begin(), entries.end(),
                        [](const auto& e) { return e.first == "rule"; });
  for (const auto& [key, value] : entries) {
    try {
      Setters().at(key)(cfg, value);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInvalidConfig) throw;
      throw Error(ErrorCode::kInvalidConfig, "key '" + key + "': " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  return ParseConfig(text);
}

std::string DescribeConfig(const ExperimentConfig& c) {
  std::ostringstream o;
  auto kv = [&o](std::string_view k, const std::string& v) { o << k << " = " << v << '\n'; };
  const auto d = [](double x) { return FormatDouble(x); };
  kv("rule", std::string(ToString(c.rule)));
  kv("model_kind", std::string(ToString(c.model_kind)));
  kv("seed", std::to_string(c.master_seed));
  kv("rate_a_hz", d(c.rate_a_hz));
  kv("rate_b_hz", d(c.rate_b_hz));
  kv("n_bins", std::to_string(c.n_bins));
  kv("dt_ms", d(c.dt_ms));
  kv("train_count", std::to_string(c.train_count));
  kv("val_count", std::to_string(c.val_count));
  kv("test_count", std::to_string(c.test_count));
  kv("n", std::to_string(c.defaults.n));
  kv("eta", d(c.defaults.eta));
  kv("v_th", d(c.defaults.v_th));
  kv("tau_m_ms", d(c.defaults.tau_m_ms));
  kv("th_jump", d(c.defaults.th_jump));
  kv("tau_adapt_ms", d(c.defaults.tau_adapt_ms));
  kv("r_m", d(c.r_m));
  kv("v_reset", d(c.v_reset));
  kv("v_rest", d(c.v_rest));
  kv("tau_mod_gain", d(c.tau_mod_gain));
  kv("init_spike_prob", d(c.init_spike_prob));
  kv("epochs", std::to_string(c.epochs));
  kv("a_plus", d(c.stdp.a_plus));
  kv("a_minus", d(c.stdp.a_minus));
  kv("tau_plus_ms", d(c.stdp.tau_plus_ms));
  kv("tau_minus_ms", d(c.stdp.tau_minus_ms));
  kv("w_min", d(c.stdp.w_min));
  kv("w_max", d(c.stdp.w_max));
  kv("tau_ms", d(c.tempotron.tau_ms));
  kv("tau_s_ms", d(c.tempotron.tau_s_ms));
  kv("surrogate_width", d(c.bp.surrogate_width));
  kv("batch_size", std::to_string(c.bp.batch_size));
  kv("logit_scale", d(c.bp.logit_scale));
  kv("output_delay", c.output_delay ? "true" : "false");
  kv("readout.spike_counts", c.readout_spike_counts ? "true" : "false");
  const auto s = c.ResolvedSearch();
  kv("search.mode", std::string(ToString(s.mode)));
  kv("search.budget", std::to_string(s.budget));
  kv("search.inner_seeds", std::to_string(s.inner_seeds));
  for (const auto& [name, r] : s.ranges) {
    kv("range." + name + ".min", d(r.min));
    kv("range." + name + ".max", d(r.max));
  }
  return o.str();
}

}  // namespace snnlz
