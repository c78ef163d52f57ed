#include "snnlz/neuron.hpp"

#include <string>

#include "snnlz/error.hpp"

namespace snnlz {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
}

}  // namespace

void LifParams::Validate(double dt_ms) const {
  Require(std::isfinite(tau_m_ms) && std::isfinite(r_m) && std::isfinite(v_th) &&
              std::isfinite(v_reset) && std::isfinite(v_rest),
          "neuron parameters must be finite");
  Require(dt_ms > 0.0, "dt_ms must be positive");
  Require(tau_m_ms >= dt_ms, "tau_m_ms must be >= dt_ms");
  Require(r_m > 0.0, "r_m must be positive");
  Require(v_th > v_reset, "v_th must exceed v_reset");
}

void MetaParams::Validate(double dt_ms) const {
  base.Validate(dt_ms);
  Require(std::isfinite(th_jump) && th_jump >= 0.0, "th_jump must be >= 0");
  Require(std::isfinite(tau_adapt_ms) && tau_adapt_ms > 0.0,
          "tau_adapt_ms must be positive");
  Require(std::isfinite(tau_mod_gain), "tau_mod_gain must be finite");
}

double InputCurrent(std::span<const double> weights, std::span<const double> inputs,
                    double bias) {
  if (weights.size() != inputs.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weights " + std::to_string(weights.size()) + " vs inputs " +
                    std::to_string(inputs.size()));
  }
  double acc = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * inputs[i];
  return acc;
}

}  // namespace snnlz
