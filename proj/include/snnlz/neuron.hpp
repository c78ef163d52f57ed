#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

namespace snnlz {

struct LifParams {
  double tau_m_ms = 10.0;
  double r_m = 1.0;
  double v_th = 1.0;
  double v_reset = 0.0;
  double v_rest = 0.0;

  // Throws kInvalidConfig unless tau_m_ms >= dt_ms > 0, r_m > 0 and
  // v_th > v_reset, all finite.
  void Validate(double dt_ms) const;

  friend bool operator==(const LifParams&, const LifParams&) = default;
};

// Adaptive LIF. The threshold carries a spike-triggered excess that decays
// with tau_adapt_ms, and the membrane time constant follows a running
// average of the input current:
//   tau_eff = clamp(tau_m * (1 + tau_mod_gain * i_avg), dt, 10 * tau_m)
struct MetaParams {
  LifParams base;
  double th_jump = 0.0;
  double tau_adapt_ms = 20.0;
  double tau_mod_gain = 0.0;

  void Validate(double dt_ms) const;

  friend bool operator==(const MetaParams&, const MetaParams&) = default;
};

struct NeuronState {
  double v = 0.0;
  double th_offset = 0.0;
  double i_avg = 0.0;
  std::optional<std::size_t> last_spike_bin;

  friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

// Intermediate quantities of one update, kept for gradient computation.
struct StepDetail {
  double u = 0.0;        // potential after integration, before reset
  double tau_eff = 0.0;  // effective membrane time constant used
  double th_eff = 0.0;   // effective threshold used
  bool tau_clamped = false;
  bool spike = false;
};

// I = w . x + b. Throws kDimensionMismatch.
double InputCurrent(std::span<const double> weights, std::span<const double> inputs,
                    double bias);

// Forward-Euler update. Spike when u >= v_th; the potential is reset to
// v_reset within the same bin. `bin` only feeds last_spike_bin.
inline StepDetail LifStepInPlace(NeuronState& s, const LifParams& p, double i_t,
                                 double dt_ms, std::size_t bin = 0) {
  StepDetail d;
  d.tau_eff = p.tau_m_ms;
  d.th_eff = p.v_th;
  d.u = s.v + (dt_ms / d.tau_eff) * (-(s.v - p.v_rest) + p.r_m * i_t);
  d.spike = d.u >= d.th_eff;
  s.v = d.spike ? p.v_reset : d.u;
  if (d.spike) s.last_spike_bin = bin;
  return d;
}

// Meta-neuron update. Order within a bin: the effective threshold and time
// constant come from the state at the start of the bin; the membrane
// integrates and may spike/reset; the threshold excess decays by
// exp(-dt / tau_adapt) and then grows by th_jump on a spike; the input
// average relaxes toward i_t with rate dt / tau_adapt.
inline StepDetail MetaStepInPlace(NeuronState& s, const MetaParams& p, double i_t,
                                  double dt_ms, std::size_t bin = 0) {
  StepDetail d;
  const double tau_raw = p.base.tau_m_ms * (1.0 + p.tau_mod_gain * s.i_avg);
  const double tau_hi = 10.0 * p.base.tau_m_ms;
  d.tau_eff = std::clamp(tau_raw, dt_ms, tau_hi);
  d.tau_clamped = tau_raw < dt_ms || tau_raw > tau_hi;
  d.th_eff = p.base.v_th + s.th_offset;
  d.u = s.v + (dt_ms / d.tau_eff) * (-(s.v - p.base.v_rest) + p.base.r_m * i_t);
  d.spike = d.u >= d.th_eff;
  s.v = d.spike ? p.base.v_reset : d.u;
  s.th_offset *= std::exp(-dt_ms / p.tau_adapt_ms);
  if (d.spike) {
    s.th_offset += p.th_jump;
    s.last_spike_bin = bin;
  }
  s.i_avg += (dt_ms / p.tau_adapt_ms) * (i_t - s.i_avg);
  return d;
}

struct StepResult {
  NeuronState state;
  bool spike = false;
};

inline StepResult LifStep(NeuronState state, const LifParams& params, double i_t,
                          double dt_ms, std::size_t bin = 0) {
  const auto d = LifStepInPlace(state, params, i_t, dt_ms, bin);
  return {state, d.spike};
}

inline StepResult MetaStep(NeuronState state, const MetaParams& params, double i_t,
                           double dt_ms, std::size_t bin = 0) {
  const auto d = MetaStepInPlace(state, params, i_t, dt_ms, bin);
  return {state, d.spike};
}

}  // namespace snnlz
