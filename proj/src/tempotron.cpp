#include "snnlz/tempotron.hpp"

#include <cmath>
#include <numeric>

#include "snnlz/error.hpp"

namespace snnlz {

void TempotronConfig::Validate() const {
  if (!(eta > 0) || !(tau_s_ms > 0) || !(tau_ms > tau_s_ms) || epochs < 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "Tempotron needs eta > 0 and tau_ms > tau_s_ms > 0");
  }
}

double TempotronConfig::PeakTime() const {
  return tau_ms * tau_s_ms / (tau_ms - tau_s_ms) * std::log(tau_ms / tau_s_ms);
}

double TempotronConfig::V0() const {
  const double tp = PeakTime();
  return 1.0 / (std::exp(-tp / tau_ms) - std::exp(-tp / tau_s_ms));
}

double TempotronConfig::Kernel(double t_ms) const {
  if (t_ms < 0) return 0.0;
  return V0() * (std::exp(-t_ms / tau_ms) - std::exp(-t_ms / tau_s_ms));
}

std::vector<double> TempotronDelta(const ForwardTrace& trace, std::size_t neuron,
                                   const std::vector<SpikeTrain>& pre_trains,
                                   bool label_should_fire, bool did_fire,
                                   const TempotronConfig& cfg) {
  if (!trace.has_potentials()) {
    throw Error(ErrorCode::kMissingPotentialTrace,
                "Tempotron update needs retained membrane potentials");
  }
  std::vector<double> dw(pre_trains.size(), 0.0);
  if (label_should_fire == did_fire) return dw;

  const std::size_t n = trace.output_trains.size();
  const auto& out = trace.output_trains.at(neuron);
  const std::size_t T = out.size();
  std::size_t t_f = 0;
  if (did_fire) {
    while (t_f < T && !out[t_f]) ++t_f;
  } else {
    double best = trace.v_hist_z[neuron];
    for (std::size_t t = 1; t < T; ++t) {
      const double v = trace.v_hist_z[t * n + neuron];
      if (v > best) {
        best = v;
        t_f = t;
      }
    }
  }

  const double sign = label_should_fire ? 1.0 : -1.0;
  const double dt = out.grid().dt_ms;
  const double v0 = cfg.V0();
  for (std::size_t i = 0; i < pre_trains.size(); ++i) {
    double acc = 0.0;
    for (std::size_t t = 0; t <= t_f && t < T; ++t) {
      if (!pre_trains[i][t]) continue;
      const double lag = dt * static_cast<double>(t_f - t);
      acc += v0 * (std::exp(-lag / cfg.tau_ms) - std::exp(-lag / cfg.tau_s_ms));
    }
    dw[i] = sign * cfg.eta * acc;
  }
  return dw;
}

NetworkModel TempotronTrain(NetworkModel model, std::span<const Example> data,
                            const TempotronConfig& cfg, Rng& rng,
                            const ForwardOptions& options) {
  cfg.Validate();
  const auto prepared = PrepareExamples(data, model.n, model.grid);
  const int classes = ClassCount(data);
  std::vector<std::size_t> order(prepared.size());
  std::iota(order.begin(), order.end(), 0);
  ForwardOptions fwd = options;
  fwd.retain = Retain::kPotentials;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Shuffle(order, rng);
    for (auto idx : order) {
      const auto& ex = prepared[idx];
      const auto trace = Forward(model, ex.inputs, fwd);
      // With the delay the output layer sees hidden spikes one bin late.
      std::vector<SpikeTrain> pre = trace.hidden_trains;
      if (fwd.hidden_to_output_delay) {
        for (auto& train : pre) {
          Bits bits(train.size(), 0);
          for (std::size_t t = 1; t < bits.size(); ++t) bits[t] = train[t - 1];
          train = SpikeTrain(train.grid(), std::move(bits));
        }
      }
      for (std::size_t j = 0; j < model.n; ++j) {
        const bool should_fire = OutputGroup(j, model.n, classes) == ex.label;
        const bool did_fire = SpikeCount(trace.output_trains[j]) > 0;
        if (should_fire == did_fire) continue;
        const auto dw =
            TempotronDelta(trace, j, pre, should_fire, did_fire, cfg);
        for (std::size_t i = 0; i < model.n; ++i) model.w_hz(j, i) += dw[i];
      }
    }
  }
  return model;
}

}  // namespace snnlz
