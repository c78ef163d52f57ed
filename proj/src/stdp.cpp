#include "snnlz/stdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snnlz/error.hpp"

namespace snnlz {

void StdpConfig::Validate() const {
  const bool ok = a_plus > 0 && a_minus > 0 && tau_plus_ms > 0 && tau_minus_ms > 0 &&
                  w_min < w_max && epochs >= 0 && rate >= 0 && std::isfinite(rate);
  if (!ok) throw Error(ErrorCode::kInvalidConfig, "invalid STDP configuration");
}

double StdpDelta(double t_pre_ms, double t_post_ms, const StdpConfig& cfg) {
  if (t_post_ms > t_pre_ms) {
    return cfg.a_plus * std::exp(-(t_post_ms - t_pre_ms) / cfg.tau_plus_ms);
  }
  if (t_pre_ms > t_post_ms) {
    return -cfg.a_minus * std::exp(-(t_pre_ms - t_post_ms) / cfg.tau_minus_ms);
  }
  return 0.0;
}

namespace {

// Same as StdpSynapseDelta on pre-extracted spike bins.
double PairDelta(const std::vector<std::size_t>& pre, const std::vector<std::size_t>& post,
                 double dt_ms, const StdpConfig& cfg) {
  if (pre.empty() || post.empty()) return 0.0;
  double dw = 0.0;
  // Post spikes: latest pre at or before.
  std::size_t p = 0;
  for (auto tp : post) {
    while (p < pre.size() && pre[p] <= tp) ++p;
    if (p > 0) dw += StdpDelta(dt_ms * pre[p - 1], dt_ms * tp, cfg);
  }
  // Pre spikes: latest post at or before.
  std::size_t q = 0;
  for (auto tr : pre) {
    while (q < post.size() && post[q] <= tr) ++q;
    if (q > 0) dw += StdpDelta(dt_ms * tr, dt_ms * post[q - 1], cfg);
  }
  return dw;
}

void UpdateLayer(Matrix& w, const std::vector<SpikeTrain>& pre_trains,
                 const std::vector<SpikeTrain>& post_trains, const StdpConfig& cfg) {
  std::vector<std::vector<std::size_t>> pre_bins, post_bins;
  for (const auto& t : pre_trains) pre_bins.push_back(SpikeBins(t));
  for (const auto& t : post_trains) post_bins.push_back(SpikeBins(t));
  const double dt = pre_trains.front().grid().dt_ms;
  for (std::size_t j = 0; j < w.rows; ++j) {
    if (post_bins[j].empty()) continue;
    for (std::size_t i = 0; i < w.cols; ++i) {
      if (pre_bins[i].empty()) continue;
      const double dw = cfg.rate * PairDelta(pre_bins[i], post_bins[j], dt, cfg);
      w(j, i) = std::clamp(w(j, i) + dw, cfg.w_min, cfg.w_max);
    }
  }
}

}  // namespace

double StdpSynapseDelta(const SpikeTrain& pre, const SpikeTrain& post,
                        const StdpConfig& cfg) {
  if (!(pre.grid() == post.grid())) {
    throw Error(ErrorCode::kGridMismatch, "pre and post trains on different grids");
  }
  return PairDelta(SpikeBins(pre), SpikeBins(post), pre.grid().dt_ms, cfg);
}

NetworkModel StdpTrain(NetworkModel model, std::span<const Example> data,
                       const StdpConfig& cfg, Rng& rng, const ForwardOptions& options) {
  cfg.Validate();
  const auto prepared = PrepareExamples(data, model.n, model.grid);
  for (auto* w : {&model.w_xh, &model.w_hz}) {
    for (auto& v : w->data) v = std::clamp(v, cfg.w_min, cfg.w_max);
  }
  std::vector<std::size_t> order(prepared.size());
  std::iota(order.begin(), order.end(), 0);
  ForwardOptions fwd = options;
  fwd.retain = Retain::kSpikes;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Shuffle(order, rng);
    for (auto idx : order) {
      const auto& inputs = prepared[idx].inputs;
      const auto trace = Forward(model, inputs, fwd);
      UpdateLayer(model.w_xh, inputs, trace.hidden_trains, cfg);
      UpdateLayer(model.w_hz, trace.hidden_trains, trace.output_trains, cfg);
    }
  }
  return model;
}

}  // namespace snnlz
