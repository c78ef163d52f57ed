#include "snnlz/bp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "snnlz/error.hpp"

namespace snnlz {

void BpConfig::Validate() const {
  if (!(eta >= 0) || !std::isfinite(eta) || !(surrogate_width > 0) || epochs < 0 ||
      batch_size < 1 || !(logit_scale > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "invalid backpropagation configuration");
  }
}

double SmoothSpike(double x, double width) {
  if (x <= -width) return 0.0;
  if (x <= 0.0) return (x + width) * (x + width) / (2.0 * width);
  if (x < width) return width - (width - x) * (width - x) / (2.0 * width);
  return width;
}

double SurrogateDerivative(double x, double width) {
  return std::max(0.0, 1.0 - std::abs(x) / width);
}

BpGradients BpGradients::ZerosLike(const NetworkModel& model) {
  BpGradients g;
  g.w_xh = Matrix(model.n, model.n);
  g.w_hz = Matrix(model.n, model.n);
  g.b_h.assign(model.n, 0.0);
  g.b_z.assign(model.n, 0.0);
  return g;
}

void BpGradients::Add(const BpGradients& o) {
  for (std::size_t k = 0; k < w_xh.data.size(); ++k) w_xh.data[k] += o.w_xh.data[k];
  for (std::size_t k = 0; k < w_hz.data.size(); ++k) w_hz.data[k] += o.w_hz.data[k];
  for (std::size_t k = 0; k < b_h.size(); ++k) b_h[k] += o.b_h[k];
  for (std::size_t k = 0; k < b_z.size(); ++k) b_z[k] += o.b_z[k];
  v_th_h += o.v_th_h;
  v_th_z += o.v_th_z;
  tau_m_h += o.tau_m_h;
  tau_m_z += o.tau_m_z;
}

void BpGradients::Scale(double f) {
  for (auto& v : w_xh.data) v *= f;
  for (auto& v : w_hz.data) v *= f;
  for (auto& v : b_h) v *= f;
  for (auto& v : b_z) v *= f;
  v_th_h *= f;
  v_th_z *= f;
  tau_m_h *= f;
  tau_m_z *= f;
}

namespace {

enum : std::uint8_t { kNotClamped = 0, kClampedLow = 1, kClampedHigh = 2 };

// Per-layer record of the unrolled dynamics, indexed [bin * n + neuron].
struct LayerTape {
  std::vector<double> current;
  std::vector<double> u;
  std::vector<double> s;
  std::vector<double> surrogate;
  std::vector<double> v_prev;
  std::vector<double> avg_prev;
  std::vector<double> tau_eff;
  std::vector<std::uint8_t> clamp;
  std::vector<double> v_post;

  explicit LayerTape(std::size_t size)
      : current(size), u(size), s(size), surrogate(size), v_prev(size),
        avg_prev(size), tau_eff(size), clamp(size), v_post(size) {}
};

struct LayerState {
  std::vector<double> v, offset, avg;
  explicit LayerState(std::size_t n) : v(n, 0.0), offset(n, 0.0), avg(n, 0.0) {}
};

class Unroller {
 public:
  Unroller(const NetworkModel& model, const std::vector<SpikeTrain>& inputs,
           const BpConfig& cfg, SpikeMode mode, const ForwardOptions& options)
      : model_(model), cfg_(cfg), mode_(mode), delay_(options.hidden_to_output_delay),
        n_(model.n), T_(model.grid.n_bins), dt_(model.grid.dt_ms),
        meta_(model.kind == ModelKind::kMeta), x_(T_ * n_, 0.0),
        h_(T_ * n_), z_(T_ * n_) {
    model.Validate();
    if (inputs.size() != n_) {
      throw Error(ErrorCode::kLayerWidthMismatch, "input count differs from width");
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (!(inputs[i].grid() == model.grid)) {
        throw Error(ErrorCode::kGridMismatch, "input grid differs from model grid");
      }
      for (std::size_t t = 0; t < T_; ++t) x_[t * n_ + i] = inputs[i][t] ? 1.0 : 0.0;
    }
  }

  void RunForward() {
    LayerState hs(n_), zs(n_);
    const std::vector<double> zeros(n_, 0.0);
    for (std::size_t t = 0; t < T_; ++t) {
      StepLayer(t, &x_[t * n_], model_.w_xh, model_.b_h, model_.params_h, hs, h_);
      const double* hin = delay_ ? (t == 0 ? zeros.data() : &h_.s[(t - 1) * n_])
                                 : &h_.s[t * n_];
      StepLayer(t, hin, model_.w_hz, model_.b_z, model_.params_z, zs, z_);
    }
  }

  // Softmax cross-entropy on the group-averaged potentials; fills dlogit.
  double Loss(int label, int classes, std::vector<double>* dlogit) const {
    if (classes < 1 || static_cast<std::size_t>(classes) > n_ || label < 0 ||
        label >= classes) {
      throw Error(ErrorCode::kInvalidConfig, "label/class count incompatible with width");
    }
    std::vector<double> logits(static_cast<std::size_t>(classes), 0.0);
    for (std::size_t t = 0; t < T_; ++t) {
      for (std::size_t j = 0; j < n_; ++j) {
        logits[static_cast<std::size_t>(OutputGroup(j, n_, classes))] +=
            z_.v_post[t * n_ + j];
      }
    }
    for (int c = 0; c < classes; ++c) {
      logits[static_cast<std::size_t>(c)] *= cfg_.logit_scale / GroupNorm(c, classes);
    }
    const double mx = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (auto l : logits) denom += std::exp(l - mx);
    const double log_z = mx + std::log(denom);
    if (dlogit) {
      dlogit->resize(logits.size());
      for (std::size_t c = 0; c < logits.size(); ++c) {
        (*dlogit)[c] = std::exp(logits[c] - log_z) -
                       (static_cast<int>(c) == label ? 1.0 : 0.0);
      }
    }
    return log_z - logits[static_cast<std::size_t>(label)];
  }

  BpGradients Backward(const std::vector<double>& dlogit, int classes) const {
    auto g = BpGradients::ZerosLike(model_);
    LayerState adj_h(n_), adj_z(n_);
    std::vector<double> ext_h(n_, 0.0), pending(n_, 0.0), lsin_z(n_, 0.0),
        unused(n_, 0.0);
    const std::vector<double> zeros(n_, 0.0);
    std::vector<double> direct(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const int c = OutputGroup(j, n_, classes);
      direct[j] = dlogit[static_cast<std::size_t>(c)] * cfg_.logit_scale /
                  GroupNorm(c, classes);
    }
    for (std::size_t t = T_; t-- > 0;) {
      for (std::size_t j = 0; j < n_; ++j) adj_z.v[j] += direct[j];
      const double* hin = delay_ ? (t == 0 ? zeros.data() : &h_.s[(t - 1) * n_])
                                 : &h_.s[t * n_];
      BackLayer(t, hin, zeros.data(), model_.w_hz, model_.params_z, z_, adj_z,
                g.w_hz, g.b_z, g.v_th_z, g.tau_m_z, lsin_z);
      if (delay_) {
        ext_h.swap(pending);
        pending = lsin_z;
      } else {
        ext_h = lsin_z;
      }
      BackLayer(t, &x_[t * n_], ext_h.data(), model_.w_xh, model_.params_h, h_, adj_h,
                g.w_xh, g.b_h, g.v_th_h, g.tau_m_h, unused);
      if (delay_) std::fill(ext_h.begin(), ext_h.end(), 0.0);
    }
    return g;
  }

 private:
  double GroupNorm(int c, int classes) const {
    std::size_t members = 0;
    for (std::size_t j = 0; j < n_; ++j) members += OutputGroup(j, n_, classes) == c;
    return static_cast<double>(T_) * static_cast<double>(members);
  }

  void StepLayer(std::size_t t, const double* s_in, const Matrix& w,
                 const std::vector<double>& bias, const MetaParams& p, LayerState& st,
                 LayerTape& tape) const {
    const double decay = std::exp(-dt_ / p.tau_adapt_ms);
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t idx = t * n_ + j;
      double cur = bias[j];
      const double* row = &w.data[j * n_];
      for (std::size_t i = 0; i < n_; ++i) cur += row[i] * s_in[i];

      double tau = p.base.tau_m_ms;
      double th = p.base.v_th;
      std::uint8_t clamp = kNotClamped;
      if (meta_) {
        const double raw = p.base.tau_m_ms * (1.0 + p.tau_mod_gain * st.avg[j]);
        const double hi = 10.0 * p.base.tau_m_ms;
        clamp = raw < dt_ ? kClampedLow : raw > hi ? kClampedHigh : kNotClamped;
        tau = std::clamp(raw, dt_, hi);
        th = p.base.v_th + st.offset[j];
      }
      const double u =
          st.v[j] + (dt_ / tau) * (-(st.v[j] - p.base.v_rest) + p.base.r_m * cur);
      const double x = u - th;
      const double s = mode_ == SpikeMode::kHard ? (u >= th ? 1.0 : 0.0)
                                                  : SmoothSpike(x, cfg_.surrogate_width);
      tape.current[idx] = cur;
      tape.u[idx] = u;
      tape.s[idx] = s;
      tape.surrogate[idx] = SurrogateDerivative(x, cfg_.surrogate_width);
      tape.v_prev[idx] = st.v[j];
      tape.avg_prev[idx] = st.avg[j];
      tape.tau_eff[idx] = tau;
      tape.clamp[idx] = clamp;
      st.v[j] = u - s * (u - p.base.v_reset);
      tape.v_post[idx] = st.v[j];
      if (meta_) {
        st.offset[j] = st.offset[j] * decay + p.th_jump * s;
        st.avg[j] += (dt_ / p.tau_adapt_ms) * (cur - st.avg[j]);
      }
    }
  }

  // Reverse of StepLayer at bin t. `adj` holds adjoints of the state after
  // the bin on entry and before the bin on exit. ext_s is the adjoint of
  // this layer's spikes from downstream; lsin receives the adjoint of s_in.
  void BackLayer(std::size_t t, const double* s_in, const double* ext_s, const Matrix& w,
                 const MetaParams& p, const LayerTape& tape, LayerState& adj,
                 Matrix& gw, std::vector<double>& gb, double& g_th, double& g_tau,
                 std::vector<double>& lsin) const {
    const double decay = std::exp(-dt_ / p.tau_adapt_ms);
    const double relax = dt_ / p.tau_adapt_ms;
    std::fill(lsin.begin(), lsin.end(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t idx = t * n_ + j;
      const double u = tape.u[idx];
      const double s = tape.s[idx];
      const double sg = tape.surrogate[idx];
      const double tau = tape.tau_eff[idx];
      const double k = dt_ / tau;

      const double lv = adj.v[j];
      const double lo = adj.offset[j];
      const double la = adj.avg[j];

      double ls = lv * (-(u - p.base.v_reset)) + ext_s[j];
      if (meta_) ls += lo * p.th_jump;
      const double lu = lv * (1.0 - s) + ls * sg;
      const double l_th = -ls * sg;
      const double lk =
          lu * (-(tape.v_prev[idx] - p.base.v_rest) + p.base.r_m * tape.current[idx]);
      double l_cur = lu * k * p.base.r_m;
      const double l_tau = lk * (-dt_ / (tau * tau));

      adj.v[j] = lu * (1.0 - k);
      g_th += l_th;
      if (meta_) {
        l_cur += la * relax;
        double new_la = la * (1.0 - relax);
        switch (tape.clamp[idx]) {
          case kNotClamped:
            g_tau += l_tau * (1.0 + p.tau_mod_gain * tape.avg_prev[idx]);
            new_la += l_tau * p.base.tau_m_ms * p.tau_mod_gain;
            break;
          case kClampedHigh:
            g_tau += l_tau * 10.0;
            break;
          default:
            break;
        }
        adj.avg[j] = new_la;
        adj.offset[j] = lo * decay + l_th;
      } else {
        g_tau += l_tau;
      }

      gb[j] += l_cur;
      double* grow = &gw.data[j * n_];
      const double* wrow = &w.data[j * n_];
      for (std::size_t i = 0; i < n_; ++i) {
        grow[i] += l_cur * s_in[i];
        lsin[i] += l_cur * wrow[i];
      }
    }
  }

  const NetworkModel& model_;
  const BpConfig& cfg_;
  SpikeMode mode_;
  bool delay_;
  std::size_t n_, T_;
  double dt_;
  bool meta_;
  std::vector<double> x_;
  LayerTape h_, z_;
};

}  // namespace

LossAndGradients ComputeLossAndGradients(const NetworkModel& model,
                                         const std::vector<SpikeTrain>& inputs,
                                         int label, int classes, const BpConfig& cfg,
                                         SpikeMode mode, const ForwardOptions& options) {
  Unroller un(model, inputs, cfg, mode, options);
  un.RunForward();
  std::vector<double> dlogit;
  LossAndGradients out;
  out.loss = un.Loss(label, classes, &dlogit);
  out.grad = un.Backward(dlogit, classes);
  return out;
}

double ComputeLoss(const NetworkModel& model, const std::vector<SpikeTrain>& inputs,
                   int label, int classes, const BpConfig& cfg, SpikeMode mode,
                   const ForwardOptions& options) {
  Unroller un(model, inputs, cfg, mode, options);
  un.RunForward();
  return un.Loss(label, classes, nullptr);
}

std::vector<double*> TrainableParameters(NetworkModel& model, bool intrinsic) {
  std::vector<double*> out;
  for (auto& v : model.w_xh.data) out.push_back(&v);
  for (auto& v : model.w_hz.data) out.push_back(&v);
  for (auto& v : model.b_h) out.push_back(&v);
  for (auto& v : model.b_z) out.push_back(&v);
  if (intrinsic) {
    out.push_back(&model.params_h.base.v_th);
    out.push_back(&model.params_z.base.v_th);
    out.push_back(&model.params_h.base.tau_m_ms);
    out.push_back(&model.params_z.base.tau_m_ms);
  }
  return out;
}

std::vector<double> FlattenGradients(const BpGradients& g, bool intrinsic) {
  std::vector<double> out;
  out.insert(out.end(), g.w_xh.data.begin(), g.w_xh.data.end());
  out.insert(out.end(), g.w_hz.data.begin(), g.w_hz.data.end());
  out.insert(out.end(), g.b_h.begin(), g.b_h.end());
  out.insert(out.end(), g.b_z.begin(), g.b_z.end());
  if (intrinsic) out.insert(out.end(), {g.v_th_h, g.v_th_z, g.tau_m_h, g.tau_m_z});
  return out;
}

BpResult BpTrain(NetworkModel model, std::span<const Example> data, const BpConfig& cfg,
                 Rng& rng, const ForwardOptions& options) {
  cfg.Validate();
  const auto prepared = PrepareExamples(data, model.n, model.grid);
  const int classes = ClassCount(data);
  std::vector<std::size_t> order(prepared.size());
  std::iota(order.begin(), order.end(), 0);

  BpResult result;
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Shuffle(order, rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      auto acc = BpGradients::ZerosLike(model);
      for (std::size_t k = start; k < stop; ++k) {
        const auto& ex = prepared[order[k]];
        auto lg = ComputeLossAndGradients(model, ex.inputs, ex.label, classes, cfg,
                                          SpikeMode::kHard, options);
        if (!std::isfinite(lg.loss)) {
          throw Error(ErrorCode::kNonfiniteLoss,
                      "loss diverged in epoch " + std::to_string(epoch));
        }
        loss_sum += lg.loss;
        acc.Add(lg.grad);
      }
      acc.Scale(-cfg.eta / static_cast<double>(stop - start));
      const auto params = TrainableParameters(model, cfg.learn_intrinsic);
      const auto step = FlattenGradients(acc, cfg.learn_intrinsic);
      for (std::size_t k = 0; k < params.size(); ++k) *params[k] += step[k];
      if (cfg.learn_intrinsic) {
        for (auto* p : {&model.params_h, &model.params_z}) {
          p->base.tau_m_ms = std::max(p->base.tau_m_ms, model.grid.dt_ms);
          p->base.v_th = std::max(p->base.v_th, p->base.v_reset + 1e-3);
        }
      }
    }
    const double mean_loss = loss_sum / static_cast<double>(prepared.size());
    if (!std::isfinite(mean_loss)) {
      throw Error(ErrorCode::kNonfiniteLoss, "epoch loss is not finite");
    }
    result.epoch_losses.push_back(mean_loss);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace snnlz
