#pragma once

#include <span>
#include <vector>

#include "snnlz/core.hpp"
#include "snnlz/dataset.hpp"
#include "snnlz/network.hpp"

namespace snnlz {

struct BpConfig {
  double eta = 0.05;
  // Half-width of the triangular surrogate derivative
  // max(0, 1 - |u - v_th| / width), peak 1 at threshold.
  double surrogate_width = 0.5;
  int epochs = 5;
  int batch_size = 10;
  // Logit of class c = logit_scale * mean over bins and over the neurons of
  // output group c of the post-reset membrane potential.
  double logit_scale = 1.0;
  // Also descend on v_th and tau_m of both layers (extended optimization).
  bool learn_intrinsic = false;

  void Validate() const;
};

enum class SpikeMode {
  // Heaviside spikes in the forward pass, surrogate derivative in the
  // backward pass. Used for training.
  kHard,
  // Spikes replaced by the smooth step whose derivative is exactly the
  // surrogate, so the backward pass is the true gradient of the forward.
  // Used to validate gradients against finite differences.
  kSmooth,
};

// Smooth step with derivative max(0, 1 - |x| / width); rises from 0 at
// x = -width to width at x = +width.
double SmoothSpike(double x, double width);
double SurrogateDerivative(double x, double width);

struct BpGradients {
  Matrix w_xh;
  Matrix w_hz;
  std::vector<double> b_h;
  std::vector<double> b_z;
  double v_th_h = 0.0;
  double v_th_z = 0.0;
  double tau_m_h = 0.0;
  double tau_m_z = 0.0;

  static BpGradients ZerosLike(const NetworkModel& model);
  void Add(const BpGradients& other);
  void Scale(double factor);
};

struct LossAndGradients {
  double loss = 0.0;
  BpGradients grad;
};

// Softmax cross-entropy of one example and its gradient by
// backpropagation through time. Throws kLayerWidthMismatch, kGridMismatch.
LossAndGradients ComputeLossAndGradients(const NetworkModel& model,
                                         const std::vector<SpikeTrain>& inputs,
                                         int label, int classes, const BpConfig& cfg,
                                         SpikeMode mode = SpikeMode::kHard,
                                         const ForwardOptions& options = {});

double ComputeLoss(const NetworkModel& model, const std::vector<SpikeTrain>& inputs,
                   int label, int classes, const BpConfig& cfg,
                   SpikeMode mode = SpikeMode::kHard,
                   const ForwardOptions& options = {});

// Trainable parameters in a fixed order: w_xh, w_hz, b_h, b_z, then (when
// intrinsic) v_th_h, v_th_z, tau_m_h, tau_m_z. FlattenGradients uses the
// same order.
std::vector<double*> TrainableParameters(NetworkModel& model, bool intrinsic);
std::vector<double> FlattenGradients(const BpGradients& grad, bool intrinsic);

struct BpResult {
  NetworkModel model;
  // Mean per-example loss seen during each epoch (before that example's
  // batch update).
  std::vector<double> epoch_losses;
};

// Minibatch gradient descent with rate eta; data order is reshuffled by
// `rng` every epoch. Intrinsic parameters are projected back to
// tau_m >= dt and v_th >= v_reset + 1e-3 after each step.
// Throws kNonfiniteLoss when a loss is not finite, kGridMismatch.
BpResult BpTrain(NetworkModel model, std::span<const Example> data, const BpConfig& cfg,
                 Rng& rng, const ForwardOptions& options = {});

}  // namespace snnlz
