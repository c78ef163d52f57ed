#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snnlz/core.hpp"
#include "snnlz/neuron.hpp"

namespace snnlz {

enum class ModelKind { kLif, kMeta };

std::string_view ToString(ModelKind kind);  // "LIF" / "META"
ModelKind ParseModelKind(std::string_view text);  // accepts lif/meta, any case

// Dense row-major matrix; (row, col) = (post, pre).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// Three-layer feedforward network X -> H -> Z, each layer of width n. LIF
// layers only use MetaParams::base.
struct NetworkModel {
  std::size_t n = 0;
  ModelKind kind = ModelKind::kLif;
  TimeGrid grid;
  Matrix w_xh;
  Matrix w_hz;
  std::vector<double> b_h;
  std::vector<double> b_z;
  MetaParams params_h;
  MetaParams params_z;

  // Zero weights and biases with the given layer parameters.
  static NetworkModel Create(std::size_t n, ModelKind kind, TimeGrid grid,
                             const MetaParams& params);

  // Throws kLayerWidthMismatch / kInvalidConfig.
  void Validate() const;

  friend bool operator==(const NetworkModel&, const NetworkModel&) = default;
};

// Upper bound of the uniform weight initialization: chosen so that the
// expected steady-state drive R * E[I] of a neuron equals v_th when its n
// inputs spike with probability ref_spike_prob per bin.
double InitWeightScale(std::size_t n, const LifParams& params, double ref_spike_prob);

// Draws every weight independently from U[0, w_max]; biases are set to 0.
void InitializeWeights(NetworkModel& model, double w_max, Rng& rng);

enum class Retain { kSpikes, kPotentials };

struct ForwardOptions {
  Retain retain = Retain::kSpikes;
  // Output layer sees hidden spikes of the previous bin instead of the
  // current one.
  bool hidden_to_output_delay = false;
};

struct ForwardTrace {
  std::vector<SpikeTrain> output_trains;
  std::vector<SpikeTrain> hidden_trains;
  // Row-major [bin][neuron] post-update potentials and input currents;
  // populated only with Retain::kPotentials.
  std::vector<double> v_hist_h;
  std::vector<double> v_hist_z;
  std::vector<double> i_hist_h;
  std::vector<double> i_hist_z;

  bool has_potentials() const { return !v_hist_z.empty(); }
};

// Simulates the network over the model grid. Hidden currents at bin t use
// the input spikes of bin t; output currents use the hidden spikes of the
// same bin (or t - 1 with the delay option).
// Throws kLayerWidthMismatch, kGridMismatch.
ForwardTrace Forward(const NetworkModel& model, const std::vector<SpikeTrain>& inputs,
                     const ForwardOptions& options = {});

// Normalized LZC of every output train.
std::vector<double> OutputFeatures(const ForwardTrace& trace);

// Model file, ASCII, LF line endings:
//
//   SNNMODEL v1 kind=<LIF|META> n=<int> n_bins=<int> dt_ms=<float>
//   [w_xh]      n rows of n values
//   [w_hz]      n rows of n values
//   [b_h]       one row of n values
//   [b_z]       one row of n values
//   [params_h]  tau_m_ms r_m v_th v_reset v_rest [th_jump tau_adapt_ms tau_mod_gain]
//   [params_z]  same layout
//
// Values are space separated in shortest round-trip form; the bracketed
// meta-neuron fields are present only for kind=META.
std::string SerializeModel(const NetworkModel& model);
NetworkModel ParseModel(const std::string& text);
void SaveModel(const std::filesystem::path& path, const NetworkModel& model);
NetworkModel LoadModel(const std::filesystem::path& path);

}  // namespace snnlz
