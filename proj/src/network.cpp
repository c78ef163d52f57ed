#include "snnlz/network.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "snnlz/error.hpp"
#include "snnlz/fileutil.hpp"
#include "snnlz/lzc.hpp"
#include "snnlz/numfmt.hpp"
#include "snnlz/sections.hpp"

namespace snnlz {

std::string_view ToString(ModelKind kind) {
  return kind == ModelKind::kLif ? "LIF" : "META";
}

ModelKind ParseModelKind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "lif") return ModelKind::kLif;
  if (lower == "meta") return ModelKind::kMeta;
  throw Error(ErrorCode::kInvalidConfig, "unknown model kind '" + std::string(text) + "'");
}

NetworkModel NetworkModel::Create(std::size_t n, ModelKind kind, TimeGrid grid,
                                  const MetaParams& params) {
  NetworkModel m;
  m.n = n;
  m.kind = kind;
  m.grid = grid;
  m.w_xh = Matrix(n, n);
  m.w_hz = Matrix(n, n);
  m.b_h.assign(n, 0.0);
  m.b_z.assign(n, 0.0);
  m.params_h = params;
  m.params_z = params;
  m.Validate();
  return m;
}

void NetworkModel::Validate() const {
  if (n == 0) throw Error(ErrorCode::kLayerWidthMismatch, "layer width must be >= 1");
  if (w_xh.rows != n || w_xh.cols != n || w_hz.rows != n || w_hz.cols != n ||
      w_xh.data.size() != n * n || w_hz.data.size() != n * n || b_h.size() != n ||
      b_z.size() != n) {
    throw Error(ErrorCode::kLayerWidthMismatch,
                "weight/bias shapes inconsistent with n=" + std::to_string(n));
  }
  grid.Validate();
  params_h.Validate(grid.dt_ms);
  params_z.Validate(grid.dt_ms);
}

double InitWeightScale(std::size_t n, const LifParams& params, double ref_spike_prob) {
  // Mean of U[0, w_max] is w_max / 2, so n * p * w_max / 2 * R = v_th - v_rest.
  return 2.0 * (params.v_th - params.v_rest) /
         (params.r_m * static_cast<double>(n) * ref_spike_prob);
}

void InitializeWeights(NetworkModel& model, double w_max, Rng& rng) {
  for (auto& w : model.w_xh.data) w = rng.Uniform(0.0, w_max);
  for (auto& w : model.w_hz.data) w = rng.Uniform(0.0, w_max);
  std::fill(model.b_h.begin(), model.b_h.end(), 0.0);
  std::fill(model.b_z.begin(), model.b_z.end(), 0.0);
}

namespace {

void CheckInputs(const NetworkModel& model, const std::vector<SpikeTrain>& inputs) {
  if (inputs.size() != model.n) {
    throw Error(ErrorCode::kLayerWidthMismatch,
                std::to_string(inputs.size()) + " input trains for width " +
                    std::to_string(model.n));
  }
  for (const auto& tr : inputs) {
    if (!(tr.grid() == model.grid)) {
      throw Error(ErrorCode::kGridMismatch, "input train grid differs from model grid");
    }
  }
}

// currents[j] = bias[j] + sum over active presynaptic i of w(j, i)
void AccumulateCurrents(const Matrix& w, const std::vector<double>& bias,
                        const std::vector<std::size_t>& active,
                        std::vector<double>& currents) {
  std::copy(bias.begin(), bias.end(), currents.begin());
  for (std::size_t j = 0; j < w.rows; ++j) {
    const double* row = &w.data[j * w.cols];
    double acc = currents[j];
    for (auto i : active) acc += row[i];
    currents[j] = acc;
  }
}

StepDetail StepNeuron(ModelKind kind, NeuronState& s, const MetaParams& p, double i_t,
                      double dt_ms, std::size_t bin) {
  return kind == ModelKind::kLif ? LifStepInPlace(s, p.base, i_t, dt_ms, bin)
                                 : MetaStepInPlace(s, p, i_t, dt_ms, bin);
}

}  // namespace

ForwardTrace Forward(const NetworkModel& model, const std::vector<SpikeTrain>& inputs,
                     const ForwardOptions& options) {
  model.Validate();
  CheckInputs(model, inputs);
  const std::size_t n = model.n;
  const std::size_t T = model.grid.n_bins;
  const double dt = model.grid.dt_ms;
  const bool keep = options.retain == Retain::kPotentials;

  std::vector<NeuronState> hs(n), zs(n);
  std::vector<Bits> h_bits(n, Bits(T, 0)), z_bits(n, Bits(T, 0));
  std::vector<double> i_h(n), i_z(n);
  std::vector<std::size_t> active_x, active_h, prev_h;
  active_x.reserve(n);
  active_h.reserve(n);

  ForwardTrace trace;
  if (keep) {
    trace.v_hist_h.resize(T * n);
    trace.v_hist_z.resize(T * n);
    trace.i_hist_h.resize(T * n);
    trace.i_hist_z.resize(T * n);
  }

  for (std::size_t t = 0; t < T; ++t) {
    active_x.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (inputs[i][t]) active_x.push_back(i);
    }
    AccumulateCurrents(model.w_xh, model.b_h, active_x, i_h);
    prev_h.swap(active_h);
    active_h.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (StepNeuron(model.kind, hs[j], model.params_h, i_h[j], dt, t).spike) {
        h_bits[j][t] = 1;
        active_h.push_back(j);
      }
    }
    AccumulateCurrents(model.w_hz, model.b_z,
                       options.hidden_to_output_delay ? prev_h : active_h, i_z);
    for (std::size_t j = 0; j < n; ++j) {
      if (StepNeuron(model.kind, zs[j], model.params_z, i_z[j], dt, t).spike) {
        z_bits[j][t] = 1;
      }
    }
    if (keep) {
      for (std::size_t j = 0; j < n; ++j) {
        trace.v_hist_h[t * n + j] = hs[j].v;
        trace.v_hist_z[t * n + j] = zs[j].v;
        trace.i_hist_h[t * n + j] = i_h[j];
        trace.i_hist_z[t * n + j] = i_z[j];
      }
    }
  }

  trace.hidden_trains.reserve(n);
  trace.output_trains.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    trace.hidden_trains.emplace_back(model.grid, std::move(h_bits[j]));
    trace.output_trains.emplace_back(model.grid, std::move(z_bits[j]));
  }
  return trace;
}

std::vector<double> OutputFeatures(const ForwardTrace& trace) {
  std::vector<double> features;
  features.reserve(trace.output_trains.size());
  for (const auto& tr : trace.output_trains) {
    features.push_back(LzcNormalized(tr.bits()));
  }
  return features;
}

namespace {

std::vector<double> ParamsRow(const MetaParams& p, ModelKind kind) {
  std::vector<double> row{p.base.tau_m_ms, p.base.r_m, p.base.v_th, p.base.v_reset,
                          p.base.v_rest};
  if (kind == ModelKind::kMeta) {
    row.insert(row.end(), {p.th_jump, p.tau_adapt_ms, p.tau_mod_gain});
  }
  return row;
}

MetaParams ParamsFromRow(const std::vector<double>& row, ModelKind kind) {
  const std::size_t expected = kind == ModelKind::kMeta ? 8 : 5;
  if (row.size() != expected) {
    throw Error(ErrorCode::kParse, "params row has " + std::to_string(row.size()) +
                                       " values, expected " + std::to_string(expected));
  }
  MetaParams p;
  p.base = {row[0], row[1], row[2], row[3], row[4]};
  if (kind == ModelKind::kMeta) {
    p.th_jump = row[5];
    p.tau_adapt_ms = row[6];
    p.tau_mod_gain = row[7];
  }
  return p;
}

std::vector<std::vector<double>> MatrixRows(const Matrix& m) {
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < m.rows; ++r) {
    rows.emplace_back(m.data.begin() + static_cast<std::ptrdiff_t>(r * m.cols),
                      m.data.begin() + static_cast<std::ptrdiff_t>((r + 1) * m.cols));
  }
  return rows;
}

Matrix MatrixFromRows(const Section& s, std::size_t n) {
  if (s.rows.size() != n) {
    throw Error(ErrorCode::kParse, "[" + s.name + "] must have " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (s.rows[r].size() != n) {
      throw Error(ErrorCode::kParse, "[" + s.name + "] row width mismatch");
    }
    std::copy(s.rows[r].begin(), s.rows[r].end(),
              m.data.begin() + static_cast<std::ptrdiff_t>(r * n));
  }
  return m;
}

std::vector<double> VectorFromSection(const Section& s, std::size_t n) {
  if (s.rows.size() != 1 || s.rows[0].size() != n) {
    throw Error(ErrorCode::kParse, "[" + s.name + "] must be one row of " + std::to_string(n));
  }
  return s.rows[0];
}

}  // namespace

std::string SerializeModel(const NetworkModel& model) {
  model.Validate();
  std::string out = "SNNMODEL v1 kind=" + std::string(ToString(model.kind)) +
                    " n=" + std::to_string(model.n) +
                    " n_bins=" + std::to_string(model.grid.n_bins) +
                    " dt_ms=" + FormatDouble(model.grid.dt_ms) + "\n";
  AppendSection(out, "w_xh", MatrixRows(model.w_xh));
  AppendSection(out, "w_hz", MatrixRows(model.w_hz));
  AppendSection(out, "b_h", {model.b_h});
  AppendSection(out, "b_z", {model.b_z});
  AppendSection(out, "params_h", {ParamsRow(model.params_h, model.kind)});
  AppendSection(out, "params_z", {ParamsRow(model.params_z, model.kind)});
  return out;
}

NetworkModel ParseModel(const std::string& text) {
  const auto doc = ParseSectioned(text);
  if (doc.header.rfind("SNNMODEL v1 ", 0) != 0) {
    throw Error(ErrorCode::kParse, "missing 'SNNMODEL v1' header");
  }
  NetworkModel m;
  try {
    m.kind = ParseModelKind(HeaderField(doc.header, "kind"));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  m.n = ParseUint(HeaderField(doc.header, "n"));
  m.grid.n_bins = ParseUint(HeaderField(doc.header, "n_bins"));
  m.grid.dt_ms = ParseDouble(HeaderField(doc.header, "dt_ms"));
  m.w_xh = MatrixFromRows(doc.Get("w_xh"), m.n);
  m.w_hz = MatrixFromRows(doc.Get("w_hz"), m.n);
  m.b_h = VectorFromSection(doc.Get("b_h"), m.n);
  m.b_z = VectorFromSection(doc.Get("b_z"), m.n);
  const auto& ph = doc.Get("params_h");
  const auto& pz = doc.Get("params_z");
  if (ph.rows.size() != 1 || pz.rows.size() != 1) {
    throw Error(ErrorCode::kParse, "params sections must be a single row");
  }
  m.params_h = ParamsFromRow(ph.rows[0], m.kind);
  m.params_z = ParamsFromRow(pz.rows[0], m.kind);
  try {
    m.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  return m;
}

void SaveModel(const std::filesystem::path& path, const NetworkModel& model) {
  WriteFileAtomic(path, SerializeModel(model));
}

NetworkModel LoadModel(const std::filesystem::path& path) {
  return ParseModel(ReadFile(path));
}

}  // namespace snnlz
