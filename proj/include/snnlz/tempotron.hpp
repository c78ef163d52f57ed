#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "snnlz/core.hpp"
#include "snnlz/dataset.hpp"
#include "snnlz/network.hpp"

namespace snnlz {

// Double-exponential PSP kernel K(t) = v0 (exp(-t/tau) - exp(-t/tau_s)) for
// t >= 0, else 0, with v0 chosen so that max K = 1.
struct TempotronConfig {
  double eta = 0.01;
  double tau_ms = 15.0;
  double tau_s_ms = 15.0 / 4.0;
  int epochs = 1;

  void Validate() const;
  double PeakTime() const;  // (tau tau_s / (tau - tau_s)) ln(tau / tau_s)
  double V0() const;
  double Kernel(double t_ms) const;
};

// Weight change for one output neuron trained as a Tempotron.
//  - label_should_fire == did_fire: all zeros.
//  - should fire, stayed silent (P+ error): +eta * sum over pre spikes at
//    t <= t_f of K(t_f - t), with t_f the bin of maximal potential.
//  - fired, should stay silent (P- error): same magnitude with negative
//    sign, t_f the bin of the first (erroneous) threshold crossing.
// `trace` must retain potentials (kMissingPotentialTrace otherwise).
std::vector<double> TempotronDelta(const ForwardTrace& trace, std::size_t neuron,
                                   const std::vector<SpikeTrain>& pre_trains,
                                   bool label_should_fire, bool did_fire,
                                   const TempotronConfig& cfg);

// Trains w_hz only; w_xh stays at its initial random projection. Output
// neuron j should fire iff the example's label equals OutputGroup(j).
NetworkModel TempotronTrain(NetworkModel model, std::span<const Example> data,
                            const TempotronConfig& cfg, Rng& rng,
                            const ForwardOptions& options = {});

}  // namespace snnlz
