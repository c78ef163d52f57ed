#pragma once

#include <span>
#include <vector>

#include "snnlz/core.hpp"
#include "snnlz/dataset.hpp"
#include "snnlz/network.hpp"

namespace snnlz {

struct StdpConfig {
  double a_plus = 0.01;
  double a_minus = 0.012;
  double tau_plus_ms = 20.0;
  double tau_minus_ms = 20.0;
  double w_min = 0.0;
  double w_max = 1.0;
  int epochs = 1;
  // Multiplies every pairwise change; this is the rule's learning rate.
  double rate = 1.0;

  void Validate() const;
};

// Pairwise exponential window: +A+ exp(-(post - pre) / tau+) when post
// follows pre, -A- exp(-(pre - post) / tau-) when pre follows post, 0 on
// coincidence.
double StdpDelta(double t_pre_ms, double t_post_ms, const StdpConfig& cfg);

// Total change for one synapse over a presentation, nearest-neighbour
// pairing: every post spike pairs with the latest pre spike at or before
// it, every pre spike with the latest post spike at or before it.
double StdpSynapseDelta(const SpikeTrain& pre, const SpikeTrain& post,
                        const StdpConfig& cfg);

// Unsupervised training of both weight layers. Weights are first projected
// into [w_min, w_max]. Each presentation runs the
// network with the current weights, then applies rate * StdpSynapseDelta to
// every synapse and clamps to [w_min, w_max]. Labels are ignored.
// Presentation order is shuffled with `rng` every epoch.
// Throws kGridMismatch.
NetworkModel StdpTrain(NetworkModel model, std::span<const Example> data,
                       const StdpConfig& cfg, Rng& rng,
                       const ForwardOptions& options = {});

}  // namespace snnlz
