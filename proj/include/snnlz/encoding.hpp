#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "snnlz/core.hpp"

namespace snnlz {

struct PoissonSpec {
  double rate_hz = 0.0;  // mean rate, spikes per second
  TimeGrid grid;

  void Validate() const;
  // Per-bin spike probability 1 - exp(-rate * dt), dt in seconds.
  double BinProbability() const;
};

// Homogeneous Poisson process discretized to the grid: each bin spikes
// independently with PoissonSpec::BinProbability(), at most once.
SpikeTrain GeneratePoisson(const PoissonSpec& spec, Rng& rng);

// Round-robin demultiplex of a binary sequence onto n input neurons: source
// bit t goes to neuron (t mod n) at bin floor(t / n). Each output train has
// sequence.size() / n bins on a grid with the given dt.
// Throws kWidthDoesNotDivideSequence unless n >= 1 and n divides the length.
std::vector<SpikeTrain> DemuxInput(std::span<const std::uint8_t> sequence,
                                   std::size_t n, double dt_ms = 1.0);

}  // namespace snnlz
