#include "snnlz/encoding.hpp"

#include <cmath>
#include <string>

#include "snnlz/error.hpp"

namespace snnlz {

void PoissonSpec::Validate() const {
  if (!(rate_hz >= 0.0) || !std::isfinite(rate_hz)) {
    throw Error(ErrorCode::kInvalidConfig, "Poisson rate must be finite and >= 0");
  }
  grid.Validate();
}

double PoissonSpec::BinProbability() const {
  return -std::expm1(-rate_hz * grid.dt_ms * 1e-3);
}

SpikeTrain GeneratePoisson(const PoissonSpec& spec, Rng& rng) {
  spec.Validate();
  const double p = spec.BinProbability();
  Bits bits(spec.grid.n_bins, 0);
  for (auto& b : bits) b = rng.Bernoulli(p) ? 1 : 0;
  return SpikeTrain(spec.grid, std::move(bits));
}

std::vector<SpikeTrain> DemuxInput(std::span<const std::uint8_t> sequence,
                                   std::size_t n, double dt_ms) {
  if (n == 0 || sequence.empty() || sequence.size() % n != 0) {
    throw Error(ErrorCode::kWidthDoesNotDivideSequence,
                "width " + std::to_string(n) + " does not divide length " +
                    std::to_string(sequence.size()));
  }
  const TimeGrid grid{dt_ms, sequence.size() / n};
  std::vector<Bits> lanes(n, Bits(grid.n_bins, 0));
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    lanes[t % n][t / n] = sequence[t];
  }
  std::vector<SpikeTrain> trains;
  trains.reserve(n);
  for (auto& lane : lanes) trains.emplace_back(grid, std::move(lane));
  return trains;
}

}  // namespace snnlz
