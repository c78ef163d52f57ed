#include "snnlz/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snnlz/error.hpp"

namespace snnlz {

void TimeGrid::Validate() const {
  if (!(dt_ms > 0.0) || !std::isfinite(dt_ms)) {
    throw Error(ErrorCode::kInvalidConfig,
                "dt_ms must be positive and finite, got " + std::to_string(dt_ms));
  }
  if (n_bins < 1) throw Error(ErrorCode::kInvalidConfig, "n_bins must be >= 1");
}

SpikeTrain::SpikeTrain(TimeGrid grid, Bits bits)
    : grid_(grid), bits_(std::move(bits)) {
  grid_.Validate();
  if (bits_.size() != grid_.n_bins) {
    throw Error(ErrorCode::kDimensionMismatch,
                "spike train has " + std::to_string(bits_.size()) +
                    " bits, grid has " + std::to_string(grid_.n_bins) + " bins");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](auto b) { return b > 1; })) {
    throw Error(ErrorCode::kParse, "spike train values must be 0 or 1");
  }
}

SpikeTrain SpikeTrain::Silent(TimeGrid grid) {
  return SpikeTrain(grid, Bits(grid.n_bins, 0));
}

std::size_t SpikeCount(std::span<const std::uint8_t> bits) {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

std::vector<std::size_t> SpikeBins(const SpikeTrain& train) {
  std::vector<std::size_t> bins;
  for (std::size_t k = 0; k < train.size(); ++k) {
    if (train[k]) bins.push_back(k);
  }
  return bins;
}

std::vector<double> InterSpikeIntervals(const SpikeTrain& train) {
  const auto bins = SpikeBins(train);
  if (bins.size() < 2) {
    throw Error(ErrorCode::kFewerThanTwoSpikes,
                "train has " + std::to_string(bins.size()) + " spike(s)");
  }
  std::vector<double> isi;
  isi.reserve(bins.size() - 1);
  for (std::size_t k = 1; k < bins.size(); ++k) {
    // Integer difference first keeps the interval exact for integral dt.
    isi.push_back(train.grid().dt_ms * static_cast<double>(bins[k] - bins[k - 1]));
  }
  return isi;
}

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SeedSpec::Key() const {
  return Mix64(master_seed ^ Mix64(stream_id + Rng::kGolden));
}

std::uint64_t Rng::Below(std::uint64_t bound) {
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return x % bound;
}

}  // namespace snnlz
