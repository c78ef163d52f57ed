#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace snnlz {

using Bits = std::vector<std::uint8_t>;

// Uniform time discretization. Bin k covers [k*dt_ms, (k+1)*dt_ms).
struct TimeGrid {
  double dt_ms = 1.0;
  std::size_t n_bins = 1;

  // Throws kInvalidConfig unless dt_ms > 0 (finite) and n_bins >= 1.
  void Validate() const;
  double duration_ms() const { return dt_ms * static_cast<double>(n_bins); }
  // Bin-start time of bin k.
  double TimeOf(std::size_t bin) const { return dt_ms * static_cast<double>(bin); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

// Binary spike train on a fixed grid. Immutable after construction.
class SpikeTrain {
 public:
  SpikeTrain() = default;
  // Throws kDimensionMismatch if bits.size() != grid.n_bins, kParse if any
  // element is not 0/1.
  SpikeTrain(TimeGrid grid, Bits bits);

  static SpikeTrain Silent(TimeGrid grid);

  const TimeGrid& grid() const { return grid_; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  Bits ToBits() const { return bits_; }
  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t bin) const { return bits_[bin] != 0; }

  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;

 private:
  TimeGrid grid_;
  Bits bits_;
};

std::size_t SpikeCount(std::span<const std::uint8_t> bits);
inline std::size_t SpikeCount(const SpikeTrain& train) {
  return SpikeCount(train.bits());
}

// Bin indices where the train has a spike, ascending.
std::vector<std::size_t> SpikeBins(const SpikeTrain& train);

// Successive spike-time differences in ms. Throws kFewerThanTwoSpikes.
std::vector<double> InterSpikeIntervals(const SpikeTrain& train);

// ---------------------------------------------------------------------------
// Deterministic randomness.
//
// Every random stream in the project is a SplitMix64 sequence whose starting
// state is a pure function of (master_seed, stream_id):
//
//   mix(z)   = z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
//              z ^= z >> 27; z *= 0x94d049bb133111eb; z ^= z >> 31
//   key      = mix(master_seed ^ mix(stream_id + 0x9e3779b97f4a7c15))
//   draw_k   = mix(key + (k + 1) * 0x9e3779b97f4a7c15),  k = 0, 1, ...
//
// Draw k depends only on (key, k), so streams can be split without any
// ordering dependence between owners. Child seeds are formed as
// SeedSpec{key, child_id}.
// ---------------------------------------------------------------------------

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  std::uint64_t Key() const;
  SeedSpec Child(std::uint64_t child_id) const { return {Key(), child_id}; }

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

std::uint64_t Mix64(std::uint64_t z);

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const SeedSpec& seed) : state_(seed.Key()) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += kGolden;
    return Mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Unbiased integer in [0, bound). bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

 private:
  std::uint64_t state_;
};

inline Rng DeriveRng(const SeedSpec& seed) { return Rng(seed); }

// Fisher-Yates with Rng::Below, so the permutation is identical on every
// standard library.
template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.Below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace snnlz
