#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace snnlz {

struct LzComponent {
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const LzComponent&, const LzComponent&) = default;
};

struct LzcResult {
  std::size_t component_count = 0;  // C
  double normalized = 0.0;          // (C / n) * log2(n); 0 when n == 1
  int alpha = 2;
  std::size_t n = 0;
  std::vector<LzComponent> components;  // empty unless requested
};

// Lempel-Ziv (1976) exhaustive-history parse of a binary sequence. Each
// component is the longest extension of the current position that can be
// copied from a start position strictly earlier than the component start
// (overlap allowed), plus one innovative symbol; a reproducible tail at the
// end of the sequence counts as one component.
//
// Runs in O(n) using a suffix automaton of the whole sequence: a phrase
// x[i, i+l) is reproducible iff its first occurrence ends before i + l - 1.
// Throws kEmptySequence.
LzcResult Lz76Parse(std::span<const std::uint8_t> sequence,
                    bool keep_components = true);

// (C / n) * log2(n). Throws kEmptySequence or kSequenceTooShort (n < 2).
double LzcNormalized(std::span<const std::uint8_t> sequence);

// Normalized LZ76 complexity read as an entropy-rate estimate in
// bits/symbol. Converges to the source entropy rate for stationary ergodic
// binary sources, from above and slowly (bias of order 1 / log n).
inline double EntropyRateEstimate(std::span<const std::uint8_t> sequence) {
  return LzcNormalized(sequence);
}

}  // namespace snnlz
