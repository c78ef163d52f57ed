#include "snnlz/lzc.hpp"

#include <array>
#include <cmath>

#include "snnlz/error.hpp"

namespace snnlz {
namespace {

// Suffix automaton over {0, 1}. first_end is the end index of the first
// occurrence of the strings in a state.
class BinarySuffixAutomaton {
 public:
  explicit BinarySuffixAutomaton(std::span<const std::uint8_t> s) {
    states_.reserve(2 * s.size() + 1);
    states_.push_back({});
    for (std::size_t i = 0; i < s.size(); ++i) Extend(s[i] & 1, i);
  }

  static constexpr int kNone = -1;

  struct State {
    std::size_t len = 0;
    int link = kNone;
    std::array<int, 2> next{kNone, kNone};
    std::size_t first_end = 0;
  };

  const State& at(int idx) const { return states_[static_cast<std::size_t>(idx)]; }

 private:
  void Extend(int c, std::size_t pos) {
    const int cur = static_cast<int>(states_.size());
    states_.push_back({states_[last_].len + 1, kNone, {kNone, kNone}, pos});
    int p = last_;
    while (p != kNone && states_[p].next[c] == kNone) {
      states_[p].next[c] = cur;
      p = states_[p].link;
    }
    if (p == kNone) {
      states_[cur].link = 0;
    } else {
      const int q = states_[p].next[c];
      if (states_[p].len + 1 == states_[q].len) {
        states_[cur].link = q;
      } else {
        const int clone = static_cast<int>(states_.size());
        State copy = states_[q];
        copy.len = states_[p].len + 1;
        states_.push_back(copy);
        while (p != kNone && states_[p].next[c] == q) {
          states_[p].next[c] = clone;
          p = states_[p].link;
        }
        states_[q].link = clone;
        states_[cur].link = clone;
      }
    }
    last_ = cur;
  }

  std::vector<State> states_;
  int last_ = 0;
};

}  // namespace

LzcResult Lz76Parse(std::span<const std::uint8_t> sequence, bool keep_components) {
  const std::size_t n = sequence.size();
  if (n == 0) throw Error(ErrorCode::kEmptySequence, "LZ76 parse of empty sequence");

  const BinarySuffixAutomaton sam(sequence);
  LzcResult result;
  result.n = n;

  std::size_t i = 0;
  while (i < n) {
    int state = 0;
    std::size_t len = 0;
    // Extend while x[i, i+len+1) has an occurrence starting before i.
    while (i + len < n) {
      const int next = sam.at(state).next[sequence[i + len] & 1];
      if (sam.at(next).first_end - len >= i) break;
      state = next;
      ++len;
    }
    const std::size_t comp_len = (i + len == n) ? len : len + 1;
    if (keep_components) result.components.push_back({i, comp_len});
    ++result.component_count;
    i += comp_len;
  }

  result.normalized = static_cast<double>(result.component_count) /
                      static_cast<double>(n) * std::log2(static_cast<double>(n));
  return result;
}

double LzcNormalized(std::span<const std::uint8_t> sequence) {
  if (sequence.empty()) {
    throw Error(ErrorCode::kEmptySequence, "normalized LZC of empty sequence");
  }
  if (sequence.size() < 2) {
    throw Error(ErrorCode::kSequenceTooShort, "normalized LZC needs n >= 2");
  }
  return Lz76Parse(sequence, false).normalized;
}

}  // namespace snnlz
