#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "snnlz/core.hpp"

namespace snnlz {

// A source binary sequence (e.g. 1024 bits at dt = 1 ms) and its class.
struct Example {
  Bits sequence;
  int label = 0;
};

struct Dataset {
  std::vector<Example> train;
  std::vector<Example> val;
  std::vector<Example> test;
  double dt_ms = 1.0;
};

// An example already demultiplexed onto a layer of width n.
struct PreparedExample {
  std::vector<SpikeTrain> inputs;
  int label = 0;
};

// Demultiplexes every example for a network of width n whose grid must be
// `grid`. Throws kEmptyDataset on empty input, kGridMismatch when the
// demuxed length differs from grid.n_bins.
std::vector<PreparedExample> PrepareExamples(std::span<const Example> examples,
                                             std::size_t n, const TimeGrid& grid);

// Number of classes (max label + 1). Throws kEmptyDataset, kMissingClass
// for negative labels.
int ClassCount(std::span<const Example> examples);

// Output neuron j belongs to class group floor(j * classes / n).
inline int OutputGroup(std::size_t j, std::size_t n, int classes) {
  return static_cast<int>(j * static_cast<std::size_t>(classes) / n);
}

}  // namespace snnlz
