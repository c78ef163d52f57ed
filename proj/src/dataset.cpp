#include "snnlz/dataset.hpp"

#include <algorithm>
#include <string>

#include "snnlz/encoding.hpp"
#include "snnlz/error.hpp"

namespace snnlz {

std::vector<PreparedExample> PrepareExamples(std::span<const Example> examples,
                                             std::size_t n, const TimeGrid& grid) {
  if (examples.empty()) throw Error(ErrorCode::kEmptyDataset, "no examples");
  std::vector<PreparedExample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    auto inputs = DemuxInput(ex.sequence, n, grid.dt_ms);
    if (!(inputs.front().grid() == grid)) {
      throw Error(ErrorCode::kGridMismatch,
                  "sequence of length " + std::to_string(ex.sequence.size()) +
                      " does not fill a grid of " + std::to_string(grid.n_bins) +
                      " bins at width " + std::to_string(n));
    }
    out.push_back({std::move(inputs), ex.label});
  }
  return out;
}

int ClassCount(std::span<const Example> examples) {
  if (examples.empty()) throw Error(ErrorCode::kEmptyDataset, "no examples");
  int max_label = 0;
  for (const auto& ex : examples) {
    if (ex.label < 0) throw Error(ErrorCode::kMissingClass, "negative class label");
    max_label = std::max(max_label, ex.label);
  }
  return max_label + 1;
}

}  // namespace snnlz
