#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "snnlz/core.hpp"

namespace snnlz {

// One record of a spike-train file: a train plus an optional class label.
struct LabeledTrain {
  SpikeTrain train;
  std::optional<int> label;

  friend bool operator==(const LabeledTrain&, const LabeledTrain&) = default;
};

// Spike-train file, ASCII with LF line endings:
//
//   SPIKETRAIN v1 dt_ms=<float> n_bins=<int>
//   0100...1[\t<label>]
//
// Every train in a file shares the header grid.
struct SpikeTrainFile {
  TimeGrid grid;
  std::vector<LabeledTrain> records;
};

void WriteSpikeTrains(std::ostream& out, const SpikeTrainFile& file);
SpikeTrainFile ReadSpikeTrains(std::istream& in);

std::string SerializeSpikeTrains(const SpikeTrainFile& file);
SpikeTrainFile ParseSpikeTrains(const std::string& text);

void SaveSpikeTrains(const std::filesystem::path& path, const SpikeTrainFile& file);
SpikeTrainFile LoadSpikeTrains(const std::filesystem::path& path);

}  // namespace snnlz
