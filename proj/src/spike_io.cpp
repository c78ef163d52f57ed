#include "snnlz/spike_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "snnlz/error.hpp"
#include "snnlz/fileutil.hpp"
#include "snnlz/numfmt.hpp"

namespace snnlz {
namespace {

constexpr std::string_view kMagic = "SPIKETRAIN v1 ";

std::string_view ExpectField(std::string_view token, std::string_view name) {
  if (token.substr(0, name.size()) != name || token.size() <= name.size() ||
      token[name.size()] != '=') {
    throw Error(ErrorCode::kParse, "expected field '" + std::string(name) + "'");
  }
  return token.substr(name.size() + 1);
}

}  // namespace

void WriteSpikeTrains(std::ostream& out, const SpikeTrainFile& file) {
  out << kMagic << "dt_ms=" << FormatDouble(file.grid.dt_ms)
      << " n_bins=" << file.grid.n_bins << '\n';
  std::string line;
  for (const auto& rec : file.records) {
    if (!(rec.train.grid() == file.grid)) {
      throw Error(ErrorCode::kGridMismatch, "record grid differs from file grid");
    }
    line.clear();
    for (auto b : rec.train.bits()) line.push_back(b ? '1' : '0');
    if (rec.label) line += "\t" + std::to_string(*rec.label);
    line.push_back('\n');
    out << line;
  }
}

SpikeTrainFile ReadSpikeTrains(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.substr(0, kMagic.size()) != kMagic) {
    throw Error(ErrorCode::kParse, "missing 'SPIKETRAIN v1' header");
  }
  std::string_view rest(line);
  rest.remove_prefix(kMagic.size());
  const auto space = rest.find(' ');
  if (space == std::string_view::npos) {
    throw Error(ErrorCode::kParse, "malformed spike-train header");
  }
  SpikeTrainFile file;
  file.grid.dt_ms = ParseDouble(ExpectField(rest.substr(0, space), "dt_ms"));
  file.grid.n_bins = ParseUint(ExpectField(rest.substr(space + 1), "n_bins"));
  try {
    file.grid.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    std::optional<int> label;
    const auto tab = view.find('\t');
    if (tab != std::string_view::npos) {
      label = static_cast<int>(ParseInt(view.substr(tab + 1)));
      view = view.substr(0, tab);
    }
    if (view.size() != file.grid.n_bins) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                         ": expected " +
                                         std::to_string(file.grid.n_bins) + " bits");
    }
    Bits bits(view.size());
    for (std::size_t k = 0; k < view.size(); ++k) {
      if (view[k] != '0' && view[k] != '1') {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) + ": invalid character");
      }
      bits[k] = static_cast<std::uint8_t>(view[k] - '0');
    }
    file.records.push_back({SpikeTrain(file.grid, std::move(bits)), label});
  }
  return file;
}

std::string SerializeSpikeTrains(const SpikeTrainFile& file) {
  std::ostringstream out;
  WriteSpikeTrains(out, file);
  return out.str();
}

SpikeTrainFile ParseSpikeTrains(const std::string& text) {
  std::istringstream in(text);
  return ReadSpikeTrains(in);
}

void SaveSpikeTrains(const std::filesystem::path& path, const SpikeTrainFile& file) {
  WriteFileAtomic(path, SerializeSpikeTrains(file));
}

SpikeTrainFile LoadSpikeTrains(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadSpikeTrains(in);
}

}  // namespace snnlz
