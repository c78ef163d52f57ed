#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace snnlz {

// Shared reader/writer for the bracketed-section numeric text files (model
// and classifier files).
struct Section {
  std::string name;
  std::vector<std::vector<double>> rows;
};

struct SectionedText {
  std::string header;
  std::vector<Section> sections;

  // Throws kParse when the section is absent.
  const Section& Get(std::string_view name) const;
};

SectionedText ParseSectioned(const std::string& text);

void AppendRow(std::string& out, std::span<const double> values);
void AppendSection(std::string& out, std::string_view name,
                   const std::vector<std::vector<double>>& rows);

// Extracts "key=value" from a space-separated header. Throws kParse.
std::string_view HeaderField(std::string_view header, std::string_view key);

}  // namespace snnlz
