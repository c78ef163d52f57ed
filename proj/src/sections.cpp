#include "snnlz/sections.hpp"

#include "snnlz/error.hpp"
#include "snnlz/numfmt.hpp"

namespace snnlz {

const Section& SectionedText::Get(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kParse, "missing section [" + std::string(name) + "]");
}

SectionedText ParseSectioned(const std::string& text) {
  SectionedText out;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    if (first) {
      out.header = std::string(line);
      first = false;
      continue;
    }
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::kParse, "malformed section line");
      out.sections.push_back({std::string(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    if (out.sections.empty()) {
      throw Error(ErrorCode::kParse, "values before the first section");
    }
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto sp = line.find(' ', start);
      if (sp == std::string_view::npos) sp = line.size();
      row.push_back(ParseDouble(line.substr(start, sp - start)));
      start = sp + 1;
    }
    out.sections.back().rows.push_back(std::move(row));
  }
  if (first) throw Error(ErrorCode::kParse, "empty file");
  return out;
}

void AppendRow(std::string& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += FormatDouble(values[i]);
  }
  out.push_back('\n');
}

void AppendSection(std::string& out, std::string_view name,
                   const std::vector<std::vector<double>>& rows) {
  out += "[";
  out += name;
  out += "]\n";
  for (const auto& row : rows) AppendRow(out, row);
}

std::string_view HeaderField(std::string_view header, std::string_view key) {
  std::size_t start = 0;
  while (start < header.size()) {
    auto sp = header.find(' ', start);
    if (sp == std::string_view::npos) sp = header.size();
    const auto token = header.substr(start, sp - start);
    if (token.size() > key.size() && token.substr(0, key.size()) == key &&
        token[key.size()] == '=') {
      return token.substr(key.size() + 1);
    }
    start = sp + 1;
  }
  throw Error(ErrorCode::kParse, "header lacks field '" + std::string(key) + "'");
}

}  // namespace snnlz
