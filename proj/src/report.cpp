#include "snnlz/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "snnlz/error.hpp"
#include "snnlz/fileutil.hpp"
#include "snnlz/numfmt.hpp"

namespace snnlz {

namespace {

std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::string Fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// Columns: BP, TEMPOTRON, STDP.
const std::vector<std::string>& RuleColumns() {
  static const std::vector<std::string> cols{"BP", "TEMPOTRON", "STDP"};
  return cols;
}

const TableRow* Find(const std::vector<TableRow>& table, const std::string& kind,
                     const std::string& rule, const std::string& mode) {
  for (const auto& r : table) {
    if (r.model_kind == kind && r.rule == rule && r.search_mode == mode) return &r;
  }
  return nullptr;
}

}  // namespace

std::vector<ResultRow> ParseResultCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "result.csv is empty");
  const auto header = SplitCsv(line);
  auto column = [&header](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::kParse, "result.csv lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_kind = column("model_kind"), c_rule = column("rule"),
             c_mode = column("search_mode"), c_val = column("val_acc"),
             c_test = column("test_acc");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsv(line);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kParse, "result.csv row has " + std::to_string(f.size()) +
                                         " fields, expected " + std::to_string(header.size()));
    }
    rows.push_back({f[c_kind], f[c_rule], f[c_mode], ParseDouble(f[c_val]),
                    ParseDouble(f[c_test])});
  }
  return rows;
}

std::vector<ResultRow> CollectResults(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().filename() == "result.csv") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ResultRow> rows;
  for (const auto& f : files) {
    auto part = ParseResultCsv(ReadFile(f));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kNoResultsFound, "no result.csv below " + dir.string());
  }
  return rows;
}

std::vector<TableRow> AggregateResults(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<std::string, std::string, std::string>, TableRow> groups;
  for (const auto& r : rows) {
    auto& g = groups[{r.model_kind, r.rule, r.search_mode}];
    g.model_kind = r.model_kind;
    g.rule = r.rule;
    g.search_mode = r.search_mode;
    g.val_acc += r.val_acc;
    g.test_acc += r.test_acc;
    ++g.runs;
  }
  std::vector<TableRow> table;
  for (auto& [key, g] : groups) {
    g.val_acc /= static_cast<double>(g.runs);
    g.test_acc /= static_cast<double>(g.runs);
    table.push_back(g);
  }
  for (auto& g : table) {
    if (g.search_mode != "EXTENDED") continue;
    if (const auto* base = Find(table, g.model_kind, g.rule, "BASELINE")) {
      g.uplift_pp = g.test_acc - base->test_acc;
    }
  }
  return table;
}

std::string AccuracyTableCsv(const std::vector<TableRow>& table) {
  std::ostringstream o;
  o << "model_kind,rule,search_mode,val_acc,test_acc,uplift_pp\n";
  for (const auto& r : table) {
    o << r.model_kind << ',' << r.rule << ',' << r.search_mode << ',' << Fixed2(r.val_acc)
      << ',' << Fixed2(r.test_acc) << ',' << (r.uplift_pp ? Fixed2(*r.uplift_pp) : "")
      << '\n';
  }
  return o.str();
}

std::string AccuracyLayout(const std::vector<TableRow>& table, const std::string& kind) {
  std::ostringstream o;
  o << "parameters";
  for (const auto& rule : RuleColumns()) o << ',' << rule;
  o << '\n';
  for (const std::string mode : {"BASELINE", "EXTENDED"}) {
    o << mode;
    for (const auto& rule : RuleColumns()) {
      o << ',';
      const auto* r = Find(table, kind, rule, mode);
      if (!r) continue;
      o << Fixed2(r->test_acc) << '%';
      if (r->uplift_pp) {
        o << " (" << Fixed2(std::fabs(*r->uplift_pp)) << "% "
          << (*r->uplift_pp >= 0 ? "↑" : "↓") << ')';
      }
    }
    o << '\n';
  }
  return o.str();
}

std::string AccuracySvg(const std::vector<TableRow>& table, const std::string& kind) {
  const double width = 480, height = 300, left = 50, bottom = 250, top = 30;
  const double group_w = (width - left - 20) / 3.0, bar_w = group_w / 3.0;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<text x=\"" << left << "\" y=\"18\">" << kind << " test accuracy (%)</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << width - 10
    << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 100; tick += 25) {
    const double y = bottom - (bottom - top) * tick / 100.0;
    o << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << tick
      << "</text>\n";
  }
  const char* colors[2] = {"#9e9e9e", "#3f6fb5"};
  for (std::size_t g = 0; g < RuleColumns().size(); ++g) {
    const auto& rule = RuleColumns()[g];
    const double x0 = left + group_w * static_cast<double>(g) + bar_w / 2;
    int m = 0;
    for (const std::string mode : {"BASELINE", "EXTENDED"}) {
      if (const auto* r = Find(table, kind, rule, mode)) {
        const double h = (bottom - top) * std::clamp(r->test_acc, 0.0, 100.0) / 100.0;
        o << "<rect x=\"" << x0 + bar_w * m << "\" y=\"" << bottom - h << "\" width=\""
          << bar_w * 0.9 << "\" height=\"" << h << "\" fill=\"" << colors[m] << "\"><title>"
          << mode << ' ' << Fixed2(r->test_acc) << "</title></rect>\n";
      }
      ++m;
    }
    o << "<text x=\"" << x0 + bar_w << "\" y=\"" << bottom + 16
      << "\" text-anchor=\"middle\">" << rule << "</text>\n";
  }
  o << "<rect x=\"" << width - 120 << "\" y=\"" << top << "\" width=\"10\" height=\"10\" fill=\""
    << colors[0] << "\"/><text x=\"" << width - 105 << "\" y=\"" << top + 9
    << "\">baseline</text>\n";
  o << "<rect x=\"" << width - 120 << "\" y=\"" << top + 16
    << "\" width=\"10\" height=\"10\" fill=\"" << colors[1] << "\"/><text x=\""
    << width - 105 << "\" y=\"" << top + 25 << "\">extended</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::vector<TableRow> ReportTables(const std::filesystem::path& results_dir,
                                   const std::filesystem::path& out_csv,
                                   const std::optional<std::filesystem::path>& plot_dir) {
  const auto table = AggregateResults(CollectResults(results_dir));
  if (out_csv.has_parent_path()) std::filesystem::create_directories(out_csv.parent_path());
  WriteFileAtomic(out_csv, AccuracyTableCsv(table));
  if (plot_dir) {
    std::filesystem::create_directories(*plot_dir);
    std::vector<std::string> kinds;
    for (const auto& r : table) {
      if (std::find(kinds.begin(), kinds.end(), r.model_kind) == kinds.end()) {
        kinds.push_back(r.model_kind);
      }
    }
    for (const auto& kind : kinds) {
      WriteFileAtomic(*plot_dir / (kind + "_layout.csv"), AccuracyLayout(table, kind));
      WriteFileAtomic(*plot_dir / (kind + "_accuracy.svg"), AccuracySvg(table, kind));
    }
  }
  return table;
}

}  // namespace snnlz
