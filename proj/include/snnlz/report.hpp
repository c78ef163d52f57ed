#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace snnlz {

// One row of a result.csv.
struct ResultRow {
  std::string model_kind;
  std::string rule;
  std::string search_mode;
  double val_acc = 0.0;   // percent
  double test_acc = 0.0;  // percent
};

std::vector<ResultRow> ParseResultCsv(const std::string& text);

// Every result.csv below `dir`, in lexicographic path order. Throws
// kNoResultsFound when there is none.
std::vector<ResultRow> CollectResults(const std::filesystem::path& dir);

struct TableRow {
  std::string model_kind;
  std::string rule;
  std::string search_mode;
  double val_acc = 0.0;
  double test_acc = 0.0;
  std::size_t runs = 0;
  // EXTENDED rows only: mean extended minus mean baseline test accuracy, in
  // percentage points, when a matching BASELINE group exists.
  std::optional<double> uplift_pp;
};

// Means per (model_kind, rule, search_mode), sorted by kind, rule, mode.
std::vector<TableRow> AggregateResults(const std::vector<ResultRow>& rows);

// Header model_kind,rule,search_mode,val_acc,test_acc,uplift_pp; values with
// two decimals, uplift empty where undefined.
std::string AccuracyTableCsv(const std::vector<TableRow>& table);

// Per model kind: parameter-set rows by rule columns (BP, TEMPOTRON, STDP),
// extended cells annotated like "96.50% (11.00% ↑)".
std::string AccuracyLayout(const std::vector<TableRow>& table, const std::string& model_kind);

// Grouped bar chart of test accuracy per rule for one model kind.
std::string AccuracySvg(const std::vector<TableRow>& table, const std::string& model_kind);

// Writes `out_csv` and, when plot_dir is set, <kind>_layout.csv and
// <kind>_accuracy.svg for every model kind present.
std::vector<TableRow> ReportTables(const std::filesystem::path& results_dir,
                                   const std::filesystem::path& out_csv,
                                   const std::optional<std::filesystem::path>& plot_dir);

}  // namespace snnlz
