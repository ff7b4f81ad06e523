#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coin/multi_split.hpp"

namespace coin {

// Parsed summary-statistic input: one row per hypothesis.  Rows whose s2
// came in as zero are clamped (see sanitize_zero_s2) and listed in
// zero_s2_rows so pipelines can exclude them from prior fitting.
struct SummaryTable {
  std::vector<std::string> ids;
  std::vector<SummaryStat> stats;
  int nu = 1;
  std::vector<std::size_t> zero_s2_rows;
};

// CSV with header "id,x,s2".  Lines starting with '#' are comments; a
// "# nu=<int>" comment sets the degrees of freedom.  nu_override (the
// command-line flag) wins over the file; one of the two must be present.
SummaryTable read_summary_table(std::istream& in, std::optional<int> nu_override = {});
SummaryTable read_summary_table(const std::filesystem::path& path,
                                std::optional<int> nu_override = {});

// CSV of raw per-sample values: first column is the feature id, the rest
// numeric sample columns (same count on every row).  n1 splits the columns
// into the two groups.
RawMatrix read_raw_matrix(std::istream& in, std::size_t n1);
RawMatrix read_raw_matrix(const std::filesystem::path& path, std::size_t n1);

struct ReportHypothesis {
  std::string id;
  double x = 0.0;
  double s2 = 0.0;
  std::optional<double> score;    // conformity score u
  std::optional<double> e_value;  // fold e-value (fs runs)
  bool rejected = false;

  bool operator==(const ReportHypothesis&) const = default;
};

// Machine-readable run record, written as JSON lines: first a "run" line
// with the scalars, then one "hypothesis" line per row.  Reports round-trip
// exactly through write_report / read_report.
struct RunReport {
  std::string method;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  int nu = 0;
  std::size_t m = 0;
  std::optional<double> tau;
  std::optional<double> u;             // shared uniform (randomized fs runs)
  std::optional<std::size_t> k_hat;    // e-BH cut index (fs runs)
  std::size_t zero_s2 = 0;             // clamped input rows
  std::vector<std::string> rejected_ids;
  std::vector<ReportHypothesis> hypotheses;
  std::vector<std::pair<std::string, std::string>> config;  // sorted key -> value
  std::optional<double> timing_ms;     // not written by the CLI (kept deterministic)

  bool operator==(const RunReport&) const = default;
};

void write_report(std::ostream& out, const RunReport& report);
void write_report(const std::filesystem::path& path, const RunReport& report);
RunReport read_report(std::istream& in);
RunReport read_report(const std::filesystem::path& path);

}  // namespace coin
