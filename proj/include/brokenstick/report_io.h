#ifndef BROKENSTICK_REPORT_IO_H_
#define BROKENSTICK_REPORT_IO_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "brokenstick/analysis.h"

namespace brokenstick {

// Formats with `precision` significant digits (%g style).
std::string format_number(double value, int precision);

// A report flattened to one cell per bucket x rank x statistic. Statistics:
// Q, P, z (unconditional), Q_win, z_win, z_win_flat (conditional on win);
// rank "winner" carries Q and z for the winning horse.
struct ReportCell {
  std::string bucket;
  std::string rank;
  std::string statistic;
  std::optional<double> value;
  double se = 0.0;
  std::uint64_t count = 0;
  std::string note;

  std::tuple<std::string, std::string, std::string> key() const {
    return {bucket, rank, statistic};
  }
};

// Cells in deterministic order (bucket, then rank, then statistic). Values
// are rounded to `precision` significant digits, so the CSV and JSON forms
// carry identical numbers.
std::vector<ReportCell> flatten_report(const AnalysisReport& report,
                                       int precision = 6);

void write_report_csv(std::ostream& out, const AnalysisReport& report,
                      int precision = 6);
void write_report_json(std::ostream& out, const AnalysisReport& report,
                       int precision = 6);

// Reads either encoding back into cells (JSON when the text starts with '{').
// Throws std::runtime_error on malformed input.
std::vector<ReportCell> read_report_cells(std::istream& in);

void write_eccdf_csv(std::ostream& out, const EccdfCurve& curve,
                     int precision = 6);
void write_rejections_csv(std::ostream& out,
                          const std::vector<Rejection>& rejections);

struct CellComparison {
  ReportCell a;
  ReportCell b;
  std::optional<double> difference;  // b - a, when both are present
  // |difference| / sqrt(se_a^2 + se_b^2); empty for cells without any SE
  // (theory cells), which are compared by raw difference only.
  std::optional<double> gap_in_se;
};

// Per-report distance between an empirical cell and its theory cell, in
// units of the empirical SE, (Q - z)/se(Q) and (Q_win - z_win)/se(Q_win), and
// relative to theory, (Q - z)/z. Ranks with small SE dominate the first; the
// second compares ranks on an equal footing.
struct ModelGap {
  std::string bucket;
  std::string rank;
  std::string statistic;  // "Q" or "Q_win"
  double gap_in_se = 0.0;
  double relative_gap = 0.0;
};

struct ComparisonResult {
  std::vector<CellComparison> cells;
  std::vector<std::string> missing;  // shape mismatches, "where: key"
  double max_gap_in_se = 0.0;
  std::vector<ModelGap> model_gaps_a;
  std::vector<ModelGap> model_gaps_b;

  bool shape_matches() const { return missing.empty(); }
};

std::vector<ModelGap> model_gaps(const std::vector<ReportCell>& cells);

ComparisonResult compare_reports(const std::vector<ReportCell>& a,
                                 const std::vector<ReportCell>& b);

}  // namespace brokenstick

#endif  // BROKENSTICK_REPORT_IO_H_
