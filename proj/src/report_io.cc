#include "brokenstick/report_io.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace brokenstick {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader =
    "bucket,rank,statistic,value,se,count,status,note";
constexpr const char* kJsonFormat = "brokenstick-report/1";

double rounded(double value, int precision) {
  return std::stod(format_number(value, precision));
}

std::string csv_safe(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

void push_cell(std::vector<ReportCell>& out, const BucketReport& bucket,
               const std::string& rank, const std::string& statistic,
               const Cell& cell, int precision) {
  ReportCell c;
  c.bucket = bucket.bucket.name;
  c.rank = rank;
  c.statistic = statistic;
  if (cell.value) c.value = rounded(*cell.value, precision);
  c.se = rounded(cell.se, precision);
  c.count = cell.count;
  c.note = cell.note;
  out.push_back(std::move(c));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<ReportCell> cells_from_json(const json& doc) {
  if (!doc.is_object() || doc.value("format", "") != kJsonFormat) {
    throw std::runtime_error("not a brokenstick report (format tag missing)");
  }
  std::vector<ReportCell> cells;
  for (const auto& bucket : doc.at("buckets")) {
    for (const auto& c : bucket.at("cells")) {
      ReportCell cell;
      cell.bucket = bucket.at("name").get<std::string>();
      cell.rank = c.at("rank").get<std::string>();
      cell.statistic = c.at("statistic").get<std::string>();
      if (!c.at("value").is_null()) cell.value = c.at("value").get<double>();
      cell.se = c.at("se").get<double>();
      cell.count = c.at("count").get<std::uint64_t>();
      cell.note = c.value("note", "");
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<ReportCell> cells_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty report file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw std::runtime_error("report CSV header must be '" +
                             std::string(kCsvHeader) + "'");
  }
  std::vector<ReportCell> cells;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) {
      throw std::runtime_error("report line " + std::to_string(line_number) +
                               ": expected 8 fields");
    }
    try {
      ReportCell cell{f[0], f[1], f[2], std::nullopt, std::stod(f[4]),
                      std::stoull(f[5]), f[7]};
      if (f[6] == "ok") {
        cell.value = std::stod(f[3]);
      } else if (f[6] != "absent") {
        throw std::invalid_argument("bad status");
      }
      cells.push_back(std::move(cell));
    } catch (const std::logic_error&) {
      throw std::runtime_error("report line " + std::to_string(line_number) +
                               ": malformed value");
    }
  }
  return cells;
}

}  // namespace

std::string format_number(double value, int precision) {
  std::ostringstream out;
  out.precision(precision);
  out << value;
  return out.str();
}

std::vector<ReportCell> flatten_report(const AnalysisReport& report,
                                       int precision) {
  std::vector<ReportCell> cells;
  for (const auto& bucket : report.buckets) {
    for (std::size_t i = 0; i < bucket.table.size(); ++i) {
      const auto& row = bucket.table[i];
      const auto& cond = bucket.conditional[i];
      const std::string rank = row.rank.label();
      push_cell(cells, bucket, rank, "Q", row.implied, precision);
      push_cell(cells, bucket, rank, "P", row.win_rate, precision);
      push_cell(cells, bucket, rank, "z", row.theory, precision);
      push_cell(cells, bucket, rank, "Q_win", cond.implied_given_win, precision);
      push_cell(cells, bucket, rank, "z_win", cond.theory, precision);
      push_cell(cells, bucket, rank, "z_win_flat", cond.theory_flat, precision);
    }
    push_cell(cells, bucket, "winner", "Q", bucket.winner.implied, precision);
    push_cell(cells, bucket, "winner", "z", bucket.winner.theory, precision);
  }
  return cells;
}

void write_report_csv(std::ostream& out, const AnalysisReport& report,
                      int precision) {
  out << kCsvHeader << '\n';
  for (const auto& c : flatten_report(report, precision)) {
    out << c.bucket << ',' << c.rank << ',' << c.statistic << ','
        << (c.value ? format_number(*c.value, precision) : "") << ','
        << format_number(c.se, precision) << ',' << c.count << ','
        << (c.value ? "ok" : "absent") << ',' << csv_safe(c.note) << '\n';
  }
}

void write_report_json(std::ostream& out, const AnalysisReport& report,
                       int precision) {
  const auto cells = flatten_report(report, precision);
  json doc;
  doc["format"] = kJsonFormat;
  doc["accepted_races"] = report.accepted_races;
  doc["rejected_races"] = report.rejected_races;
  doc["dropped_below_min_field_size"] = report.dropped_below_min;
  doc["tied_pairs"] = report.tied_pairs;
  doc["renormalized"] = report.renormalized;
  doc["buckets"] = json::array();
  for (const auto& bucket : report.buckets) {
    json b;
    b["name"] = bucket.bucket.name;
    b["min_field_size"] = bucket.bucket.lo;
    b["max_field_size"] =
        bucket.bucket.hi ? json(*bucket.bucket.hi) : json(nullptr);
    b["races"] = bucket.races;
    json hist = json::object();
    for (const auto& [n, count] : bucket.histogram.counts()) {
      hist[std::to_string(n)] = count;
    }
    b["field_size_histogram"] = hist;
    b["diagnostics"] = bucket.diagnostics;
    b["cells"] = json::array();
    for (const auto& c : cells) {
      if (c.bucket != bucket.bucket.name) continue;
      json cell;
      cell["rank"] = c.rank;
      cell["statistic"] = c.statistic;
      cell["value"] = c.value ? json(*c.value) : json(nullptr);
      cell["se"] = c.se;
      cell["count"] = c.count;
      if (!c.note.empty()) cell["note"] = c.note;
      b["cells"].push_back(std::move(cell));
    }
    doc["buckets"].push_back(std::move(b));
  }
  out << doc.dump(2) << '\n';
}

std::vector<ReportCell> read_report_cells(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return cells_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw std::runtime_error(std::string("malformed report JSON: ") +
                               e.what());
    }
  }
  std::istringstream csv(text);
  return cells_from_csv(csv);
}

void write_eccdf_csv(std::ostream& out, const EccdfCurve& curve,
                     int precision) {
  out << "x,survival\n";
  for (const auto& [x, s] : curve.points) {
    out << format_number(x, precision) << ',' << format_number(s, precision)
        << '\n';
  }
}

void write_rejections_csv(std::ostream& out,
                          const std::vector<Rejection>& rejections) {
  out << "race_id,line,reason\n";
  for (const auto& r : rejections) {
    out << r.race_id << ',' << (r.line ? std::to_string(*r.line) : "") << ','
        << csv_safe(r.reason) << '\n';
  }
}

std::vector<ModelGap> model_gaps(const std::vector<ReportCell>& cells) {
  std::map<std::tuple<std::string, std::string, std::string>, const ReportCell*>
      index;
  for (const auto& c : cells) index[c.key()] = &c;
  std::vector<ModelGap> gaps;
  const std::pair<const char*, const char*> pairs[] = {{"Q", "z"},
                                                       {"Q_win", "z_win"}};
  for (const auto& c : cells) {
    for (const auto& [empirical, theory] : pairs) {
      if (c.statistic != empirical || !c.value || c.se <= 0.0) continue;
      const auto it = index.find({c.bucket, c.rank, theory});
      if (it == index.end() || !it->second->value) continue;
      const double theory_value = *it->second->value;
      const double diff = *c.value - theory_value;
      gaps.push_back({c.bucket, c.rank, c.statistic, diff / c.se,
                      theory_value > 0.0 ? diff / theory_value : 0.0});
    }
  }
  return gaps;
}

ComparisonResult compare_reports(const std::vector<ReportCell>& a,
                                 const std::vector<ReportCell>& b) {
  ComparisonResult result;
  std::map<std::tuple<std::string, std::string, std::string>, const ReportCell*>
      b_index;
  for (const auto& c : b) b_index[c.key()] = &c;

  std::set<std::tuple<std::string, std::string, std::string>> seen;
  auto describe = [](const ReportCell& c) {
    return c.bucket + "/" + c.rank + "/" + c.statistic;
  };
  for (const auto& ca : a) {
    seen.insert(ca.key());
    const auto it = b_index.find(ca.key());
    if (it == b_index.end()) {
      result.missing.push_back("missing in second report: " + describe(ca));
      continue;
    }
    const ReportCell& cb = *it->second;
    CellComparison cmp{ca, cb, std::nullopt, std::nullopt};
    if (ca.value && cb.value) {
      cmp.difference = *cb.value - *ca.value;
      const double se = std::hypot(ca.se, cb.se);
      if (se > 0.0) {
        cmp.gap_in_se = std::abs(*cmp.difference) / se;
        result.max_gap_in_se = std::max(result.max_gap_in_se, *cmp.gap_in_se);
      }
    }
    result.cells.push_back(std::move(cmp));
  }
  for (const auto& cb : b) {
    if (!seen.contains(cb.key())) {
      result.missing.push_back("missing in first report: " + describe(cb));
    }
  }
  result.model_gaps_a = model_gaps(a);
  result.model_gaps_b = model_gaps(b);
  return result;
}

}  // namespace brokenstick
