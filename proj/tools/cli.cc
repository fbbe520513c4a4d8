#include "cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "brokenstick/analysis.h"
#include "brokenstick/montecarlo.h"
#include "brokenstick/orderstats.h"
#include "brokenstick/race_data.h"
#include "brokenstick/report_io.h"
#include "brokenstick/synthetic.h"
#include "json.hpp"

namespace brokenstick::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Raised for problems detected after CLI11 parsing; maps to kUsageError.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kDefaultCcdfGridPoints = 20;

std::vector<RankSelector> parse_ranks(const std::vector<std::string>& specs,
                                      std::optional<int> n) {
  std::vector<RankSelector> ranks;
  for (const auto& spec : specs) {
    if (spec == "longshot") {
      ranks.push_back(RankSelector::longshot());
    } else if (spec == "all") {
      if (!n) {
        for (auto r : reported_ranks()) ranks.push_back(r);
      } else {
        for (int k = 1; k <= *n; ++k) ranks.push_back(RankSelector::fixed(k));
      }
    } else {
      int k = 0;
      try {
        std::size_t used = 0;
        k = std::stoi(spec, &used);
        if (used != spec.size()) throw std::invalid_argument(spec);
      } catch (const std::logic_error&) {
        throw UsageError("--k expects an integer, 'longshot' or 'all', got '" +
                         spec + "'");
      }
      if (k < 1 || (n && k > *n)) {
        throw UsageError("rank " + spec + " out of range" +
                         (n ? " for n=" + std::to_string(*n) : ""));
      }
      ranks.push_back(RankSelector::fixed(k));
    }
  }
  return ranks;
}

// Interior grid i / ((points + 1) k), i = 1..points, across the support of z_(k).
std::vector<double> default_grid(int k, int points) {
  std::vector<double> xs;
  for (int i = 1; i <= points; ++i) {
    xs.push_back(static_cast<double>(i) / ((points + 1.0) * k));
  }
  return xs;
}

FieldSizeHistogram read_histogram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open histogram file " + path);
  std::string line;
  std::size_t line_number = 0;
  FieldSizeHistogram hist;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_number == 1 && line == "n,count") continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument(line);
      const int n = std::stoi(line.substr(0, comma));
      const long long count = std::stoll(line.substr(comma + 1));
      if (count < 0) throw std::invalid_argument(line);
      hist.add(n, static_cast<std::uint64_t>(count));
    } catch (const std::logic_error&) {
      throw UsageError(path + ":" + std::to_string(line_number) +
                       ": expected 'n,count'");
    }
  }
  if (hist.empty()) throw UsageError("histogram file " + path + " is empty");
  return hist;
}

std::string histogram_summary(const FieldSizeHistogram& hist) {
  std::string s;
  for (const auto& [n, count] : hist.counts()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(n) + ":" + std::to_string(count);
  }
  return s;
}

// Output sink: stdout unless --output names a file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

// One row of theory/simulate output.
struct ResultRow {
  std::string source;  // field size or "mixture"
  std::string rank;
  std::string statistic;
  std::optional<double> x;
  double value = 0.0;
  std::optional<Estimate> estimate;
};

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows,
                const std::string& format, int precision, bool simulated) {
  auto num = [&](double v) { return format_number(v, precision); };
  if (format == "json") {
    json doc = json::array();
    for (const auto& r : rows) {
      json j;
      j["n"] = r.source;
      j["rank"] = r.rank;
      j["statistic"] = r.statistic;
      j["x"] = r.x ? json(std::stod(num(*r.x))) : json(nullptr);
      if (simulated) {
        j["estimate"] = std::stod(num(r.estimate->value));
        j["se"] = std::stod(num(r.estimate->se));
        j["exact"] = std::stod(num(r.value));
        j["gap_se"] = std::stod(num(r.estimate->gap_in_se(r.value)));
      } else {
        j["value"] = std::stod(num(r.value));
      }
      doc.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << (simulated ? "n,rank,statistic,x,estimate,se,exact,gap_se\n"
                    : "n,rank,statistic,x,value\n");
  for (const auto& r : rows) {
    out << r.source << ',' << r.rank << ',' << r.statistic << ','
        << (r.x ? num(*r.x) : "") << ',';
    if (simulated) {
      out << num(r.estimate->value) << ',' << num(r.estimate->se) << ','
          << num(r.value) << ',' << num(r.estimate->gap_in_se(r.value)) << '\n';
    } else {
      out << num(r.value) << '\n';
    }
  }
}

ResultRow theory_row(std::string source, std::string rank, std::string statistic,
                     std::optional<double> x, double value) {
  return {std::move(source), std::move(rank), std::move(statistic), x, value,
          std::nullopt};
}

// ---------------------------------------------------------------------------
// theory

struct TheoryOptions {
  std::optional<int> n;
  std::string histogram_path;
  std::vector<std::string> ranks{"all"};
  std::vector<std::string> stats{"mean", "second-moment", "cond-mean",
                                 "winner-mean"};
  std::vector<double> xs;
  int grid_points = kDefaultCcdfGridPoints;
  std::string format = "csv";
  int precision = 6;
  std::string output;
};

int cmd_theory(const TheoryOptions& o, std::ostream& out) {
  if (!o.n && o.histogram_path.empty()) {
    throw UsageError("theory needs --n or --histogram");
  }
  std::vector<ResultRow> rows;
  auto grid_for = [&](int k) {
    return o.xs.empty() ? default_grid(k, o.grid_points) : o.xs;
  };
  if (o.n) {
    const FieldSize n(*o.n);
    const SegmentLaw law(n);
    const auto ranks = parse_ranks(o.ranks, *o.n);
    const std::string source = std::to_string(*o.n);
    for (const auto& stat : o.stats) {
      if (stat == "winner-mean") {
        rows.push_back(theory_row(source, "-", stat, std::nullopt, law.winner_segment_mean()));
        continue;
      }
      for (RankSelector sel : ranks) {
        const Rank k = sel.resolve(n);
        const std::string label = std::to_string(k.value());
        if (stat == "mean") {
          rows.push_back(theory_row(source, label, stat, std::nullopt, law.mean(k)));
        } else if (stat == "second-moment") {
          rows.push_back(theory_row(source, label, stat, std::nullopt, law.second_moment(k)));
        } else if (stat == "cond-mean") {
          rows.push_back(theory_row(source, label, stat, std::nullopt,
                          law.conditional_mean_given_win(k)));
        } else if (stat == "ccdf") {
          for (double x : grid_for(k.value())) {
            rows.push_back(theory_row(source, label, stat, x, law.ccdf(k, x)));
          }
        } else {
          throw UsageError("unknown statistic '" + stat + "' for --n");
        }
      }
    }
  } else {
    const auto hist = read_histogram_file(o.histogram_path);
    const auto ranks = parse_ranks(o.ranks, std::nullopt);
    const std::string source = "mixture";
    for (const auto& stat : o.stats) {
      if (stat == "winner-mean") {
        rows.push_back(theory_row(source, "-", stat, std::nullopt,
                        mixture(hist, Statistic::kWinnerSegmentMean,
                                RankSelector::fixed(1))));
        continue;
      }
      for (RankSelector sel : ranks) {
        const std::string label = sel.label();
        if (stat == "mean") {
          rows.push_back(theory_row(source, label, stat, std::nullopt,
                          mixture(hist, Statistic::kMean, sel)));
        } else if (stat == "second-moment") {
          rows.push_back(theory_row(source, label, stat, std::nullopt,
                          mixture(hist, Statistic::kSecondMoment, sel)));
        } else if (stat == "cond-mean") {
          rows.push_back(theory_row(source, label, stat, std::nullopt,
                          mixture(hist, Statistic::kConditionalMean, sel)));
        } else if (stat == "cond-mean-weighted") {
          rows.push_back(theory_row(source, label, stat, std::nullopt,
                          size_biased_conditional_mixture(hist, sel)));
        } else if (stat == "ccdf") {
          const int k = sel.is_longshot() ? hist.min_field_size() : sel.fixed_rank();
          for (double x : grid_for(k)) {
            rows.push_back(theory_row(source, label, stat, x,
                            mixture(hist, Statistic::kCcdf, sel, x)));
          }
        } else {
          throw UsageError("unknown statistic '" + stat + "' for --histogram");
        }
      }
    }
  }
  Sink sink(o.output, out);
  write_rows(sink.stream(), rows, o.format, o.precision, false);
  return kOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  int n = 0;
  std::vector<std::string> ranks{"all"};
  std::vector<std::string> stats{"mean"};
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::string construction = "uniform-cuts";
  unsigned threads = 0;
  std::int64_t chunk_size = 1 << 16;
  std::vector<double> xs;
  int grid_points = kDefaultCcdfGridPoints;
  double tolerance = 5.0;
  std::string format = "csv";
  int precision = 6;
  std::string output;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  if (o.samples < 1) throw UsageError("--samples must be >= 1");
  if (o.chunk_size < 1) throw UsageError("--chunk-size must be >= 1");
  const FieldSize n(o.n);
  const SegmentLaw law(n);
  const auto ranks = parse_ranks(o.ranks, o.n);

  SimConfig config;
  config.samples = static_cast<std::uint64_t>(o.samples);
  config.seed = o.seed;
  config.construction = parse_construction(o.construction);
  config.threads = o.threads;
  config.chunk_size = static_cast<std::uint64_t>(o.chunk_size);

  const std::string source = std::to_string(o.n);
  std::vector<ResultRow> rows;
  std::optional<RaceSimulation> races;
  auto race_sim = [&]() -> const RaceSimulation& {
    if (!races) races = simulate_races(n, config);
    return *races;
  };
  for (const auto& stat : o.stats) {
    if (stat == "winner-mean") {
      rows.push_back({source, "-", stat, std::nullopt, law.winner_segment_mean(),
                      race_sim().winner_segment_mean});
      continue;
    }
    if (stat == "ccdf") {
      std::vector<std::vector<double>> grids(o.n, std::vector<double>{0.0});
      for (RankSelector sel : ranks) {
        const int k = sel.resolve(n).value();
        grids[k - 1] = o.xs.empty() ? default_grid(k, o.grid_points) : o.xs;
      }
      const auto estimates = estimate_ccdf_all_ranks(n, grids, config);
      for (RankSelector sel : ranks) {
        const Rank k = sel.resolve(n);
        const auto& grid = grids[k.value() - 1];
        for (std::size_t i = 0; i < grid.size(); ++i) {
          rows.push_back({source, std::to_string(k.value()), stat, grid[i],
                          law.ccdf(k, grid[i]), estimates[k.value() - 1][i]});
        }
      }
      continue;
    }
    for (RankSelector sel : ranks) {
      const Rank k = sel.resolve(n);
      const int i = k.value() - 1;
      const std::string label = std::to_string(k.value());
      if (stat == "mean") {
        rows.push_back({source, label, stat, std::nullopt, law.mean(k),
                        race_sim().mean[i]});
      } else if (stat == "second-moment") {
        rows.push_back({source, label, stat, std::nullopt, law.second_moment(k),
                        race_sim().second_moment[i]});
      } else if (stat == "cond-mean") {
        rows.push_back({source, label, stat, std::nullopt,
                        law.conditional_mean_given_win(k),
                        race_sim().conditional_mean[i]});
      } else if (stat == "win-prob") {
        rows.push_back({source, label, stat, std::nullopt, law.mean(k),
                        race_sim().win_probability[i]});
      } else {
        throw UsageError("unknown statistic '" + stat + "'");
      }
    }
  }

  Sink sink(o.output, out);
  write_rows(sink.stream(), rows, o.format, o.precision, true);
  for (const auto& r : rows) {
    if (!(r.estimate->gap_in_se(r.value) <= o.tolerance)) return kToleranceBreach;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  std::int64_t races = 0;
  std::optional<int> n_fixed;
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::string histogram_path;
  std::uint64_t seed = 1;
  double odds_noise = 0.0;
  std::string output;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  if (o.races < 1) throw UsageError("--races must be >= 1");
  if (o.n_min.has_value() != o.n_max.has_value()) {
    throw UsageError("--n-min and --n-max must be given together");
  }
  const int sources = (o.n_fixed ? 1 : 0) + (o.n_min ? 1 : 0) +
                      (o.histogram_path.empty() ? 0 : 1);
  if (sources != 1) {
    throw UsageError(
        "give exactly one of --n-fixed, --n-min/--n-max, --histogram");
  }
  SyntheticDatasetConfig config;
  config.race_count = static_cast<std::uint64_t>(o.races);
  config.seed = o.seed;
  config.odds_noise = o.odds_noise;
  if (o.n_fixed) {
    config.field_size_law = std::vector<int>{*o.n_fixed};
  } else if (o.n_min) {
    if (*o.n_min > *o.n_max) throw UsageError("--n-min exceeds --n-max");
    FieldSizeHistogram uniform;
    for (int n = *o.n_min; n <= *o.n_max; ++n) uniform.add(n);
    config.field_size_law = uniform;
  } else {
    config.field_size_law = read_histogram_file(o.histogram_path);
  }
  const auto races = generate_synthetic_dataset(config);

  {
    std::ofstream file(o.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + o.output + " for writing");
    write_races_csv(file, races);
    if (!file.flush()) throw std::runtime_error("failed writing " + o.output);
  }

  FieldSizeHistogram hist;
  std::size_t rows = 0;
  for (const auto& r : races) {
    hist.add(r.field_size());
    rows += r.entries.size();
  }
  out << "races: " << races.size() << '\n'
      << "rows: " << rows << '\n'
      << "field sizes: " << histogram_summary(hist) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string input;
  std::string output_dir;
  int min_field_size = 5;
  std::vector<std::string> buckets;
  double overround_delta = 0.10;
  bool renormalize = false;
  std::optional<int> n_fixed;
  std::string format = "both";
  int precision = 6;
};

void write_file(const fs::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(file);
  if (!file.flush()) throw std::runtime_error("failed writing " + path.string());
}

void print_bucket(std::ostream& out, const BucketReport& b, int precision) {
  auto cell = [&](const Cell& c) {
    return c.present() ? format_number(*c.value, precision) : std::string("-");
  };
  out << "\n[" << b.bucket.describe() << "] races=" << b.races << '\n';
  if (b.races == 0) return;
  out << std::left << std::setw(10) << "rank" << std::setw(12) << "E[Q]"
      << std::setw(12) << "E[P]" << std::setw(12) << "E[z]" << std::setw(12)
      << "E[Q|win]" << std::setw(12) << "E[z|I=1]" << '\n';
  for (std::size_t i = 0; i < b.table.size(); ++i) {
    const auto& t = b.table[i];
    const auto& c = b.conditional[i];
    out << std::setw(10) << t.rank.label() << std::setw(12) << cell(t.implied)
        << std::setw(12) << cell(t.win_rate) << std::setw(12) << cell(t.theory)
        << std::setw(12) << cell(c.implied_given_win) << std::setw(12)
        << cell(c.theory) << '\n';
  }
  out << "winner: E[Q]=" << cell(b.winner.implied)
      << " mixture 2/(n+1)=" << cell(b.winner.theory) << '\n';
  out << std::right;
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  if (o.min_field_size < 2) throw UsageError("--min-field-size must be >= 2");
  if (!(o.overround_delta >= 0.0)) throw UsageError("--overround-delta must be >= 0");
  if (o.format != "csv" && o.format != "json" && o.format != "both") {
    throw UsageError("--format must be csv, json or both");
  }
  AnalysisOptions options;
  options.min_field_size = o.min_field_size;
  options.theory_field_size = o.n_fixed;
  if (o.buckets.empty()) {
    options.buckets = BucketSpec::defaults(o.min_field_size);
  } else {
    options.buckets.buckets.clear();
    try {
      for (const auto& b : o.buckets) {
        options.buckets.buckets.push_back(BucketSpec::parse_range(b));
      }
      options.buckets.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input " + o.input);
  ParseOptions parse_options;
  parse_options.overround_delta = o.overround_delta;
  const ParseResult parsed = parse_races(in, parse_options);

  const fs::path dir(o.output_dir);
  fs::create_directories(dir);
  write_file(dir / "rejections.csv",
             [&](std::ostream& s) { write_rejections_csv(s, parsed.rejections); });
  if (parsed.races.empty()) {
    err << "error: no accepted races in " << o.input << " ("
        << parsed.rejections.size() << " rejections logged)\n";
    return kUsageError;
  }

  std::vector<RankedRace> ranked;
  ranked.reserve(parsed.races.size());
  for (const auto& race : parsed.races) ranked.push_back(rank_race(race, o.renormalize));

  AnalysisReport report = analyze_races(ranked, options);
  report.accepted_races = parsed.races.size();
  report.rejected_races = parsed.race_groups - parsed.races.size();
  report.renormalized = o.renormalize;

  if (o.format != "json") {
    write_file(dir / "report.csv",
               [&](std::ostream& s) { write_report_csv(s, report, o.precision); });
  }
  if (o.format != "csv") {
    write_file(dir / "report.json",
               [&](std::ostream& s) { write_report_json(s, report, o.precision); });
  }

  // Curves over the first bucket.
  const auto& curve_bucket = options.buckets.buckets.front();
  const auto curve_races = select_bucket(ranked, curve_bucket);
  const fs::path curve_dir = dir / "eccdf";
  if (!curve_races.empty()) {
    fs::create_directories(curve_dir);
    for (RankSelector rank : reported_ranks()) {
      bool defined = false;
      for (const auto& r : curve_races) defined = defined || rank.defined_for(r.field_size());
      if (!defined) continue;
      const auto curves = eccdf_per_rank(curve_races, rank);
      const std::string stem = "rank-" + rank.label();
      write_file(curve_dir / (stem + "-empirical.csv"), [&](std::ostream& s) {
        write_eccdf_csv(s, curves.empirical, o.precision);
      });
      write_file(curve_dir / (stem + "-theory.csv"), [&](std::ostream& s) {
        write_eccdf_csv(s, curves.theory, o.precision);
      });
    }
  }

  out << "accepted races: " << report.accepted_races
      << "\nrejected races: " << report.rejected_races
      << "\nrejection log entries: " << parsed.rejections.size()
      << "\ndropped below min field size: " << report.dropped_below_min
      << "\ntied pairs: " << report.tied_pairs << '\n';
  for (const auto& b : report.buckets) print_bucket(out, b, o.precision);
  return kOk;
}

// ---------------------------------------------------------------------------
// compare

struct CompareOptions {
  std::string first;
  std::string second;
  double threshold = 5.0;
  int precision = 6;
};

std::vector<ReportCell> load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report " + path);
  return read_report_cells(in);
}

int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  const auto result = compare_reports(load_report(o.first), load_report(o.second));
  if (!result.shape_matches()) {
    err << "error: report shapes differ\n";
    for (const auto& m : result.missing) err << "  " << m << '\n';
    return kUsageError;
  }
  auto num = [&](double v) { return format_number(v, o.precision); };
  out << "bucket,rank,statistic,first,second,difference,gap_se\n";
  for (const auto& c : result.cells) {
    out << c.a.bucket << ',' << c.a.rank << ',' << c.a.statistic << ','
        << (c.a.value ? num(*c.a.value) : "") << ','
        << (c.b.value ? num(*c.b.value) : "") << ','
        << (c.difference ? num(*c.difference) : "") << ','
        << (c.gap_in_se ? num(*c.gap_in_se) : "") << '\n';
  }
  auto print_gaps = [&](const char* title, const std::vector<ModelGap>& gaps) {
    out << "\n# " << title << ": empirical minus theory\n"
        << "bucket,rank,statistic,gap_se,relative_gap\n";
    for (const auto& g : gaps) {
      out << g.bucket << ',' << g.rank << ',' << g.statistic << ','
          << num(g.gap_in_se) << ',' << num(g.relative_gap) << '\n';
    }
  };
  print_gaps("first report", result.model_gaps_a);
  print_gaps("second report", result.model_gaps_b);
  out << "\nmax gap: " << num(result.max_gap_in_se) << " SE (threshold "
      << num(o.threshold) << ")\n";
  return result.max_gap_in_se > o.threshold ? kToleranceBreach : kOk;
}

void add_output_flags(CLI::App* cmd, std::string& format, int& precision) {
  cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--precision", precision, "Significant digits in output")
      ->check(CLI::Range(1, 17));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Order statistics of the randomly broken stick and their "
               "comparison with betting-market odds"};
  app.name("brokenstick");
  app.require_subcommand(1, 1);

  TheoryOptions theory;
  auto* theory_cmd = app.add_subcommand(
      "theory", "Closed-form order statistics for a field size or a mixture");
  auto* theory_n = theory_cmd->add_option("--n", theory.n, "Field size")
                       ->check(CLI::PositiveNumber);
  auto* theory_hist = theory_cmd->add_option(
      "--histogram", theory.histogram_path,
      "CSV 'n,count' field-size histogram to mix over");
  theory_n->excludes(theory_hist);
  theory_cmd->add_option("--k", theory.ranks,
                         "Ranks: integers, 'longshot' or 'all'");
  theory_cmd->add_option("--stat", theory.stats,
                         "mean, second-moment, cond-mean, cond-mean-weighted "
                         "(histogram only), winner-mean, ccdf");
  theory_cmd->add_option("--x", theory.xs, "CCDF evaluation points");
  theory_cmd->add_option("--grid-points", theory.grid_points,
                         "Default CCDF grid size per rank")
      ->check(CLI::PositiveNumber);
  theory_cmd->add_option("--output", theory.output, "Write to file");
  add_output_flags(theory_cmd, theory.format, theory.precision);

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo estimates beside closed-form values");
  sim_cmd->add_option("--n", sim.n, "Field size")
      ->required()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--k", sim.ranks, "Ranks: integers, 'longshot' or 'all'");
  sim_cmd->add_option("--stat", sim.stats,
                      "mean, second-moment, cond-mean, win-prob, winner-mean, ccdf");
  sim_cmd->add_option("--samples", sim.samples, "Number of simulated divisions")
      ->envname("BROKENSTICK_SAMPLES");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->envname("BROKENSTICK_SEED");
  sim_cmd->add_option("--construction", sim.construction,
                      "uniform-cuts or exponential-ratio")
      ->check(CLI::IsMember({"uniform-cuts", "exponential-ratio"}));
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")
      ->envname("BROKENSTICK_THREADS");
  sim_cmd->add_option("--chunk-size", sim.chunk_size,
                      "Samples per deterministic chunk");
  sim_cmd->add_option("--x", sim.xs, "CCDF evaluation points");
  sim_cmd->add_option("--grid-points", sim.grid_points,
                      "Default CCDF grid size per rank")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--tolerance", sim.tolerance,
                      "Largest acceptable gap in standard errors");
  sim_cmd->add_option("--output", sim.output, "Write to file");
  add_output_flags(sim_cmd, sim.format, sim.precision);

  SynthOptions synth;
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic race CSV");
  synth_cmd->add_option("--races", synth.races, "Number of races")->required();
  synth_cmd->add_option("--n-fixed", synth.n_fixed, "Field size of every race");
  synth_cmd->add_option("--n-min", synth.n_min, "Smallest field size (uniform)");
  synth_cmd->add_option("--n-max", synth.n_max, "Largest field size (uniform)");
  synth_cmd->add_option("--histogram", synth.histogram_path,
                        "CSV 'n,count' field-size law");
  synth_cmd->add_option("--seed", synth.seed, "RNG seed")
      ->envname("BROKENSTICK_SEED");
  synth_cmd->add_option("--odds-noise", synth.odds_noise,
                        "Log-normal jitter on quoted probabilities")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--output", synth.output, "Output CSV")->required();

  AnalyzeOptions analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Tables and ECCDF curves for a race CSV");
  analyze_cmd->add_option("--input", analyze.input, "Race CSV")->required();
  analyze_cmd->add_option("--output-dir", analyze.output_dir,
                          "Directory for report, rejection log and curves")
      ->required();
  analyze_cmd->add_option("--min-field-size", analyze.min_field_size,
                          "Drop races with fewer horses");
  analyze_cmd->add_option("--bucket", analyze.buckets,
                          "Bucket name:lo-hi or name:lo- (repeatable; replaces "
                          "the defaults)");
  analyze_cmd->add_option("--overround-delta", analyze.overround_delta,
                          "Accept races whose implied odds sum is within 1 +/- delta");
  analyze_cmd->add_flag("--renormalize", analyze.renormalize,
                        "Divide implied odds by their per-race sum");
  analyze_cmd->add_option("--n-fixed", analyze.n_fixed,
                          "Theory columns for this single field size");
  analyze_cmd->add_option("--format", analyze.format, "csv, json or both");
  analyze_cmd->add_option("--precision", analyze.precision,
                          "Significant digits in output")
      ->check(CLI::Range(1, 17));

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand(
      "compare", "Cell-by-cell differences between two reports");
  compare_cmd->add_option("first", compare.first, "Report file")->required();
  compare_cmd->add_option("second", compare.second, "Report file")->required();
  compare_cmd->add_option("--threshold", compare.threshold,
                          "Largest acceptable gap in standard errors");
  compare_cmd->add_option("--precision", compare.precision,
                          "Significant digits in output")
      ->check(CLI::Range(1, 17));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (theory_cmd->parsed()) return cmd_theory(theory, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out);
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze, out, err);
    if (compare_cmd->parsed()) return cmd_compare(compare, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace brokenstick::cli
