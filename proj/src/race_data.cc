#include "brokenstick/race_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

namespace brokenstick {

namespace {

constexpr std::string_view kHeader = "race_id,horse_id,decimal_odds,won";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct RaceGroup {
  RaceRecord record;
  std::optional<Rejection> error;  // first problem seen while reading rows
};

std::optional<std::string> validate_race(const RaceRecord& race,
                                         const ParseOptions& options) {
  if (race.entries.size() < 2) return "fewer than 2 entries";
  std::set<std::string_view> ids;
  int winners = 0;
  double implied_sum = 0.0;
  for (const auto& e : race.entries) {
    if (!ids.insert(e.horse_id).second) {
      return "duplicate horse_id " + e.horse_id;
    }
    if (!(e.decimal_odds > 1.0) || !std::isfinite(e.decimal_odds)) {
      return "decimal odds must exceed 1 (horse " + e.horse_id + ")";
    }
    winners += e.won ? 1 : 0;
    implied_sum += 1.0 / e.decimal_odds;
  }
  if (winners == 0) return "no winner";
  if (winners > 1) return "dead heat";
  if (std::abs(implied_sum - 1.0) > options.overround_delta) {
    std::ostringstream msg;
    msg << "overround out of band (implied odds sum " << std::setprecision(6)
        << implied_sum << ")";
    return msg.str();
  }
  return std::nullopt;
}

}  // namespace

ParseResult parse_races(std::istream& in, const ParseOptions& options) {
  if (!(options.overround_delta >= 0.0)) {
    throw std::invalid_argument("overround delta must be >= 0");
  }
  std::string line;
  std::size_t line_number = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_number;
    std::string_view view = trim(line);
    if (line_number == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    if (view != kHeader) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": expected header '" + std::string(kHeader) +
                               "'");
    }
    have_header = true;
  }
  if (!have_header) throw std::runtime_error("missing CSV header");

  ParseResult result;
  std::vector<RaceGroup> groups;
  std::unordered_map<std::string, std::size_t> index;

  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_fields(view);
    if (fields.size() != 4 || fields[0].empty()) {
      // Without a trustworthy race id the row cannot taint a race.
      result.rejections.push_back(
          {"", line_number,
           fields.size() != 4 ? "malformed row: expected 4 fields, got " +
                                    std::to_string(fields.size())
                              : "malformed row: empty race_id"});
      continue;
    }
    const std::string race_id(fields[0]);
    auto [it, inserted] = index.try_emplace(race_id, groups.size());
    if (inserted) groups.push_back({RaceRecord{race_id, {}}, std::nullopt});
    RaceGroup& group = groups[it->second];

    auto fail = [&](std::string reason) {
      if (!group.error) {
        group.error = Rejection{race_id, line_number,
                                "malformed row at line " +
                                    std::to_string(line_number) + ": " +
                                    std::move(reason)};
      }
    };
    if (fields[1].empty()) {
      fail("empty horse_id");
      continue;
    }
    const auto odds = parse_double(fields[2]);
    if (!odds) {
      fail("decimal_odds '" + std::string(fields[2]) + "' is not a number");
      continue;
    }
    if (fields[3] != "0" && fields[3] != "1") {
      fail("won must be 0 or 1, got '" + std::string(fields[3]) + "'");
      continue;
    }
    group.record.entries.push_back(
        {std::string(fields[1]), *odds, fields[3] == "1"});
  }

  result.race_groups = groups.size();
  for (auto& group : groups) {
    if (group.error) {
      result.rejections.push_back(std::move(*group.error));
      continue;
    }
    if (auto reason = validate_race(group.record, options)) {
      result.rejections.push_back(
          {group.record.race_id, std::nullopt, std::move(*reason)});
      continue;
    }
    result.races.push_back(std::move(group.record));
  }
  return result;
}

void write_races_csv(std::ostream& out, const std::vector<RaceRecord>& races) {
  out << kHeader << '\n';
  const auto old_precision =
      out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& race : races) {
    for (const auto& e : race.entries) {
      out << race.race_id << ',' << e.horse_id << ',' << e.decimal_odds << ','
          << (e.won ? 1 : 0) << '\n';
    }
  }
  out.precision(old_precision);
}

const RankedEntry& RankedRace::winner() const {
  for (const auto& e : ranked) {
    if (e.won) return e;
  }
  throw std::logic_error("race " + race_id + " has no winner");
}

const RankedEntry& RankedRace::at(RankSelector selector) const {
  const Rank k = selector.resolve(FieldSize(field_size()));
  return ranked[k.value() - 1];
}

RankedRace rank_race(const RaceRecord& race, bool renormalize) {
  RankedRace out;
  out.race_id = race.race_id;
  double total = 0.0;
  for (const auto& e : race.entries) {
    out.ranked.push_back({0, e.horse_id, 1.0 / e.decimal_odds, e.won});
    total += 1.0 / e.decimal_odds;
  }
  if (renormalize) {
    for (auto& e : out.ranked) e.implied_odds /= total;
  }
  std::sort(out.ranked.begin(), out.ranked.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.implied_odds != b.implied_odds) {
                return a.implied_odds > b.implied_odds;
              }
              return a.horse_id < b.horse_id;
            });
  for (std::size_t i = 0; i < out.ranked.size(); ++i) {
    out.ranked[i].rank = static_cast<int>(i) + 1;
    if (i > 0 && out.ranked[i].implied_odds == out.ranked[i - 1].implied_odds) {
      ++out.tied_pairs;
    }
  }
  return out;
}

std::string FieldSizeRange::describe() const {
  std::string s = name + " (n " + std::to_string(lo);
  s += hi ? ".." + std::to_string(*hi) + ")" : "+)";
  return s;
}

BucketSpec BucketSpec::defaults(int min_field_size) {
  if (min_field_size < 1) {
    throw std::invalid_argument("minimum field size must be >= 1");
  }
  BucketSpec spec;
  spec.buckets.push_back({"all", min_field_size, std::nullopt});
  const FieldSizeRange fixed[] = {
      {"small", 5, 7}, {"medium", 8, 10}, {"large", 11, std::nullopt}};
  for (auto range : fixed) {
    range.lo = std::max(range.lo, min_field_size);
    if (!range.hi || range.lo <= *range.hi) spec.buckets.push_back(range);
  }
  return spec;
}

FieldSizeRange BucketSpec::parse_range(const std::string& text) {
  const auto colon = text.find(':');
  const auto dash = text.find('-', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || colon == 0 || dash == std::string::npos) {
    throw std::invalid_argument("bucket '" + text +
                                "' must look like name:lo-hi or name:lo-");
  }
  auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument("bucket '" + text + "' has a bad bound");
    }
    return v;
  };
  const std::string_view view(text);
  FieldSizeRange range;
  range.name = text.substr(0, colon);
  range.lo = to_int(view.substr(colon + 1, dash - colon - 1));
  const auto upper = view.substr(dash + 1);
  if (!upper.empty()) range.hi = to_int(upper);
  return range;
}

void BucketSpec::validate() const {
  if (buckets.empty()) throw std::invalid_argument("no buckets defined");
  std::set<std::string> names;
  for (const auto& b : buckets) {
    if (b.name.empty()) throw std::invalid_argument("bucket without a name");
    if (!names.insert(b.name).second) {
      throw std::invalid_argument("duplicate bucket name " + b.name);
    }
    if (b.lo < 1) throw std::invalid_argument("bucket " + b.name + ": lo < 1");
    if (b.hi && *b.hi < b.lo) {
      throw std::invalid_argument("bucket " + b.name + ": lo > hi");
    }
  }
}

std::vector<RankedRace> select_bucket(const std::vector<RankedRace>& races,
                                      const FieldSizeRange& bucket) {
  std::vector<RankedRace> out;
  for (const auto& r : races) {
    if (bucket.contains(r.field_size())) out.push_back(r);
  }
  return out;
}

FieldSizeHistogram field_size_histogram(const std::vector<RankedRace>& races,
                                        const FieldSizeRange& bucket) {
  FieldSizeHistogram hist;
  for (const auto& r : races) {
    if (bucket.contains(r.field_size())) hist.add(r.field_size());
  }
  if (hist.empty()) {
    throw std::invalid_argument("empty selection for bucket " +
                                bucket.describe());
  }
  return hist;
}

}  // namespace brokenstick
