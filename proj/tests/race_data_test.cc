#include "brokenstick/race_data.h"

#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>

namespace brokenstick {
namespace {

ParseResult parse(const std::string& text, ParseOptions options = {}) {
  std::istringstream in(text);
  return parse_races(in, options);
}

constexpr const char* kHeader = "race_id,horse_id,decimal_odds,won\n";

TEST(ParseRacesTest, ThreeHorseExample) {
  const auto result = parse(std::string(kHeader) +
                            "r1,horse1,3,0\n"
                            "r1,horse2,2,1\n"
                            "r1,horse3,6,0\n");
  ASSERT_EQ(result.races.size(), 1u);
  EXPECT_TRUE(result.rejections.empty());
  const auto& race = result.races[0];
  ASSERT_EQ(race.entries.size(), 3u);
  EXPECT_DOUBLE_EQ(1.0 / race.entries[0].decimal_odds, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(1.0 / race.entries[1].decimal_odds, 0.5);
  EXPECT_DOUBLE_EQ(1.0 / race.entries[2].decimal_odds, 1.0 / 6.0);
  EXPECT_TRUE(race.entries[1].won);
}

TEST(ParseRacesTest, RejectionsAreLoggedNotFatal) {
  const auto result = parse(std::string(kHeader) +
                            "dh,a,2,1\n"
                            "dh,b,2,1\n"
                            "over,a,1.6,1\n"   // 0.625
                            "over,b,1.6,0\n"   // + 0.625 = 1.25
                            "ok,a,2,0\n"
                            "ok,b,2,1\n"
                            "none,a,2,0\n"
                            "none,b,2,0\n"
                            "solo,a,1.01,1\n"
                            "low,a,1,1\n"
                            "low,b,2,0\n");
  ASSERT_EQ(result.races.size(), 1u);
  EXPECT_EQ(result.races[0].race_id, "ok");
  EXPECT_EQ(result.race_groups, 6u);
  EXPECT_EQ(result.races.size() + result.rejections.size(), result.race_groups);
  std::map<std::string, std::string> reasons;
  for (const auto& r : result.rejections) reasons[r.race_id] = r.reason;
  EXPECT_EQ(reasons["dh"], "dead heat");
  EXPECT_TRUE(reasons["over"].starts_with("overround out of band")) << reasons["over"];
  EXPECT_EQ(reasons["none"], "no winner");
  EXPECT_EQ(reasons["solo"], "fewer than 2 entries");
  EXPECT_TRUE(reasons["low"].starts_with("decimal odds must exceed 1"));
}

TEST(ParseRacesTest, OverroundBandIsConfigurable) {
  const std::string text = std::string(kHeader) + "r,a,1.6,1\nr,b,1.6,0\n";
  EXPECT_EQ(parse(text).races.size(), 0u);
  ParseOptions wide;
  wide.overround_delta = 0.3;
  EXPECT_EQ(parse(text, wide).races.size(), 1u);
}

TEST(ParseRacesTest, MalformedRowsCarryLineNumbers) {
  const auto result = parse(std::string(kHeader) +
                            "r1,a,2,1\n"
                            "r1,b,two,0\n"
                            "r2,a,2,1\n"
                            "r2,b,2,0\n"
                            "garbage line\n"
                            "r3,a,2,yes\n"
                            "r3,b,2,1\n");
  ASSERT_EQ(result.races.size(), 1u);
  EXPECT_EQ(result.races[0].race_id, "r2");
  ASSERT_EQ(result.rejections.size(), 3u);
  EXPECT_EQ(result.rejections[0].race_id, "");
  EXPECT_EQ(result.rejections[0].line, 6u);
  EXPECT_EQ(result.rejections[1].race_id, "r1");
  EXPECT_EQ(result.rejections[1].line, 3u);
  EXPECT_NE(result.rejections[1].reason.find("line 3"), std::string::npos);
  EXPECT_EQ(result.rejections[2].race_id, "r3");
  EXPECT_EQ(result.race_groups, 3u);
}

TEST(ParseRacesTest, NonContiguousRowsAndCrlf) {
  const auto result = parse("race_id,horse_id,decimal_odds,won\r\n"
                            "a,x,2,1\r\n"
                            "b,x,2,0\r\n"
                            "a,y,2,0\r\n"
                            "\r\n"
                            "b,y,2,1\r\n");
  ASSERT_EQ(result.races.size(), 2u);
  EXPECT_EQ(result.races[0].race_id, "a");
  EXPECT_EQ(result.races[1].entries.size(), 2u);
}

TEST(ParseRacesTest, HeaderIsRequired) {
  EXPECT_THROW(parse("a,x,2,1\n"), std::runtime_error);
  EXPECT_THROW(parse(""), std::runtime_error);
  EXPECT_THROW(parse("race,horse,odds,won\n"), std::runtime_error);
}

TEST(ParseRacesTest, DuplicateHorse) {
  const auto result = parse(std::string(kHeader) + "r,a,2,1\nr,a,2,0\n");
  ASSERT_EQ(result.rejections.size(), 1u);
  EXPECT_EQ(result.rejections[0].reason, "duplicate horse_id a");
}

TEST(WriteRacesTest, RoundTripsExactly) {
  std::vector<RaceRecord> races{
      {"r1", {{"a", 1.0 / 0.3, false}, {"b", 1.0 / 0.7, true}}}};
  std::ostringstream out;
  write_races_csv(out, races);
  std::istringstream in(out.str());
  const auto parsed = parse_races(in);
  ASSERT_EQ(parsed.races.size(), 1u);
  EXPECT_EQ(parsed.races[0].entries[0].decimal_odds, races[0].entries[0].decimal_odds);
  EXPECT_EQ(parsed.races[0].entries[1].decimal_odds, races[0].entries[1].decimal_odds);
}

TEST(RankRaceTest, WorkedExample) {
  const RaceRecord race{"r", {{"horse1", 3, false}, {"horse2", 2, true},
                              {"horse3", 6, false}}};
  const auto ranked = rank_race(race);
  ASSERT_EQ(ranked.ranked.size(), 3u);
  EXPECT_EQ(ranked.ranked[0].horse_id, "horse2");
  EXPECT_EQ(ranked.ranked[0].rank, 1);
  EXPECT_DOUBLE_EQ(ranked.ranked[0].implied_odds, 0.5);
  EXPECT_EQ(ranked.ranked[1].horse_id, "horse1");
  EXPECT_EQ(ranked.ranked[2].horse_id, "horse3");
  EXPECT_EQ(ranked.winner().horse_id, "horse2");
  EXPECT_EQ(ranked.at(RankSelector::longshot()).horse_id, "horse3");
  EXPECT_EQ(ranked.tied_pairs, 0);
}

TEST(RankRaceTest, TiesBreakByHorseId) {
  const RaceRecord race{"r", {{"zed", 3, false}, {"amy", 3, true},
                              {"bob", 3, false}}};
  const auto ranked = rank_race(race);
  EXPECT_EQ(ranked.ranked[0].horse_id, "amy");
  EXPECT_EQ(ranked.ranked[1].horse_id, "bob");
  EXPECT_EQ(ranked.ranked[2].horse_id, "zed");
  EXPECT_EQ(ranked.tied_pairs, 2);
}

TEST(RankRaceTest, TwoHorsesAndRenormalization) {
  const RaceRecord race{"r", {{"a", 1.6, true}, {"b", 2.5, false}}};
  const auto raw = rank_race(race);
  EXPECT_EQ(raw.at(RankSelector::fixed(2)).horse_id,
            raw.at(RankSelector::longshot()).horse_id);
  const auto norm = rank_race(race, true);
  EXPECT_NEAR(norm.ranked[0].implied_odds + norm.ranked[1].implied_odds, 1.0,
              1e-15);
  EXPECT_NEAR(norm.ranked[0].implied_odds, 0.625 / 1.025, 1e-15);
}

std::vector<RankedRace> races_with_sizes(std::initializer_list<int> sizes) {
  std::vector<RankedRace> out;
  int id = 0;
  for (int n : sizes) {
    RaceRecord r{"r" + std::to_string(id++), {}};
    for (int i = 0; i < n; ++i) {
      r.entries.push_back({"h" + std::to_string(i), double(n), i == 0});
    }
    out.push_back(rank_race(r));
  }
  return out;
}

TEST(BucketTest, HistogramsPerBucket) {
  const auto races = races_with_sizes({5, 5, 9});
  const auto spec = BucketSpec::defaults();
  ASSERT_EQ(spec.buckets.size(), 4u);
  EXPECT_EQ(field_size_histogram(races, spec.buckets[1]),
            FieldSizeHistogram({{5, 2}}));
  EXPECT_EQ(field_size_histogram(races, spec.buckets[0]),
            FieldSizeHistogram({{5, 2}, {9, 1}}));
  try {
    field_size_histogram(races, spec.buckets[3]);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("empty selection"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("large"), std::string::npos);
  }
}

TEST(BucketTest, DefaultsAndParsing) {
  const auto spec = BucketSpec::defaults();
  EXPECT_EQ(spec.buckets[0].name, "all");
  EXPECT_EQ(spec.buckets[0].lo, 5);
  EXPECT_FALSE(spec.buckets[0].hi.has_value());
  EXPECT_EQ(spec.buckets[2].lo, 8);
  EXPECT_EQ(*spec.buckets[2].hi, 10);
  EXPECT_EQ(BucketSpec::defaults(9).buckets.size(), 3u);  // small dropped

  const auto r = BucketSpec::parse_range("mid:6-9");
  EXPECT_EQ(r.name, "mid");
  EXPECT_EQ(r.lo, 6);
  EXPECT_EQ(*r.hi, 9);
  EXPECT_FALSE(BucketSpec::parse_range("big:12-").hi.has_value());
  EXPECT_THROW(BucketSpec::parse_range("nocolon"), std::invalid_argument);
  EXPECT_THROW(BucketSpec::parse_range("x:a-b"), std::invalid_argument);
  BucketSpec bad{{{"x", 9, 3}}};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace brokenstick
