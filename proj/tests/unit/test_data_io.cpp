#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "zigpcast/data_io.hpp"
#include "zigpcast/errors.hpp"

using namespace zigpcast;

namespace {

const std::filesystem::path kData(ZIGPCAST_DATA_DIR);

// Runs `fn`, expecting a ConfigError whose message contains `fragment`.
template <typename Fn>
void expect_config_error(Fn fn, const std::string& fragment) {
  try {
    fn();
    ADD_FAILURE() << "expected ConfigError containing '" << fragment << "'";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

constexpr const char* kMatches =
    "date,team_a,team_b,goals_a,goals_b,match_type,venue_country\n"
    "# played in Lyon\n"
    "2016-07-07,Germany,France,0,2,CONT,France\n"
    "2016-06-10,France,Romania,2,1,CONT,France\n"
    "2016-06-11,Albania,Switzerland,0,1,CONT,NEUTRAL\n";

}  // namespace

TEST(DataIoMatches, ParsesSortsAndMarksNeutral) {
  const auto load = parse_matches(kMatches, "m.csv");
  ASSERT_EQ(load.matches.size(), 3u);
  EXPECT_TRUE(load.warnings.empty());
  EXPECT_EQ(load.matches[0].date, Date(2016, 6, 10));
  EXPECT_EQ(load.matches[2].team_b, "France");
  EXPECT_EQ(load.matches[2].goals_b, 2);
  EXPECT_FALSE(load.matches[0].neutral);
  EXPECT_EQ(load.matches[0].location_for("France"), 1);
  EXPECT_EQ(load.matches[0].location_for("Romania"), -1);
  EXPECT_TRUE(load.matches[1].neutral);
  EXPECT_EQ(load.matches[1].location_for("Albania"), 0);
  EXPECT_FALSE(load.matches[0].has_elo());
}

TEST(DataIoMatches, WindowDropsRowsAndWarnsWhenEmpty) {
  DateWindow window{Date(2016, 6, 11), Date(2016, 6, 30)};
  const auto load = parse_matches(kMatches, "m.csv", window);
  ASSERT_EQ(load.matches.size(), 1u);
  EXPECT_EQ(load.matches[0].team_a, "Albania");

  const auto none = parse_matches(kMatches, "m.csv", DateWindow{Date(2020, 1, 1), std::nullopt});
  EXPECT_TRUE(none.matches.empty());
  ASSERT_EQ(none.warnings.size(), 1u);
  EXPECT_NE(none.warnings[0].find("3 dropped"), std::string::npos);
}

TEST(DataIoMatches, ErrorsNameTheLine) {
  const std::string header = "date,team_a,team_b,goals_a,goals_b,match_type\n";
  expect_config_error([&] { parse_matches(header + "2016-06-10,A,B,1,0,CONT\n2016-13-01,A,B,1,0,CONT\n", "x.csv"); },
                      "x.csv:3:");
  expect_config_error([&] { parse_matches(header + "2016-06-10,A,B,one,0,CONT\n", "x.csv"); }, "not an integer");
  expect_config_error([&] { parse_matches(header + "2016-06-10,A,A,1,0,CONT\n", "x.csv"); }, "plays itself");
  expect_config_error([&] { parse_matches(header + "2016-06-10,A,B,-1,0,CONT\n", "x.csv"); }, "negative");
  expect_config_error(
      [&] { parse_matches(header + "2016-06-10,A,B,1,0,CONT\n2016-06-10,A,B,2,0,CONT\n", "x.csv"); },
      "x.csv:3: duplicate of line 2");
  expect_config_error([&] { parse_matches("date,team_a,goals_a,goals_b,match_type\n", "x.csv"); }, "team_b");

  const std::set<std::string> types{"CONT", "WC"};
  expect_config_error([&] { parse_matches(header + "2016-06-10,A,B,1,0,GALA\n", "x.csv", {}, &types); },
                      "unknown match type 'GALA'");
}

TEST(DataIoMatches, OptionalEloColumns) {
  const std::string text =
      "date,team_a,team_b,goals_a,goals_b,match_type,neutral,elo_a_before,elo_b_before\n"
      "2016-06-10,A,B,1,0,CONT,true,1900.5,1800\n";
  const auto load = parse_matches(text, "e.csv");
  ASSERT_TRUE(load.matches[0].has_elo());
  EXPECT_DOUBLE_EQ(*load.matches[0].elo_a_before, 1900.5);
  EXPECT_TRUE(load.matches[0].neutral);
  expect_config_error(
      [] {
        parse_matches("date,team_a,team_b,goals_a,goals_b,match_type,elo_a_before,elo_b_before\n"
                      "2016-06-10,A,B,1,0,CONT,1900,\n",
                      "e.csv");
      },
      "only one side");
}

TEST(DataIoRatings, LatestPerTeam) {
  const auto ratings = parse_ratings(
      "team,elo,as_of\nFrance,2000,2020-01-01\nFrance,2087,2021-06-01\nGermany,1936,2021-06-01\n", "r.csv");
  ASSERT_EQ(ratings.size(), 3u);
  const auto live = latest_ratings(ratings);
  EXPECT_DOUBLE_EQ(live.at("France"), 2087);
  EXPECT_DOUBLE_EQ(live.at("Germany"), 1936);
  expect_config_error([] { parse_ratings("team,elo,as_of\nA,1,2020-01-01\nA,2,2020-01-01\n", "r.csv"); },
                      "second rating");
}

TEST(DataIoConfig, DefaultsAndOverrides) {
  const auto cfg = parse_config(
      "# engine\n"
      "half_period_days = 730\n"
      "reference_date = 2021-06-11\n"
      "window_start = 2014-01-01\n"
      "k.WC = 65\n"
      "importance.WC = 5\n"
      "tournament_k = 45\n"
      "extra_time_scale = 0.3\n"
      "grid_cap = 12\n");
  EXPECT_EQ(cfg.weights.half_period_days, 730);
  ASSERT_TRUE(cfg.reference_date.has_value());
  EXPECT_EQ(*cfg.reference_date, Date(2021, 6, 11));
  EXPECT_EQ(cfg.weights.reference_date, Date(2021, 6, 11));
  EXPECT_EQ(*cfg.window.start, Date(2014, 1, 1));
  EXPECT_FALSE(cfg.window.end.has_value());
  EXPECT_DOUBLE_EQ(cfg.k_table.at("WC"), 65);
  EXPECT_DOUBLE_EQ(cfg.k_table.at("FRIENDLY"), 20);
  EXPECT_DOUBLE_EQ(cfg.weights.importance.at("WC"), 5);
  EXPECT_DOUBLE_EQ(cfg.tournament.k_weight, 45);
  EXPECT_DOUBLE_EQ(cfg.tournament.extra_time_scale, 0.3);
  EXPECT_EQ(cfg.grid_cap, 12);

  const auto empty = parse_config("");
  EXPECT_FALSE(empty.reference_date.has_value());
  EXPECT_EQ(empty.weights.half_period_days, 1095);
  EXPECT_DOUBLE_EQ(empty.tournament.k_weight, 50);
}

TEST(DataIoConfig, Errors) {
  expect_config_error([] { parse_config("half_period = 3\n", "c.cfg"); }, "c.cfg:1: unknown configuration key");
  expect_config_error([] { parse_config("\nk.WC\n", "c.cfg"); }, "c.cfg:2: expected 'key = value'");
  expect_config_error([] { parse_config("k.WC = -1\n", "c.cfg"); }, "must be positive");
  expect_config_error([] { parse_config("k.GALA = 10\n", "c.cfg"); }, "no importance");
  expect_config_error([] { parse_config("grid_cap = 4\n", "c.cfg"); }, "grid_cap");
  expect_config_error([] { parse_config("window_start = 2020-01-01\nwindow_end = 2019-01-01\n", "c.cfg"); },
                      "window_end");
}

TEST(DataIoConfig, ShippedConfigsLoad) {
  const auto base = load_config(kData / "config" / "engine.cfg");
  EXPECT_EQ(base.match_types(), (std::set<std::string>{"CONT", "FRIENDLY", "NL", "OTHER", "QUAL", "WC"}));
  const auto euro = load_config(kData / "config" / "euro2020.cfg");
  EXPECT_EQ(*euro.reference_date, Date(2021, 6, 11));
}

TEST(DataIoFixtures, CsvAndJsonAgree) {
  const std::string csv =
      "match_id,stage,group,slot_a,slot_b,venue_country,date\n"
      "1,GROUP,A,Turkey,Italy,Italy,2021-06-11\n"
      "37,R16,,1A,2C,England,2021-06-26\n";
  const std::string json = R"([
    {"match_id": 1, "stage": "GROUP", "group": "A", "slot_a": "Turkey", "slot_b": "Italy",
     "venue_country": "Italy", "date": "2021-06-11"},
    {"match_id": 37, "stage": "R16", "group": "", "slot_a": "1A", "slot_b": "2C",
     "venue_country": "England", "date": "2021-06-26"}])";
  const auto a = parse_fixtures_csv(csv, "f.csv");
  const auto b = parse_fixtures_json(json, "f.json");
  ASSERT_EQ(a.size(), 2u);
  ASSERT_EQ(b.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a[i].match_id, b[i].match_id);
    EXPECT_EQ(a[i].stage, b[i].stage);
    EXPECT_EQ(a[i].group, b[i].group);
    EXPECT_EQ(a[i].slot_a, b[i].slot_a);
    EXPECT_EQ(a[i].venue_country, b[i].venue_country);
    EXPECT_EQ(a[i].date, b[i].date);
  }
  EXPECT_EQ(a[1].stage, Stage::RoundOf16);
  expect_config_error(
      [] { parse_fixtures_csv("match_id,stage,group,slot_a,slot_b,venue_country,date\n1,SEMI,,a,b,X,2021-01-01\n", "f.csv"); },
      "unknown stage");
  expect_config_error([] { parse_fixtures_json("{}", "f.json"); }, "expected an array");
}

TEST(DataIoAllocation, ParsesAndValidatesRows) {
  const auto table = parse_allocation("qualified,1B,1C,1E,1F\nABCD,A,D,B,C\n", "a.csv");
  EXPECT_EQ(table.winner_slots, (std::vector<std::string>{"1B", "1C", "1E", "1F"}));
  EXPECT_EQ(table.assignment.at("ABCD"), "ADBC");
  expect_config_error([] { parse_allocation("qualified,1B,1C,1E,1F\nBACD,A,D,B,C\n", "a.csv"); }, "alphabetically");
  expect_config_error([] { parse_allocation("qualified,1B,1C,1E,1F\nABCD,A,D,B,C\nABCD,A,D,B,C\n", "a.csv"); },
                      "a.csv:3: combination 'ABCD' listed twice");
}

TEST(DataIoTournament, RatingsCoverage) {
  const auto plan = load_tournament(kData / "euro2020" / "fixtures.csv", kData / "euro2020" / "allocation.csv");
  auto ratings = latest_ratings(load_ratings(kData / "euro2020" / "ratings.csv"));
  EXPECT_NO_THROW(check_ratings_cover(plan, ratings));
  ratings.erase("Wales");
  expect_config_error([&] { check_ratings_cover(plan, ratings); }, "Wales");
}

TEST(DataIoResults, RealizedAndDistributions) {
  const auto realized = load_realized(kData / "euro2020" / "realized.csv");
  EXPECT_EQ(realized.size(), 24u);
  expect_config_error([] { parse_realized("team,rank\nItaly,7\n", "r.csv"); }, "outside 1..6");

  const auto dists = parse_distributions("team,p1,p2,p3,p4,p5,p6\nA,0.1,0.1,0.2,0.2,0.2,0.2\n", "d.csv");
  ASSERT_EQ(dists.size(), 1u);
  EXPECT_DOUBLE_EQ(dists[0].p[2], 0.2);
  expect_config_error([] { parse_distributions("team,p1,p2,p3,p4,p5,p6\nA,0.5,0.1,0.2,0.2,0.2,0.2\n", "d.csv"); },
                      "d.csv:2:");

  // Six-decimal rounding of 1/6 is absorbed; a larger error is not.
  const auto rounded =
      parse_distributions("team,p1,p2,p3,p4,p5,p6\nA,0.166667,0.166667,0.166667,0.166667,0.166667,0.166667\n", "d.csv");
  EXPECT_NEAR(rounded[0].p[0], 1.0 / 6.0, 1e-15);
  expect_config_error([] { parse_distributions("team,p1,p2,p3,p4,p5,p6\nA,0.16668,0.16667,0.16667,0.16667,0.16667,0.16667\n", "d.csv"); },
                      "sums to");
}

TEST(DataIoFiles, MissingFileIsAnIoError) {
  EXPECT_THROW(read_text_file("/nonexistent/zigpcast/file.csv"), IoError);
  EXPECT_THROW(load_matches("/nonexistent/zigpcast/file.csv"), IoError);
}
