#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "zigpcast/data_io.hpp"
#include "zigpcast/errors.hpp"
#include "zigpcast/report_io.hpp"

using namespace zigpcast;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "zigpcast_report_io" / name;
  std::filesystem::remove_all(dir);
  return dir;
}

const Metadata kMeta{{"seed", "3"}, {"n_runs", "1000"}};

}  // namespace

TEST(ReportIo, ProbabilitiesUseSixDecimals) {
  EXPECT_EQ(format_probability(0.5), "0.500000");
  EXPECT_EQ(format_probability(1.0 / 3.0), "0.333333");
  EXPECT_EQ(format_probability(0.0), "0.000000");
  EXPECT_EQ(format_probability(2.0 / 3.0), "0.666667");
}

TEST(ReportIo, GroupTableCsvAndJson) {
  GroupProbabilityRow row;
  row.group = 'A';
  row.team = "Italy";
  row.first = 0.5;
  row.second = 0.25;
  row.third_qualified = 0.125;
  row.eliminated = 0.125;
  row.se_first = 0.0158113883;
  const std::vector<GroupProbabilityRow> rows{row};

  const auto csv = lines_of(group_table_csv(rows, kMeta));
  ASSERT_EQ(csv.size(), 4u);
  EXPECT_EQ(csv[0], "# seed: 3");
  EXPECT_EQ(csv[1], "# n_runs: 1000");
  EXPECT_EQ(csv[2],
            "group,team,group_first,group_second,third_qualified,group_exit,"
            "se_group_first,se_group_second,se_third_qualified,se_group_exit");
  EXPECT_EQ(csv[3], "A,Italy,0.500000,0.250000,0.125000,0.125000,0.015811,0.000000,0.000000,0.000000");

  const auto json = nlohmann::json::parse(group_table_json(rows, kMeta));
  EXPECT_EQ(json.at("metadata").at("seed"), "3");
  EXPECT_EQ(json.at("rows").at(0).at("group"), "A");
  EXPECT_DOUBLE_EQ(json.at("rows").at(0).at("group_first").get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(json.at("rows").at(0).at("se").at("group_first").get<double>(), 0.015811);
}

TEST(ReportIo, StageTableCsv) {
  StageProbabilityRow row;
  row.team = "Bosnia, Herzegovina";
  row.champion = 0.1;
  row.final = 0.2;
  row.semifinal = 0.3;
  row.quarterfinal = 0.4;
  row.last16 = 0.9;
  const std::vector<StageProbabilityRow> rows{row};
  const auto csv = lines_of(stage_table_csv(rows, {}));
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0],
            "team,champion,final,semifinal,quarterfinal,last16,"
            "se_champion,se_final,se_semifinal,se_quarterfinal,se_last16");
  EXPECT_EQ(csv[1], "\"Bosnia, Herzegovina\",0.100000,0.200000,0.300000,0.400000,0.900000,"
                    "0.000000,0.000000,0.000000,0.000000,0.000000");
  const auto json = nlohmann::json::parse(stage_table_json(rows, {}));
  EXPECT_EQ(json.at("rows").at(0).at("team"), "Bosnia, Herzegovina");
}

TEST(ReportIo, GridOutputs) {
  const auto grid = score_grid(fixtures::france_germany(), fixtures::france_germany_in_munich(), 10);
  const auto csv = lines_of(grid_csv(grid, kMeta));
  // Two metadata lines, two team lines, header, 11 x 11 cells.
  ASSERT_EQ(csv.size(), 2u + 2u + 1u + 121u);
  EXPECT_EQ(csv[2], "# team_a: France");
  EXPECT_EQ(csv[4], "goals_a,goals_b,probability");
  EXPECT_EQ(csv[5], "0,0," + format_probability(grid.at(0, 0)));

  const auto json = nlohmann::json::parse(grid_json(grid, kMeta));
  EXPECT_EQ(json.at("cap"), 10);
  EXPECT_EQ(json.at("probabilities").size(), 11u);
  EXPECT_NEAR(json.at("probabilities").at(1).at(2).get<double>(), grid.at(1, 2), 5e-7);
  const auto& s = json.at("summary");
  EXPECT_NEAR(s.at("win_a").get<double>() + s.at("draw").get<double>() + s.at("win_b").get<double>(), 1.0, 2e-6);

  const auto svg = grid_svg(grid);
  EXPECT_TRUE(svg.starts_with("<svg"));
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  std::size_t rects = 0;
  for (auto pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) ++rects;
  EXPECT_EQ(rects, 49u);
}

TEST(ReportIo, DistributionsRoundTrip) {
  OutcomeDistribution d;
  d.team = "Wales";
  d.p = {0.015, 0.03, 0.08, 0.2, 0.325, 0.35};
  const std::vector<OutcomeDistribution> in{d};
  const auto back = parse_distributions(distributions_csv(in, kMeta), "d.csv");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].team, "Wales");
  for (std::size_t i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(back[0].p[i], d.p[i]);
}

TEST(ReportIo, BacktestCsvHasTotalRow) {
  BacktestReport r;
  r.teams.push_back({"Italy", 1, 2, 1.5, 0.25, 0.125});
  r.teams.push_back({"Spain", 2, 2, 0.5, 0.75, 0.0625});
  r.mld_total = 2.0;
  r.brier_total = 1.0;
  r.rps_total = 0.1875;
  const auto csv = lines_of(backtest_csv(r, {}));
  ASSERT_EQ(csv.size(), 4u);
  EXPECT_EQ(csv[0], "team,realized_rank,predicted_rank,mld,brier,rps");
  EXPECT_EQ(csv[1], "Italy,1,2,1.500000,0.250000,0.125000");
  EXPECT_EQ(csv[3], "TOTAL,,,2.000000,1.000000,0.187500");
  const auto json = nlohmann::json::parse(backtest_json(r, {}));
  EXPECT_EQ(json.at("teams").size(), 2u);
}

TEST(ReportIo, GofReportMarksMissingTests) {
  auto models = fixtures::france_germany();
  auto france = models.at("France");
  france.attack.gof = GofResult{3.5, 4, 0.4779, 100, 0};
  france.nested.fallback = true;
  models.insert(france);
  const auto csv = lines_of(gof_report_csv(models, {}));
  ASSERT_EQ(csv.size(), 3u);
  EXPECT_EQ(csv[1], "France,0.477900,NA,NA,3.500000,4,NA,NA,NA,NA,1");
  EXPECT_EQ(csv[2], "Germany,NA,NA,NA,NA,NA,NA,NA,NA,NA,0");
}

TEST(ReportIo, AnnotatedMatchesAndRatingsParseBack) {
  MatchRecord m;
  m.date = Date(2021, 6, 15);
  m.team_a = "France";
  m.team_b = "Germany";
  m.goals_a = 1;
  m.match_type = "CONT";
  m.venue_country = "Germany";
  m.elo_a_before = 2087.25;
  m.elo_b_before = 1936.0;
  const std::vector<MatchRecord> matches{m};
  const auto back = parse_matches(annotated_matches_csv(matches, kMeta), "a.csv");
  ASSERT_EQ(back.matches.size(), 1u);
  EXPECT_EQ(back.matches[0].location_for("Germany"), 1);
  EXPECT_DOUBLE_EQ(*back.matches[0].elo_a_before, 2087.25);

  const auto ratings = parse_ratings(ratings_csv({{"France", 2087.25}, {"Germany", 1936}}, Date(2021, 6, 11), {}), "r.csv");
  ASSERT_EQ(ratings.size(), 2u);
  EXPECT_DOUBLE_EQ(ratings[0].points, 2087.25);
  EXPECT_EQ(ratings[1].as_of, Date(2021, 6, 11));
}

TEST(ReportIo, WriteCreatesDirectoriesAndReplaces) {
  const auto dir = scratch("write");
  const auto path = dir / "a" / "b" / "out.csv";
  write_text_file(path, "first\n");
  write_text_file(path, "second\n");
  EXPECT_EQ(read_text_file(path), "second\n");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST(ReportIo, UnwritableDestinationIsAnIoError) {
  const auto dir = scratch("blocked");
  write_text_file(dir / "plain_file", "x");
  EXPECT_THROW(write_text_file(dir / "plain_file" / "child.csv", "y"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(ReportIo, Sha256MatchesKnownDigests) {
  const auto dir = scratch("sha");
  write_text_file(dir / "abc", "abc");
  write_text_file(dir / "empty", "");
  EXPECT_EQ(sha256_file(dir / "abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_file(dir / "empty"), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_THROW(sha256_file(dir / "missing"), IoError);
  std::filesystem::remove_all(dir);
}
