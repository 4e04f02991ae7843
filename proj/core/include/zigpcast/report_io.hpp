#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zigpcast/elo.hpp"
#include "zigpcast/match_forecast.hpp"
#include "zigpcast/metrics.hpp"
#include "zigpcast/regression.hpp"
#include "zigpcast/tournament.hpp"

namespace zigpcast {

// Ordered key/value provenance. CSV outputs carry it as leading
// "# key: value" lines, JSON outputs as a "metadata" object.
using Metadata = std::vector<std::pair<std::string, std::string>>;

// Fixed six-decimal rendering used for every probability column.
std::string format_probability(double p);

std::string group_table_csv(std::span<const GroupProbabilityRow> rows, const Metadata& meta);
std::string group_table_json(std::span<const GroupProbabilityRow> rows, const Metadata& meta);
std::string stage_table_csv(std::span<const StageProbabilityRow> rows, const Metadata& meta);
std::string stage_table_json(std::span<const StageProbabilityRow> rows, const Metadata& meta);

std::string grid_csv(const ScoreGrid& grid, const Metadata& meta);
std::string grid_json(const ScoreGrid& grid, const Metadata& meta);
std::string grid_svg(const ScoreGrid& grid);

std::string distributions_csv(std::span<const OutcomeDistribution> distributions, const Metadata& meta);
std::string backtest_csv(const BacktestReport& report, const Metadata& meta);
std::string backtest_json(const BacktestReport& report, const Metadata& meta);

// One row per team: p-value, statistic and df of each regression.
std::string gof_report_csv(const TeamModelSet& models, const Metadata& meta);

// Match file with elo_a_before / elo_b_before filled in.
std::string annotated_matches_csv(std::span<const MatchRecord> matches, const Metadata& meta);
std::string ratings_csv(const std::map<TeamId, double>& ratings, Date as_of, const Metadata& meta);

// Writes via a temporary sibling and rename; parent directories are created.
// Throws IoError when the destination is not writable.
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace zigpcast
