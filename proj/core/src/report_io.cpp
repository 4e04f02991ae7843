#include "zigpcast/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "zigpcast/csv.hpp"
#include "zigpcast/errors.hpp"

namespace zigpcast {

using nlohmann::ordered_json;

namespace {

std::string csv_header(const Metadata& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += fmt::format("# {}: {}\n", k, v);
  return out;
}

ordered_json meta_json(const Metadata& meta) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

// JSON numbers rounded to the same six decimals as the CSV columns.
double round6(double p) { return std::round(p * 1e6) / 1e6; }

std::string finish_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_probability(double p) { return fmt::format("{:.6f}", p); }

std::string group_table_csv(std::span<const GroupProbabilityRow> rows, const Metadata& meta) {
  std::string out = csv_header(meta);
  out += "group,team,group_first,group_second,third_qualified,group_exit,"
         "se_group_first,se_group_second,se_third_qualified,se_group_exit\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.group, csv::escape(r.team), format_probability(r.first),
                       format_probability(r.second), format_probability(r.third_qualified),
                       format_probability(r.eliminated), format_probability(r.se_first),
                       format_probability(r.se_second), format_probability(r.se_third_qualified),
                       format_probability(r.se_eliminated));
  }
  return out;
}

std::string group_table_json(std::span<const GroupProbabilityRow> rows, const Metadata& meta) {
  ordered_json j;
  j["metadata"] = meta_json(meta);
  auto arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"group", std::string(1, r.group)},
                   {"team", r.team},
                   {"group_first", round6(r.first)},
                   {"group_second", round6(r.second)},
                   {"third_qualified", round6(r.third_qualified)},
                   {"group_exit", round6(r.eliminated)},
                   {"se",
                    {{"group_first", round6(r.se_first)},
                     {"group_second", round6(r.se_second)},
                     {"third_qualified", round6(r.se_third_qualified)},
                     {"group_exit", round6(r.se_eliminated)}}}});
  }
  j["rows"] = arr;
  return finish_json(j);
}

std::string stage_table_csv(std::span<const StageProbabilityRow> rows, const Metadata& meta) {
  std::string out = csv_header(meta);
  out += "team,champion,final,semifinal,quarterfinal,last16,"
         "se_champion,se_final,se_semifinal,se_quarterfinal,se_last16\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv::escape(r.team), format_probability(r.champion),
                       format_probability(r.final), format_probability(r.semifinal),
                       format_probability(r.quarterfinal), format_probability(r.last16),
                       format_probability(r.se_champion), format_probability(r.se_final),
                       format_probability(r.se_semifinal), format_probability(r.se_quarterfinal),
                       format_probability(r.se_last16));
  }
  return out;
}

std::string stage_table_json(std::span<const StageProbabilityRow> rows, const Metadata& meta) {
  ordered_json j;
  j["metadata"] = meta_json(meta);
  auto arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"team", r.team},
                   {"champion", round6(r.champion)},
                   {"final", round6(r.final)},
                   {"semifinal", round6(r.semifinal)},
                   {"quarterfinal", round6(r.quarterfinal)},
                   {"last16", round6(r.last16)},
                   {"se",
                    {{"champion", round6(r.se_champion)},
                     {"final", round6(r.se_final)},
                     {"semifinal", round6(r.se_semifinal)},
                     {"quarterfinal", round6(r.se_quarterfinal)},
                     {"last16", round6(r.se_last16)}}}});
  }
  j["rows"] = arr;
  return finish_json(j);
}

std::string grid_csv(const ScoreGrid& grid, const Metadata& meta) {
  std::string out = csv_header(meta);
  out += fmt::format("# team_a: {}\n# team_b: {}\n", grid.team_a, grid.team_b);
  out += "goals_a,goals_b,probability\n";
  for (int a = 0; a <= grid.cap; ++a)
    for (int b = 0; b <= grid.cap; ++b) out += fmt::format("{},{},{}\n", a, b, format_probability(grid.at(a, b)));
  return out;
}

std::string grid_json(const ScoreGrid& grid, const Metadata& meta) {
  ordered_json j;
  j["metadata"] = meta_json(meta);
  j["team_a"] = grid.team_a;
  j["team_b"] = grid.team_b;
  j["cap"] = grid.cap;
  j["mass_before_renormalization"] = grid.mass_before_renormalization;
  j["summary"] = {{"win_a", round6(grid.win_a())},
                  {"draw", round6(grid.draw())},
                  {"win_b", round6(grid.win_b())},
                  {"over_2_5", round6(grid.over(2.5))}};
  auto rows = ordered_json::array();
  for (int a = 0; a <= grid.cap; ++a) {
    auto row = ordered_json::array();
    for (int b = 0; b <= grid.cap; ++b) row.push_back(round6(grid.at(a, b)));
    rows.push_back(row);
  }
  j["probabilities"] = rows;
  return finish_json(j);
}

std::string grid_svg(const ScoreGrid& grid) {
  constexpr int shown = 7;  // 0..6 goals each way, as in printed score charts
  constexpr int cell = 56;
  constexpr int margin = 64;
  const int n = std::min(shown, grid.cap + 1);
  const int size = margin + n * cell + 16;
  double peak = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) peak = std::max(peak, grid.at(a, b));

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      size);
  out += fmt::format("<text x=\"{}\" y=\"16\" text-anchor=\"middle\">goals {}</text>\n", margin + n * cell / 2,
                     grid.team_b);
  out += fmt::format(
      "<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">goals {1}</text>\n",
      margin + n * cell / 2, grid.team_a);
  for (int i = 0; i < n; ++i) {
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", margin + i * cell + cell / 2,
                       margin - 8, i);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", margin - 8,
                       margin + i * cell + cell / 2 + 4, i);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double p = grid.at(a, b);
      const double t = peak > 0 ? p / peak : 0.0;
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      out += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},{},255)\" stroke=\"#ffffff\"/>\n",
          margin + b * cell, margin + a * cell, cell, cell, shade, shade);
      out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"{}\">{:.1f}%</text>\n",
                         margin + b * cell + cell / 2, margin + a * cell + cell / 2 + 4,
                         t > 0.55 ? "#ffffff" : "#000000", 100.0 * p);
    }
  }
  out += "</svg>\n";
  return out;
}

std::string distributions_csv(std::span<const OutcomeDistribution> distributions, const Metadata& meta) {
  std::string out = csv_header(meta);
  out += "team,p1,p2,p3,p4,p5,p6\n";
  for (const auto& d : distributions) {
    out += csv::escape(d.team);
    for (double p : d.p) out += "," + format_probability(p);
    out += "\n";
  }
  return out;
}

std::string backtest_csv(const BacktestReport& report, const Metadata& meta) {
  std::string out = csv_header(meta);
  out += "team,realized_rank,predicted_rank,mld,brier,rps\n";
  for (const auto& t : report.teams) {
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f}\n", csv::escape(t.team), t.realized_rank, t.predicted_rank,
                       t.mld, t.brier, t.rps);
  }
  out += fmt::format("TOTAL,,,{:.6f},{:.6f},{:.6f}\n", report.mld_total, report.brier_total, report.rps_total);
  return out;
}

std::string backtest_json(const BacktestReport& report, const Metadata& meta) {
  ordered_json j;
  j["metadata"] = meta_json(meta);
  auto arr = ordered_json::array();
  for (const auto& t : report.teams) {
    arr.push_back({{"team", t.team},
                   {"realized_rank", t.realized_rank},
                   {"predicted_rank", t.predicted_rank},
                   {"mld", t.mld},
                   {"brier", t.brier},
                   {"rps", t.rps}});
  }
  j["teams"] = arr;
  j["totals"] = {{"mld", report.mld_total}, {"brier", report.brier_total}, {"rps", report.rps_total}};
  return finish_json(j);
}

std::string gof_report_csv(const TeamModelSet& models, const Metadata& meta) {
  std::string out = csv_header(meta);
  out += "team,attack_p,defense_p,nested_p,attack_statistic,attack_df,defense_statistic,defense_df,"
         "nested_statistic,nested_df,nested_fallback\n";
  auto p = [](const RegressionFit& f) { return f.gof ? format_probability(f.gof->p_value) : std::string("NA"); };
  auto stat = [](const RegressionFit& f) {
    return f.gof ? fmt::format("{:.6f},{}", f.gof->statistic, f.gof->df) : std::string("NA,NA");
  };
  for (const auto& [team, m] : models.models()) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", csv::escape(team), p(m.attack), p(m.defense), p(m.nested),
                       stat(m.attack), stat(m.defense), stat(m.nested), m.nested.fallback ? 1 : 0);
  }
  return out;
}

std::string annotated_matches_csv(std::span<const MatchRecord> matches, const Metadata& meta) {
  std::string out = csv_header(meta);
  out += "date,team_a,team_b,goals_a,goals_b,match_type,venue_country,neutral,elo_a_before,elo_b_before\n";
  auto elo = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); };
  for (const auto& m : matches) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", m.date.iso(), csv::escape(m.team_a), csv::escape(m.team_b),
                       m.goals_a, m.goals_b, csv::escape(m.match_type), csv::escape(m.venue_country),
                       m.neutral ? 1 : 0, elo(m.elo_a_before), elo(m.elo_b_before));
  }
  return out;
}

std::string ratings_csv(const std::map<TeamId, double>& ratings, Date as_of, const Metadata& meta) {
  std::string out = csv_header(meta);
  out += "team,elo,as_of\n";
  for (const auto& [team, elo] : ratings) out += fmt::format("{},{},{}\n", csv::escape(team), elo, as_of.iso());
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(fmt::format("cannot write '{}'", path.string()));
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw IoError(fmt::format("write to '{}' failed", path.string()));
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError(fmt::format("cannot replace '{}'", path.string()));
  }
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 initialisation failed");
  char buf[1 << 15];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace zigpcast
