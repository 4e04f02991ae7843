#include "zigpcast/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "zigpcast/csv.hpp"
#include "zigpcast/errors.hpp"

namespace zigpcast {

namespace {

int parse_int(const std::string& text, const std::string& where, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: {} '{}' is not an integer", where, what, text));
  }
  return v;
}

double parse_double(const std::string& text, const std::string& where, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: {} '{}' is not a finite number", where, what, text));
  }
  return v;
}

Date parse_date(const std::string& text, const std::string& where, std::string_view what) {
  auto d = Date::try_parse(text);
  if (!d) throw ConfigError(fmt::format("{}: {} '{}' is not an ISO-8601 date (YYYY-MM-DD)", where, what, text));
  return *d;
}

bool parse_bool(const std::string& text, const std::string& where, std::string_view what) {
  if (text.empty() || text == "0" || text == "false" || text == "FALSE") return false;
  if (text == "1" || text == "true" || text == "TRUE") return true;
  throw ConfigError(fmt::format("{}: {} '{}' must be 0/1/true/false", where, what, text));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::set<std::string> EngineConfig::match_types() const {
  std::set<std::string> out;
  for (const auto& [code, _] : weights.importance) {
    if (k_table.contains(code)) out.insert(code);
  }
  return out;
}

void EngineConfig::validate() const {
  weights.validate();
  for (const auto& [code, _] : weights.importance) {
    if (!k_table.contains(code)) throw ConfigError(fmt::format("match type '{}' has an importance but no K weight", code));
  }
  for (const auto& [code, _] : k_table.entries()) {
    if (!weights.importance.contains(code)) {
      throw ConfigError(fmt::format("match type '{}' has a K weight but no importance", code));
    }
  }
  if (grid_cap < 10) throw ConfigError(fmt::format("grid_cap must be at least 10 (got {})", grid_cap));
  if (!(tournament.k_weight > 0.0)) throw ConfigError("tournament_k must be positive");
  if (!(tournament.extra_time_scale > 0.0)) throw ConfigError("extra_time_scale must be positive");
  if (window.start && window.end && *window.end < *window.start) {
    throw ConfigError("window_end lies before window_start");
  }
}

EngineConfig parse_config(std::string_view text, const std::string& source) {
  EngineConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = fmt::format("{}:{}", source, line_no);
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("{}: expected 'key = value'", where));
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key == "half_period_days") {
      cfg.weights.half_period_days = parse_int(value, where, key);
    } else if (key == "reference_date") {
      cfg.reference_date = parse_date(value, where, key);
      cfg.weights.reference_date = *cfg.reference_date;
    } else if (key == "window_start") {
      cfg.window.start = parse_date(value, where, key);
    } else if (key == "window_end") {
      cfg.window.end = parse_date(value, where, key);
    } else if (key == "grid_cap") {
      cfg.grid_cap = parse_int(value, where, key);
    } else if (key == "tournament_k") {
      cfg.tournament.k_weight = parse_double(value, where, key);
    } else if (key == "extra_time_scale") {
      cfg.tournament.extra_time_scale = parse_double(value, where, key);
    } else if (key.starts_with("k.") && key.size() > 2) {
      try {
        cfg.k_table.set(key.substr(2), parse_double(value, where, key));
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", where, e.what()));
      }
    } else if (key.starts_with("importance.") && key.size() > 11) {
      const double w = parse_double(value, where, key);
      if (!(w > 0.0)) throw ConfigError(fmt::format("{}: importance must be positive", where));
      cfg.weights.importance[key.substr(11)] = w;
    } else {
      throw ConfigError(fmt::format("{}: unknown configuration key '{}'", where, key));
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
  return cfg;
}

EngineConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path), path.string()); }

MatchLoad parse_matches(std::string_view text, const std::string& source, const DateWindow& window,
                        const std::set<std::string>* valid_types) {
  const auto table = csv::Table::parse(text, source);
  const auto c_date = table.column("date");
  const auto c_a = table.column("team_a");
  const auto c_b = table.column("team_b");
  const auto c_ga = table.column("goals_a");
  const auto c_gb = table.column("goals_b");
  const auto c_type = table.column("match_type");
  const auto c_venue = table.find_column("venue_country");
  const auto c_neutral = table.find_column("neutral");
  const auto c_elo_a = table.find_column("elo_a_before");
  const auto c_elo_b = table.find_column("elo_b_before");

  MatchLoad load;
  std::map<std::tuple<Date, TeamId, TeamId>, int> seen;
  std::size_t dropped = 0;
  for (const auto& row : table.rows()) {
    const std::string where = table.where(row);
    const auto& f = row.fields;
    MatchRecord m;
    m.date = parse_date(f[c_date], where, "date");
    m.team_a = f[c_a];
    m.team_b = f[c_b];
    if (m.team_a.empty() || m.team_b.empty()) throw ConfigError(fmt::format("{}: empty team name", where));
    if (m.team_a == m.team_b) throw ConfigError(fmt::format("{}: team '{}' plays itself", where, m.team_a));
    m.goals_a = parse_int(f[c_ga], where, "goals_a");
    m.goals_b = parse_int(f[c_gb], where, "goals_b");
    if (m.goals_a < 0 || m.goals_b < 0) throw ConfigError(fmt::format("{}: negative goal count", where));
    m.match_type = f[c_type];
    if (valid_types && !valid_types->contains(m.match_type)) {
      throw ConfigError(fmt::format("{}: unknown match type '{}' (valid: {})", where, m.match_type,
                                    fmt::join(*valid_types, ", ")));
    }
    if (c_venue) m.venue_country = f[*c_venue];
    if (c_neutral) m.neutral = parse_bool(f[*c_neutral], where, "neutral");
    if (m.venue_country == "NEUTRAL") {
      m.neutral = true;
      m.venue_country.clear();
    }
    if (c_elo_a && !f[*c_elo_a].empty()) m.elo_a_before = parse_double(f[*c_elo_a], where, "elo_a_before");
    if (c_elo_b && !f[*c_elo_b].empty()) m.elo_b_before = parse_double(f[*c_elo_b], where, "elo_b_before");
    if (m.elo_a_before.has_value() != m.elo_b_before.has_value()) {
      throw ConfigError(fmt::format("{}: Elo-before given for only one side", where));
    }
    auto [it, inserted] = seen.emplace(std::tuple{m.date, m.team_a, m.team_b}, row.line);
    if (!inserted) {
      throw ConfigError(fmt::format("{}: duplicate of line {} ({} {} v {})", where, it->second, m.date.iso(), m.team_a,
                                    m.team_b));
    }
    if (!window.contains(m.date)) {
      ++dropped;
      continue;
    }
    load.matches.push_back(std::move(m));
  }
  std::stable_sort(load.matches.begin(), load.matches.end(),
                   [](const MatchRecord& x, const MatchRecord& y) { return x.date < y.date; });
  if (load.matches.empty() && !table.rows().empty()) {
    load.warnings.push_back(fmt::format("{}: no matches inside the date window ({} dropped)", source, dropped));
  }
  return load;
}

MatchLoad load_matches(const std::filesystem::path& path, const DateWindow& window,
                       const std::set<std::string>* valid_types) {
  return parse_matches(read_text_file(path), path.string(), window, valid_types);
}

std::vector<EloRating> parse_ratings(std::string_view text, const std::string& source) {
  const auto table = csv::Table::parse(text, source);
  const auto c_team = table.column("team");
  const auto c_elo = table.column("elo");
  const auto c_date = table.column("as_of");
  std::vector<EloRating> out;
  std::map<std::pair<TeamId, Date>, int> seen;
  for (const auto& row : table.rows()) {
    const std::string where = table.where(row);
    EloRating r{row.fields[c_team], parse_double(row.fields[c_elo], where, "elo"),
                parse_date(row.fields[c_date], where, "as_of")};
    if (r.team.empty()) throw ConfigError(fmt::format("{}: empty team name", where));
    auto [it, inserted] = seen.emplace(std::pair{r.team, r.as_of}, row.line);
    if (!inserted) {
      throw ConfigError(fmt::format("{}: second rating for '{}' on {} (first on line {})", where, r.team,
                                    r.as_of.iso(), it->second));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EloRating> load_ratings(const std::filesystem::path& path) {
  return parse_ratings(read_text_file(path), path.string());
}

LiveElo latest_ratings(std::span<const EloRating> ratings) {
  std::map<TeamId, const EloRating*> latest;
  for (const auto& r : ratings) {
    auto& slot = latest[r.team];
    if (!slot || slot->as_of < r.as_of) slot = &r;
  }
  LiveElo out;
  for (const auto& [team, r] : latest) out[team] = r->points;
  return out;
}

std::vector<Fixture> parse_fixtures_csv(std::string_view text, const std::string& source) {
  const auto table = csv::Table::parse(text, source);
  const auto c_id = table.column("match_id");
  const auto c_stage = table.column("stage");
  const auto c_group = table.column("group");
  const auto c_a = table.column("slot_a");
  const auto c_b = table.column("slot_b");
  const auto c_venue = table.column("venue_country");
  const auto c_date = table.column("date");
  std::vector<Fixture> out;
  for (const auto& row : table.rows()) {
    const std::string where = table.where(row);
    const auto& f = row.fields;
    Fixture fx;
    fx.match_id = parse_int(f[c_id], where, "match_id");
    try {
      fx.stage = stage_from_string(f[c_stage]);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}: {}", where, e.what()));
    }
    if (fx.stage == Stage::Group) {
      if (f[c_group].size() != 1) throw ConfigError(fmt::format("{}: group must be a single letter", where));
      fx.group = f[c_group][0];
    } else if (!f[c_group].empty()) {
      throw ConfigError(fmt::format("{}: knockout fixture with a group letter", where));
    }
    fx.slot_a = f[c_a];
    fx.slot_b = f[c_b];
    fx.venue_country = f[c_venue];
    fx.date = parse_date(f[c_date], where, "date");
    out.push_back(std::move(fx));
  }
  return out;
}

std::vector<Fixture> parse_fixtures_json(std::string_view text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
  if (!doc.is_array()) throw ConfigError(fmt::format("{}: expected an array of fixtures", source));
  std::vector<Fixture> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = fmt::format("{}[{}]", source, i);
    try {
      const auto& j = doc[i];
      Fixture fx;
      fx.match_id = j.at("match_id").get<int>();
      fx.stage = stage_from_string(j.at("stage").get<std::string>());
      const auto group = j.value("group", std::string{});
      if (fx.stage == Stage::Group) {
        if (group.size() != 1) throw ConfigError("group must be a single letter");
        fx.group = group[0];
      }
      fx.slot_a = j.at("slot_a").get<std::string>();
      fx.slot_b = j.at("slot_b").get<std::string>();
      fx.venue_country = j.value("venue_country", std::string{});
      fx.date = parse_date(j.at("date").get<std::string>(), where, "date");
      out.push_back(std::move(fx));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("{}: {}", where, e.what()));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}: {}", where, e.what()));
    }
  }
  return out;
}

std::vector<Fixture> load_fixtures(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") return parse_fixtures_json(text, path.string());
  return parse_fixtures_csv(text, path.string());
}

AllocationTable parse_allocation(std::string_view text, const std::string& source) {
  const auto table = csv::Table::parse(text, source);
  const auto c_q = table.column("qualified");
  AllocationTable out;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < table.header().size(); ++i) {
    if (i == c_q) continue;
    out.winner_slots.push_back(table.header()[i]);
    cols.push_back(i);
  }
  for (const auto& row : table.rows()) {
    const std::string where = table.where(row);
    std::string key = row.fields[c_q];
    std::string sorted = key;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != key) throw ConfigError(fmt::format("{}: combination '{}' must list groups alphabetically", where, key));
    std::string value;
    for (auto c : cols) {
      if (row.fields[c].size() != 1) {
        throw ConfigError(fmt::format("{}: assignment '{}' must be a single group letter", where, row.fields[c]));
      }
      value += row.fields[c];
    }
    if (!out.assignment.emplace(key, value).second) {
      throw ConfigError(fmt::format("{}: combination '{}' listed twice", where, key));
    }
  }
  return out;
}

AllocationTable load_allocation(const std::filesystem::path& path) {
  return parse_allocation(read_text_file(path), path.string());
}

TournamentPlan load_tournament(const std::filesystem::path& fixtures, const std::filesystem::path& allocation) {
  auto fx = load_fixtures(fixtures);
  auto alloc = load_allocation(allocation);
  try {
    return TournamentPlan(std::move(fx), std::move(alloc));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{} / {}: {}", fixtures.string(), allocation.string(), e.what()));
  }
}

void check_ratings_cover(const TournamentPlan& plan, const LiveElo& ratings) {
  std::vector<TeamId> missing;
  for (const auto& t : plan.teams())
    if (!ratings.contains(t)) missing.push_back(t);
  if (!missing.empty()) throw ConfigError(fmt::format("no Elo rating for: {}", fmt::join(missing, ", ")));
}

std::vector<RealizedResult> parse_realized(std::string_view text, const std::string& source) {
  const auto table = csv::Table::parse(text, source);
  const auto c_team = table.column("team");
  const auto c_rank = table.column("rank");
  std::vector<RealizedResult> out;
  for (const auto& row : table.rows()) {
    const std::string where = table.where(row);
    RealizedResult r{row.fields[c_team], parse_int(row.fields[c_rank], where, "rank")};
    if (r.rank < 1 || r.rank > kResultRanks) {
      throw ConfigError(fmt::format("{}: rank {} outside 1..{}", where, r.rank, kResultRanks));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RealizedResult> load_realized(const std::filesystem::path& path) {
  return parse_realized(read_text_file(path), path.string());
}

constexpr double kDistributionRounding = 3.5e-6;

std::vector<OutcomeDistribution> parse_distributions(std::string_view text, const std::string& source) {
  const auto table = csv::Table::parse(text, source);
  const auto c_team = table.column("team");
  std::array<std::size_t, kResultRanks> cols{};
  for (int i = 0; i < kResultRanks; ++i) cols[static_cast<std::size_t>(i)] = table.column(fmt::format("p{}", i + 1));
  std::vector<OutcomeDistribution> out;
  for (const auto& row : table.rows()) {
    const std::string where = table.where(row);
    OutcomeDistribution d;
    d.team = row.fields[c_team];
    for (int i = 0; i < kResultRanks; ++i) {
      d.p[static_cast<std::size_t>(i)] =
          parse_double(row.fields[cols[static_cast<std::size_t>(i)]], where, fmt::format("p{}", i + 1));
    }
    // Files carry six decimals, so a row may miss 1 by up to 6 * 5e-7.
    const double sum = std::accumulate(d.p.begin(), d.p.end(), 0.0);
    if (std::abs(sum - 1.0) <= kDistributionRounding && sum > 0.0) {
      for (double& v : d.p) v /= sum;
    }
    try {
      d.validate();
    } catch (const DomainError& e) {
      throw ConfigError(fmt::format("{}: {}", where, e.what()));
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<OutcomeDistribution> load_distributions(const std::filesystem::path& path) {
  return parse_distributions(read_text_file(path), path.string());
}

}  // namespace zigpcast
