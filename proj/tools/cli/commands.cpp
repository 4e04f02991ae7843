#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "zigpcast/data_io.hpp"
#include "zigpcast/elo.hpp"
#include "zigpcast/errors.hpp"
#include "zigpcast/match_forecast.hpp"
#include "zigpcast/metrics.hpp"
#include "zigpcast/model_io.hpp"
#include "zigpcast/regression.hpp"
#include "zigpcast/report_io.hpp"
#include "zigpcast/tournament.hpp"

#ifndef ZIGPCAST_VERSION
#define ZIGPCAST_VERSION "0.0.0"
#endif

namespace zigpcast::cli {

namespace fs = std::filesystem;

Metadata RunManifest::to_metadata() const {
  Metadata meta;
  meta.emplace_back("tool", "zigpcast");
  meta.emplace_back("tool_version", ZIGPCAST_VERSION);
  meta.emplace_back("subcommand", subcommand);
  for (const auto& [role, path] : inputs) meta.emplace_back("input." + role, path);
  if (seed) meta.emplace_back("seed", std::to_string(*seed));
  if (n_runs) meta.emplace_back("n_runs", std::to_string(*n_runs));
  if (!reference_date.empty()) meta.emplace_back("reference_date", reference_date);
  if (!output.empty()) meta.emplace_back("output", output);
  for (std::size_t i = 0; i < overrides.size(); ++i) meta.emplace_back(fmt::format("override.{}", i + 1), overrides[i]);
  return meta;
}

namespace {

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> sets;
};

void add_config_flags(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("--config", args.config_path,
                  fmt::format("Engine configuration file (default: ${}/engine.cfg when present)", kConfigDirEnv));
  cmd->add_option("--set", args.sets, "Override one configuration key, KEY=VALUE (repeatable)");
}

EngineConfig resolve_config(const ConfigArgs& args, const std::vector<std::string>& extra_sets, RunManifest& manifest) {
  std::string text;
  std::string source = "<defaults>";
  fs::path path = args.config_path;
  if (path.empty()) {
    if (const char* dir = std::getenv(kConfigDirEnv); dir && *dir) {
      const fs::path candidate = fs::path(dir) / "engine.cfg";
      if (fs::exists(candidate)) path = candidate;
    }
  }
  if (!path.empty()) {
    text = read_text_file(path);
    source = path.string();
    manifest.inputs.emplace_back("config", path.string());
  }
  std::vector<std::string> sets = args.sets;
  sets.insert(sets.end(), extra_sets.begin(), extra_sets.end());
  for (const auto& s : sets) {
    if (s.find('=') == std::string::npos) throw ConfigError(fmt::format("--set '{}': expected KEY=VALUE", s));
    if (!text.empty() && text.back() != '\n') text += '\n';
    text += s + "\n";
    manifest.overrides.push_back(s);
  }
  if (!sets.empty()) source += " + --set";
  return parse_config(text, source);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<TeamId> teams_from_fixtures(const fs::path& path) {
  std::set<TeamId> teams;
  for (const auto& f : load_fixtures(path)) {
    if (f.stage != Stage::Group) continue;
    teams.insert(f.slot_a);
    teams.insert(f.slot_b);
  }
  return {teams.begin(), teams.end()};
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(err, "warning: {}\n", w);
}

// Matches with pre-match Elo: annotated from the file itself or replayed from
// seed ratings when given.
std::vector<MatchRecord> load_rated_matches(const std::string& matches_path, const std::string& seeds_path,
                                            const EngineConfig& cfg, RunManifest& manifest, std::ostream& err) {
  const auto types = cfg.match_types();
  auto load = load_matches(matches_path, {}, &types);
  print_warnings(err, load.warnings);
  manifest.inputs.emplace_back("matches", matches_path);
  if (seeds_path.empty()) return std::move(load.matches);
  manifest.inputs.emplace_back("seeds", seeds_path);
  const auto seeds = load_ratings(seeds_path);
  return replay_history(seeds, std::move(load.matches), cfg.k_table).matches;
}

// Restricts to the configured window and settles the weighting reference
// date (configured, or the day after the latest match).
std::vector<MatchRecord> windowed(std::vector<MatchRecord> matches, EngineConfig& cfg, RunManifest& manifest,
                                  std::ostream& err) {
  std::erase_if(matches, [&](const MatchRecord& m) { return !cfg.window.contains(m.date); });
  if (matches.empty()) throw ConfigError("no matches inside the configured date window");
  const Date reference = cfg.reference_date.value_or(matches.back().date.plus_days(1));
  const auto before = matches.size();
  std::erase_if(matches, [&](const MatchRecord& m) { return reference < m.date; });
  if (matches.size() != before) {
    fmt::print(err, "warning: {} matches after the reference date {} ignored\n", before - matches.size(),
               reference.iso());
  }
  if (matches.empty()) throw ConfigError(fmt::format("no matches on or before the reference date {}", reference.iso()));
  cfg.weights.reference_date = reference;
  manifest.reference_date = reference.iso();
  return matches;
}

std::vector<std::string> window_sets(const std::string& start, const std::string& end, const std::string& reference) {
  std::vector<std::string> sets;
  if (!start.empty()) sets.push_back("window_start=" + start);
  if (!end.empty()) sets.push_back("window_end=" + end);
  if (!reference.empty()) sets.push_back("reference_date=" + reference);
  return sets;
}

struct TournamentInputs {
  std::string models;
  std::string fixtures;
  std::string allocation;
  std::string ratings;
  std::uint64_t n_runs = 100000;
  std::uint64_t seed = 0;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

void add_tournament_flags(CLI::App* cmd, TournamentInputs& in, bool required) {
  cmd->add_option("--models", in.models, "Team model file (JSON)")->required(required);
  cmd->add_option("--fixtures", in.fixtures, "Tournament fixtures (CSV or JSON)")
      ->required(required);
  cmd->add_option("--allocation", in.allocation, "Third-place allocation table (CSV)")
      ->required(required);
  cmd->add_option("--ratings", in.ratings, "Elo ratings at tournament start (CSV)")
      ->required(required);
  cmd->add_option("--n-runs", in.n_runs, "Number of simulated tournaments")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--seed", in.seed, "Master random seed")->capture_default_str();
  cmd->add_option("--workers", in.workers, "Worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);
}

struct Simulation {
  SimulationAggregate aggregate;
  std::string model_hash;
};

Simulation simulate(const TournamentInputs& in, const EngineConfig& cfg, RunManifest& manifest) {
  manifest.inputs.emplace_back("models", in.models);
  manifest.inputs.emplace_back("fixtures", in.fixtures);
  manifest.inputs.emplace_back("allocation", in.allocation);
  manifest.inputs.emplace_back("ratings", in.ratings);
  manifest.seed = in.seed;
  manifest.n_runs = in.n_runs;
  const auto models = read_models(in.models);
  const auto plan = load_tournament(in.fixtures, in.allocation);
  const auto ratings = load_ratings(in.ratings);
  const auto elo = latest_ratings(ratings);
  check_ratings_cover(plan, elo);
  const NestedZigpSampler sampler(models.models);
  MonteCarloOptions opts;
  opts.n_runs = in.n_runs;
  opts.seed = in.seed;
  opts.workers = in.workers;
  opts.tournament = cfg.tournament;
  return {monte_carlo(plan, sampler, elo, opts), sha256_file(in.models)};
}

void write_output(const fs::path& path, const std::string& text, std::ostream& out) {
  write_text_file(path, text);
  fmt::print(out, "wrote {}\n", path.string());
}

bool wants(const std::string& format, std::string_view kind) { return format == "both" || format == kind; }

// ---------------------------------------------------------------- replay-elo

struct ReplayArgs {
  ConfigArgs config;
  std::string matches, seeds, out, ratings_out;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.subcommand = "replay-elo";
  manifest.output = a.out;
  const auto cfg = resolve_config(a.config, {}, manifest);
  const auto types = cfg.match_types();
  auto load = load_matches(a.matches, {}, &types);
  print_warnings(err, load.warnings);
  manifest.inputs.emplace_back("matches", a.matches);
  manifest.inputs.emplace_back("seeds", a.seeds);
  const auto seeds = load_ratings(a.seeds);
  const auto result = replay_history(seeds, std::move(load.matches), cfg.k_table);
  const auto meta = manifest.to_metadata();
  write_output(a.out, annotated_matches_csv(result.matches, meta), out);
  if (!a.ratings_out.empty()) {
    const Date as_of = result.matches.empty() ? Date{} : result.matches.back().date.plus_days(1);
    write_output(a.ratings_out, ratings_csv(result.final_ratings, as_of, meta), out);
  }
  fmt::print(out, "replayed {} matches, {} rated teams\n", result.matches.size(), result.final_ratings.size());
  return kExitOk;
}

// ----------------------------------------------------------------------- fit

struct FitArgs {
  ConfigArgs config;
  std::string matches, seeds, teams, fixtures, out, gof_out;
  std::string window_start, window_end, reference_date;
  std::uint64_t seed = 0;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.subcommand = "fit";
  manifest.seed = a.seed;
  manifest.output = a.out;
  auto cfg = resolve_config(a.config, window_sets(a.window_start, a.window_end, a.reference_date), manifest);
  auto matches = windowed(load_rated_matches(a.matches, a.seeds, cfg, manifest, err), cfg, manifest, err);

  std::vector<TeamId> teams;
  if (!a.teams.empty()) teams = split_list(a.teams);
  if (!a.fixtures.empty()) {
    manifest.inputs.emplace_back("fixtures", a.fixtures);
    const auto more = teams_from_fixtures(a.fixtures);
    teams.insert(teams.end(), more.begin(), more.end());
  }
  std::sort(teams.begin(), teams.end());
  teams.erase(std::unique(teams.begin(), teams.end()), teams.end());
  if (teams.empty()) throw ConfigError("no teams to fit: pass --teams or --fixtures");

  FitOptions options;
  options.seed = a.seed;
  const auto summary = fit_team_models(matches, teams, cfg.weights, options, a.workers);
  for (const auto& f : summary.failures) {
    fmt::print(err, "{}: {} regression: {}\n", f.team, to_string(f.kind), f.message);
  }
  for (const auto& [team, model] : summary.models) {
    for (auto kind : {RegressionKind::Attack, RegressionKind::Defense, RegressionKind::Nested}) {
      for (const auto& w : model.fit(kind).warnings) fmt::print(err, "warning: {} {}: {}\n", team, to_string(kind), w);
    }
  }

  ModelFile file;
  file.metadata = manifest.to_metadata();
  file.metadata.emplace_back("matches_used", std::to_string(matches.size()));
  file.models = TeamModelSet(summary.models);
  write_output(a.out, serialize_models(file), out);
  if (!a.gof_out.empty()) write_output(a.gof_out, gof_report_csv(file.models, file.metadata), out);

  std::vector<TeamId> missing;
  for (const auto& t : teams)
    if (!summary.models.contains(t)) missing.push_back(t);
  fmt::print(out, "fitted {}/{} teams on {} matches (reference date {})\n", summary.models.size(), teams.size(),
             matches.size(), manifest.reference_date);
  if (!missing.empty()) {
    fmt::print(err, "error: no model for {}\n", fmt::join(missing, ", "));
    return kExitFit;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ forecast

struct ForecastArgs {
  ConfigArgs config;
  std::string models, team_a, team_b, venue = kNeutralVenue, ratings, out, format = "both";
  std::optional<double> elo_a, elo_b;
  std::optional<int> cap;
  bool svg = false;
};

int cmd_forecast(const ForecastArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.subcommand = "forecast";
  manifest.output = a.out;
  const auto cfg = resolve_config(a.config, {}, manifest);
  manifest.inputs.emplace_back("models", a.models);
  const auto file = read_models(a.models);

  MatchContext ctx{a.team_a, a.team_b, 0.0, 0.0, a.venue};
  if (a.elo_a && a.elo_b) {
    ctx.elo_a = *a.elo_a;
    ctx.elo_b = *a.elo_b;
  } else if (!a.ratings.empty()) {
    manifest.inputs.emplace_back("ratings", a.ratings);
    const auto ratings = latest_ratings(load_ratings(a.ratings));
    auto find = [&](const TeamId& t, const std::optional<double>& given) {
      if (given) return *given;
      auto it = ratings.find(t);
      if (it == ratings.end()) throw ConfigError(fmt::format("{}: no Elo rating for '{}'", a.ratings, t));
      return it->second;
    };
    ctx.elo_a = find(a.team_a, a.elo_a);
    ctx.elo_b = find(a.team_b, a.elo_b);
  } else {
    throw ConfigError("pass --ratings or both --elo-a and --elo-b");
  }
  if (a.team_a == a.team_b) throw ConfigError("a team cannot play itself");

  const int cap = a.cap.value_or(cfg.grid_cap);
  const auto grid = score_grid(file.models, ctx, cap);
  auto meta = manifest.to_metadata();
  meta.emplace_back("model_sha256", sha256_file(a.models));
  meta.emplace_back("venue_country", ctx.neutral() ? std::string(kNeutralVenue) : ctx.venue_country);
  meta.emplace_back("elo_a", fmt::format("{}", ctx.elo_a));
  meta.emplace_back("elo_b", fmt::format("{}", ctx.elo_b));

  if (!a.out.empty()) {
    if (wants(a.format, "csv")) write_output(a.out + ".csv", grid_csv(grid, meta), out);
    if (wants(a.format, "json")) write_output(a.out + ".json", grid_json(grid, meta), out);
    if (a.svg) write_output(a.out + ".svg", grid_svg(grid), out);
  }

  const auto ordered = ctx.ordered();
  const auto& strong = file.models.at(ordered.team_a);
  const auto& weak = file.models.at(ordered.team_b);
  const auto sp = stronger_params(strong, weak, ordered);
  fmt::print(out, "{} v {} ({})\n", ctx.team_a, ctx.team_b, ctx.neutral() ? "neutral venue" : ctx.venue_country);
  fmt::print(out, "stronger {}: mu={:.6f} phi={:.6f} omega={:.6f} mean={:.6f}\n", ordered.team_a, sp.mu, sp.phi,
             sp.omega, sp.mean());
  for (int g = 0; g <= 3; ++g) {
    const auto wp = weaker_params_given(weak, ordered, g);
    fmt::print(out, "weaker {} | {} goals: mu={:.6f} phi={:.6f} omega={:.6f}\n", ordered.team_b, g, wp.mu, wp.phi,
               wp.omega);
  }
  const auto best = grid.most_likely();
  fmt::print(out, "P({} win)={:.6f} P(draw)={:.6f} P({} win)={:.6f} most likely {}-{}\n", ctx.team_a, grid.win_a(),
             grid.draw(), ctx.team_b, grid.win_b(), best.a, best.b);
  if (grid.mass_before_renormalization < 0.999) {
    fmt::print(err, "warning: only {:.4f} of the mass lies within {} goals\n", grid.mass_before_renormalization, cap);
  }
  return kExitOk;
}

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
  ConfigArgs config;
  TournamentInputs tournament;
  std::string out_dir, format = "both";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream&) {
  RunManifest manifest;
  manifest.subcommand = "simulate";
  manifest.output = a.out_dir;
  const auto cfg = resolve_config(a.config, {}, manifest);
  const auto sim = simulate(a.tournament, cfg, manifest);
  auto meta = manifest.to_metadata();
  meta.emplace_back("model_sha256", sim.model_hash);

  const auto groups = sim.aggregate.group_table();
  const auto stages = sim.aggregate.stage_table();
  if (!a.out_dir.empty()) {
    const fs::path dir = a.out_dir;
    if (wants(a.format, "csv")) {
      write_output(dir / "group_probabilities.csv", group_table_csv(groups, meta), out);
      write_output(dir / "stage_probabilities.csv", stage_table_csv(stages, meta), out);
    }
    if (wants(a.format, "json")) {
      write_output(dir / "group_probabilities.json", group_table_json(groups, meta), out);
      write_output(dir / "stage_probabilities.json", stage_table_json(stages, meta), out);
    }
    write_output(dir / "outcome_distributions.csv",
                 distributions_csv(outcome_distributions(sim.aggregate), meta), out);
  }
  fmt::print(out, "{} runs, seed {}\n{:<18} {:>9} {:>9} {:>9}\n", sim.aggregate.run_count(), a.tournament.seed,
             "team", "champion", "final", "semifinal");
  for (const auto& r : stages) {
    fmt::print(out, "{:<18} {:>9.6f} {:>9.6f} {:>9.6f}\n", r.team, r.champion, r.final, r.semifinal);
  }
  return kExitOk;
}

// ------------------------------------------------------------------ validate

struct ValidateArgs {
  ConfigArgs config;
  TournamentInputs tournament;
  std::string realized, distributions, out_dir;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream&) {
  RunManifest manifest;
  manifest.subcommand = "validate";
  manifest.output = a.out_dir;
  const auto cfg = resolve_config(a.config, {}, manifest);
  manifest.inputs.emplace_back("realized", a.realized);
  const auto realized = load_realized(a.realized);

  std::vector<OutcomeDistribution> dists;
  std::string model_hash;
  if (!a.distributions.empty()) {
    manifest.inputs.emplace_back("distributions", a.distributions);
    dists = load_distributions(a.distributions);
  } else {
    const auto& t = a.tournament;
    if (t.models.empty() || t.fixtures.empty() || t.allocation.empty() || t.ratings.empty()) {
      throw ConfigError("pass --distributions, or --models with --fixtures, --allocation and --ratings");
    }
    auto sim = simulate(t, cfg, manifest);
    dists = outcome_distributions(sim.aggregate);
    model_hash = sim.model_hash;
  }
  const auto report = backtest(dists, realized);
  auto meta = manifest.to_metadata();
  if (!model_hash.empty()) meta.emplace_back("model_sha256", model_hash);
  if (!a.out_dir.empty()) {
    const fs::path dir = a.out_dir;
    write_output(dir / "backtest.csv", backtest_csv(report, meta), out);
    write_output(dir / "backtest.json", backtest_json(report, meta), out);
    if (a.distributions.empty()) write_output(dir / "outcome_distributions.csv", distributions_csv(dists, meta), out);
  }
  fmt::print(out, "teams {}\nMLD   {}\nBrier {:.6f}\nRPS   {:.6f}\n", report.teams.size(), report.mld_total,
             report.brier_total, report.rps_total);
  return kExitOk;
}

// ----------------------------------------------------------------------- gof

struct GofArgs {
  ConfigArgs config;
  std::string models, matches, seeds, out;
  std::string window_start, window_end, reference_date;
};

int cmd_gof(const GofArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.subcommand = "gof";
  manifest.output = a.out;
  auto cfg = resolve_config(a.config, window_sets(a.window_start, a.window_end, a.reference_date), manifest);
  manifest.inputs.emplace_back("models", a.models);
  auto file = read_models(a.models);
  const auto matches = windowed(load_rated_matches(a.matches, a.seeds, cfg, manifest, err), cfg, manifest, err);

  TeamModelSet updated;
  for (auto [team, model] : file.models.models()) {
    for (auto kind : {RegressionKind::Attack, RegressionKind::Defense, RegressionKind::Nested}) {
      RegressionFit& fit = kind == RegressionKind::Attack    ? model.attack
                           : kind == RegressionKind::Defense ? model.defense
                                                             : model.nested;
      try {
        fit.gof = chi_square_gof(team, kind, matches, model, cfg.weights);
      } catch (const InsufficientDataError& e) {
        fit.gof.reset();
        fmt::print(err, "warning: {}\n", e.what());
      }
    }
    updated.insert(std::move(model));
  }
  auto meta = manifest.to_metadata();
  meta.emplace_back("model_sha256", sha256_file(a.models));
  const auto report = gof_report_csv(updated, meta);
  if (a.out.empty()) {
    out << report;
  } else {
    write_output(a.out, report, out);
  }
  return kExitOk;
}

void add_window_flags(CLI::App* cmd, std::string& start, std::string& end, std::string& reference) {
  cmd->add_option("--window-start", start, "First match date used (YYYY-MM-DD)");
  cmd->add_option("--window-end", end, "Last match date used (YYYY-MM-DD)");
  cmd->add_option("--reference-date", reference,
                  "Date the time-decay weights are measured from (default: day after the latest match)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-inflated generalized Poisson football forecasting engine", "zigpcast"};
  app.set_version_flag("--version", ZIGPCAST_VERSION);
  app.require_subcommand(1);

  ReplayArgs replay;
  auto* c_replay = app.add_subcommand("replay-elo", "Replay a match history from seed ratings, annotating pre-match Elo");
  add_config_flags(c_replay, replay.config);
  c_replay->add_option("--matches", replay.matches, "Match history (CSV)")->required();
  c_replay->add_option("--seeds", replay.seeds, "Seed ratings (CSV)")->required();
  c_replay->add_option("--out", replay.out, "Annotated match file to write")->required();
  c_replay->add_option("--ratings-out", replay.ratings_out, "Final ratings file to write");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Fit attack, defense and nested regressions per team");
  add_config_flags(c_fit, fit.config);
  c_fit->add_option("--matches", fit.matches, "Match history (CSV), annotated unless --seeds is given")
      ->required();
  c_fit->add_option("--seeds", fit.seeds, "Seed ratings; replays Elo before fitting");
  c_fit->add_option("--teams", fit.teams, "Comma-separated teams to fit");
  c_fit->add_option("--fixtures", fit.fixtures, "Fit every team of this tournament's group stage");
  c_fit->add_option("--out", fit.out, "Model file to write (JSON)")->required();
  c_fit->add_option("--gof-out", fit.gof_out, "Goodness-of-fit report to write (CSV)");
  c_fit->add_option("--seed", fit.seed, "Seed for the optimizer's jittered starts")->capture_default_str();
  c_fit->add_option("--workers", fit.workers, "Worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);
  add_window_flags(c_fit, fit.window_start, fit.window_end, fit.reference_date);

  ForecastArgs fc;
  auto* c_fc = app.add_subcommand("forecast", "Score probability grid for one match");
  add_config_flags(c_fc, fc.config);
  c_fc->add_option("--models", fc.models, "Team model file (JSON)")->required();
  c_fc->add_option("--team-a", fc.team_a, "First team (rows of the grid)")->required();
  c_fc->add_option("--team-b", fc.team_b, "Second team (columns of the grid)")->required();
  c_fc->add_option("--venue", fc.venue, "Host country, or NEUTRAL")->capture_default_str();
  c_fc->add_option("--ratings", fc.ratings, "Elo ratings (CSV)");
  c_fc->add_option("--elo-a", fc.elo_a, "Elo of the first team (overrides --ratings)");
  c_fc->add_option("--elo-b", fc.elo_b, "Elo of the second team (overrides --ratings)");
  c_fc->add_option("--cap", fc.cap, "Largest goal count in the grid (default: grid_cap)")->check(CLI::Range(10, 200));
  c_fc->add_option("--out", fc.out, "Output path prefix; writes PREFIX.csv / PREFIX.json");
  c_fc->add_option("--format", fc.format, "csv, json or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json", "both"}));
  c_fc->add_flag("--svg", fc.svg, "Also write PREFIX.svg, a heatmap of scores up to 6-6");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo tournament simulation");
  add_config_flags(c_sim, sim.config);
  add_tournament_flags(c_sim, sim.tournament, true);
  c_sim->add_option("--out-dir", sim.out_dir, "Directory for probability tables");
  c_sim->add_option("--format", sim.format, "csv, json or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json", "both"}));

  ValidateArgs val;
  auto* c_val = app.add_subcommand("validate", "Score forecasts against a realized tournament (MLD, Brier, RPS)");
  add_config_flags(c_val, val.config);
  c_val->add_option("--realized", val.realized, "Realized result ranks (CSV)")->required();
  c_val->add_option("--distributions", val.distributions, "Precomputed outcome distributions (CSV)");
  add_tournament_flags(c_val, val.tournament, false);
  c_val->add_option("--out-dir", val.out_dir, "Directory for the backtest report");

  GofArgs gof;
  auto* c_gof = app.add_subcommand("gof", "Chi-square goodness of fit of a model file on a match history");
  add_config_flags(c_gof, gof.config);
  c_gof->add_option("--models", gof.models, "Team model file (JSON)")->required();
  c_gof->add_option("--matches", gof.matches, "Match history (CSV)")->required();
  c_gof->add_option("--seeds", gof.seeds, "Seed ratings; replays Elo first");
  c_gof->add_option("--out", gof.out, "Report to write (default: stdout)");
  add_window_flags(c_gof, gof.window_start, gof.window_end, gof.reference_date);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << ZIGPCAST_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\nrun with --help for usage\n", e.what());
    return kExitConfig;
  }

  try {
    if (c_replay->parsed()) return cmd_replay(replay, out, err);
    if (c_fit->parsed()) return cmd_fit(fit, out, err);
    if (c_fc->parsed()) return cmd_forecast(fc, out, err);
    if (c_sim->parsed()) return cmd_simulate(sim, out, err);
    if (c_val->parsed()) return cmd_validate(val, out, err);
    if (c_gof->parsed()) return cmd_gof(gof, out, err);
  } catch (const FitError& e) {
    fmt::print(err, "fit error: {}\n", e.what());
    return kExitFit;
  } catch (const IoError& e) {
    fmt::print(err, "i/o error: {}\n", e.what());
    return kExitIo;
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace zigpcast::cli
