#include <filesystem>
#include <random>

#include <benchmark/benchmark.h>

#include "zigpcast/data_io.hpp"
#include "zigpcast/match_forecast.hpp"
#include "zigpcast/regression.hpp"
#include "zigpcast/tournament.hpp"
#include "zigpcast/zigp.hpp"

using namespace zigpcast;

namespace {

const std::filesystem::path kData(ZIGPCAST_DATA_DIR);

RegressionFit fit_of(std::vector<double> alpha, double beta, double gamma_log) {
  RegressionFit f;
  f.coefficients = {std::move(alpha), beta, gamma_log};
  f.converged = true;
  return f;
}

TeamModel team(const std::string& name) {
  TeamModel m;
  m.team = name;
  m.attack = fit_of({2.6, -0.0012, 0.15}, -1.5, -3.0);
  m.defense = fit_of({-3.2, 0.0018, -0.15}, -1.5, -3.0);
  m.nested = fit_of({2.4, -0.0011, 0.15, -0.05}, -1.5, -3.0);
  return m;
}

void BM_Pmf(benchmark::State& state) {
  const ZigpParams p{1.6, 1.2, 0.05};
  int k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pmf(p, k));
    k = (k + 1) % 10;
  }
}
BENCHMARK(BM_Pmf);

void BM_Sample(benchmark::State& state) {
  const ZigpParams p{1.6, 1.2, 0.05};
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample(p, rng));
}
BENCHMARK(BM_Sample);

void BM_ScoreGrid(benchmark::State& state) {
  TeamModelSet models;
  models.insert(team("A"));
  models.insert(team("B"));
  const MatchContext ctx{"A", "B", 1950, 1800, "NEUTRAL"};
  const int cap = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(score_grid(models, ctx, cap));
}
BENCHMARK(BM_ScoreGrid)->Arg(10)->Arg(15)->Arg(30);

void BM_FitZigp(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> loc(-1, 1);
  std::vector<FitObservation> obs;
  RandomStream draw(9);
  for (int i = 0; i < state.range(0); ++i) {
    std::vector<double> x{1.0, gauss(rng), static_cast<double>(loc(rng))};
    const double mu = std::exp(0.3 + 0.2 * x[1] + 0.1 * x[2]);
    obs.push_back({sample({mu, 1.2, 0.1}, draw), x, 1.0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_zigp(obs));
}
BENCHMARK(BM_FitZigp)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RunTournament(benchmark::State& state) {
  const auto plan = load_tournament(kData / "euro2020" / "fixtures.csv", kData / "euro2020" / "allocation.csv");
  const auto elo = latest_ratings(load_ratings(kData / "euro2020" / "ratings.csv"));
  TeamModelSet models;
  for (const auto& t : plan.teams()) models.insert(team(t));
  const NestedZigpSampler sampler(models);
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomStream rng = RandomStream::for_stream(7, i++);
    benchmark::DoNotOptimize(run_tournament(plan, sampler, elo, rng));
  }
}
BENCHMARK(BM_RunTournament)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
