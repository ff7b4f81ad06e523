#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "coin/coin.hpp"
#include "coin/conformity.hpp"
#include "coin/densities.hpp"
#include "coin/npmle.hpp"
#include "coin/rng.hpp"

namespace {

using namespace coin;

DiscretePrior five_atoms() {
  return {{0.2, 0.7, 1.0, 3.5, 12.0}, {0.1, 0.2, 0.4, 0.2, 0.1}};
}

std::vector<SummaryStat> synthetic_table(std::size_t m, std::uint64_t seed) {
  Rng rng(RngStream{seed, 0});
  const DiscretePrior g = five_atoms();
  std::vector<SummaryStat> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sigma2 = g.atoms[rng.discrete(g.weights)];
    const double mu = (i % 10 < 3) ? 4.0 * rng.normal() : 0.0;
    out[i].x = mu + std::sqrt(sigma2) * rng.normal();
    out[i].s2 = sigma2 * rng.chi_squared(18.0) / 18.0;
  }
  return out;
}

void bm_null_density_mixture(benchmark::State& state) {
  const DiscretePrior g = five_atoms();
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        null_conditional_log_density(x, 1.1, g, 18, NullDensityForm::mixture));
    x += 1e-6;
  }
}
BENCHMARK(bm_null_density_mixture);

void bm_null_density_closed_form(benchmark::State& state) {
  const DiscretePrior g = five_atoms();
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        null_conditional_log_density(x, 1.1, g, 18, NullDensityForm::closed_form));
    x += 1e-6;
  }
}
BENCHMARK(bm_null_density_closed_form);

void bm_fit_npmle(benchmark::State& state) {
  const auto table = synthetic_table(static_cast<std::size_t>(state.range(0)), 11);
  std::vector<double> s2(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) s2[i] = table[i].s2;
  for (auto _ : state) benchmark::DoNotOptimize(fit_npmle(s2, 18));
}
BENCHMARK(bm_fit_npmle)->Arg(500)->Arg(2000);

void bm_fit_working_prior(benchmark::State& state) {
  const auto table = synthetic_table(static_cast<std::size_t>(state.range(0)), 12);
  std::vector<double> s2(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) s2[i] = table[i].s2;
  const NpmleFit npmle = fit_npmle(s2, 18);
  for (auto _ : state) benchmark::DoNotOptimize(fit_working_prior(table, npmle.prior, 18));
}
BENCHMARK(bm_fit_working_prior)->Arg(500)->Arg(2000);

void bm_coin_threshold(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  Rng rng(RngStream{13, 0});
  std::vector<ScoredPair> pairs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = rng.uniform(), ut = rng.uniform();
    pairs[i] = {i, u, ut, u <= ut, std::min(u, ut)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(coin_threshold(pairs, 0.1));
}
BENCHMARK(bm_coin_threshold)->Arg(2000)->Arg(100000);

void bm_run_coin_fs(benchmark::State& state) {
  const auto table = synthetic_table(static_cast<std::size_t>(state.range(0)), 14);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_coin_fs(table, 18, 0.1, FsConfig{}, RngStream{15, 0}));
}
BENCHMARK(bm_run_coin_fs)->Unit(benchmark::kMillisecond)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
