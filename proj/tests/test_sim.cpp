#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <vector>

#include "coin/simulate.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coin;

namespace {

ScenarioSpec spec_of(DepScenario d, GPrior g, FShape f, double pi, std::size_t m) {
  ScenarioSpec spec;
  spec.dependence = d;
  spec.g_prior = g;
  spec.f_shape = f;
  spec.pi = pi;
  spec.m = m;
  return spec;
}

struct LatentSummary {
  double nonnull_frac = 0.0;
  std::vector<double> nonnull_mu;
  std::vector<double> sigma2;
};

LatentSummary summarize_latents(const std::vector<Latent>& latents) {
  LatentSummary s;
  for (const auto& l : latents) {
    s.sigma2.push_back(l.sigma2);
    if (l.nonnull) {
      s.nonnull_frac += 1.0;
      s.nonnull_mu.push_back(l.mu);
    }
  }
  s.nonnull_frac /= static_cast<double>(latents.size());
  return s;
}

}  // namespace

TEST_CASE("scenario validation") {
  CHECK_NOTHROW(spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 0.3, 100).validate());
  CHECK_THROWS_AS(spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 0.0, 100).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 1.0, 100).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 0.3, 0).validate(),
                  std::invalid_argument);
  // the variance-scaled effect law collapses under a constant variance
  CHECK_THROWS_AS(spec_of(DepScenario::scenario2, GPrior::pm, FShape::unimodal, 0.3, 100).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(spec_of(DepScenario::scenario2, GPrior::tpd, FShape::unimodal, 0.3, 100).validate());
  auto small_group = spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 0.3, 100);
  small_group.n1 = 1;
  CHECK_THROWS_AS(small_group.validate(), std::invalid_argument);
}

TEST_CASE("draw_latents: variance priors have the right laws") {
  Rng rng(201, 0);
  const std::size_t m = 20000;

  const auto pm = draw_latents(spec_of(DepScenario::scenario1, GPrior::pm, FShape::unimodal, 0.3, m), rng);
  for (const auto& l : pm) CHECK(l.sigma2 == 1.0);

  const auto tpd = draw_latents(spec_of(DepScenario::scenario1, GPrior::tpd, FShape::unimodal, 0.3, m), rng);
  double frac_ten = 0.0;
  for (const auto& l : tpd) {
    CHECK((l.sigma2 == 1.0 || l.sigma2 == 10.0));
    frac_ten += l.sigma2 == 10.0 ? 1.0 : 0.0;
  }
  frac_ten /= static_cast<double>(m);
  CHECK(frac_ten > 0.27);
  CHECK(frac_ten < 0.33);

  const auto sic = draw_latents(spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 0.3, m), rng);
  double mean_prec = 0.0;
  for (const auto& l : sic) {
    CHECK(l.sigma2 > 0.0);
    mean_prec += 1.0 / l.sigma2;
  }
  mean_prec /= static_cast<double>(m);  // 1/sigma^2 ~ chi^2_6 / 6 has mean 1
  CHECK(mean_prec > 0.97);
  CHECK(mean_prec < 1.03);
}

TEST_CASE("draw_latents: nulls are exact zeros and the non-null rate matches pi") {
  Rng rng(202, 0);
  const auto latents =
      draw_latents(spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 0.3, 20000), rng);
  const auto s = summarize_latents(latents);
  CHECK(s.nonnull_frac >= 0.28);
  CHECK(s.nonnull_frac <= 0.32);
  for (const auto& l : latents)
    if (!l.nonnull) CHECK(l.mu == 0.0);
}

TEST_CASE("draw_latents: effect shapes have the advertised moments") {
  Rng rng(203, 0);
  const std::size_t m = 20000;

  const auto uni = summarize_latents(
      draw_latents(spec_of(DepScenario::scenario1, GPrior::pm, FShape::unimodal, 0.3, m), rng));
  CHECK(oracle::sample_sd(uni.nonnull_mu) > 3.8);
  CHECK(oracle::sample_sd(uni.nonnull_mu) < 4.2);
  CHECK(std::fabs(oracle::mean(uni.nonnull_mu)) < 0.2);

  const auto sym = summarize_latents(
      draw_latents(spec_of(DepScenario::scenario1, GPrior::pm, FShape::sym_bimodal, 0.3, m), rng));
  CHECK(std::fabs(oracle::mean(sym.nonnull_mu)) < 0.2);
  std::vector<double> abs_mu;
  for (double v : sym.nonnull_mu) abs_mu.push_back(std::fabs(v));
  CHECK(oracle::mean(abs_mu) > 3.6);  // two modes at +-4

  const auto asym = summarize_latents(
      draw_latents(spec_of(DepScenario::scenario1, GPrior::pm, FShape::asym_bimodal, 0.3, m), rng));
  // 0.3 N(-3,1) + 0.7 N(4,1) has mean 1.9
  CHECK(oracle::mean(asym.nonnull_mu) > 1.75);
  CHECK(oracle::mean(asym.nonnull_mu) < 2.05);
}

TEST_CASE("draw_latents: variance-scaled effects correlate |mu| with sigma") {
  Rng rng(204, 0);
  const auto latents = draw_latents(
      spec_of(DepScenario::scenario2, GPrior::sic, FShape::sym_bimodal, 0.4, 20000), rng);
  std::vector<double> a, b;
  for (const auto& l : latents)
    if (l.nonnull) {
      a.push_back(std::fabs(l.mu));
      b.push_back(std::sqrt(l.sigma2));
    }
  const double ma = oracle::mean(a), mb = oracle::mean(b);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  CHECK(cov / std::sqrt(va * vb) > 0.2);
}

TEST_CASE("draw_latents: intro scenarios carry their fixed effect laws") {
  Rng rng(205, 0);
  const auto i1 = summarize_latents(
      draw_latents(spec_of(DepScenario::intro1, GPrior::pm, FShape::unimodal, 0.4, 20000), rng));
  // sd mixture {1,2,4} with weights {.1,.2,.7}: E mu^2 = 12.1
  double m2 = 0.0;
  for (double v : i1.nonnull_mu) m2 += v * v;
  m2 /= static_cast<double>(i1.nonnull_mu.size());
  CHECK(m2 > 11.3);
  CHECK(m2 < 12.9);
  CHECK(std::fabs(oracle::mean(i1.nonnull_mu)) < 0.2);

  const auto i2 = summarize_latents(
      draw_latents(spec_of(DepScenario::intro2, GPrior::pm, FShape::unimodal, 0.4, 20000), rng));
  // centers -3 (p=.3) and 4 (p=.7) with unit variance when sigma2 = 1
  CHECK(oracle::mean(i2.nonnull_mu) > 1.75);
  CHECK(oracle::mean(i2.nonnull_mu) < 2.05);
}

TEST_CASE("generate_raw: entries follow the two-group design") {
  Rng rng(206, 0);
  const auto spec = spec_of(DepScenario::scenario1, GPrior::pm, FShape::unimodal, 0.3, 2000);
  const auto latents = draw_latents(spec, rng);
  const auto raw = generate_raw(spec, latents, rng);
  CHECK(raw.m == spec.m);
  CHECK(raw.n == 20);
  CHECK(raw.n1 == 10);

  // null rows: all entries mean zero, variance eta^2 = 5 sigma^2 = 5
  std::vector<double> null_entries;
  double a_minus_mu = 0.0;
  std::size_t nonnull_rows = 0;
  for (std::size_t i = 0; i < raw.m; ++i) {
    if (!latents[i].nonnull) {
      for (std::size_t j = 0; j < raw.n; ++j) null_entries.push_back(raw.at(i, j));
    } else {
      double amean = 0.0;
      for (std::size_t j = 0; j < raw.n1; ++j) amean += raw.at(i, j);
      a_minus_mu += amean / static_cast<double>(raw.n1) - latents[i].mu;
      ++nonnull_rows;
    }
  }
  CHECK(std::fabs(oracle::mean(null_entries)) < 0.05);
  const double sd = oracle::sample_sd(null_entries);
  CHECK(sd * sd > 4.8);
  CHECK(sd * sd < 5.2);
  CHECK(std::fabs(a_minus_mu / static_cast<double>(nonnull_rows)) < 0.12);
}

TEST_CASE("generate_raw summaries are conditionally unbiased for sigma2") {
  Rng rng(207, 0);
  const auto spec = spec_of(DepScenario::scenario1, GPrior::tpd, FShape::unimodal, 0.3, 10000);
  const auto latents = draw_latents(spec, rng);
  const auto raw = generate_raw(spec, latents, rng);
  const auto res = summarize_two_group(raw);
  CHECK(res.nu == 18);
  double ratio = 0.0;
  for (std::size_t i = 0; i < raw.m; ++i) ratio += res.stats[i].s2 / latents[i].sigma2;
  ratio /= static_cast<double>(raw.m);
  CHECK(ratio > 0.97);
  CHECK(ratio < 1.03);
}

TEST_CASE("oracle_prior_for covers the representable priors") {
  const auto pm = oracle_prior_for(GPrior::pm);
  CHECK(pm.atoms == std::vector<double>{1.0});
  CHECK(pm.weights == std::vector<double>{1.0});
  const auto tpd = oracle_prior_for(GPrior::tpd);
  CHECK(tpd.atoms == std::vector<double>{1.0, 10.0});
  CHECK(tpd.weights == std::vector<double>{0.7, 0.3});
  CHECK_THROWS_AS(oracle_prior_for(GPrior::sic), std::invalid_argument);
}

TEST_CASE("run_experiment is deterministic and parallelism-independent") {
  const auto spec = spec_of(DepScenario::scenario1, GPrior::tpd, FShape::asym_bimodal, 0.3, 60);
  ExperimentConfig cfg;
  cfg.method = Method::coin_fs;
  cfg.alpha = 0.2;
  cfg.reps = 4;
  const auto a = run_experiment(spec, cfg, RngStream{208, 0});
  const auto b = run_experiment(spec, cfg, RngStream{208, 0});
  ExperimentConfig par = cfg;
  par.parallelism = 3;
  const auto c = run_experiment(spec, par, RngStream{208, 0});
  REQUIRE(a.replicates.size() == 4);
  for (std::size_t r = 0; r < a.replicates.size(); ++r) {
    for (const auto* other : {&b, &c}) {
      CHECK(a.replicates[r].fdp == other->replicates[r].fdp);
      CHECK(a.replicates[r].tpp == other->replicates[r].tpp);
      CHECK(a.replicates[r].rejections == other->replicates[r].rejections);
    }
  }
  CHECK(a.fdr == c.fdr);
  CHECK(a.tpr == c.tpr);
  // a different master stream draws different data (at this tiny scale the
  // rejection counts can tie at zero, but the latent non-null counts move)
  const auto d = run_experiment(spec, cfg, RngStream{209, 0});
  bool any_diff = false;
  for (std::size_t r = 0; r < a.replicates.size(); ++r)
    any_diff = any_diff || a.replicates[r].rejections != d.replicates[r].rejections ||
               a.replicates[r].nonnulls != d.replicates[r].nonnulls;
  CHECK(any_diff);
}

TEST_CASE("run_experiment replicate identities hold exactly") {
  const auto spec = spec_of(DepScenario::scenario1, GPrior::tpd, FShape::unimodal, 0.4, 80);
  ExperimentConfig cfg;
  cfg.method = Method::coin_fs;
  cfg.alpha = 0.2;
  cfg.reps = 6;
  const auto res = run_experiment(spec, cfg, RngStream{210, 0});
  for (const auto& r : res.replicates) {
    CHECK(r.false_rejections + r.true_rejections == r.rejections);
    const double fr = r.fdp * std::max<double>(1.0, static_cast<double>(r.rejections));
    CHECK(std::fabs(fr - static_cast<double>(r.false_rejections)) < 1e-9);
    const double tr = r.tpp * std::max<double>(1.0, static_cast<double>(r.nonnulls));
    CHECK(std::fabs(tr - static_cast<double>(r.true_rejections)) < 1e-9);
  }
}

TEST_CASE("run_experiment flags degenerate standard errors at one replicate") {
  const auto spec = spec_of(DepScenario::scenario1, GPrior::pm, FShape::unimodal, 0.3, 60);
  ExperimentConfig cfg;
  cfg.method = Method::oracle_coin;
  cfg.reps = 1;
  const auto res = run_experiment(spec, cfg, RngStream{211, 0});
  CHECK(res.se_degenerate);
  CHECK(res.se_fdr == 0.0);
  CHECK(res.se_tpr == 0.0);
}

TEST_CASE("run_experiment reports zero TPP on an effectively null panel") {
  auto spec = spec_of(DepScenario::scenario1, GPrior::pm, FShape::unimodal, 0.3, 30);
  spec.pi = 1e-9;  // essentially every hypothesis is null
  ExperimentConfig cfg;
  cfg.method = Method::oracle_coin;
  cfg.reps = 3;
  const auto res = run_experiment(spec, cfg, RngStream{212, 0});
  std::size_t all_null_reps = 0;
  for (const auto& r : res.replicates) {
    if (r.nonnulls != 0) continue;
    ++all_null_reps;
    CHECK(r.tpp == 0.0);
    CHECK(r.fdp == (r.rejections > 0 ? 1.0 : 0.0));
  }
  CHECK(all_null_reps == 3);
}

TEST_CASE("run_experiment rejects an unrepresentable oracle prior up front") {
  const auto spec = spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 0.3, 60);
  ExperimentConfig cfg;
  cfg.method = Method::oracle_coin;
  cfg.reps = 2;
  CHECK_THROWS_AS(run_experiment(spec, cfg, RngStream{213, 0}), std::invalid_argument);
  cfg.reps = 0;
  cfg.method = Method::coin_fs;
  CHECK_THROWS_AS(run_experiment(spec, cfg, RngStream{213, 0}), std::invalid_argument);
}

TEST_CASE("default_scale exposes desk and full-size settings") {
  const auto desk = default_scale(false);
  CHECK(desk.m == 2000);
  CHECK(desk.reps == 100);
  const auto full = default_scale(true);
  CHECK(full.m == 20000);
  CHECK(full.reps == 200);
}

TEST_CASE("sample splitting controls the FDR on the independent-effect design") {
  const auto spec = spec_of(DepScenario::scenario1, GPrior::sic, FShape::unimodal, 0.3, 2000);
  ExperimentConfig cfg;
  cfg.method = Method::coin_ss;
  cfg.alpha = 0.1;
  cfg.reps = 100;
  const auto res = run_experiment(spec, cfg, RngStream{214, 0});
  CHECK(res.fdr <= 0.1 + 3.0 * res.se_fdr + 1e-12);
  CHECK(res.tpr > 0.0);
}

TEST_CASE("feature splitting keeps the FDR in band under the point-mass prior") {
  const auto spec = spec_of(DepScenario::scenario1, GPrior::pm, FShape::unimodal, 0.5, 2000);
  ExperimentConfig cfg;
  cfg.method = Method::coin_fs;
  cfg.alpha = 0.1;
  cfg.reps = 100;
  const auto res = run_experiment(spec, cfg, RngStream{215, 0});
  CHECK(res.fdr >= 0.0);
  CHECK(res.fdr <= 0.13);
}
