#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "coin/densities.hpp"
#include "coin/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coin;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DiscretePrior tpd() {
  DiscretePrior g;
  g.atoms = {1.0, 10.0};
  g.weights = {0.7, 0.3};
  return g;
}

DiscretePrior random_prior(Rng& rng, std::size_t max_atoms = 6) {
  DiscretePrior g;
  const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * max_atoms);
  double a = 0.01 * std::exp(rng.uniform());
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    g.atoms.push_back(a);
    a *= 1.5 + 10.0 * rng.uniform();
    const double w = 0.05 + rng.uniform();
    g.weights.push_back(w);
    total += w;
  }
  for (double& w : g.weights) w /= total;
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("log_sum_exp edge cases") {
  CHECK(log_sum_exp({}) == -kInf);
  const std::vector<double> all_ninf = {-kInf, -kInf};
  CHECK(log_sum_exp(all_ninf) == -kInf);
  const std::vector<double> one = {-3.25};
  CHECK(log_sum_exp(one) == -3.25);
  const std::vector<double> two = {std::log(2.0), std::log(2.0)};
  CHECK(std::fabs(log_sum_exp(two) - std::log(4.0)) < 1e-15);
  // huge shifts must not overflow
  const std::vector<double> big = {1000.0, 1001.0};
  CHECK(std::fabs(log_sum_exp(big) - (1001.0 + std::log1p(std::exp(-1.0)))) < 1e-12);
}

TEST_CASE("normal log density pinned values") {
  CHECK(std::fabs(normal_log_density(0.0, 0.0, 1.0) - (-0.9189385332046727)) < 1e-12);
  CHECK(std::fabs(normal_log_density(2.0, 0.0, 1.0) - (-2.9189385332046727)) < 1e-12);
  // at the mean with variance 4 the value is -log(8 pi)/2
  CHECK(std::fabs(normal_log_density(1.0, 1.0, 4.0) - (-0.5 * std::log(8.0 * M_PI))) < 1e-12);
}

TEST_CASE("normal log density domain errors") {
  CHECK_THROWS_AS(normal_log_density(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_log_density(0.0, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_log_density(std::nan(""), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("normal density integrates to one") {
  auto pdf = [](double x) { return std::exp(normal_log_density(x, 1.5, 4.0)); };
  CHECK(std::fabs(oracle::integrate(pdf, -30.0, 33.0, 1e-12) - 1.0) < 1e-10);
}

TEST_CASE("scaled chi2 log density pinned values") {
  // nu=2 collapses to Exp(1): density e^{-s2}
  CHECK(scaled_chi2_log_density(1.0, 1.0, 2) == -1.0);
  CHECK(std::fabs(scaled_chi2_log_density(0.5, 2.0, 18) - (-4.8630837762383452)) < 1e-12);
}

TEST_CASE("scaled chi2 scale-family identity") {
  const double base5 = scaled_chi2_log_density(1.0, 1.0, 5);
  const double base18 = scaled_chi2_log_density(1.0, 1.0, 18);
  for (double s : {0.25, 0.5, 2.0, 7.0}) {
    CHECK(std::fabs(scaled_chi2_log_density(s, s, 5) - (base5 - std::log(s))) < 1e-12);
    CHECK(std::fabs(scaled_chi2_log_density(s, s, 18) - (base18 - std::log(s))) < 1e-12);
  }
}

TEST_CASE("scaled chi2 matches transformed chi2 density and normalizes") {
  // S^2 = Q/9 with Q ~ chi^2_18 when sigma2=2: p(s2) = 9 p_Q(9 s2)
  const double x = 4.5, k = 18.0;
  const double lq = (k / 2 - 1) * std::log(x) - x / 2 - (k / 2) * std::log(2.0) - std::lgamma(k / 2);
  CHECK(std::fabs(scaled_chi2_log_density(0.5, 2.0, 18) - (std::log(9.0) + lq)) < 1e-10);
  auto pdf = [](double s) { return std::exp(scaled_chi2_log_density(s, 2.0, 18)); };
  CHECK(std::fabs(oracle::integrate(pdf, 1e-9, 30.0, 1e-12) - 1.0) < 1e-10);
}

TEST_CASE("scaled chi2 domain errors") {
  CHECK_THROWS_AS(scaled_chi2_log_density(0.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(scaled_chi2_log_density(1.0, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(scaled_chi2_log_density(1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("marginal s2 density: point mass and weight merge") {
  const auto pm = DiscretePrior::point_mass(2.0);
  for (double s : {0.1, 1.0, 3.7})
    CHECK(marginal_s2_log_density(s, pm, 9) == scaled_chi2_log_density(s, 2.0, 9));
  // two equal atoms behave like one with merged weight
  DiscretePrior dup;
  dup.atoms = {2.0, 2.0};
  dup.weights = {0.5, 0.5};
  for (double s : {0.1, 1.0, 3.7})
    CHECK(std::fabs(marginal_s2_log_density(s, dup, 9) - marginal_s2_log_density(s, pm, 9)) <
          1e-14);
}

TEST_CASE("marginal s2 density matches direct summation") {
  const auto g = tpd();
  const double direct = std::log(0.7 * std::exp(scaled_chi2_log_density(1.0, 1.0, 18)) +
                                 0.3 * std::exp(scaled_chi2_log_density(1.0, 10.0, 18)));
  CHECK(std::fabs(marginal_s2_log_density(1.0, g, 18) - direct) < 1e-12);
}

TEST_CASE("marginal s2 density rejects an empty prior") {
  CHECK_THROWS_AS(marginal_s2_log_density(1.0, DiscretePrior{}, 18), std::invalid_argument);
}

TEST_CASE("posterior atom weights normalize and keep ratios") {
  Rng rng(11, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = random_prior(rng);
    const double s2 = 0.05 + 5.0 * rng.uniform();
    const int nu = 2 + static_cast<int>(rng.uniform() * 30);
    const auto lw = posterior_atom_log_weights(s2, g, nu);
    REQUIRE(lw.size() == g.size());
    double total = 0.0;
    for (double v : lw) total += std::exp(v);
    CHECK(std::fabs(total - 1.0) < 1e-12);
    // log weights differ exactly as the unnormalized log terms do
    std::size_t j0 = 0;
    while (g.weights[j0] <= 0.0) ++j0;
    const double ref =
        std::log(g.weights[j0]) + scaled_chi2_log_density(s2, g.atoms[j0], nu);
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g.weights[j] <= 0.0) continue;
      const double term = std::log(g.weights[j]) + scaled_chi2_log_density(s2, g.atoms[j], nu);
      CHECK(std::fabs((lw[j] - lw[j0]) - (term - ref)) < 1e-12);
    }
  }
}

TEST_CASE("posterior atom weights: zero-weight atoms stay excluded") {
  DiscretePrior g;
  g.atoms = {1.0, 5.0, 25.0};
  g.weights = {0.5, 0.0, 0.5};
  const auto lw = posterior_atom_log_weights(1.3, g, 12);
  CHECK(lw[1] == -kInf);
  CHECK(std::isfinite(lw[0]));
  CHECK(std::isfinite(lw[2]));
}

TEST_CASE("null conditional density: point-mass prior collapses to a normal") {
  const auto pm = DiscretePrior::point_mass(1.0);
  for (double x : {-2.0, 0.0, 0.5, 4.0})
    for (double s2 : {0.1, 1.0, 9.0}) {
      const double want = normal_log_density(x, 0.0, 1.0);
      CHECK(std::fabs(null_conditional_log_density(x, s2, pm, 7) - want) < 1e-12);
      CHECK(std::fabs(null_conditional_log_density(x, s2, pm, 7, NullDensityForm::closed_form) -
                      want) < 1e-9);
    }
}

TEST_CASE("null conditional density at x=0 matches direct posterior summation") {
  Rng rng(12, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = random_prior(rng);
    const double s2 = 0.1 + 3.0 * rng.uniform();
    const int nu = 2 + static_cast<int>(rng.uniform() * 40);
    const auto lw = posterior_atom_log_weights(s2, g, nu);
    double direct = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      direct += std::exp(lw[j] + normal_log_density(0.0, 0.0, g.atoms[j]));
    const double got = null_conditional_log_density(0.0, s2, g, nu);
    CHECK(std::fabs(got - std::log(direct)) < 1e-8);
    CHECK(std::fabs(null_conditional_log_density(0.0, s2, g, nu, NullDensityForm::closed_form) -
                    got) < 1e-9);
  }
}

TEST_CASE("null conditional density: cross-form agreement on the two-point prior") {
  const auto g = tpd();
  const double a = null_conditional_log_density(2.0, 1.0, g, 18);
  const double b = null_conditional_log_density(2.0, 1.0, g, 18, NullDensityForm::closed_form);
  CHECK(std::fabs(a - b) <= 1e-10 * std::fabs(a));
}

TEST_CASE("null conditional density: cross-form agreement on random tuples") {
  Rng rng(13, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const auto g = random_prior(rng);
    const double s2 = 0.02 + 8.0 * rng.uniform();
    const double x = 12.0 * (rng.uniform() - 0.5);
    const int nu = 2 + static_cast<int>(rng.uniform() * 59);
    const double a = null_conditional_log_density(x, s2, g, nu);
    const double b = null_conditional_log_density(x, s2, g, nu, NullDensityForm::closed_form);
    CHECK(std::fabs(a - b) <= 1e-9);
  }
}

TEST_CASE("null conditional density integrates to one over x") {
  Rng rng(14, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = random_prior(rng, 4);
    const double s2 = 0.1 + 4.0 * rng.uniform();
    const int nu = 2 + static_cast<int>(rng.uniform() * 30);
    auto pdf = [&](double x) { return std::exp(null_conditional_log_density(x, s2, g, nu)); };
    const double span = 12.0 * std::sqrt(g.atoms.back());
    const double total = oracle::integrate(pdf, -span, span, 1e-9);
    CHECK(std::fabs(total - 1.0) < 1e-6);
  }
}

TEST_CASE("log densities stay finite across extreme inputs") {
  const auto g = tpd();
  for (double s2 : {1e-8, 1e-3, 1.0, 1e3, 1e8})
    for (int nu : {1, 18, 200})
      for (double x : {0.0, 5.0}) {
        CHECK(std::isfinite(marginal_s2_log_density(s2, g, nu)));
        CHECK(std::isfinite(null_conditional_log_density(x, s2, g, nu)));
        CHECK(std::isfinite(
            null_conditional_log_density(x, s2, g, nu, NullDensityForm::closed_form)));
      }
}
