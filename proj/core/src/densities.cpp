#include "coin/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454836;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// The evaluators only need a well-formed weight vector over positive atoms;
// they deliberately skip the ordering part of DiscretePrior::validate so a
// prior with repeated atoms still evaluates (the sum merges the weights).
void check_prior_for_eval(const DiscretePrior& g) {
  require(!g.atoms.empty(), "DiscretePrior: atoms must be nonempty");
  require(g.atoms.size() == g.weights.size(), "DiscretePrior: atoms/weights size mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < g.atoms.size(); ++j) {
    require(std::isfinite(g.atoms[j]) && g.atoms[j] > 0.0,
            "DiscretePrior: atoms must be positive");
    require(std::isfinite(g.weights[j]) && g.weights[j] >= 0.0,
            "DiscretePrior: weights must be >= 0");
    total += g.weights[j];
  }
  require(std::abs(total - 1.0) <= 1e-8, "DiscretePrior: weights must sum to 1");
}

}  // namespace

void HierParams::validate() const {
  require(nu >= 1, "HierParams: nu must be >= 1");
  require(std::isfinite(mu), "HierParams: mu must be finite");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "HierParams: sigma2 must be positive");
}

DiscretePrior DiscretePrior::point_mass(double sigma2) {
  DiscretePrior g;
  g.atoms = {sigma2};
  g.weights = {1.0};
  g.validate();
  return g;
}

void DiscretePrior::validate() const {
  require(!atoms.empty(), "DiscretePrior: atoms must be nonempty");
  require(atoms.size() == weights.size(), "DiscretePrior: atoms/weights size mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    require(std::isfinite(atoms[j]) && atoms[j] > 0.0, "DiscretePrior: atoms must be positive");
    if (j > 0) require(atoms[j] > atoms[j - 1], "DiscretePrior: atoms must be strictly increasing");
    require(std::isfinite(weights[j]) && weights[j] >= 0.0,
            "DiscretePrior: weights must be >= 0");
    total += weights[j];
  }
  require(std::abs(total - 1.0) <= 1e-8, "DiscretePrior: weights must sum to 1");
}

double log_sum_exp(std::span<const double> values) {
  double mx = kNegInf;
  for (double v : values) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;  // empty or all -inf
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - mx);
  return mx + std::log(acc);
}

double normal_log_density(double x, double mu, double sigma2) {
  require(std::isfinite(x), "normal_log_density: x must be finite");
  require(std::isfinite(mu), "normal_log_density: mu must be finite");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "normal_log_density: sigma2 must be positive");
  const double d = x - mu;
  return -0.5 * (kLogTwoPi + std::log(sigma2)) - d * d / (2.0 * sigma2);
}

double scaled_chi2_log_density(double s2, double sigma2, int nu) {
  require(std::isfinite(s2) && s2 > 0.0, "scaled_chi2_log_density: s2 must be positive");
  require(std::isfinite(sigma2) && sigma2 > 0.0,
          "scaled_chi2_log_density: sigma2 must be positive");
  require(nu >= 1, "scaled_chi2_log_density: nu must be >= 1");
  const double hn = 0.5 * nu;
  return hn * std::log(nu / (2.0 * sigma2)) - std::lgamma(hn) + (hn - 1.0) * std::log(s2) -
         nu * s2 / (2.0 * sigma2);
}

double marginal_s2_log_density(double s2, const DiscretePrior& g, int nu) {
  check_prior_for_eval(g);
  std::vector<double> terms;
  terms.reserve(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.weights[j] <= 0.0) continue;
    terms.push_back(std::log(g.weights[j]) + scaled_chi2_log_density(s2, g.atoms[j], nu));
  }
  return log_sum_exp(terms);
}

std::vector<double> posterior_atom_log_weights(double s2, const DiscretePrior& g, int nu) {
  check_prior_for_eval(g);
  std::vector<double> lw(g.size(), kNegInf);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.weights[j] <= 0.0) continue;
    lw[j] = std::log(g.weights[j]) + scaled_chi2_log_density(s2, g.atoms[j], nu);
  }
  const double norm = log_sum_exp(lw);
  if (!std::isfinite(norm))
    throw std::runtime_error("posterior_atom_log_weights: prior carries no mass at s2");
  for (double& v : lw) v -= norm;
  return lw;
}

double null_conditional_log_density(double x, double s2, const DiscretePrior& g, int nu,
                                    NullDensityForm form) {
  require(std::isfinite(x), "null_conditional_log_density: x must be finite");
  require(std::isfinite(s2) && s2 > 0.0, "null_conditional_log_density: s2 must be positive");
  require(nu >= 1, "null_conditional_log_density: nu must be >= 1");
  if (form == NullDensityForm::mixture) {
    auto lw = posterior_atom_log_weights(s2, g, nu);
    for (std::size_t j = 0; j < g.size(); ++j)
      if (std::isfinite(lw[j])) lw[j] += normal_log_density(x, 0.0, g.atoms[j]);
    return log_sum_exp(lw);
  }
  // ratio form: mixing over atoms commutes with completing the square in
  // the joint density of (x, s2), leaving the s2-marginal at nu + 1 degrees
  // of freedom evaluated at t = (x^2 + nu s2) / (nu + 1)
  const double t = (x * x + nu * s2) / (nu + 1.0);
  const double hn = 0.5 * nu;
  const double c = -0.5 * kLogTwoPi + std::lgamma(hn + 0.5) - std::lgamma(hn) +
                   hn * std::log(hn) - (hn + 0.5) * std::log(hn + 0.5) +
                   (hn - 1.0) * std::log(s2) - (hn - 0.5) * std::log(t);
  return c + marginal_s2_log_density(t, g, nu + 1) - marginal_s2_log_density(s2, g, nu);
}

}  // namespace coin
