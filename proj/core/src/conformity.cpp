#include "coin/conformity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454836;

double interp_quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Terms this far under the running max contribute below double rounding
// (50 * e^-40 < 2^-52 relative), so their exps are skipped.
constexpr double kExpSkip = -40.0;

// log sum_j exp(lw[j] + log N(x; mean, atoms[j] + extra_var))
double convolved_log_density(double x, std::span<const double> lw,
                             std::span<const double> atoms, double mean, double extra_var) {
  const double d = x - mean;
  double mx = kNegInf;
  std::vector<double> terms(lw.size(), kNegInf);
  for (std::size_t j = 0; j < lw.size(); ++j) {
    if (!std::isfinite(lw[j])) continue;
    const double v = atoms[j] + extra_var;
    terms[j] = lw[j] - 0.5 * (kLogTwoPi + std::log(v)) - d * d / (2.0 * v);
    mx = std::max(mx, terms[j]);
  }
  if (!std::isfinite(mx)) return kNegInf;
  double acc = 0.0;
  for (double t : terms) {
    const double u = t - mx;
    if (u >= kExpSkip) acc += std::exp(u);
  }
  return mx + std::log(acc);
}

}  // namespace

void WorkingPriorConfig::validate() const {
  if (k1 < 0) throw std::invalid_argument("WorkingPriorConfig: k1 must be >= 0");
  if (!(zeta2 > 0.0)) throw std::invalid_argument("WorkingPriorConfig: zeta2 must be positive");
  if (!(scale_ratio > 1.0))
    throw std::invalid_argument("WorkingPriorConfig: scale_ratio must be > 1");
  if (!(loc_quantile_lo > 0.0 && loc_quantile_lo < loc_quantile_hi && loc_quantile_hi < 1.0))
    throw std::invalid_argument("WorkingPriorConfig: quantiles must satisfy 0 < lo < hi < 1");
  if (em_max_iters < 1) throw std::invalid_argument("WorkingPriorConfig: em_max_iters must be >= 1");
  if (!(em_rel_tol >= 0.0)) throw std::invalid_argument("WorkingPriorConfig: em_rel_tol must be >= 0");
}

ComponentGrids component_grids(std::span<const double> x_values,
                               std::span<const double> s2_values,
                               const WorkingPriorConfig& cfg) {
  cfg.validate();
  if (x_values.empty() || s2_values.empty())
    throw std::invalid_argument("component_grids: x/s2 values must be nonempty");
  double s2_min = std::numeric_limits<double>::infinity();
  for (double s : s2_values) {
    if (!std::isfinite(s) || s <= 0.0)
      throw std::invalid_argument("component_grids: s2 values must be positive");
    s2_min = std::min(s2_min, s);
  }
  double x_max2 = 0.0;
  for (double x : x_values) {
    if (!std::isfinite(x)) throw std::invalid_argument("component_grids: x values must be finite");
    x_max2 = std::max(x_max2, x * x);
  }

  ComponentGrids g;
  if (cfg.k1 > 0) {
    std::vector<double> xs(x_values.begin(), x_values.end());
    std::sort(xs.begin(), xs.end());
    const double lo = interp_quantile(xs, cfg.loc_quantile_lo);
    const double hi = interp_quantile(xs, cfg.loc_quantile_hi);
    if (!(lo < hi) || cfg.k1 == 1) {
      g.locations = {0.5 * (lo + hi)};
    } else {
      g.locations.reserve(cfg.k1);
      for (int k = 0; k < cfg.k1; ++k)
        g.locations.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                       static_cast<double>(cfg.k1 - 1));
    }
  }

  const double ratio = cfg.scale_ratio * cfg.scale_ratio;
  const double target = 4.0 * x_max2;
  g.scale_vars.push_back(s2_min / 10.0);
  while (g.scale_vars.back() < target) g.scale_vars.push_back(g.scale_vars.back() * ratio);
  return g;
}

double nonnull_component_log_density(double x, double s2, ComponentRef comp,
                                     const WorkingPriorFit& fit) {
  const auto lw = posterior_atom_log_weights(s2, fit.ghat, fit.nu);
  if (comp.kind == ComponentRef::Kind::location) {
    if (comp.index >= fit.locations.size())
      throw std::invalid_argument("nonnull_component_log_density: location index out of range");
    return convolved_log_density(x, lw, fit.ghat.atoms, fit.locations[comp.index], fit.zeta2);
  }
  if (comp.index >= fit.scale_vars.size())
    throw std::invalid_argument("nonnull_component_log_density: scale index out of range");
  return convolved_log_density(x, lw, fit.ghat.atoms, 0.0, fit.scale_vars[comp.index]);
}

WorkingPriorFit fit_working_prior(std::span<const SummaryStat> train, const DiscretePrior& ghat,
                                  int nu, const WorkingPriorConfig& cfg) {
  if (train.empty()) throw std::invalid_argument("fit_working_prior: train must be nonempty");
  std::vector<double> xs(train.size()), s2s(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    xs[i] = train[i].x;
    s2s[i] = train[i].s2;
  }
  return fit_working_prior(train, ghat, nu, component_grids(xs, s2s, cfg), cfg);
}

WorkingPriorFit fit_working_prior(std::span<const SummaryStat> train, const DiscretePrior& ghat,
                                  int nu, const ComponentGrids& grids,
                                  const WorkingPriorConfig& cfg) {
  cfg.validate();
  ghat.validate();
  if (train.empty()) throw std::invalid_argument("fit_working_prior: train must be nonempty");
  if (nu < 1) throw std::invalid_argument("fit_working_prior: nu must be >= 1");
  for (const auto& t : train) {
    if (!std::isfinite(t.x)) throw std::invalid_argument("fit_working_prior: x must be finite");
    if (!std::isfinite(t.s2) || t.s2 <= 0.0)
      throw std::invalid_argument("fit_working_prior: s2 must be positive");
  }

  const std::size_t n = train.size();
  const std::size_t J = ghat.size();
  const std::size_t k1 = grids.locations.size(), k2 = grids.scale_vars.size();
  const std::size_t C = 1 + k1 + k2;

  // flat component table: 0 = null, then locations, then scales
  std::vector<double> mean(C, 0.0), extra(C, 0.0);
  for (std::size_t k = 0; k < k1; ++k) {
    mean[1 + k] = grids.locations[k];
    extra[1 + k] = cfg.zeta2;
  }
  for (std::size_t k = 0; k < k2; ++k) extra[1 + k1 + k] = grids.scale_vars[k];

  // per (component, atom) constants of log N(x; mean_c, atom_j + extra_c)
  std::vector<double> lognorm(C * J), inv2v(C * J);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t j = 0; j < J; ++j) {
      const double v = ghat.atoms[j] + extra[c];
      lognorm[c * J + j] = -0.5 * (kLogTwoPi + std::log(v));
      inv2v[c * J + j] = 1.0 / (2.0 * v);
    }

  std::vector<double> L(n * C);
  std::vector<double> terms(J);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lw = posterior_atom_log_weights(train[i].s2, ghat, nu);
    for (std::size_t c = 0; c < C; ++c) {
      const double d = train[i].x - mean[c];
      const double d2 = d * d;
      const double* ln = lognorm.data() + c * J;
      const double* iv = inv2v.data() + c * J;
      double mx = kNegInf;
      for (std::size_t j = 0; j < J; ++j) {
        terms[j] = std::isfinite(lw[j]) ? lw[j] + ln[j] - d2 * iv[j] : kNegInf;
        mx = std::max(mx, terms[j]);
      }
      double acc = 0.0;
      for (std::size_t j = 0; j < J; ++j) {
        const double u = terms[j] - mx;
        if (u >= kExpSkip) acc += std::exp(u);
      }
      L[i * C + c] = mx + std::log(acc);
    }
  }

  auto em = fit_simplex_weights(L, n, C, {cfg.em_max_iters, cfg.em_rel_tol});

  WorkingPriorFit fit;
  fit.ghat = ghat;
  fit.nu = nu;
  fit.zeta2 = cfg.zeta2;
  fit.locations = grids.locations;
  fit.scale_vars = grids.scale_vars;
  fit.pi_null = em.weights[0];
  fit.loc_weights.assign(em.weights.begin() + 1, em.weights.begin() + 1 + k1);
  fit.scale_weights.assign(em.weights.begin() + 1 + k1, em.weights.end());
  fit.log_likelihood_trace = std::move(em.log_likelihood_trace);
  fit.converged = em.converged;
  fit.max_simplex_drift = em.max_simplex_drift;
  return fit;
}

double score(double x, double s2, const WorkingPriorFit& fit) {
  const auto lw = posterior_atom_log_weights(s2, fit.ghat, fit.nu);
  const double log_null = convolved_log_density(x, lw, fit.ghat.atoms, 0.0, 0.0);
  std::vector<double> terms;
  terms.reserve(1 + fit.loc_weights.size() + fit.scale_weights.size());
  if (fit.pi_null > 0.0) terms.push_back(std::log(fit.pi_null) + log_null);
  for (std::size_t k = 0; k < fit.loc_weights.size(); ++k)
    if (fit.loc_weights[k] > 0.0)
      terms.push_back(std::log(fit.loc_weights[k]) +
                      convolved_log_density(x, lw, fit.ghat.atoms, fit.locations[k], fit.zeta2));
  for (std::size_t k = 0; k < fit.scale_weights.size(); ++k)
    if (fit.scale_weights[k] > 0.0)
      terms.push_back(std::log(fit.scale_weights[k]) +
                      convolved_log_density(x, lw, fit.ghat.atoms, 0.0, fit.scale_vars[k]));
  const double log_mix = log_sum_exp(terms);
  // both underflow only for astronomically extreme x: call the evidence total
  if (!std::isfinite(log_null) && !std::isfinite(log_mix)) return 0.0;
  return std::exp(log_null - log_mix);
}

}  // namespace coin
