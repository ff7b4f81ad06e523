#include "coin/npmle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coin {

namespace {

std::vector<double> checked_sorted(std::span<const double> s2_values) {
  if (s2_values.empty()) throw std::invalid_argument("npmle: s2_values must be nonempty");
  std::vector<double> v(s2_values.begin(), s2_values.end());
  for (double s : v)
    if (!std::isfinite(s) || s <= 0.0)
      throw std::invalid_argument("npmle: s2_values must be positive and finite");
  std::sort(v.begin(), v.end());
  return v;
}

double lower_ecdf_quantile(const std::vector<double>& sorted, double p) {
  const auto n = sorted.size();
  auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  idx = std::clamp<std::size_t>(idx, 1, n);
  return sorted[idx - 1];
}

void check_config(const NpmleConfig& cfg) {
  if (cfg.n_atoms < 2) throw std::invalid_argument("NpmleConfig: n_atoms must be >= 2");
  if (!(cfg.lower_quantile > 0.0 && cfg.lower_quantile < 1.0))
    throw std::invalid_argument("NpmleConfig: lower_quantile must be in (0, 1)");
  if (cfg.max_iters < 1) throw std::invalid_argument("NpmleConfig: max_iters must be >= 1");
}

}  // namespace

std::vector<double> build_grid(std::span<const double> s2_values, const NpmleConfig& cfg) {
  check_config(cfg);
  const auto sorted = checked_sorted(s2_values);
  const double lo = lower_ecdf_quantile(sorted, cfg.lower_quantile);
  const double hi = sorted.back();
  if (!(lo < hi) || cfg.n_atoms == 1) return {lo};
  std::vector<double> grid;
  grid.reserve(cfg.n_atoms);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int j = 0; j < cfg.n_atoms; ++j) {
    double a;
    if (j == 0)
      a = lo;
    else if (j == cfg.n_atoms - 1)
      a = hi;
    else
      a = std::exp(llo + (lhi - llo) * static_cast<double>(j) /
                             static_cast<double>(cfg.n_atoms - 1));
    if (grid.empty() || a > grid.back()) grid.push_back(a);
  }
  return grid;
}

NpmleFit fit_npmle(std::span<const double> s2_values, int nu, const NpmleConfig& cfg) {
  if (nu < 1) throw std::invalid_argument("fit_npmle: nu must be >= 1");
  const auto grid = build_grid(s2_values, cfg);
  const auto sorted = checked_sorted(s2_values);
  const std::size_t n = sorted.size(), J = grid.size();

  NpmleFit out;
  out.prior.atoms = grid;
  if (J == 1) {
    out.prior.weights = {1.0};
    double ll = 0.0;
    for (double s : sorted) ll += scaled_chi2_log_density(s, grid[0], nu);
    out.log_likelihood_trace = {ll};
    out.converged = true;
    return out;
  }

  // log p(s2 | sigma_j^2) = a_j + (nu/2 - 1) log s2 - c_j s2
  const double hn = 0.5 * nu;
  std::vector<double> a(J), c(J);
  for (std::size_t j = 0; j < J; ++j) {
    a[j] = hn * std::log(nu / (2.0 * grid[j])) - std::lgamma(hn);
    c[j] = nu / (2.0 * grid[j]);
  }
  std::vector<double> L(n * J);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sorted[i];
    const double base = (hn - 1.0) * std::log(s);
    for (std::size_t j = 0; j < J; ++j) L[i * J + j] = a[j] + base - c[j] * s;
  }
  auto em = fit_simplex_weights(L, n, J, {cfg.max_iters, cfg.rel_tol});
  out.prior.weights = std::move(em.weights);
  out.log_likelihood_trace = std::move(em.log_likelihood_trace);
  out.converged = em.converged;
  return out;
}

}  // namespace coin
