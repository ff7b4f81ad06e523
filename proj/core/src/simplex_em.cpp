#include "coin/simplex_em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace coin {

SimplexEmFit fit_simplex_weights(std::span<const double> log_density, std::size_t n,
                                 std::size_t k, const SimplexEmConfig& cfg) {
  if (n == 0 || k == 0) throw std::invalid_argument("fit_simplex_weights: empty problem");
  if (log_density.size() != n * k)
    throw std::invalid_argument("fit_simplex_weights: log_density size mismatch");
  if (cfg.max_iters < 1) throw std::invalid_argument("fit_simplex_weights: max_iters must be >= 1");
  if (!(cfg.rel_tol >= 0.0)) throw std::invalid_argument("fit_simplex_weights: rel_tol must be >= 0");

  std::vector<double> p(n * k);
  double shift_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = log_density.data() + i * k;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) mx = std::max(mx, row[c]);
    if (!std::isfinite(mx))
      throw std::runtime_error("fit_simplex_weights: observation " + std::to_string(i) +
                               " has no finite component log-density");
    shift_total += mx;
    for (std::size_t c = 0; c < k; ++c) p[i * k + c] = std::exp(row[c] - mx);
  }

  SimplexEmFit fit;
  fit.weights.assign(k, 1.0 / static_cast<double>(k));
  std::vector<double> col(k);
  double ll_prev = 0.0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    double ll = 0.0;
    std::fill(col.begin(), col.end(), 0.0);
    const double* w = fit.weights.data();
    double* cl = col.data();
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = p.data() + i * k;
      // unrolled dot product: independent partial sums break the add
      // latency chain without changing any single product
      double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
      double a4 = 0.0, a5 = 0.0, a6 = 0.0, a7 = 0.0;
      std::size_t c = 0;
      for (; c + 8 <= k; c += 8) {
        a0 += row[c] * w[c];
        a1 += row[c + 1] * w[c + 1];
        a2 += row[c + 2] * w[c + 2];
        a3 += row[c + 3] * w[c + 3];
        a4 += row[c + 4] * w[c + 4];
        a5 += row[c + 5] * w[c + 5];
        a6 += row[c + 6] * w[c + 6];
        a7 += row[c + 7] * w[c + 7];
      }
      double v = ((a0 + a1) + (a2 + a3)) + ((a4 + a5) + (a6 + a7));
      for (; c < k; ++c) v += row[c] * w[c];
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::runtime_error("fit_simplex_weights: degenerate mixture value at iteration " +
                                 std::to_string(iter));
      ll += std::log(v);
      const double inv = 1.0 / v;
      for (std::size_t c2 = 0; c2 < k; ++c2) cl[c2] += row[c2] * inv;
    }
    ll += shift_total;
    if (!std::isfinite(ll))
      throw std::runtime_error("fit_simplex_weights: non-finite log-likelihood at iteration " +
                               std::to_string(iter));
    fit.log_likelihood_trace.push_back(ll);

    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      fit.weights[c] *= col[c] / static_cast<double>(n);
      sum += fit.weights[c];
    }
    fit.max_simplex_drift = std::max(fit.max_simplex_drift, std::abs(sum - 1.0));

    if (iter > 0 && std::abs(ll - ll_prev) <= cfg.rel_tol * (1.0 + std::abs(ll_prev))) {
      fit.converged = true;
      break;
    }
    ll_prev = ll;
  }
  return fit;
}

}  // namespace coin
