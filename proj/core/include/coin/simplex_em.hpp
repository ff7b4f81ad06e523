#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coin {

// EM for mixture weights when every observation's component log-densities
// are fixed up front.  The log-likelihood
//   sum_i log sum_c w_c exp(L[i][c])
// is concave in w over the simplex and the multiplicative update
//   w_c <- w_c * (1/n) sum_i exp(L[i][c]) / sum_k w_k exp(L[i][k])
// increases it monotonically from the uniform start.  Rows are rescaled by
// their max once so the iterations run in linear space.

struct SimplexEmConfig {
  int max_iters = 1000;
  double rel_tol = 1e-8;  // stop when |ll - ll_prev| <= rel_tol * (1 + |ll_prev|)
};

struct SimplexEmFit {
  std::vector<double> weights;
  std::vector<double> log_likelihood_trace;  // ll of the weights entering each iteration
  bool converged = false;
  double max_simplex_drift = 0.0;  // max |sum(weights) - 1| seen across iterations
};

// log_density: row-major, n rows (observations) by k columns (components)
SimplexEmFit fit_simplex_weights(std::span<const double> log_density, std::size_t n,
                                 std::size_t k, const SimplexEmConfig& cfg);

}  // namespace coin
