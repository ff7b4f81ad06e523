#pragma once

#include <span>
#include <vector>

#include "coin/densities.hpp"
#include "coin/simplex_em.hpp"

namespace coin {

struct NpmleConfig {
  int n_atoms = 50;
  int max_iters = 1000;
  double rel_tol = 1e-8;
  double lower_quantile = 0.01;
};

struct NpmleFit {
  DiscretePrior prior;
  std::vector<double> log_likelihood_trace;
  bool converged = false;
};

// log-equispaced variance grid from the lower empirical quantile (inverse
// ECDF convention) of s2_values up to their max; collapses to a single atom
// when the range is degenerate.
std::vector<double> build_grid(std::span<const double> s2_values, const NpmleConfig& cfg = {});

// nonparametric MLE of the variance prior over the fixed grid.  The input is
// sorted internally, so the fit depends only on the multiset of values.
NpmleFit fit_npmle(std::span<const double> s2_values, int nu, const NpmleConfig& cfg = {});

}  // namespace coin
