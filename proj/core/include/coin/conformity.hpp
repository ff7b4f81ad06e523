#pragma once

#include <span>
#include <vector>

#include "coin/calibration.hpp"
#include "coin/densities.hpp"
#include "coin/simplex_em.hpp"

namespace coin {

struct WorkingPriorConfig {
  int k1 = 30;         // number of location components
  double zeta2 = 1.0;  // common location-component variance
  double scale_ratio = 1.4142135623730951;  // sd step; the variance grid grows by its square
  double loc_quantile_lo = 0.01;
  double loc_quantile_hi = 0.99;
  int em_max_iters = 2000;
  double em_rel_tol = 1e-8;

  void validate() const;
};

struct ComponentGrids {
  std::vector<double> locations;   // gamma_k
  std::vector<double> scale_vars;  // eta_k^2
};

// locations: k1 equispaced points between the lower and upper x quantiles
// (linear interpolation); scales: geometric variance grid from min(s2)/10 up
// to the first value >= 4 max(x^2).
ComponentGrids component_grids(std::span<const double> x_values,
                               std::span<const double> s2_values,
                               const WorkingPriorConfig& cfg = {});

// Working prior for the effect: point mass at zero plus location components
// N(gamma_k, zeta2) and zero-mean scale components N(0, eta_k^2).  Component
// densities for an observed (x, s2) convolve each piece with the posterior
// over variance atoms; only the weight simplex is estimated.
struct WorkingPriorFit {
  DiscretePrior ghat;
  int nu = 1;  // degrees of freedom used when evaluating densities
  double zeta2 = 1.0;
  std::vector<double> locations;
  std::vector<double> scale_vars;
  double pi_null = 1.0;
  std::vector<double> loc_weights;
  std::vector<double> scale_weights;
  std::vector<double> log_likelihood_trace;
  bool converged = false;
  double max_simplex_drift = 0.0;
};

struct ComponentRef {
  enum class Kind { location, scale };
  Kind kind = Kind::location;
  std::size_t index = 0;
};

double nonnull_component_log_density(double x, double s2, ComponentRef comp,
                                     const WorkingPriorFit& fit);

WorkingPriorFit fit_working_prior(std::span<const SummaryStat> train, const DiscretePrior& ghat,
                                  int nu, const WorkingPriorConfig& cfg = {});

// same fit with the component grids supplied by the caller
WorkingPriorFit fit_working_prior(std::span<const SummaryStat> train, const DiscretePrior& ghat,
                                  int nu, const ComponentGrids& grids,
                                  const WorkingPriorConfig& cfg = {});

// Conformity score u(x, s2): fitted null density over the fitted marginal.
// Smaller means stronger evidence against the null; the ranking matches the
// local false-discovery rate under the fitted prior.
double score(double x, double s2, const WorkingPriorFit& fit);

}  // namespace coin
