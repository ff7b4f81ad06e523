#pragma once

#include <span>
#include <vector>

#include "coin/densities.hpp"
#include "coin/rng.hpp"

namespace coin {

// Observed pair for one hypothesis: effect estimate x and variance estimate
// s2, with degrees of freedom shared across the table.
struct SummaryStat {
  double x = 0.0;
  double s2 = 0.0;
};

struct CalibrationRecord {
  std::size_t index = 0;  // position of the matching test hypothesis
  double x_tilde = 0.0;
  double s2 = 0.0;
};

// One draw from the null law of X given S^2 = s2 under variance prior g:
// pick an atom from its posterior given s2, then sample N(0, atom).
double sample_calibration(double s2, const DiscretePrior& g, int nu, Rng& rng);

// One calibration draw per test hypothesis, each from its own child stream
// keyed by the hypothesis index, so a row's draw depends only on its own
// (s2, index) and the master stream.
std::vector<CalibrationRecord> build_pseudo_calibration(std::span<const SummaryStat> test,
                                                        const DiscretePrior& g, int nu,
                                                        RngStream stream);

}  // namespace coin
