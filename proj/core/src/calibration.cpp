#include "coin/calibration.hpp"

#include <cmath>

namespace coin {

double sample_calibration(double s2, const DiscretePrior& g, int nu, Rng& rng) {
  const auto lw = posterior_atom_log_weights(s2, g, nu);
  std::vector<double> w(lw.size());
  for (std::size_t j = 0; j < lw.size(); ++j) w[j] = std::exp(lw[j]);
  const std::size_t j = rng.discrete(w);
  return std::sqrt(g.atoms[j]) * rng.normal();
}

std::vector<CalibrationRecord> build_pseudo_calibration(std::span<const SummaryStat> test,
                                                        const DiscretePrior& g, int nu,
                                                        RngStream stream) {
  std::vector<CalibrationRecord> out(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    Rng rng(stream.child(i));
    out[i] = {i, sample_calibration(test[i].s2, g, nu, rng), test[i].s2};
  }
  return out;
}

}  // namespace coin
