#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "coin/calibration.hpp"
#include "coin/conformity.hpp"
#include "coin/npmle.hpp"

namespace coin {

using ScoreFn = std::function<double(double x, double s2)>;

// One test hypothesis with its calibration twin: u and u_tilde are the
// scores of the observed and calibration draws, xi = I(u <= u_tilde) (ties
// count for the null) and s = min(u, u_tilde).
struct ScoredPair {
  std::size_t index = 0;
  double u = 0.0;
  double u_tilde = 0.0;
  bool xi = false;
  double s = 0.0;
};

struct Threshold {
  static Threshold none() { return {}; }
  static Threshold at(double v) { return {true, v}; }
  bool found = false;
  double value = 0.0;
};

struct FdpPoint {
  double t = 0.0;            // candidate threshold (a distinct s value)
  std::size_t n_claim = 0;   // #{ xi = 1, s <= t }
  std::size_t n_excess = 0;  // #{ xi = 0, s <= t }
  double fdp_hat = 0.0;      // (1 + n_excess) / max(n_claim, 1)
};

std::vector<ScoredPair> make_pairs(std::span<const SummaryStat> test,
                                   std::span<const CalibrationRecord> calib,
                                   const ScoreFn& score_fn);

// estimated-FDP curve over the distinct candidate values, ascending in t
std::vector<FdpPoint> fdp_curve(std::span<const ScoredPair> pairs);

// Largest candidate t with (1 + n_excess(t)) / max(n_claim(t), 1) <= alpha.
// The refined variant also accepts t whenever n_claim(t) < 1 / alpha, which
// guarantees a threshold exists for any nonempty input.
Threshold coin_threshold(std::span<const ScoredPair> pairs, double alpha, bool refined = false);

// reject exactly { i : u_i <= min(u_tilde_i, tau) }
std::vector<std::size_t> coin_decide(std::span<const ScoredPair> pairs, const Threshold& tau);

struct CoinConfig {
  NpmleConfig npmle;
  WorkingPriorConfig working_prior;
  bool refined = false;
  // known variance prior: skips the NPMLE step entirely
  std::optional<DiscretePrior> oracle_prior;
  // train rows left out of the NPMLE fit (e.g. rows whose s2 was clamped)
  std::vector<std::size_t> npmle_exclude;
};

// variance prior + scorer fitted on a train set (shared by the standalone
// and fold pipelines); the fit depends only on the multiset of train rows
struct FittedModel {
  DiscretePrior ghat;
  WorkingPriorFit working;
  bool npmle_converged = true;
};

FittedModel fit_coin_model(std::span<const SummaryStat> train, int nu_train,
                           const CoinConfig& cfg);

struct CoinDiagnostics {
  Threshold tau;
  std::size_t n_claim = 0;  // #{ xi = 1 }
  double pi_null = 1.0;
  bool npmle_converged = true;
  bool working_em_converged = true;
  std::vector<FdpPoint> curve;
};

struct CoinResult {
  std::vector<std::size_t> rejected;
  std::vector<ScoredPair> pairs;
  CoinDiagnostics diag;
};

// Full pipeline: fit the variance prior and scorer on train, draw one
// calibration twin per test row, threshold, decide.  nu may differ between
// the two sides (the scorer's weights are fit under the train side's nu and
// evaluated under the test side's).
CoinResult run_coin(std::span<const SummaryStat> test, int nu_test,
                    std::span<const SummaryStat> train, int nu_train, double alpha,
                    const CoinConfig& cfg, RngStream stream);

inline CoinResult run_coin(std::span<const SummaryStat> test,
                           std::span<const SummaryStat> train, int nu, double alpha,
                           const CoinConfig& cfg, RngStream stream) {
  return run_coin(test, nu, train, nu, alpha, cfg, stream);
}

}  // namespace coin
