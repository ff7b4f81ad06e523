#include "coin/coin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coin {

std::vector<ScoredPair> make_pairs(std::span<const SummaryStat> test,
                                   std::span<const CalibrationRecord> calib,
                                   const ScoreFn& score_fn) {
  if (test.size() != calib.size())
    throw std::invalid_argument("make_pairs: test/calibration size mismatch");
  if (!score_fn) throw std::invalid_argument("make_pairs: score_fn must be callable");
  std::vector<ScoredPair> pairs(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (calib[i].index != i || calib[i].s2 != test[i].s2)
      throw std::invalid_argument("make_pairs: calibration record does not match its test row");
    const double u = score_fn(test[i].x, test[i].s2);
    const double ut = score_fn(calib[i].x_tilde, calib[i].s2);
    if (!std::isfinite(u) || !std::isfinite(ut) || u < 0.0 || ut < 0.0)
      throw std::runtime_error("make_pairs: score function returned an invalid value");
    pairs[i] = {i, u, ut, u <= ut, std::min(u, ut)};
  }
  return pairs;
}

std::vector<FdpPoint> fdp_curve(std::span<const ScoredPair> pairs) {
  std::vector<std::pair<double, bool>> order(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) order[i] = {pairs[i].s, pairs[i].xi};
  std::sort(order.begin(), order.end());
  std::vector<FdpPoint> curve;
  std::size_t claim = 0, excess = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i].second ? ++claim : ++excess;
    if (i + 1 < order.size() && order[i + 1].first == order[i].first) continue;
    FdpPoint pt;
    pt.t = order[i].first;
    pt.n_claim = claim;
    pt.n_excess = excess;
    pt.fdp_hat = static_cast<double>(1 + excess) /
                 static_cast<double>(std::max<std::size_t>(claim, 1));
    curve.push_back(pt);
  }
  return curve;
}

Threshold coin_threshold(std::span<const ScoredPair> pairs, double alpha, bool refined) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("coin_threshold: alpha must be in (0, 1)");
  const auto curve = fdp_curve(pairs);
  for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
    if (it->fdp_hat <= alpha) return Threshold::at(it->t);
    if (refined && static_cast<double>(it->n_claim) < 1.0 / alpha) return Threshold::at(it->t);
  }
  return Threshold::none();
}

std::vector<std::size_t> coin_decide(std::span<const ScoredPair> pairs, const Threshold& tau) {
  std::vector<std::size_t> rejected;
  if (!tau.found) return rejected;
  for (const auto& p : pairs)
    if (p.u <= std::min(p.u_tilde, tau.value)) rejected.push_back(p.index);
  return rejected;
}

FittedModel fit_coin_model(std::span<const SummaryStat> train, int nu_train,
                           const CoinConfig& cfg) {
  if (train.empty()) throw std::invalid_argument("fit_coin_model: train must be nonempty");
  if (nu_train < 1) throw std::invalid_argument("fit_coin_model: nu must be >= 1");

  FittedModel model;
  if (cfg.oracle_prior) {
    model.ghat = *cfg.oracle_prior;
    model.ghat.validate();
  } else {
    std::vector<bool> excluded(train.size(), false);
    for (std::size_t i : cfg.npmle_exclude) {
      if (i >= train.size())
        throw std::invalid_argument("fit_coin_model: npmle_exclude index out of range");
      excluded[i] = true;
    }
    std::vector<double> s2fit;
    s2fit.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
      if (!excluded[i]) s2fit.push_back(train[i].s2);
    if (s2fit.empty())
      throw std::invalid_argument("fit_coin_model: no train rows available for the NPMLE fit");
    auto nf = fit_npmle(s2fit, nu_train, cfg.npmle);
    model.ghat = std::move(nf.prior);
    model.npmle_converged = nf.converged;
  }

  // sort a copy so the fit depends only on the multiset of train rows
  std::vector<SummaryStat> sorted(train.begin(), train.end());
  std::sort(sorted.begin(), sorted.end(), [](const SummaryStat& a, const SummaryStat& b) {
    return a.s2 != b.s2 ? a.s2 < b.s2 : a.x < b.x;
  });
  model.working = fit_working_prior(sorted, model.ghat, nu_train, cfg.working_prior);
  return model;
}

CoinResult run_coin(std::span<const SummaryStat> test, int nu_test,
                    std::span<const SummaryStat> train, int nu_train, double alpha,
                    const CoinConfig& cfg, RngStream stream) {
  if (test.empty()) throw std::invalid_argument("run_coin: test must be nonempty");
  if (nu_test < 1) throw std::invalid_argument("run_coin: nu must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("run_coin: alpha must be in (0, 1)");

  auto model = fit_coin_model(train, nu_train, cfg);
  WorkingPriorFit scorer = model.working;
  scorer.nu = nu_test;  // test-side law of (x, s2)

  const auto calib = build_pseudo_calibration(test, model.ghat, nu_test, stream.child(1));
  auto pairs =
      make_pairs(test, calib, [&](double x, double s2) { return score(x, s2, scorer); });
  const auto tau = coin_threshold(pairs, alpha, cfg.refined);

  CoinResult res;
  res.rejected = coin_decide(pairs, tau);
  res.diag.tau = tau;
  for (const auto& p : pairs) res.diag.n_claim += p.xi ? 1 : 0;
  res.diag.pi_null = scorer.pi_null;
  res.diag.npmle_converged = model.npmle_converged;
  res.diag.working_em_converged = scorer.converged;
  res.diag.curve = fdp_curve(pairs);
  res.pairs = std::move(pairs);
  return res;
}

}  // namespace coin
