#include "coin/multi_split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coin {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    if (j >= i) j = i - 1;
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // sample variance (ddof 1)
};

MeanVar row_mean_var(const RawMatrix& raw, std::size_t i, std::size_t j0, std::size_t j1) {
  const std::size_t g = j1 - j0;
  MeanVar mv;
  for (std::size_t j = j0; j < j1; ++j) mv.mean += raw.at(i, j);
  mv.mean /= static_cast<double>(g);
  for (std::size_t j = j0; j < j1; ++j) {
    const double d = raw.at(i, j) - mv.mean;
    mv.var += d * d;
  }
  mv.var /= static_cast<double>(g - 1);
  return mv;
}

}  // namespace

void RawMatrix::validate() const {
  require(m >= 1 && n >= 1, "RawMatrix: must have at least one row and column");
  require(values.size() == m * n, "RawMatrix: values size does not match m * n");
  if (design == Design::two_group)
    require(n1 >= 1 && n1 < n, "RawMatrix: n1 must satisfy 1 <= n1 < n");
  require(ids.empty() || ids.size() == m, "RawMatrix: ids must be empty or one per row");
  for (double v : values)
    require(std::isfinite(v), "RawMatrix: values must be finite");
}

std::pair<RawMatrix, RawMatrix> sample_split(const RawMatrix& raw, Rng& rng) {
  raw.validate();
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end)
  if (raw.design == Design::two_group) {
    groups = {{0, raw.n1}, {raw.n1, raw.n}};
  } else {
    groups = {{0, raw.n}};
  }
  std::vector<std::size_t> cols1, cols2;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto [b, e] = groups[g];
    const std::size_t size = e - b;
    if (size < 4)
      throw std::invalid_argument("sample_split: group " + std::string(g == 0 ? "A" : "B") +
                                  " has " + std::to_string(size) + " columns; need at least 4");
    auto perm = shuffled_indices(size, rng);
    const std::size_t half = size / 2;
    std::vector<std::size_t> first(perm.begin(), perm.begin() + half);
    std::vector<std::size_t> second(perm.begin() + half, perm.end());
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    for (std::size_t k : first) cols1.push_back(b + k);
    for (std::size_t k : second) cols2.push_back(b + k);
  }

  auto build = [&](const std::vector<std::size_t>& cols, std::size_t new_n1) {
    RawMatrix out;
    out.design = raw.design;
    out.m = raw.m;
    out.n = cols.size();
    out.n1 = new_n1;
    out.ids = raw.ids;
    out.values.resize(out.m * out.n);
    for (std::size_t i = 0; i < raw.m; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) out.values[i * out.n + j] = raw.at(i, cols[j]);
    return out;
  };
  const std::size_t n1_first = raw.design == Design::two_group ? raw.n1 / 2 : 0;
  const std::size_t n1_second = raw.design == Design::two_group ? raw.n1 - raw.n1 / 2 : 0;
  return {build(cols1, n1_first), build(cols2, n1_second)};
}

SummarizeResult summarize_two_group(const RawMatrix& raw) {
  raw.validate();
  require(raw.design == Design::two_group, "summarize_two_group: needs a two-group matrix");
  const std::size_t n1 = raw.n1, n2 = raw.n - raw.n1;
  require(n1 >= 2 && n2 >= 2, "summarize_two_group: both groups need at least 2 columns");
  SummarizeResult out;
  out.nu = static_cast<int>(n1 + n2 - 2);
  out.stats.resize(raw.m);
  const double inv = 1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2);
  for (std::size_t i = 0; i < raw.m; ++i) {
    const auto a = row_mean_var(raw, i, 0, n1);
    const auto b = row_mean_var(raw, i, n1, raw.n);
    const double pooled = (static_cast<double>(n1 - 1) * a.var + static_cast<double>(n2 - 1) * b.var) /
                          static_cast<double>(n1 + n2 - 2);
    out.stats[i] = {a.mean - b.mean, pooled * inv};
  }
  return out;
}

SummarizeResult summarize_one_group(const RawMatrix& raw) {
  raw.validate();
  require(raw.design == Design::one_group, "summarize_one_group: needs a one-group matrix");
  require(raw.n >= 2, "summarize_one_group: need at least 2 columns");
  SummarizeResult out;
  out.nu = static_cast<int>(raw.n - 1);
  out.stats.resize(raw.m);
  for (std::size_t i = 0; i < raw.m; ++i) {
    const auto mv = row_mean_var(raw, i, 0, raw.n);
    out.stats[i] = {mv.mean, mv.var / static_cast<double>(raw.n)};
  }
  return out;
}

std::vector<std::size_t> sanitize_zero_s2(std::vector<SummaryStat>& stats) {
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& s : stats) {
    require(std::isfinite(s.s2) && s.s2 >= 0.0, "sanitize_zero_s2: s2 must be >= 0");
    if (s.s2 > 0.0) smallest = std::min(smallest, s.s2);
  }
  std::vector<std::size_t> clamped;
  for (std::size_t i = 0; i < stats.size(); ++i)
    if (stats[i].s2 == 0.0) clamped.push_back(i);
  if (clamped.empty()) return clamped;
  require(std::isfinite(smallest), "sanitize_zero_s2: every variance estimate is zero");
  for (std::size_t i : clamped) stats[i].s2 = smallest;
  return clamped;
}

SsResult run_coin_ss(const RawMatrix& raw, double alpha, const SsConfig& cfg, RngStream stream) {
  Rng split_rng(stream.child(0));
  auto [h1, h2] = sample_split(raw, split_rng);
  auto test = raw.design == Design::two_group ? summarize_two_group(h1) : summarize_one_group(h1);
  auto train = raw.design == Design::two_group ? summarize_two_group(h2) : summarize_one_group(h2);

  const auto zero_test = sanitize_zero_s2(test.stats);
  const auto zero_train = sanitize_zero_s2(train.stats);
  CoinConfig coin_cfg = cfg.coin;
  coin_cfg.npmle_exclude = zero_train;

  SsResult out;
  out.nu_test = test.nu;
  out.nu_train = train.nu;
  out.zero_s2_test = zero_test.size();
  out.zero_s2_train = zero_train.size();
  out.coin = run_coin(test.stats, test.nu, train.stats, train.nu, alpha, coin_cfg,
                      stream.child(1));
  out.rejected = out.coin.rejected;
  out.test_stats = std::move(test.stats);
  return out;
}

FoldPlan make_folds(std::size_t m, int folds, Rng& rng) {
  if (folds < 2) throw std::invalid_argument("make_folds: need at least 2 folds");
  if (m < static_cast<std::size_t>(folds))
    throw std::invalid_argument("make_folds: more folds than hypotheses");
  const auto order = shuffled_indices(m, rng);
  FoldPlan plan;
  plan.folds = folds;
  plan.assignment.assign(m, 0);
  const std::size_t q = m / static_cast<std::size_t>(folds);
  const std::size_t r = m % static_cast<std::size_t>(folds);
  std::size_t pos = 0;
  for (int k = 0; k < folds; ++k) {
    const std::size_t len = q + (static_cast<std::size_t>(k) < r ? 1 : 0);
    for (std::size_t t = 0; t < len; ++t) plan.assignment[order[pos++]] = k;
  }
  return plan;
}

FoldEvalues fold_evalues(std::span<const ScoredPair> fold_pairs, double fold_alpha) {
  FoldEvalues out;
  out.evalues.assign(fold_pairs.size(), 0.0);
  if (fold_pairs.empty()) return out;
  out.tau = coin_threshold(fold_pairs, fold_alpha, /*refined=*/true);
  if (!out.tau.found) return out;  // cannot happen for nonempty input; kept as a guard
  std::size_t excess = 0;
  for (const auto& p : fold_pairs)
    if (!p.xi && p.s <= out.tau.value) ++excess;
  out.denom = 1 + excess;
  const double value = static_cast<double>(fold_pairs.size()) / static_cast<double>(out.denom);
  for (std::size_t k = 0; k < fold_pairs.size(); ++k)
    if (fold_pairs[k].xi && fold_pairs[k].s <= out.tau.value) out.evalues[k] = value;
  return out;
}

std::vector<std::size_t> ebh(std::span<const double> evalues, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ebh: alpha must be in (0, 1)");
  for (double e : evalues)
    if (!(e >= 0.0)) throw std::invalid_argument("ebh: e-values must be >= 0");
  const std::size_t m = evalues.size();
  if (m == 0) return {};
  std::vector<double> sorted(evalues.begin(), evalues.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::size_t khat = 0;
  for (std::size_t i = m; i >= 1; --i) {
    if (sorted[i - 1] >= static_cast<double>(m) / (alpha * static_cast<double>(i))) {
      khat = i;
      break;
    }
  }
  if (khat == 0) return {};
  const double cut = sorted[khat - 1];
  std::vector<std::size_t> rejected;
  for (std::size_t i = 0; i < m; ++i)
    if (evalues[i] >= cut) rejected.push_back(i);
  return rejected;
}

std::vector<std::size_t> u_ebh(std::span<const double> evalues, double alpha, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("u_ebh: u must be in (0, 1]");
  for (double e : evalues)
    if (!(e >= 0.0)) throw std::invalid_argument("u_ebh: e-values must be >= 0");
  std::vector<double> scaled(evalues.begin(), evalues.end());
  for (double& e : scaled) e /= u;
  return ebh(scaled, alpha);
}

FsResult run_coin_fs(std::span<const SummaryStat> summary, int nu, double alpha,
                     const FsConfig& cfg, RngStream stream) {
  const std::size_t m = summary.size();
  require(m >= 1, "run_coin_fs: summary must be nonempty");
  require(nu >= 1, "run_coin_fs: nu must be >= 1");
  require(alpha > 0.0 && alpha < 1.0, "run_coin_fs: alpha must be in (0, 1)");
  require(cfg.c > 0.0 && cfg.c <= 1.0, "run_coin_fs: c must be in (0, 1]");
  require(cfg.folds >= 2, "run_coin_fs: need at least 2 folds (a single fold has no complement)");
  require(m >= static_cast<std::size_t>(cfg.folds), "run_coin_fs: more folds than hypotheses");

  FsResult out;
  if (cfg.plan) {
    out.plan = *cfg.plan;
    require(out.plan.folds == cfg.folds, "run_coin_fs: pinned plan has the wrong fold count");
    require(out.plan.assignment.size() == m, "run_coin_fs: pinned plan has the wrong size");
    for (int a : out.plan.assignment)
      require(a >= 0 && a < cfg.folds, "run_coin_fs: pinned plan assignment out of range");
  } else {
    Rng plan_rng(stream.child(0));
    out.plan = make_folds(m, cfg.folds, plan_rng);
  }

  const double fold_alpha = cfg.c * alpha;
  require(fold_alpha < 1.0, "run_coin_fs: c * alpha must be < 1");
  out.evalues.assign(m, 0.0);
  const RngStream calib_stream = stream.child(1);

  for (int k = 0; k < cfg.folds; ++k) {
    std::vector<std::size_t> members;
    std::vector<SummaryStat> complement;
    std::vector<std::size_t> complement_ids;
    for (std::size_t i = 0; i < m; ++i) {
      if (out.plan.assignment[i] == k) {
        members.push_back(i);
      } else {
        complement.push_back(summary[i]);
        complement_ids.push_back(i);
      }
    }
    if (members.empty()) {
      out.fold_taus.push_back(Threshold::none());
      continue;
    }
    require(!complement.empty(), "run_coin_fs: a fold has an empty complement");

    // translate global NPMLE exclusions into complement positions
    CoinConfig sub = cfg.coin;
    sub.npmle_exclude.clear();
    if (!cfg.coin.npmle_exclude.empty()) {
      std::vector<std::size_t> local(m, m);
      for (std::size_t pos = 0; pos < complement_ids.size(); ++pos)
        local[complement_ids[pos]] = pos;
      for (std::size_t id : cfg.coin.npmle_exclude) {
        require(id < m, "run_coin_fs: npmle_exclude index out of range");
        if (local[id] != m) sub.npmle_exclude.push_back(local[id]);
      }
    }

    const auto model = fit_coin_model(complement, nu, sub);

    std::vector<SummaryStat> fold_test;
    std::vector<CalibrationRecord> fold_calib;
    fold_test.reserve(members.size());
    fold_calib.reserve(members.size());
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      const std::size_t id = members[pos];
      fold_test.push_back(summary[id]);
      Rng rng(calib_stream.child(id));
      fold_calib.push_back({pos, sample_calibration(summary[id].s2, model.ghat, nu, rng),
                            summary[id].s2});
    }
    auto pairs = make_pairs(fold_test, fold_calib,
                            [&](double x, double s2) { return score(x, s2, model.working); });
    for (std::size_t pos = 0; pos < members.size(); ++pos) pairs[pos].index = members[pos];

    const auto fe = fold_evalues(pairs, fold_alpha);
    out.fold_taus.push_back(fe.tau);
    for (std::size_t pos = 0; pos < members.size(); ++pos)
      out.evalues[members[pos]] = fe.evalues[pos];
  }

  double u = 1.0;
  if (cfg.use_u_ebh) {
    if (cfg.forced_u) {
      u = *cfg.forced_u;
      require(u > 0.0 && u <= 1.0, "run_coin_fs: forced_u must be in (0, 1]");
    } else {
      Rng u_rng(stream.child(2));
      u = 1.0 - u_rng.uniform();  // (0, 1]
    }
  }
  out.u = u;
  out.rejected = u_ebh(out.evalues, alpha, u);
  return out;
}

}  // namespace coin
