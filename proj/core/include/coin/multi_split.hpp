#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coin/coin.hpp"

namespace coin {

enum class Design { one_group, two_group };

// Row-major raw data matrix, one row per feature.  For two_group the first
// n1 columns are group A and the rest group B; ids are optional (empty means
// positional).
struct RawMatrix {
  Design design = Design::two_group;
  std::size_t m = 0;   // rows (features)
  std::size_t n = 0;   // total columns (samples)
  std::size_t n1 = 0;  // group A columns when two_group
  std::vector<double> values;
  std::vector<std::string> ids;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  void validate() const;
};

// Random column split within each group; the floor half goes to the first
// matrix and the remainder (plus any odd column) to the second.  Each group
// needs at least 4 columns so both halves keep >= 2.
std::pair<RawMatrix, RawMatrix> sample_split(const RawMatrix& raw, Rng& rng);

struct SummarizeResult {
  std::vector<SummaryStat> stats;
  int nu = 1;
};

// x = mean(A) - mean(B), s2 = pooled within-group variance * (1/n1 + 1/n2),
// nu = n1 + n2 - 2
SummarizeResult summarize_two_group(const RawMatrix& raw);
// x = row mean, s2 = sample variance / n, nu = n - 1
SummarizeResult summarize_one_group(const RawMatrix& raw);

// Clamp zero variance estimates up to the smallest positive one so the rows
// stay scoreable; returns the clamped row indices (callers exclude them from
// NPMLE fitting).
std::vector<std::size_t> sanitize_zero_s2(std::vector<SummaryStat>& stats);

struct SsConfig {
  CoinConfig coin;
};

struct SsResult {
  std::vector<std::size_t> rejected;
  int nu_test = 1, nu_train = 1;
  std::size_t zero_s2_test = 0, zero_s2_train = 0;
  std::vector<SummaryStat> test_stats;  // post-clamp test-half summaries
  CoinResult coin;
};

// sample-splitting pipeline: split columns, summarize both halves, run the
// standalone procedure with half one as test and half two as train
SsResult run_coin_ss(const RawMatrix& raw, double alpha, const SsConfig& cfg, RngStream stream);

struct FoldPlan {
  int folds = 0;
  std::vector<int> assignment;  // hypothesis -> fold, balanced sizes
};

FoldPlan make_folds(std::size_t m, int folds, Rng& rng);

struct FoldEvalues {
  std::vector<double> evalues;  // aligned with the fold's pairs
  Threshold tau;                // refined threshold used inside the fold
  std::size_t denom = 1;        // 1 + n_excess(tau)
};

// e-value for each pair in one fold: |fold| * xi * I(s <= tau) / denom with
// tau the refined threshold at fold_alpha
FoldEvalues fold_evalues(std::span<const ScoredPair> fold_pairs, double fold_alpha);

// e-BH: with E_(i) the i-th largest e-value, find the largest i such that
// E_(i) >= m / (alpha i) and reject every index with E >= E_(i) (boundary
// ties included).
std::vector<std::size_t> ebh(std::span<const double> evalues, double alpha);

// e-BH applied to { E_i / u } for one shared uniform u in (0, 1]
std::vector<std::size_t> u_ebh(std::span<const double> evalues, double alpha, double u);

struct FsConfig {
  int folds = 5;
  double c = 0.9;  // fold thresholds are computed at level c * alpha
  bool use_u_ebh = true;
  std::optional<double> forced_u;  // pin the shared uniform (testing)
  std::optional<FoldPlan> plan;    // pin the fold assignment (testing)
  CoinConfig coin;
};

struct FsResult {
  std::vector<std::size_t> rejected;
  std::vector<double> evalues;  // one per hypothesis
  FoldPlan plan;
  std::vector<Threshold> fold_taus;
  double u = 1.0;  // shared uniform (1 when randomization is off)
};

// feature-splitting pipeline: partition hypotheses into folds, fit the
// prior/scorer on each fold's complement, convert fold decisions into
// e-values and combine them with (u-)e-BH at level alpha
FsResult run_coin_fs(std::span<const SummaryStat> summary, int nu, double alpha,
                     const FsConfig& cfg, RngStream stream);

}  // namespace coin
