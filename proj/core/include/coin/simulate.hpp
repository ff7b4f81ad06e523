#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coin/multi_split.hpp"

namespace coin {

enum class DepScenario { scenario1, scenario2, intro1, intro2 };
enum class GPrior { sic, pm, tpd };       // scaled inverse chi^2, point mass, two-point
enum class FShape { unimodal, sym_bimodal, asym_bimodal };

// Data-generating design for one experiment cell.  scenario1 draws effects
// independently of the variance; scenario2 scales the base effect draw by
// the latent sd (rejected for the point-mass prior, which would collapse the
// dependence); the intro scenarios carry their own fixed effect laws and
// ignore f_shape.
struct ScenarioSpec {
  DepScenario dependence = DepScenario::scenario1;
  GPrior g_prior = GPrior::sic;
  FShape f_shape = FShape::unimodal;
  double pi = 0.3;       // non-null fraction
  std::size_t m = 2000;  // hypotheses
  std::size_t n1 = 10, n2 = 10;

  void validate() const;
};

struct Latent {
  double mu = 0.0;
  double sigma2 = 1.0;
  bool nonnull = false;
};

std::vector<Latent> draw_latents(const ScenarioSpec& spec, Rng& rng);

// Two-group raw matrix: group A centered at mu_i, group B at zero, both with
// noise variance sigma2_i * n1 n2 / (n1 + n2), so the two-group summaries
// follow the hierarchical model with nu = n1 + n2 - 2.
RawMatrix generate_raw(const ScenarioSpec& spec, std::span<const Latent> latents, Rng& rng);

// exact discrete representation of the variance prior (pm / tpd only)
DiscretePrior oracle_prior_for(GPrior g);

enum class Method { coin_ss, coin_fs, oracle_coin };

struct ExperimentConfig {
  Method method = Method::coin_fs;
  double alpha = 0.1;
  int reps = 100;
  int parallelism = 1;  // replicate-level threads; results identical either way
  FsConfig fs;
  SsConfig ss;
  CoinConfig oracle;  // oracle_prior filled from the scenario when unset
};

struct ReplicateResult {
  int rep = 0;
  std::size_t rejections = 0, false_rejections = 0, true_rejections = 0, nonnulls = 0;
  double fdp = 0.0, tpp = 0.0;
};

struct ExperimentResult {
  double fdr = 0.0, tpr = 0.0, se_fdr = 0.0, se_tpr = 0.0;
  bool se_degenerate = false;  // reps == 1: standard errors reported as 0
  std::vector<ReplicateResult> replicates;
};

ExperimentResult run_experiment(const ScenarioSpec& spec, const ExperimentConfig& cfg,
                                RngStream master);

struct ScaleSettings {
  std::size_t m = 2000;
  int reps = 100;
};

// desk scale {2000, 100}; full scale {20000, 200}
ScaleSettings default_scale(bool paper_scale);

}  // namespace coin
