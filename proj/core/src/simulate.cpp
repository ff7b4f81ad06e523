#include "coin/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace coin {

namespace {

double draw_sigma2(GPrior g, Rng& rng) {
  switch (g) {
    case GPrior::sic:
      return 6.0 / rng.chi_squared(6.0);
    case GPrior::pm:
      return 1.0;
    case GPrior::tpd:
      return rng.uniform() < 0.7 ? 1.0 : 10.0;
  }
  throw std::invalid_argument("draw_sigma2: unknown prior");
}

double draw_shape(FShape f, Rng& rng) {
  switch (f) {
    case FShape::unimodal:
      return 4.0 * rng.normal();
    case FShape::sym_bimodal:
      return (rng.uniform() < 0.5 ? -4.0 : 4.0) + rng.normal();
    case FShape::asym_bimodal:
      return (rng.uniform() < 0.3 ? -3.0 : 4.0) + rng.normal();
  }
  throw std::invalid_argument("draw_shape: unknown shape");
}

}  // namespace

void ScenarioSpec::validate() const {
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("ScenarioSpec: pi must be in (0, 1)");
  if (m < 1) throw std::invalid_argument("ScenarioSpec: m must be >= 1");
  if (n1 < 2 || n2 < 2) throw std::invalid_argument("ScenarioSpec: both groups need >= 2 samples");
  if (dependence == DepScenario::scenario2 && g_prior == GPrior::pm)
    throw std::invalid_argument(
        "ScenarioSpec: scenario2 with the point-mass prior collapses to scenario1; "
        "use a non-degenerate variance prior");
}

std::vector<Latent> draw_latents(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<Latent> out(spec.m);
  for (auto& l : out) {
    l.sigma2 = draw_sigma2(spec.g_prior, rng);
    l.nonnull = rng.uniform() < spec.pi;
    if (!l.nonnull) {
      l.mu = 0.0;
      continue;
    }
    switch (spec.dependence) {
      case DepScenario::scenario1:
        l.mu = draw_shape(spec.f_shape, rng);
        break;
      case DepScenario::scenario2:
        l.mu = std::sqrt(l.sigma2) * draw_shape(spec.f_shape, rng);
        break;
      case DepScenario::intro1: {
        const double c = rng.uniform();
        const double sd = c < 0.1 ? 1.0 : (c < 0.3 ? 2.0 : 4.0);
        l.mu = sd * rng.normal();
        break;
      }
      case DepScenario::intro2: {
        const double sd = std::sqrt(l.sigma2);
        const double center = rng.uniform() < 0.3 ? -3.0 * l.sigma2 : 4.0 * l.sigma2;
        l.mu = center + sd * rng.normal();
        break;
      }
    }
  }
  return out;
}

RawMatrix generate_raw(const ScenarioSpec& spec, std::span<const Latent> latents, Rng& rng) {
  spec.validate();
  if (latents.size() != spec.m)
    throw std::invalid_argument("generate_raw: latents must match spec.m");
  RawMatrix raw;
  raw.design = Design::two_group;
  raw.m = spec.m;
  raw.n = spec.n1 + spec.n2;
  raw.n1 = spec.n1;
  raw.values.resize(raw.m * raw.n);
  const double scale = static_cast<double>(spec.n1) * static_cast<double>(spec.n2) /
                       static_cast<double>(spec.n1 + spec.n2);
  for (std::size_t i = 0; i < raw.m; ++i) {
    const double eta = std::sqrt(latents[i].sigma2 * scale);
    for (std::size_t j = 0; j < raw.n; ++j) {
      const double center = j < spec.n1 ? latents[i].mu : 0.0;
      raw.values[i * raw.n + j] = center + eta * rng.normal();
    }
  }
  return raw;
}

DiscretePrior oracle_prior_for(GPrior g) {
  switch (g) {
    case GPrior::pm:
      return DiscretePrior::point_mass(1.0);
    case GPrior::tpd: {
      DiscretePrior p;
      p.atoms = {1.0, 10.0};
      p.weights = {0.7, 0.3};
      return p;
    }
    case GPrior::sic:
      throw std::invalid_argument(
          "oracle_prior_for: the scaled inverse chi^2 prior has no exact finite-atom "
          "representation; oracle mode needs pm or tpd");
  }
  throw std::invalid_argument("oracle_prior_for: unknown prior");
}

namespace {

ReplicateResult run_one_replicate(const ScenarioSpec& spec, const ExperimentConfig& cfg,
                                  RngStream master, int rep) {
  const RngStream rs = master.child(static_cast<std::uint64_t>(rep));
  Rng latent_rng(rs.child(0));
  const auto latents = draw_latents(spec, latent_rng);
  Rng raw_rng(rs.child(1));
  const auto raw = generate_raw(spec, latents, raw_rng);

  std::vector<std::size_t> rejected;
  switch (cfg.method) {
    case Method::coin_ss:
      rejected = run_coin_ss(raw, cfg.alpha, cfg.ss, rs.child(2)).rejected;
      break;
    case Method::coin_fs: {
      auto summ = summarize_two_group(raw);
      FsConfig fs = cfg.fs;
      fs.coin.npmle_exclude = sanitize_zero_s2(summ.stats);
      rejected = run_coin_fs(summ.stats, summ.nu, cfg.alpha, fs, rs.child(2)).rejected;
      break;
    }
    case Method::oracle_coin: {
      auto test = summarize_two_group(raw);
      sanitize_zero_s2(test.stats);
      Rng latent2_rng(rs.child(3));
      const auto train_latents = draw_latents(spec, latent2_rng);
      Rng raw2_rng(rs.child(4));
      const auto train_raw = generate_raw(spec, train_latents, raw2_rng);
      auto train = summarize_two_group(train_raw);
      sanitize_zero_s2(train.stats);
      CoinConfig cc = cfg.oracle;
      if (!cc.oracle_prior) cc.oracle_prior = oracle_prior_for(spec.g_prior);
      rejected = run_coin(test.stats, test.nu, train.stats, train.nu, cfg.alpha, cc,
                          rs.child(2))
                     .rejected;
      break;
    }
  }

  ReplicateResult r;
  r.rep = rep;
  r.rejections = rejected.size();
  for (std::size_t id : rejected) {
    if (latents[id].nonnull)
      ++r.true_rejections;
    else
      ++r.false_rejections;
  }
  for (const auto& l : latents) r.nonnulls += l.nonnull ? 1 : 0;
  r.fdp = static_cast<double>(r.false_rejections) /
          static_cast<double>(std::max<std::size_t>(r.rejections, 1));
  r.tpp = static_cast<double>(r.true_rejections) /
          static_cast<double>(std::max<std::size_t>(r.nonnulls, 1));
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ScenarioSpec& spec, const ExperimentConfig& cfg_in,
                                RngStream master) {
  spec.validate();
  ExperimentConfig cfg = cfg_in;
  if (cfg.reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("run_experiment: alpha must be in (0, 1)");
  if (cfg.method == Method::oracle_coin && !cfg.oracle.oracle_prior)
    cfg.oracle.oracle_prior = oracle_prior_for(spec.g_prior);

  ExperimentResult out;
  out.replicates.resize(cfg.reps);

  auto run_range = [&](std::atomic<int>& next, std::exception_ptr& err, std::mutex& err_mu) {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= cfg.reps) return;
      try {
        out.replicates[rep] = run_one_replicate(spec, cfg, master, rep);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };

  if (cfg.parallelism <= 1) {
    for (int rep = 0; rep < cfg.reps; ++rep) {
      try {
        out.replicates[rep] = run_one_replicate(spec, cfg, master, rep);
      } catch (const std::exception& e) {
        throw std::runtime_error("run_experiment: replicate " + std::to_string(rep) +
                                 " (stream child " + std::to_string(rep) + " of seed " +
                                 std::to_string(master.seed) + ") failed: " + e.what());
      }
    }
  } else {
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> workers;
    const int threads = std::min(cfg.parallelism, cfg.reps);
    workers.reserve(threads);
    for (int t = 0; t < threads; ++t)
      workers.emplace_back([&] { run_range(next, err, err_mu); });
    for (auto& w : workers) w.join();
    if (err) {
      try {
        std::rethrow_exception(err);
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string("run_experiment: a replicate failed (seed ") +
                                 std::to_string(master.seed) + "): " + e.what());
      }
    }
  }

  double fdr = 0.0, tpr = 0.0;
  for (const auto& r : out.replicates) {
    fdr += r.fdp;
    tpr += r.tpp;
  }
  fdr /= cfg.reps;
  tpr /= cfg.reps;
  out.fdr = fdr;
  out.tpr = tpr;
  if (cfg.reps > 1) {
    double vf = 0.0, vt = 0.0;
    for (const auto& r : out.replicates) {
      vf += (r.fdp - fdr) * (r.fdp - fdr);
      vt += (r.tpp - tpr) * (r.tpp - tpr);
    }
    vf /= (cfg.reps - 1);
    vt /= (cfg.reps - 1);
    out.se_fdr = std::sqrt(vf / cfg.reps);
    out.se_tpr = std::sqrt(vt / cfg.reps);
  } else {
    out.se_degenerate = true;
  }
  return out;
}

ScaleSettings default_scale(bool paper_scale) {
  return paper_scale ? ScaleSettings{20000, 200} : ScaleSettings{2000, 100};
}

}  // namespace coin
