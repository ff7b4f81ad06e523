#include "coin/cli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coin/io.hpp"
#include "coin/simulate.hpp"

namespace coin {

namespace {

// shortest round-trip decimal form: deterministic and re-parsable
std::string str(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string str(std::uint64_t v) { return std::to_string(v); }

CLI::Validator in_open_unit(const char* name) {
  return CLI::Validator(
      [name](std::string& s) -> std::string {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || !(v > 0.0 && v < 1.0))
          return std::string(name) + " must be in the open interval (0, 1)";
        return {};
      },
      "FLOAT in (0,1)");
}

CLI::Validator in_half_open_unit(const char* name) {
  return CLI::Validator(
      [name](std::string& s) -> std::string {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || !(v > 0.0 && v <= 1.0))
          return std::string(name) + " must be in (0, 1]";
        return {};
      },
      "FLOAT in (0,1]");
}

class StderrTimer {
 public:
  explicit StderrTimer(std::string label) : label_(std::move(label)) {}
  ~StderrTimer() {
    const auto dt = std::chrono::steady_clock::now() - t0_;
    const double s = std::chrono::duration<double>(dt).count();
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << "[coin] " << label_ << " finished in " << s << " s\n";
    std::cerr << os.str();
  }

 private:
  std::string label_;
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

// largest i with E_(i) >= m / (alpha i); 0 when none qualifies
std::size_t ebh_cut_index(std::vector<double> evalues, double alpha) {
  std::sort(evalues.begin(), evalues.end(), std::greater<>());
  const std::size_t m = evalues.size();
  for (std::size_t i = m; i >= 1; --i)
    if (evalues[i - 1] >= static_cast<double>(m) / (alpha * static_cast<double>(i))) return i;
  return 0;
}

std::vector<std::pair<std::string, std::string>> sorted_config(
    std::map<std::string, std::string> kv) {
  return {kv.begin(), kv.end()};
}

void emit_text(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open " + out_path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing " + out_path);
  }
}

std::vector<bool> rejection_mask(std::size_t m, std::span<const std::size_t> rejected) {
  std::vector<bool> mask(m, false);
  for (std::size_t i : rejected) mask[i] = true;
  return mask;
}

void write_outputs(const RunReport& rep, const std::string& report_path, bool fs_style) {
  std::ostringstream os;
  os << "# " << rep.method << "  m=" << rep.m << "  nu=" << rep.nu << "  alpha=" << str(rep.alpha)
     << "  seed=" << rep.seed << '\n';
  std::ostringstream diag;
  if (rep.tau) diag << "  tau=" << str(*rep.tau);
  if (rep.k_hat) diag << "  k_hat=" << *rep.k_hat;
  if (rep.u) diag << "  u=" << str(*rep.u);
  if (!diag.str().empty()) os << "#" << diag.str() << '\n';
  if (rep.zero_s2 > 0) os << "# warning: " << rep.zero_s2 << " zero-variance rows clamped\n";
  os << "# rejections: " << rep.rejected_ids.size() << '\n';
  os << (fs_style ? "id,x,s2,e_value\n" : "id,x,s2,score\n");
  for (const auto& h : rep.hypotheses) {
    if (!h.rejected) continue;
    const double v = fs_style ? h.e_value.value_or(0.0) : h.score.value_or(0.0);
    os << h.id << ',' << str(h.x) << ',' << str(h.s2) << ',' << str(v) << '\n';
  }
  std::cout << os.str();
  if (!report_path.empty()) write_report(std::filesystem::path(report_path), rep);
}

struct FsOpts {
  std::string input, out;
  std::optional<int> nu;
  double alpha = 0.1;
  int folds = 5;
  double c = 0.9;
  bool no_randomize = false;
  std::uint64_t seed = 0;
};

int run_fs_cmd(const FsOpts& o) {
  StderrTimer timer("fs");
  const SummaryTable table = read_summary_table(std::filesystem::path(o.input), o.nu);
  FsConfig cfg;
  cfg.folds = o.folds;
  cfg.c = o.c;
  cfg.use_u_ebh = !o.no_randomize;
  cfg.coin.npmle_exclude = table.zero_s2_rows;
  const FsResult res = run_coin_fs(table.stats, table.nu, o.alpha, cfg, RngStream{o.seed, 0});

  RunReport rep;
  rep.method = "coin-fs";
  rep.alpha = o.alpha;
  rep.seed = o.seed;
  rep.nu = table.nu;
  rep.m = table.stats.size();
  if (cfg.use_u_ebh) rep.u = res.u;
  rep.k_hat = ebh_cut_index(res.evalues, o.alpha);
  rep.zero_s2 = table.zero_s2_rows.size();
  for (std::size_t i : res.rejected) rep.rejected_ids.push_back(table.ids[i]);
  const auto mask = rejection_mask(rep.m, res.rejected);
  for (std::size_t i = 0; i < rep.m; ++i)
    rep.hypotheses.push_back({table.ids[i], table.stats[i].x, table.stats[i].s2, std::nullopt,
                              res.evalues[i], mask[i] ? true : false});
  rep.config = sorted_config({{"alpha", str(o.alpha)},
                              {"c", str(o.c)},
                              {"folds", std::to_string(o.folds)},
                              {"input", o.input},
                              {"method", "coin-fs"},
                              {"nu", std::to_string(table.nu)},
                              {"out", o.out},
                              {"randomize", o.no_randomize ? "off" : "on"},
                              {"seed", str(o.seed)}});
  write_outputs(rep, o.out, /*fs_style=*/true);
  return 0;
}

struct SsOpts {
  std::string input, out;
  std::size_t n1 = 0;
  double alpha = 0.1;
  std::uint64_t seed = 0;
};

int run_ss_cmd(const SsOpts& o) {
  StderrTimer timer("ss");
  const RawMatrix raw = read_raw_matrix(std::filesystem::path(o.input), o.n1);
  const SsResult res = run_coin_ss(raw, o.alpha, SsConfig{}, RngStream{o.seed, 0});

  RunReport rep;
  rep.method = "coin-ss";
  rep.alpha = o.alpha;
  rep.seed = o.seed;
  rep.nu = res.nu_test;
  rep.m = raw.m;
  if (res.coin.diag.tau.found) rep.tau = res.coin.diag.tau.value;
  rep.zero_s2 = res.zero_s2_test + res.zero_s2_train;
  for (std::size_t i : res.rejected) rep.rejected_ids.push_back(raw.ids[i]);
  const auto mask = rejection_mask(rep.m, res.rejected);
  // x/s2 columns carry the test-half summaries, not the raw samples
  for (std::size_t i = 0; i < rep.m; ++i)
    rep.hypotheses.push_back({raw.ids[i], res.test_stats[i].x, res.test_stats[i].s2,
                              res.coin.pairs[i].u, std::nullopt, mask[i] ? true : false});
  rep.config = sorted_config({{"alpha", str(o.alpha)},
                              {"input", o.input},
                              {"method", "coin-ss"},
                              {"n1", std::to_string(o.n1)},
                              {"nu_test", std::to_string(res.nu_test)},
                              {"nu_train", std::to_string(res.nu_train)},
                              {"out", o.out},
                              {"seed", str(o.seed)}});
  write_outputs(rep, o.out, /*fs_style=*/false);
  return 0;
}

struct CoinOpts {
  std::string input, train, out;
  std::optional<int> nu, train_nu;
  double alpha = 0.1;
  bool refined = false;
  std::uint64_t seed = 0;
};

int run_coin_cmd(const CoinOpts& o) {
  StderrTimer timer("coin");
  const SummaryTable test = read_summary_table(std::filesystem::path(o.input), o.nu);
  const SummaryTable train = read_summary_table(std::filesystem::path(o.train), o.train_nu);
  CoinConfig cfg;
  cfg.refined = o.refined;
  cfg.npmle_exclude = train.zero_s2_rows;
  const CoinResult res = run_coin(test.stats, test.nu, train.stats, train.nu, o.alpha, cfg,
                                  RngStream{o.seed, 0});

  RunReport rep;
  rep.method = "coin";
  rep.alpha = o.alpha;
  rep.seed = o.seed;
  rep.nu = test.nu;
  rep.m = test.stats.size();
  if (res.diag.tau.found) rep.tau = res.diag.tau.value;
  rep.zero_s2 = test.zero_s2_rows.size() + train.zero_s2_rows.size();
  for (std::size_t i : res.rejected) rep.rejected_ids.push_back(test.ids[i]);
  const auto mask = rejection_mask(rep.m, res.rejected);
  for (std::size_t i = 0; i < rep.m; ++i)
    rep.hypotheses.push_back({test.ids[i], test.stats[i].x, test.stats[i].s2, res.pairs[i].u,
                              std::nullopt, mask[i] ? true : false});
  rep.config = sorted_config({{"alpha", str(o.alpha)},
                              {"input", o.input},
                              {"method", "coin"},
                              {"nu", std::to_string(test.nu)},
                              {"out", o.out},
                              {"refined", o.refined ? "on" : "off"},
                              {"seed", str(o.seed)},
                              {"train", o.train},
                              {"train_nu", std::to_string(train.nu)}});
  write_outputs(rep, o.out, /*fs_style=*/false);
  return 0;
}

struct SimOpts {
  Method method = Method::coin_fs;
  DepScenario scenario = DepScenario::scenario1;
  GPrior g = GPrior::sic;
  FShape f = FShape::unimodal;
  std::vector<double> pis;
  double alpha = 0.1;
  std::size_t m = 0;
  int reps = 0;
  bool m_given = false, reps_given = false;
  bool paper_scale = false;
  std::size_t n1 = 10, n2 = 10;
  int threads = 1;
  std::string out;
  std::uint64_t seed = 0;
};

const char* method_name(Method m) {
  switch (m) {
    case Method::coin_fs: return "coin-fs";
    case Method::coin_ss: return "coin-ss";
    case Method::oracle_coin: return "oracle-coin";
  }
  return "?";
}

int run_simulate_cmd(SimOpts o) {
  StderrTimer timer("simulate");
  const ScaleSettings sc = default_scale(o.paper_scale);
  if (!o.m_given) o.m = sc.m;
  if (!o.reps_given) o.reps = sc.reps;
  if (o.pis.empty()) o.pis = {0.3};

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << "method,pi,fdr,tpr,se_fdr,se_tpr\n";
  for (double pi : o.pis) {
    ScenarioSpec spec;
    spec.dependence = o.scenario;
    spec.g_prior = o.g;
    spec.f_shape = o.f;
    spec.pi = pi;
    spec.m = o.m;
    spec.n1 = o.n1;
    spec.n2 = o.n2;
    ExperimentConfig cfg;
    cfg.method = o.method;
    cfg.alpha = o.alpha;
    cfg.reps = o.reps;
    cfg.parallelism = o.threads;
    // each pi owns a substream keyed on its bit pattern, so rows do not
    // depend on the order or number of --pi flags
    const RngStream stream = RngStream{o.seed, 0}.child(std::bit_cast<std::uint64_t>(pi));
    const ExperimentResult r = run_experiment(spec, cfg, stream);
    os << method_name(o.method) << ',' << pi << ',' << r.fdr << ',' << r.tpr << ',' << r.se_fdr
       << ',' << r.se_tpr << '\n';
  }
  emit_text(os.str(), o.out);
  return 0;
}

struct OracleCheckOpts {
  double alpha = 0.1;
  double pi = 0.3;
  std::size_t m = 200;
  int reps = 200;
  std::uint64_t seed = 0;
};

struct DrawnInstance {
  std::vector<Latent> latents;
  SummarizeResult summ;
};

DrawnInstance draw_instance(const ScenarioSpec& spec, RngStream rs, std::uint64_t latent_key,
                            std::uint64_t raw_key) {
  DrawnInstance d;
  Rng lr(rs.child(latent_key));
  d.latents = draw_latents(spec, lr);
  Rng rr(rs.child(raw_key));
  const RawMatrix raw = generate_raw(spec, d.latents, rr);
  d.summ = summarize_two_group(raw);
  sanitize_zero_s2(d.summ.stats);
  return d;
}

int run_oracle_check_cmd(const OracleCheckOpts& o) {
  StderrTimer timer("oracle-check");
  bool all_pass = true;
  std::ostringstream os;

  // (a) threshold-procedure FDR under the known point-mass prior, and
  // (b) within-run agreement between the threshold decisions and e-BH on the
  //     induced e-values m * xi * I(s <= tau) / (1 + n_excess(tau))
  {
    ScenarioSpec spec;
    spec.g_prior = GPrior::pm;
    spec.pi = o.pi;
    spec.m = o.m;
    const RngStream root{o.seed, 1};
    CoinConfig cc;
    cc.oracle_prior = oracle_prior_for(GPrior::pm);
    double fdp_sum = 0.0, fdp_sq = 0.0;
    int eq_ok = 0;
    for (int rep = 0; rep < o.reps; ++rep) {
      const RngStream rs = root.child(static_cast<std::uint64_t>(rep));
      const DrawnInstance test = draw_instance(spec, rs, 0, 1);
      const DrawnInstance train = draw_instance(spec, rs, 3, 4);
      const CoinResult res = run_coin(test.summ.stats, test.summ.nu, train.summ.stats,
                                      train.summ.nu, o.alpha, cc, rs.child(2));
      std::size_t fp = 0;
      for (std::size_t i : res.rejected)
        if (!test.latents[i].nonnull) ++fp;
      const double fdp =
          static_cast<double>(fp) / static_cast<double>(std::max<std::size_t>(res.rejected.size(), 1));
      fdp_sum += fdp;
      fdp_sq += fdp * fdp;

      std::vector<double> ev(o.m, 0.0);
      if (res.diag.tau.found) {
        std::size_t n_excess = 0;
        for (const auto& p : res.diag.curve)
          if (p.t == res.diag.tau.value) n_excess = p.n_excess;
        const double e = static_cast<double>(o.m) / (1.0 + static_cast<double>(n_excess));
        for (const auto& p : res.pairs)
          if (p.xi && p.s <= res.diag.tau.value) ev[p.index] = e;
      }
      if (ebh(ev, o.alpha) == res.rejected) ++eq_ok;
    }
    const double fdr = fdp_sum / o.reps;
    const double var = std::max(0.0, (fdp_sq - o.reps * fdr * fdr) / std::max(o.reps - 1, 1));
    const double limit = o.alpha + 3.0 * std::sqrt(var / o.reps);
    const bool pass_a = fdr <= limit;
    const bool pass_b = eq_ok == o.reps;
    all_pass = all_pass && pass_a && pass_b;
    os << "[oracle-check] fdr-bound: " << (pass_a ? "pass" : "FAIL") << " (fdr=" << str(fdr)
       << ", limit=" << str(limit) << ")\n";
    os << "[oracle-check] ebh-equivalence: " << (pass_b ? "pass" : "FAIL") << " (" << eq_ok << "/"
       << o.reps << " replicates identical)\n";
  }

  // (c) fold e-values are compound: the null-sum mean stays at or below m
  {
    ScenarioSpec spec;
    spec.g_prior = GPrior::tpd;
    spec.pi = o.pi;
    spec.m = o.m;
    const RngStream root{o.seed, 2};
    FsConfig fc;
    fc.coin.oracle_prior = oracle_prior_for(GPrior::tpd);
    double sum = 0.0, sq = 0.0;
    for (int rep = 0; rep < o.reps; ++rep) {
      const RngStream rs = root.child(static_cast<std::uint64_t>(rep));
      const DrawnInstance inst = draw_instance(spec, rs, 0, 1);
      const FsResult res = run_coin_fs(inst.summ.stats, inst.summ.nu, o.alpha, fc, rs.child(2));
      double null_sum = 0.0;
      for (std::size_t i = 0; i < o.m; ++i)
        if (!inst.latents[i].nonnull) null_sum += res.evalues[i];
      const double v = null_sum / static_cast<double>(o.m);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / o.reps;
    const double var = std::max(0.0, (sq - o.reps * mean * mean) / std::max(o.reps - 1, 1));
    const double limit = 1.0 + 3.0 * std::sqrt(var / o.reps);
    const bool pass_c = mean <= limit;
    all_pass = all_pass && pass_c;
    os << "[oracle-check] compound-evalues: " << (pass_c ? "pass" : "FAIL") << " (mean="
       << str(mean) << ", limit=" << str(limit) << ")\n";
  }

  std::cout << os.str();
  return all_pass ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "coin: conformal inference for normal means with estimated variance priors.\n"
      "The default --seed can also be set through the COIN_SEED environment variable."};
  app.require_subcommand(1);

  const std::map<std::string, DepScenario> scen_map{
      {"s1", DepScenario::scenario1},     {"scenario1", DepScenario::scenario1},
      {"s2", DepScenario::scenario2},     {"scenario2", DepScenario::scenario2},
      {"intro1", DepScenario::intro1},    {"intro2", DepScenario::intro2}};
  const std::map<std::string, GPrior> g_map{
      {"sic", GPrior::sic}, {"pm", GPrior::pm}, {"tpd", GPrior::tpd}};
  const std::map<std::string, FShape> f_map{{"unimodal", FShape::unimodal},
                                            {"symbimodal", FShape::sym_bimodal},
                                            {"sym-bimodal", FShape::sym_bimodal},
                                            {"asymbimodal", FShape::asym_bimodal},
                                            {"asym-bimodal", FShape::asym_bimodal}};
  const std::map<std::string, Method> method_map{
      {"fs", Method::coin_fs},      {"coin-fs", Method::coin_fs},
      {"ss", Method::coin_ss},      {"coin-ss", Method::coin_ss},
      {"oracle", Method::oracle_coin}, {"oracle-coin", Method::oracle_coin}};

  FsOpts fso;
  auto* fs = app.add_subcommand("fs", "feature-splitting run on a summary table");
  fs->add_option("-i,--input", fso.input, "summary CSV (header id,x,s2)")
      ->required()
      ->check(CLI::ExistingFile);
  fs->add_option("--nu", fso.nu, "degrees of freedom (overrides any # nu= comment)");
  fs->add_option("--alpha", fso.alpha, "target FDR level")
      ->capture_default_str()
      ->check(in_open_unit("alpha"));
  fs->add_option("--folds", fso.folds, "number of folds")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  fs->add_option("--c", fso.c, "fold threshold level factor (fold level = c * alpha)")
      ->capture_default_str()
      ->check(in_half_open_unit("c"));
  fs->add_flag("--no-randomize", fso.no_randomize, "plain e-BH instead of U-eBH");
  fs->add_option("--seed", fso.seed, "RNG seed")->capture_default_str()->envname("COIN_SEED");
  fs->add_option("-o,--out", fso.out, "write the machine-readable report here");

  SsOpts sso;
  auto* ss = app.add_subcommand("ss", "sample-splitting run on a raw two-group matrix");
  ss->add_option("-i,--input", sso.input, "raw CSV (first column id, then sample columns)")
      ->required()
      ->check(CLI::ExistingFile);
  ss->add_option("--n1", sso.n1, "number of group-A columns")->required();
  ss->add_option("--alpha", sso.alpha, "target FDR level")
      ->capture_default_str()
      ->check(in_open_unit("alpha"));
  ss->add_option("--seed", sso.seed, "RNG seed")->capture_default_str()->envname("COIN_SEED");
  ss->add_option("-o,--out", sso.out, "write the machine-readable report here");

  CoinOpts cno;
  auto* cn = app.add_subcommand("coin", "standalone run with an explicit train table");
  cn->add_option("-i,--input", cno.input, "test summary CSV")->required()->check(CLI::ExistingFile);
  cn->add_option("--train", cno.train, "train summary CSV")->required()->check(CLI::ExistingFile);
  cn->add_option("--nu", cno.nu, "test degrees of freedom (overrides the file comment)");
  cn->add_option("--train-nu", cno.train_nu, "train degrees of freedom");
  cn->add_option("--alpha", cno.alpha, "target FDR level")
      ->capture_default_str()
      ->check(in_open_unit("alpha"));
  cn->add_flag("--refined", cno.refined, "use the refined threshold");
  cn->add_option("--seed", cno.seed, "RNG seed")->capture_default_str()->envname("COIN_SEED");
  cn->add_option("-o,--out", cno.out, "write the machine-readable report here");

  SimOpts smo;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiment grid");
  sim->add_option("--method", smo.method, "fs | ss | oracle")
      ->transform(CLI::CheckedTransformer(method_map, CLI::ignore_case))
      ->capture_default_str();
  sim->add_option("--scenario", smo.scenario, "s1 | s2 | intro1 | intro2")
      ->transform(CLI::CheckedTransformer(scen_map, CLI::ignore_case))
      ->capture_default_str();
  sim->add_option("--g", smo.g, "variance prior: sic | pm | tpd")
      ->transform(CLI::CheckedTransformer(g_map, CLI::ignore_case))
      ->capture_default_str();
  sim->add_option("--f", smo.f, "effect shape: unimodal | sym-bimodal | asym-bimodal")
      ->transform(CLI::CheckedTransformer(f_map, CLI::ignore_case))
      ->capture_default_str();
  sim->add_option("--pi", smo.pis, "non-null fraction(s); repeatable")
      ->check(in_open_unit("pi"));
  sim->add_option("--alpha", smo.alpha, "target FDR level")
      ->capture_default_str()
      ->check(in_open_unit("alpha"));
  auto* m_opt = sim->add_option("--m", smo.m, "hypotheses per replicate");
  auto* reps_opt = sim->add_option("--reps", smo.reps, "Monte Carlo replicates");
  sim->add_flag("--paper-scale", smo.paper_scale,
                "full-size defaults (m=20000, reps=200) for overnight reproduction");
  sim->add_option("--n1", smo.n1, "group-A samples")->capture_default_str();
  sim->add_option("--n2", smo.n2, "group-B samples")->capture_default_str();
  sim->add_option("--threads", smo.threads, "replicate-level worker threads")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));
  sim->add_option("--seed", smo.seed, "RNG seed")->capture_default_str()->envname("COIN_SEED");
  sim->add_option("-o,--out", smo.out, "also write the results table here");

  OracleCheckOpts oco;
  auto* oc = app.add_subcommand("oracle-check",
                                "empirical checks of the known-prior guarantees");
  oc->add_option("--alpha", oco.alpha, "target FDR level")
      ->capture_default_str()
      ->check(in_open_unit("alpha"));
  oc->add_option("--pi", oco.pi, "non-null fraction")
      ->capture_default_str()
      ->check(in_open_unit("pi"));
  oc->add_option("--m", oco.m, "hypotheses per replicate")->capture_default_str();
  oc->add_option("--reps", oco.reps, "replicates per check")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  oc->add_option("--seed", oco.seed, "RNG seed")->capture_default_str()->envname("COIN_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(fs)) return run_fs_cmd(fso);
    if (app.got_subcommand(ss)) return run_ss_cmd(sso);
    if (app.got_subcommand(cn)) return run_coin_cmd(cno);
    if (app.got_subcommand(sim)) {
      smo.m_given = m_opt->count() > 0;
      smo.reps_given = reps_opt->count() > 0;
      return run_simulate_cmd(smo);
    }
    if (app.got_subcommand(oc)) return run_oracle_check_cmd(oco);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace coin
