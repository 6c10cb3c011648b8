#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <vector>

#include "json.hpp"

#include "gfsplit/convergence.hpp"
#include "gfsplit/diagnostics.hpp"
#include "gfsplit/euclidean.hpp"
#include "gfsplit/evi.hpp"
#include "gfsplit/oracles.hpp"
#include "gfsplit/rng.hpp"
#include "gfsplit/trajectory.hpp"
#include "gfsplit/wass1d.hpp"

namespace gfsplit::cli {

namespace {

using json = nlohmann::json;
using euclidean::QuadraticFunctional;
using euclidean::Vec;
using wass1d::EntropyKind;
using wass1d::PotentialSpec;
using wass1d::QuantileDensity;

// All floating-point file output goes through this formatter so reruns are
// byte identical.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot open output file " + p.string());
  return out;
}

// command-line flag wins; otherwise the config may name the directory
std::filesystem::path output_dir_of(const Config& cfg, const CommonOptions& opt) {
  if (opt.output_dir_overridden) return opt.output_dir;
  return cfg.get_string_or("output_dir", opt.output_dir);
}

Discretisation discretisation_from(const Config& cfg) {
  if (cfg.has("steps_list")) return Discretisation(cfg.get_doubles("steps_list"));
  const double T = cfg.get_double("T");
  const std::size_t n = cfg.get_count("steps");
  return Discretisation::uniform(T, n);
}

// --------------------------------------------------------------------------
// Problem setup
// --------------------------------------------------------------------------

struct EuclideanSetup {
  QuadraticFunctional f1;
  QuadraticFunctional f2;
  SplitProblem<Vec> prob;
  Vec x0;
};

QuadraticFunctional quadratic_from(const Config& cfg, std::size_t dim,
                                   const std::string& a_key, const std::string& b_key) {
  std::vector<double> diag = cfg.get_doubles(a_key);
  if (diag.size() == 1) diag.assign(dim, diag[0]);
  if (diag.size() != dim) throw InvalidInput("config: " + a_key + " length mismatch");
  std::vector<double> b(dim, 0.0);
  if (cfg.has(b_key)) {
    b = cfg.get_doubles(b_key);
    if (b.size() == 1) b.assign(dim, b[0]);
    if (b.size() != dim) throw InvalidInput("config: " + b_key + " length mismatch");
  }
  return QuadraticFunctional(linalg::Matrix::diagonal(diag), std::move(b));
}

EuclideanSetup euclidean_setup(const Config& cfg) {
  const std::size_t dim = cfg.get_count_or("dim", 1);
  QuadraticFunctional f1 = quadratic_from(cfg, dim, "a1", "b1");
  QuadraticFunctional f2 = quadratic_from(cfg, dim, "a2", "b2");
  Vec x0 = cfg.get_doubles("x0");
  if (x0.size() == 1) x0.assign(dim, x0[0]);
  if (x0.size() != dim) throw InvalidInput("config: x0 length mismatch");
  auto prob = euclidean::build_euclidean_problem(f1, f2);
  return {std::move(f1), std::move(f2), std::move(prob), std::move(x0)};
}

struct WassersteinSetup {
  PotentialSpec pot;
  EntropyKind kind;
  wass1d::Order order;
  SplitProblem<QuantileDensity> prob;
  QuantileDensity x0;
  double lambda = 0.0;
  std::size_t cells = 0;
  bool barenblatt_start = false;
  oracles::BarenblattParams barenblatt{2.0, 1.0};
  oracles::OUParams ou{1.0, 0.0, 1.0};
};

wass1d::Order order_from(const Config& cfg) {
  const std::string s = cfg.get_string_or("order", "entropy-first");
  if (s == "entropy-first") return wass1d::Order::EntropyFirst;
  if (s == "potential-first") return wass1d::Order::PotentialFirst;
  throw InvalidInput("config: order must be entropy-first or potential-first");
}

WassersteinSetup wasserstein_setup(const Config& cfg, bool porous) {
  const double lambda = cfg.get_double_or("lambda", porous ? 0.0 : 1.0);
  const std::size_t cells = cfg.get_count_or("N", 256);
  EntropyKind kind = porous ? EntropyKind::renyi(cfg.get_double_or("m", 2.0))
                            : EntropyKind::boltzmann();
  PotentialSpec pot = (lambda == 0.0) ? PotentialSpec::zero()
                                      : PotentialSpec::quadratic(lambda);
  const wass1d::Order order = order_from(cfg);

  const std::string start = cfg.get_string_or("start", porous ? "barenblatt" : "gaussian");
  std::optional<QuantileDensity> x0;
  oracles::BarenblattParams bb{porous ? cfg.get_double_or("m", 2.0) : 2.0,
                               cfg.get_double_or("t0", 1.0)};
  oracles::OUParams ou{lambda > 0.0 ? lambda : 1.0, cfg.get_double_or("m0", 1.0),
                       cfg.get_double_or("sigma0", 2.0)};
  bool barenblatt_start = false;
  if (start == "gaussian") {
    x0 = wass1d::quantile_of_gaussian(ou.m0, ou.sigma0, cells);
  } else if (start == "barenblatt") {
    if (!porous) throw InvalidInput("config: barenblatt start needs the porous problem");
    x0 = oracles::barenblatt_quantiles(bb, bb.t0, cells);
    barenblatt_start = true;
  } else {
    throw InvalidInput("config: start must be gaussian or barenblatt");
  }

  auto prob = wass1d::build_wasserstein_problem(pot, kind, order);
  return {std::move(pot), kind,  order, std::move(prob), std::move(*x0),
          lambda,         cells, barenblatt_start, bb, ou};
}

const std::vector<std::string> kKnownKeys{
    "problem",  "T",      "steps", "steps_list", "seed",   "output_dir",
    "dim",      "a1",     "b1",    "a2",         "b2",     "x0",
    "lambda",   "N",      "m0",    "sigma0",     "order",  "m",
    "start",    "t0",     "step_counts",         "snapshot_steps",
    "corrupt_delta"};

std::string problem_kind(const Config& cfg) {
  cfg.require_known_keys(kKnownKeys);
  const std::string kind = cfg.get_string("problem");
  if (kind != "euclidean" && kind != "fokker-planck" && kind != "porous-medium")
    throw InvalidInput("config: problem must be euclidean, fokker-planck or porous-medium");
  return kind;
}

// --------------------------------------------------------------------------
// run
// --------------------------------------------------------------------------

template <class P>
void write_trajectory_csv(const std::filesystem::path& dir,
                          const TrajectoryRecord<P>& traj) {
  auto out = open_out(dir / "trajectory.csv");
  out << "k,t_k,delta_k,Delta_k,step_dist_sq,phi1,phi2,phi\n";
  for (std::size_t k = 1; k <= traj.size(); ++k) {
    out << k << ',' << fmt(traj.time(k)) << ',' << fmt(traj.delta[k - 1]) << ','
        << fmt(traj.Delta(k)) << ',' << fmt(traj.step_dist_sq[k - 1]) << ','
        << fmt(traj.phi1_full[k - 1]) << ',' << fmt(traj.phi2_full[k - 1]) << ','
        << fmt(traj.phi(k)) << '\n';
  }
}

template <class P>
json summary_of(const TrajectoryRecord<P>& traj, double wall_seconds) {
  json j;
  j["n"] = traj.size();
  j["total_time"] = traj.total_time();
  j["mesh"] = traj.disc.mesh();
  j["phi1_final"] = traj.phi1_full.back();
  j["phi2_final"] = traj.phi2_full.back();
  j["phi_final"] = traj.phi(traj.size());
  j["phi_initial"] = traj.phi(0);
  j["Delta_n"] = traj.Delta_total();
  j["max_certificate"] = traj.max_certificate;
  j["wall_seconds"] = wall_seconds;
  return j;
}

void write_snapshot(const std::filesystem::path& dir, std::size_t k,
                    const QuantileDensity& mu) {
  char name[32];
  std::snprintf(name, sizeof(name), "quantiles_%05zu.csv", k);
  auto out = open_out(dir / name);
  out << "i,s_i,x_i\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out << (i + 1) << ',' << fmt(QuantileDensity::cell_center(i, mu.size())) << ','
        << fmt(mu[i]) << '\n';
  }
}

int run_impl(const Config& cfg, const CommonOptions& opt) {
  const std::string kind = problem_kind(cfg);
  const Discretisation disc = discretisation_from(cfg);
  const std::filesystem::path dir = output_dir_of(cfg, opt);
  std::filesystem::create_directories(dir);

  const auto t_start = std::chrono::steady_clock::now();
  json summary;
  if (kind == "euclidean") {
    auto setup = euclidean_setup(cfg);
    const auto traj = run_scheme(setup.prob, setup.x0, disc);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t_start).count();
    write_trajectory_csv(dir, traj);
    summary = summary_of(traj, secs);
  } else {
    auto setup = wasserstein_setup(cfg, kind == "porous-medium");
    const auto traj = run_scheme(setup.prob, setup.x0, disc);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t_start).count();
    write_trajectory_csv(dir, traj);
    summary = summary_of(traj, secs);
    if (cfg.has("snapshot_steps")) {
      for (std::size_t k : cfg.get_counts("snapshot_steps")) {
        if (k > traj.size()) throw InvalidInput("config: snapshot step out of range");
        write_snapshot(dir, k, traj.point(k));
      }
    }
  }
  summary["problem"] = kind;
  auto out = open_out(dir / "summary.json");
  out << summary.dump(2) << '\n';
  if (opt.verbose) std::cout << summary.dump(2) << '\n';
  return 0;
}

// --------------------------------------------------------------------------
// convergence
// --------------------------------------------------------------------------

void write_convergence_csv(const std::filesystem::path& dir,
                           const ConvergenceTable& table) {
  auto out = open_out(dir / "convergence.csv");
  out << "n,mesh,sup_error\n";
  for (const auto& row : table.rows)
    out << row.n << ',' << fmt(row.mesh) << ',' << fmt(row.sup_error) << '\n';
  out << "slope," << fmt(table.fitted_slope) << ",\n";
}

int convergence_impl(const Config& cfg, const CommonOptions& opt) {
  const std::string kind = problem_kind(cfg);
  const double T = cfg.get_double("T");
  std::vector<std::size_t> counts = cfg.get_counts("step_counts");
  if (counts.size() < 3) throw InvalidInput("config: need at least 3 step counts");
  const std::filesystem::path dir = output_dir_of(cfg, opt);
  std::filesystem::create_directories(dir);

  ConvergenceTable table;
  if (kind == "euclidean") {
    auto setup = euclidean_setup(cfg);
    std::function<Vec(double)> ref = [&](double t) {
      return euclidean::exact_flow(setup.f1, setup.f2, setup.x0, flow_time_of(t));
    };
    table = trotter_convergence_study(setup.prob, setup.x0, T, counts, ref);
  } else if (kind == "fokker-planck") {
    auto setup = wasserstein_setup(cfg, false);
    std::function<QuantileDensity(double)> ref = [&](double t) {
      const auto m = oracles::ou_exact(setup.ou, flow_time_of(t));
      return wass1d::quantile_of_gaussian(m.mean, m.sigma, setup.cells);
    };
    table = trotter_convergence_study(setup.prob, setup.x0, T, counts, ref);
  } else {
    auto setup = wasserstein_setup(cfg, true);
    if (setup.lambda == 0.0 && setup.barenblatt_start) {
      std::function<QuantileDensity(double)> ref = [&](double t) {
        return oracles::barenblatt_quantiles(
            setup.barenblatt, setup.barenblatt.t0 + flow_time_of(t), setup.cells);
      };
      table = trotter_convergence_study(setup.prob, setup.x0, T, counts, ref);
    } else {
      // no closed form with a potential: self-convergence against a 4x finer run
      counts.push_back(counts.back() * 4);
      table = trotter_convergence_study(setup.prob, setup.x0, T, counts);
    }
  }

  write_convergence_csv(dir, table);
  if (opt.verbose) {
    for (const auto& row : table.rows)
      std::cout << "n=" << row.n << " mesh=" << fmt(row.mesh)
                << " sup_error=" << fmt(row.sup_error) << '\n';
    std::cout << "slope=" << fmt(table.fitted_slope) << '\n';
  }
  return 0;
}

// --------------------------------------------------------------------------
// check
// --------------------------------------------------------------------------

struct CheckLine {
  std::string family;
  bool pass = true;
  double worst = 0.0;
  double tol = 0.0;
};

// Test fixture: shrink the recorded per-step increases so downstream
// verdicts must fail. Controlled by the corrupt_delta config key.
template <class P>
void corrupt_record(TrajectoryRecord<P>& traj, double amount) {
  const double bump = amount * (1.0 + traj.Delta_total()) /
                      static_cast<double>(traj.size());
  double running = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    traj.delta[k] -= bump;
    running += traj.delta[k];
    traj.delta_sum[k] = running;
  }
}

template <class P>
CheckLine check_record_consistency(const TrajectoryRecord<P>& traj) {
  CheckLine line{"record-consistency", true, 0.0, 1e-12};
  double running = 0.0;
  for (std::size_t k = 1; k <= traj.size(); ++k) {
    const double expect =
        std::max(traj.phi1_full[k - 1] - traj.phi1_half[k - 1], 0.0);
    line.worst = std::max(line.worst, std::abs(traj.delta[k - 1] - expect));
    line.worst = std::max(line.worst, -traj.delta[k - 1]);  // delta_k >= 0
    running += traj.delta[k - 1];
    line.worst = std::max(line.worst, std::abs(traj.Delta(k) - running));
  }
  line.pass = line.worst <= line.tol;
  return line;
}

template <class P>
std::vector<CheckLine> structural_checks(const TrajectoryRecord<P>& traj,
                                         const SplitProblem<P>& prob,
                                         const std::vector<P>& probes) {
  std::vector<CheckLine> lines;
  const double tol = inequality_tolerance(traj);

  lines.push_back(check_record_consistency(traj));

  CheckLine evi{"discrete-evi", true, 0.0, tol};
  for (const auto& w : probes) {
    const auto res = check_discrete_evi(traj, prob, w);
    evi.worst = std::max(evi.worst, res.worst);
  }
  evi.pass = evi.worst <= evi.tol;
  lines.push_back(evi);

  const auto apriori = check_apriori(traj);
  lines.push_back({"apriori", apriori.worst <= tol, apriori.worst, tol});

  CheckLine rint{"r-integral", true, 0.0, tol};
  for (const auto& row : check_r_integral(traj))
    rint.worst = std::max(rint.worst, row.lhs - row.rhs);
  rint.pass = rint.worst <= rint.tol;
  lines.push_back(rint);

  return lines;
}

int check_impl(const Config& cfg, const CommonOptions& opt) {
  const std::string kind = problem_kind(cfg);
  const Discretisation disc = discretisation_from(cfg);
  const std::uint64_t seed =
      opt.seed_overridden ? opt.seed : static_cast<std::uint64_t>(cfg.get_count_or("seed", 1));
  const double corrupt = cfg.get_double_or("corrupt_delta", 0.0);
  Rng rng(seed);

  std::vector<CheckLine> lines;
  if (kind == "euclidean") {
    auto setup = euclidean_setup(cfg);
    auto traj = run_scheme(setup.prob, setup.x0, disc);
    if (corrupt > 0.0) corrupt_record(traj, corrupt);
    std::vector<Vec> probes{setup.x0};
    for (int i = 0; i < 8; ++i) {
      Vec w(setup.x0.size());
      for (double& v : w) v = rng.uniform(-2.0, 2.0);
      probes.push_back(std::move(w));
    }
    lines = structural_checks(traj, setup.prob, probes);
  } else {
    const bool porous = (kind == "porous-medium");
    auto setup = wasserstein_setup(cfg, porous);
    auto traj = run_scheme(setup.prob, setup.x0, disc);
    if (corrupt > 0.0) corrupt_record(traj, corrupt);

    std::vector<QuantileDensity> probes{setup.x0};
    const double center = setup.x0.mean();
    const double spread = std::sqrt(std::max(
        setup.x0.second_moment() - center * center, 0.01));
    for (int i = 0; i < 8; ++i) {
      probes.push_back(wass1d::quantile_of_gaussian(
          center + rng.uniform(-1.0, 1.0), spread * rng.uniform(0.6, 1.5),
          setup.cells));
    }
    lines = structural_checks(traj, setup.prob, probes);

    // resolvent/energy estimates at the initial measure, step = mesh
    const auto compat =
        wass1d::check_compatibility(setup.x0, setup.pot, setup.kind, disc.mesh());
    CheckLine cl{"compatibility", true, 0.0, 0.0};
    for (const auto& l : compat.lines) {
      if (!l.applicable) continue;
      cl.worst = std::max(cl.worst, l.lhs - l.rhs);
      cl.tol = std::max(cl.tol, l.tol);
      cl.pass = cl.pass && l.holds;
    }
    lines.push_back(cl);

    // growth control, mode and constants matched to the pairing
    const double lam = setup.pot.laplacian_bound;
    const double tol = inequality_tolerance(traj);
    A3Report a3;
    if (!setup.kind.is_renyi()) {
      a3 = check_a3(traj, ChiMode::Constant, {lam, 0.0, 1.0});
    } else if (setup.order == wass1d::Order::EntropyFirst) {
      a3 = check_a3(traj, ChiMode::Phi1,
                    {0.0, (setup.kind.m() - 1.0) * lam, setup.kind.m()});
    } else {
      a3 = check_a3(traj, ChiMode::Phi2,
                    {(setup.kind.m() - 1.0) * lam, (setup.kind.m() - 1.0) * lam,
                     setup.kind.m()});
    }
    lines.push_back({"a3-growth", a3.worst() <= tol, std::max(a3.worst(), -1e12), tol});
  }

  bool all_pass = true;
  json verdict = json::array();
  for (const auto& line : lines) {
    all_pass = all_pass && line.pass;
    std::cout << (line.pass ? "PASS" : "FAIL") << "  " << line.family
              << "  worst_residual=" << fmt(line.worst) << "  tol=" << fmt(line.tol)
              << '\n';
    verdict.push_back({{"family", line.family},
                       {"pass", line.pass},
                       {"worst_residual", line.worst},
                       {"tol", line.tol}});
  }
  const std::filesystem::path dir = output_dir_of(cfg, opt);
  std::filesystem::create_directories(dir);
  auto out = open_out(dir / "verdict.json");
  out << verdict.dump(2) << '\n';
  return all_pass ? 0 : 1;
}

}  // namespace

int cmd_run(const Config& cfg, const CommonOptions& opt) { return run_impl(cfg, opt); }

int cmd_convergence(const Config& cfg, const CommonOptions& opt) {
  return convergence_impl(cfg, opt);
}

int cmd_check(const Config& cfg, const CommonOptions& opt) {
  return check_impl(cfg, opt);
}

}  // namespace gfsplit::cli
