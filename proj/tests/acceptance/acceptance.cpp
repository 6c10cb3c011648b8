// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Oracle verification runs first; the remaining tiers trust it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "gfsplit/convergence.hpp"
#include "gfsplit/diagnostics.hpp"
#include "gfsplit/euclidean.hpp"
#include "gfsplit/evi.hpp"
#include "gfsplit/oracles.hpp"
#include "gfsplit/rng.hpp"
#include "gfsplit/trajectory.hpp"
#include "gfsplit/wass1d.hpp"

using namespace gfsplit;
using euclidean::QuadraticFunctional;
using euclidean::Vec;
using wass1d::EntropyKind;
using wass1d::PotentialSpec;
using wass1d::QuantileDensity;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_tier_start;

void tier(const std::string& name) {
  g_tier_start = std::chrono::steady_clock::now();
  std::cout << "---- " << name << '\n';
}

void report(const std::string& name, bool pass, const std::string& detail) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g_tier_start)
          .count();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1fs", secs);
  std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  (" << detail << ") ["
            << buf << "]\n";
  if (!pass) ++g_failures;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// errors must not increase under refinement, up to 10% noise allowance
bool monotone_rows(const ConvergenceTable& table) {
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].sup_error > 1.1 * table.rows[i - 1].sup_error) return false;
  return true;
}

// Residual profile value rebuilt from the record fields only; serves as the
// independent integrand for the quadrature cross-check.
template <class P>
double r_profile_at(const TrajectoryRecord<P>& traj, double t) {
  const Discretisation& d = traj.disc;
  if (t >= d.total_time()) return 0.0;
  const std::size_t k = d.cell(t);
  const double l = d.ell(t);
  const double quarter = traj.step_dist_sq[k - 1] / (4.0 * d.step(k));
  const double left = traj.phi(k - 1) - traj.phi(k) + traj.delta[k - 1] - quarter;
  const double right = traj.delta[k - 1] - quarter;
  return (1.0 - l) * left + l * right;
}

// ---------------------------------------------------------------------------
// Tier: oracle pre-verification
// ---------------------------------------------------------------------------

void tier_oracles() {
  tier("oracle pre-verification");
  Rng rng(2024);
  double worst_ou = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const oracles::OUParams p{rng.uniform(0.2, 3.0), rng.uniform(-2.0, 2.0),
                              rng.uniform(0.3, 2.5)};
    worst_ou = std::max(worst_ou, oracles::ou_moment_ode_error(p, 5.0, 5000));
  }
  report("gaussian-moment-oracle", worst_ou <= 1e-8,
         "max closed-form vs RK4 deviation " + num(worst_ou));

  double worst_mass = 0.0, worst_pde = 0.0;
  for (double m : {2.0, 3.0}) {
    const oracles::BarenblattParams p{m, 1.0};
    worst_mass = std::max(worst_mass, oracles::barenblatt_mass_error(p, 1.0));
    worst_pde = std::max(worst_pde, oracles::barenblatt_pde_residual(p, 1.0, 2.0, 7, 25));
  }
  report("self-similar-profile-oracle", worst_mass <= 1e-10 && worst_pde <= 1e-6,
         "mass error " + num(worst_mass) + ", interior pde residual " + num(worst_pde));
}

// ---------------------------------------------------------------------------
// Tier: per-step inequality families on 50 seeded runs
// ---------------------------------------------------------------------------

struct SuiteWorst {
  double evi = -1e300;
  double apriori = -1e300;
  double r_int = -1e300;
  double quad_rel = 0.0;  // worst relative gap closed form vs trapezoid
  bool evi_ok = true, apriori_ok = true, r_ok = true;
};

template <class P>
void run_structural(const TrajectoryRecord<P>& traj, const SplitProblem<P>& prob,
                    const std::vector<P>& probes, SuiteWorst& acc) {
  const double tol = inequality_tolerance(traj);

  for (const auto& w : probes) {
    const auto res = check_discrete_evi(traj, prob, w);
    acc.evi = std::max(acc.evi, res.worst);
    acc.evi_ok = acc.evi_ok && (res.worst <= tol);
  }

  const auto ap = check_apriori(traj);
  acc.apriori = std::max(acc.apriori, ap.worst);
  acc.apriori_ok = acc.apriori_ok && (ap.worst <= tol);

  const auto rows = check_r_integral(traj);
  for (const auto& row : rows) {
    acc.r_int = std::max(acc.r_int, row.lhs - row.rhs);
    acc.r_ok = acc.r_ok && (row.lhs - row.rhs <= tol);
  }

  // quadrature cross-check of the closed-form positive-part integral
  double quad = 0.0;
  for (std::size_t k = 1; k <= traj.size(); ++k) {
    const double a = traj.time(k - 1);
    const double b = traj.time(k);
    const int pts = 10000;
    for (int i = 0; i < pts; ++i) {
      const double t0 = a + (b - a) * i / pts;
      const double t1 = a + (b - a) * (i + 1) / pts;
      quad += 0.5 *
              (std::max(r_profile_at(traj, t0), 0.0) +
               std::max(r_profile_at(traj, std::min(t1, b - (b - a) * 1e-13)), 0.0)) *
              (t1 - t0);
    }
    const double scale = std::max(1.0, std::abs(rows[k - 1].lhs));
    acc.quad_rel = std::max(acc.quad_rel, std::abs(rows[k - 1].lhs - quad) / scale);
  }
  acc.r_ok = acc.r_ok && (acc.quad_rel <= 1e-6);
}

void tier_structural_suites() {
  tier("per-step inequality families, 50 seeded runs");
  SuiteWorst acc;

  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng(seed);
    const std::size_t dim = 1 + rng.integer(3);
    std::vector<double> a1(dim), a2(dim), b1(dim), b2(dim);
    Vec x0(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      a1[i] = rng.uniform(0.0, 3.0);
      a2[i] = rng.uniform(0.0, 3.0);
      b1[i] = rng.uniform(-1.0, 1.0);
      b2[i] = rng.uniform(-1.0, 1.0);
      x0[i] = rng.uniform(-2.0, 2.0);
    }
    auto prob = euclidean::build_euclidean_problem(
        QuadraticFunctional(linalg::Matrix::diagonal(a1), b1),
        QuadraticFunctional(linalg::Matrix::diagonal(a2), b2));
    std::vector<double> steps;
    const std::size_t n = 5 + rng.integer(8);
    for (std::size_t k = 0; k < n; ++k) steps.push_back(rng.uniform(0.02, 0.3));
    const auto traj = run_scheme(prob, x0, Discretisation(steps));

    std::vector<Vec> probes{x0};
    for (int i = 0; i < 4; ++i) {
      Vec w(dim);
      for (double& v : w) v = rng.uniform(-2.5, 2.5);
      probes.push_back(std::move(w));
    }
    run_structural(traj, prob, probes, acc);
  }

  for (std::uint64_t seed = 26; seed <= 50; ++seed) {
    Rng rng(seed);
    const bool renyi = (seed % 2 == 0);
    const double m = renyi ? ((seed % 4 == 0) ? 2.0 : 3.0) : 1.0;
    const EntropyKind kind = renyi ? EntropyKind::renyi(m) : EntropyKind::boltzmann();
    const double lam = std::vector<double>{0.5, 1.0, 2.0}[seed % 3];
    const std::size_t cells = (seed % 2 == 0) ? 64 : 128;
    const auto order = (seed % 3 == 0) ? wass1d::Order::PotentialFirst
                                       : wass1d::Order::EntropyFirst;
    auto prob = wass1d::build_wasserstein_problem(PotentialSpec::quadratic(lam), kind,
                                                  order);
    const auto x0 = wass1d::quantile_of_gaussian(rng.uniform(-1.0, 1.0),
                                                 rng.uniform(0.7, 2.0), cells);
    std::vector<double> steps;
    const std::size_t n = 6 + rng.integer(7);
    for (std::size_t k = 0; k < n; ++k) steps.push_back(rng.uniform(0.01, 0.12));
    const auto traj = run_scheme(prob, x0, Discretisation(steps));

    std::vector<QuantileDensity> probes{x0};
    for (int i = 0; i < 3; ++i) {
      probes.push_back(wass1d::quantile_of_gaussian(rng.uniform(-1.0, 1.0),
                                                    rng.uniform(0.6, 1.8), cells));
    }
    run_structural(traj, prob, probes, acc);
  }

  report("step-inequality-all-runs", acc.evi_ok, "worst residual " + num(acc.evi));
  report("summed-estimate-and-energy-bound", acc.apriori_ok,
         "worst residual " + num(acc.apriori));
  report("residual-profile-integral-bound", acc.r_ok,
         "worst residual " + num(acc.r_int) + ", quadrature gap " + num(acc.quad_rel));

  Rng rng(777);
  bool gron_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const double A = rng.uniform(0.0, 5.0);
    const std::size_t n = 1 + rng.integer(25);
    std::vector<double> taus;
    for (std::size_t i = 0; i < n; ++i) taus.push_back(rng.uniform(0.01, 0.9));
    const auto bounds = gronwall_bound(A, taus);
    double accum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ai = (A + accum) / (1.0 - taus[i]);
      accum += taus[i] * ai;
      gron_ok = gron_ok && (ai <= bounds[i] * (1.0 + 1e-12) + 1e-12);
    }
  }
  report("recursive-bound-dominates-oracle", gron_ok, "100 random instances");
}

// ---------------------------------------------------------------------------
// Tier: resolvent/energy estimates on the parameter grid
// ---------------------------------------------------------------------------

void tier_compatibility() {
  tier("resolvent/energy estimates, 100 seeded inputs");
  const std::vector<double> lams{0.5, 1.0, 2.0};
  const std::vector<double> hs{0.01, 0.1, 0.5};
  const std::vector<std::size_t> cells{128, 512};
  const std::vector<double> ms{2.0, 3.0};

  bool ok = true;
  double worst_gap = -1e300;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(1000 + seed);
    const double lam = lams[seed % lams.size()];
    const double h = hs[(seed / 3) % hs.size()];
    const std::size_t n = cells[(seed / 9) % cells.size()];
    const double m = ms[(seed / 18) % ms.size()];

    std::vector<wass1d::GaussianComponent> comps;
    const std::size_t ncomp = 1 + rng.integer(3);
    for (std::size_t c = 0; c < ncomp; ++c)
      comps.push_back({rng.uniform(0.2, 1.0), rng.uniform(-1.5, 1.5),
                       rng.uniform(0.4, 1.8)});
    const auto mu = wass1d::quantile_of_mixture(comps, n);

    const auto rep = wass1d::check_compatibility(mu, PotentialSpec::quadratic(lam),
                                                 EntropyKind::renyi(m), h);
    for (const auto& line : rep.lines) {
      if (!line.applicable) continue;
      ok = ok && line.holds;
      worst_gap = std::max(worst_gap, line.lhs - line.rhs - line.tol);
    }
  }
  report("four-estimate-grid", ok, "worst residual beyond slack " + num(worst_gap));
}

// ---------------------------------------------------------------------------
// Tier: growth control for the four pairings
// ---------------------------------------------------------------------------

void tier_growth_control() {
  tier("growth control across the four pairings");
  const double lam = 1.0;
  const double T = 1.0;
  const std::size_t n = 64, cells = 256;
  const auto gauss = wass1d::quantile_of_gaussian(1.0, 2.0, cells);
  const auto bb = oracles::barenblatt_quantiles({2.0, 1.0}, 1.0, cells);

  struct Case {
    const char* name;
    EntropyKind kind;
    wass1d::Order order;
    ChiMode mode;
    A3Constants cst;
    const QuantileDensity* start;
  };
  const auto boltz = EntropyKind::boltzmann();
  const auto renyi2 = EntropyKind::renyi(2.0);
  const std::vector<Case> cases{
      {"growth-boltzmann-then-potential", boltz, wass1d::Order::EntropyFirst,
       ChiMode::Constant, {lam, 0.0, 1.0}, &gauss},
      {"growth-potential-then-boltzmann", boltz, wass1d::Order::PotentialFirst,
       ChiMode::Constant, {lam, 0.0, 1.0}, &gauss},
      {"growth-power-then-potential", renyi2, wass1d::Order::EntropyFirst,
       ChiMode::Phi1, {0.0, lam, 2.0}, &bb},
      {"growth-potential-then-power", renyi2, wass1d::Order::PotentialFirst,
       ChiMode::Phi2, {lam, lam, 2.0}, &bb},
  };
  for (const auto& c : cases) {
    auto prob = wass1d::build_wasserstein_problem(PotentialSpec::quadratic(lam),
                                                  c.kind, c.order);
    const auto traj = run_scheme(prob, *c.start, Discretisation::uniform(T, n));
    const double tol = inequality_tolerance(traj);
    const auto rep = check_a3(traj, c.mode, c.cst);
    report(c.name, rep.worst() <= tol,
           "per-step worst " + num(std::max(rep.worst_step, rep.worst_step_ii)) +
               ", total " + num(rep.delta_total) + " <= bound " + num(rep.delta_bound));
  }
}

// ---------------------------------------------------------------------------
// Tier: step-refinement convergence against the oracles
// ---------------------------------------------------------------------------

void tier_convergence() {
  tier("step-refinement convergence");
  {
    const auto f = QuadraticFunctional::isotropic(1, 1.0);
    auto prob = euclidean::build_euclidean_problem(f, f);
    std::function<Vec(double)> ref = [&](double t) {
      return euclidean::exact_flow(f, f, Vec{1.0}, flow_time_of(t));
    };
    const auto table =
        trotter_convergence_study(prob, Vec{1.0}, 1.0, {8, 16, 32, 64, 128}, ref);
    report("euclidean-rate", table.fitted_slope >= 0.9 && monotone_rows(table),
           "fitted slope " + num(table.fitted_slope));
  }
  {
    const std::size_t cells = 512;
    const oracles::OUParams ou{1.0, 1.0, 2.0};
    auto prob = wass1d::build_wasserstein_problem(PotentialSpec::quadratic(1.0),
                                                  EntropyKind::boltzmann(),
                                                  wass1d::Order::EntropyFirst);
    std::map<double, QuantileDensity> memo;
    std::function<QuantileDensity(double)> ref = [&](double t) {
      auto it = memo.find(t);
      if (it == memo.end()) {
        const auto g = oracles::ou_exact(ou, flow_time_of(t));
        it = memo.emplace(t, wass1d::quantile_of_gaussian(g.mean, g.sigma, cells)).first;
      }
      return it->second;
    };
    const auto x0 = wass1d::quantile_of_gaussian(ou.m0, ou.sigma0, cells);
    const auto table =
        trotter_convergence_study(prob, x0, 1.0, {8, 16, 32, 64, 128, 256}, ref);
    const double e8 = table.rows.front().sup_error;
    const double e256 = table.rows.back().sup_error;
    report("drift-diffusion-rate",
           table.fitted_slope >= 0.5 && e256 <= e8 / 3.0 && monotone_rows(table),
           "fitted slope " + num(table.fitted_slope) + ", error drop x" +
               num(e8 / e256));
  }
  {
    const std::size_t cells = 256;
    const oracles::BarenblattParams bb{2.0, 1.0};
    auto prob = wass1d::build_wasserstein_problem(PotentialSpec::zero(),
                                                  EntropyKind::renyi(2.0),
                                                  wass1d::Order::EntropyFirst);
    std::map<double, QuantileDensity> memo;
    std::function<QuantileDensity(double)> ref = [&](double t) {
      auto it = memo.find(t);
      if (it == memo.end())
        it = memo.emplace(t, oracles::barenblatt_quantiles(bb, bb.t0 + flow_time_of(t),
                                                           cells))
                 .first;
      return it->second;
    };
    const auto x0 = oracles::barenblatt_quantiles(bb, bb.t0, cells);
    const auto table =
        trotter_convergence_study(prob, x0, 1.0, {8, 16, 32, 64, 128, 256}, ref);
    const double e8 = table.rows.front().sup_error;
    const double e256 = table.rows.back().sup_error;
    report("nonlinear-diffusion-rate",
           table.fitted_slope >= 0.5 && e256 <= e8 / 3.0 && monotone_rows(table),
           "fitted slope " + num(table.fitted_slope) + ", error drop x" +
               num(e8 / e256));
  }
}

// ---------------------------------------------------------------------------
// Tier: integral flow inequality on the finest drift-diffusion run
// ---------------------------------------------------------------------------

void tier_limit_evi() {
  tier("integral flow inequality on the finest run");
  const std::size_t cells = 512, n = 256;
  auto prob = wass1d::build_wasserstein_problem(PotentialSpec::quadratic(1.0),
                                                EntropyKind::boltzmann(),
                                                wass1d::Order::EntropyFirst);
  const auto x0 = wass1d::quantile_of_gaussian(1.0, 2.0, cells);
  const auto traj = run_scheme(prob, x0, Discretisation::uniform(1.0, n));

  // flow-time samples: the step points live at half the scheme clock
  std::vector<QuantileDensity> path;
  path.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) path.push_back(traj.point(k));
  const double dt = flow_time_of(traj.total_time()) / static_cast<double>(n);

  double phi_min = traj.phi(0);
  for (std::size_t k = 1; k <= n; ++k) phi_min = std::min(phi_min, traj.phi(k));
  const double path_error =
      traj.disc.mesh() * (traj.phi(0) - phi_min + 2.0 * traj.Delta_total());

  Rng rng(404);
  std::vector<QuantileDensity> probes;
  for (int i = 0; i < 10; ++i)
    probes.push_back(wass1d::quantile_of_gaussian(rng.uniform(-1.0, 1.0),
                                                  rng.uniform(0.8, 2.2), cells));
  std::vector<std::pair<double, double>> windows;
  const double T = flow_time_of(traj.total_time());
  for (int i = 0; i < 10; ++i) {
    const double a = rng.uniform(0.02, 0.6) * T;
    const double b = rng.uniform(a + 0.1 * T, T);
    windows.push_back({a, b});
  }

  const auto rep = check_evi_integral(path, 0.0, dt, prob, probes, windows, path_error);
  report("limit-flow-inequality", rep.all_hold(),
         "worst residual " + num(rep.worst_residual()) + " <= tol " + num(rep.tol) +
             " over " + std::to_string(rep.entries.size()) + " window/probe pairs");
}

// ---------------------------------------------------------------------------
// Tier: negative control through the command line
// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GFSPLIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void tier_negative_control() {
  tier("negative control");
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gfsplit_acceptance";
  fs::create_directories(dir);

  const std::string good =
      "problem = fokker-planck\nlambda = 1.0\nN = 128\nm0 = 1.0\nsigma0 = 2.0\n"
      "T = 1.0\nsteps = 32\norder = entropy-first\n";
  std::ofstream(dir / "good.cfg") << good;
  std::ofstream(dir / "bad.cfg") << good << "corrupt_delta = 0.5\n";

  const int rc_good =
      run_cli("check " + (dir / "good.cfg").string() + " --output-dir " +
              (dir / "out_good").string());
  const int rc_bad =
      run_cli("check " + (dir / "bad.cfg").string() + " --output-dir " +
              (dir / "out_bad").string());
  report("corrupted-trajectory-fixture", rc_good == 0 && rc_bad == 1,
         "intact run exits " + std::to_string(rc_good) + ", corrupted exits " +
             std::to_string(rc_bad));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();

  tier_oracles();
  if (g_failures > 0) {
    std::cout << "oracle verification failed; skipping the remaining tiers\n";
    return 1;
  }
  tier_structural_suites();
  tier_compatibility();
  tier_growth_control();
  tier_convergence();
  tier_limit_evi();
  tier_negative_control();

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "---- total " << secs << "s, "
            << (g_failures == 0 ? "all pass" : "FAILURES") << '\n';
  return g_failures == 0 ? 0 : 1;
}
