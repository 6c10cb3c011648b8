#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "gfsplit/convergence.hpp"
#include "gfsplit/diagnostics.hpp"
#include "gfsplit/euclidean.hpp"
#include "gfsplit/linalg.hpp"
#include "gfsplit/normal.hpp"
#include "gfsplit/oracles.hpp"
#include "gfsplit/trajectory.hpp"
#include "gfsplit/wass1d.hpp"

namespace py = pybind11;

namespace {

using gfsplit::euclidean::QuadraticFunctional;
using gfsplit::euclidean::Vec;
using gfsplit::wass1d::EntropyKind;
using gfsplit::wass1d::PotentialSpec;
using gfsplit::wass1d::QuantileDensity;

EntropyKind kind_of(const std::string& kind, double m) {
  if (kind == "boltzmann") return EntropyKind::boltzmann();
  if (kind == "renyi") return EntropyKind::renyi(m);
  throw gfsplit::InvalidInput("kind must be 'boltzmann' or 'renyi'");
}

PotentialSpec potential_of(double lam) {
  return lam == 0.0 ? PotentialSpec::zero() : PotentialSpec::quadratic(lam);
}

QuadraticFunctional diag_quadratic(std::vector<double> a, std::vector<double> b) {
  return QuadraticFunctional(gfsplit::linalg::Matrix::diagonal(a), std::move(b));
}

template <class P>
py::dict record_dict(const gfsplit::TrajectoryRecord<P>& traj) {
  py::dict d;
  std::vector<double> times;
  for (std::size_t k = 1; k <= traj.size(); ++k) times.push_back(traj.time(k));
  d["t"] = times;
  d["delta"] = traj.delta;
  d["Delta"] = traj.delta_sum;
  d["step_dist_sq"] = traj.step_dist_sq;
  d["phi1"] = traj.phi1_full;
  d["phi2"] = traj.phi2_full;
  d["phi_initial"] = traj.phi(0);
  d["phi_final"] = traj.phi(traj.size());
  d["Delta_n"] = traj.Delta_total();
  d["max_certificate"] = traj.max_certificate;

  // worst residuals of the built-in inequality checks, probe at the start
  const auto apriori = gfsplit::check_apriori(traj);
  d["apriori_worst"] = apriori.worst;
  double r_worst = -1e300;
  for (const auto& row : gfsplit::check_r_integral(traj))
    r_worst = std::max(r_worst, row.lhs - row.rhs);
  d["r_integral_worst"] = r_worst;
  d["tolerance"] = gfsplit::inequality_tolerance(traj);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Alternating-resolvent flows on the line and in one-dimensional "
            "transport geometry, with the inequality checkers built in";

  py::register_exception<gfsplit::Error>(m, "GfsplitError");

  m.def("normal_quantile", &gfsplit::normal_quantile, py::arg("s"));

  m.def(
      "gaussian_quantiles",
      [](double mean, double sigma, std::size_t n) {
        return gfsplit::wass1d::quantile_of_gaussian(mean, sigma, n).values();
      },
      py::arg("mean"), py::arg("sigma"), py::arg("n"));

  m.def(
      "w2_distance",
      [](std::vector<double> a, std::vector<double> b) {
        return gfsplit::wass1d::w2_distance(QuantileDensity(std::move(a)),
                                            QuantileDensity(std::move(b)));
      },
      py::arg("mu"), py::arg("nu"));

  m.def(
      "entropy",
      [](std::vector<double> q, const std::string& kind, double m_exp) {
        return gfsplit::wass1d::entropy(QuantileDensity(std::move(q)),
                                        kind_of(kind, m_exp));
      },
      py::arg("mu"), py::arg("kind") = "boltzmann", py::arg("m") = 2.0);

  m.def(
      "potential_energy",
      [](std::vector<double> q, double lam) {
        return gfsplit::wass1d::potential_energy(QuantileDensity(std::move(q)),
                                                 potential_of(lam));
      },
      py::arg("mu"), py::arg("lam"));

  m.def(
      "resolvent_potential",
      [](std::vector<double> q, double lam, double h) {
        return gfsplit::wass1d::resolvent_potential(QuantileDensity(std::move(q)),
                                                    potential_of(lam), h)
            .point.values();
      },
      py::arg("mu"), py::arg("lam"), py::arg("h"));

  m.def(
      "resolvent_entropy",
      [](std::vector<double> q, double h, const std::string& kind, double m_exp) {
        const auto res = gfsplit::wass1d::resolvent_entropy(
            QuantileDensity(std::move(q)), kind_of(kind, m_exp), h);
        return py::make_tuple(res.point.values(), res.certificate, res.iterations);
      },
      py::arg("mu"), py::arg("h"), py::arg("kind") = "boltzmann", py::arg("m") = 2.0);

  m.def(
      "transport_optimality_residual",
      [](std::vector<double> out, std::vector<double> in, double h,
         const std::string& kind, double m_exp) {
        return gfsplit::wass1d::check_transport_optimality(
            QuantileDensity(std::move(out)), QuantileDensity(std::move(in)),
            kind_of(kind, m_exp), h);
      },
      py::arg("mu_out"), py::arg("mu_in"), py::arg("h"),
      py::arg("kind") = "boltzmann", py::arg("m") = 2.0);

  m.def(
      "compatibility",
      [](std::vector<double> q, double lam, double m_exp, double h) {
        const auto rep = gfsplit::wass1d::check_compatibility(
            QuantileDensity(std::move(q)), potential_of(lam),
            EntropyKind::renyi(m_exp), h);
        py::list out;
        for (const auto& line : rep.lines) {
          py::dict d;
          d["name"] = line.name;
          d["applicable"] = line.applicable;
          d["lhs"] = line.lhs;
          d["rhs"] = line.rhs;
          d["tol"] = line.tol;
          d["holds"] = line.holds;
          out.append(d);
        }
        return out;
      },
      py::arg("mu"), py::arg("lam"), py::arg("m"), py::arg("h"));

  m.def(
      "prox_quadratic",
      [](std::vector<double> a_diag, std::vector<double> b, double h,
         std::vector<double> x) {
        return gfsplit::euclidean::prox_quadratic(
            diag_quadratic(std::move(a_diag), std::move(b)), h, x);
      },
      py::arg("a_diag"), py::arg("b"), py::arg("h"), py::arg("x"));

  m.def(
      "exact_flow",
      [](std::vector<double> a1, std::vector<double> b1, std::vector<double> a2,
         std::vector<double> b2, std::vector<double> x0, double t) {
        return gfsplit::euclidean::exact_flow(
            diag_quadratic(std::move(a1), std::move(b1)),
            diag_quadratic(std::move(a2), std::move(b2)), x0, t);
      },
      py::arg("a1"), py::arg("b1"), py::arg("a2"), py::arg("b2"), py::arg("x0"),
      py::arg("t"));

  m.def("flow_time_of", &gfsplit::flow_time_of, py::arg("scheme_time"));

  m.def(
      "run_euclidean",
      [](std::vector<double> a1, std::vector<double> b1, std::vector<double> a2,
         std::vector<double> b2, std::vector<double> x0, double T, std::size_t n) {
        auto prob = gfsplit::euclidean::build_euclidean_problem(
            diag_quadratic(std::move(a1), std::move(b1)),
            diag_quadratic(std::move(a2), std::move(b2)));
        const auto traj =
            gfsplit::run_scheme(prob, x0, gfsplit::Discretisation::uniform(T, n));
        py::dict d = record_dict(traj);
        d["x_final"] = traj.point(traj.size());
        const auto evi = gfsplit::check_discrete_evi(traj, prob, x0);
        d["discrete_evi_worst"] = evi.worst;
        return d;
      },
      py::arg("a1"), py::arg("b1"), py::arg("a2"), py::arg("b2"), py::arg("x0"),
      py::arg("T"), py::arg("n"));

  m.def(
      "run_wasserstein",
      [](std::vector<double> x0, double lam, const std::string& kind, double m_exp,
         const std::string& order, double T, std::size_t n) {
        const auto ord = (order == "entropy-first")
                             ? gfsplit::wass1d::Order::EntropyFirst
                             : gfsplit::wass1d::Order::PotentialFirst;
        auto prob = gfsplit::wass1d::build_wasserstein_problem(
            potential_of(lam), kind_of(kind, m_exp), ord);
        const QuantileDensity start(std::move(x0));
        const auto traj =
            gfsplit::run_scheme(prob, start, gfsplit::Discretisation::uniform(T, n));
        py::dict d = record_dict(traj);
        d["x_final"] = traj.point(traj.size()).values();
        const auto evi = gfsplit::check_discrete_evi(traj, prob, start);
        d["discrete_evi_worst"] = evi.worst;
        return d;
      },
      py::arg("x0"), py::arg("lam"), py::arg("kind"), py::arg("m"), py::arg("order"),
      py::arg("T"), py::arg("n"));

  m.def(
      "ou_exact",
      [](double lam, double m0, double sigma0, double t) {
        const auto g = gfsplit::oracles::ou_exact({lam, m0, sigma0}, t);
        return py::make_tuple(g.mean, g.sigma);
      },
      py::arg("lam"), py::arg("m0"), py::arg("sigma0"), py::arg("t"));

  m.def(
      "barenblatt_quantiles",
      [](double m_exp, double t0, double t, std::size_t n) {
        return gfsplit::oracles::barenblatt_quantiles({m_exp, t0}, t, n).values();
      },
      py::arg("m"), py::arg("t0"), py::arg("t"), py::arg("n"));

  m.def("gronwall_bound", &gfsplit::gronwall_bound, py::arg("A"), py::arg("taus"));
}
