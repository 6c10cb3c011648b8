#pragma once

#include <cstddef>

#include "gfsplit/interpolants.hpp"
#include "gfsplit/trajectory.hpp"
#include "gfsplit/wass1d.hpp"

namespace gfsplit::oracles {

// ---------------------------------------------------------------------------
// Gaussian evolution under drift curvature lambda (potential lambda x^2 / 2)
// with unit diffusion:
//   mean(t)  = m0 e^{-lambda t}
//   sigma^2(t) = 1/lambda + (sigma0^2 - 1/lambda) e^{-2 lambda t}
// ---------------------------------------------------------------------------

struct OUParams {
  double lambda = 1.0;
  double m0 = 0.0;
  double sigma0 = 1.0;
};

struct GaussianMoments {
  double mean = 0.0;
  double sigma = 1.0;
};

GaussianMoments ou_exact(const OUParams& p, double t);

// Max deviation between the closed form and an RK4 integration of the moment
// system m' = -lambda m, (sigma^2)' = 2 - 2 lambda sigma^2 on a uniform grid
// over [0, t_max]. Run before trusting ou_exact.
double ou_moment_ode_error(const OUParams& p, double t_max, std::size_t n_steps);

// ---------------------------------------------------------------------------
// Self-similar source solution of rho_t = (rho^m)_xx in one dimension:
//   rho(t, x) = t^{-k} (C - kappa x^2 t^{-2k})_+^{1/(m-1)},
//   k = 1/(m+1), kappa = k (m-1) / (2m), C normalized to unit mass.
// ---------------------------------------------------------------------------

struct BarenblattParams {
  double m = 2.0;   // exponent in (1, 4]
  double t0 = 1.0;  // initial profile time
};

double barenblatt_density(const BarenblattParams& p, double t, double x);
double barenblatt_support_radius(const BarenblattParams& p, double t);

// |numeric profile mass - 1| at time t (cumulative quadrature endpoint).
double barenblatt_mass_error(const BarenblattParams& p, double t);

// Cell-center quantiles at time t >= t0, by CDF inversion to 1e-12.
wass1d::QuantileDensity barenblatt_quantiles(const BarenblattParams& p, double t,
                                             std::size_t n);

// Max |rho_t - (rho^m)_xx| by finite differences on an (n_t x n_x) probe grid
// over [t_lo, t_hi], excluding a 5% margin near the moving support boundary
// where the profile is not smooth. Run before trusting the quantiles.
double barenblatt_pde_residual(const BarenblattParams& p, double t_lo, double t_hi,
                               std::size_t n_t, std::size_t n_x);

// ---------------------------------------------------------------------------
// Fine-step self-convergence reference
// ---------------------------------------------------------------------------

template <class P>
struct FineReference {
  TrajectoryRecord<P> record;
  const P& at(double scheme_t) const {
    return piecewise_paths(record, scheme_t).second;
  }
};

template <class P>
FineReference<P> fine_step_reference(const SplitProblem<P>& prob, const P& x0,
                                     double T, std::size_t n_ref) {
  return {run_scheme(prob, x0, Discretisation::uniform(T, n_ref))};
}

}  // namespace gfsplit::oracles
