#include "gfsplit/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gfsplit/errors.hpp"

namespace gfsplit::oracles {

GaussianMoments ou_exact(const OUParams& p, double t) {
  if (!(p.lambda > 0.0) || !(p.sigma0 > 0.0))
    throw InvalidInput("ou_exact: lambda and sigma0 must be positive");
  if (!(t >= 0.0)) throw InvalidInput("ou_exact: t must be nonnegative");
  const double var_inf = 1.0 / p.lambda;
  const double var0 = p.sigma0 * p.sigma0;
  GaussianMoments out;
  out.mean = p.m0 * std::exp(-p.lambda * t);
  out.sigma = std::sqrt(var_inf + (var0 - var_inf) * std::exp(-2.0 * p.lambda * t));
  return out;
}

double ou_moment_ode_error(const OUParams& p, double t_max, std::size_t n_steps) {
  if (!(t_max > 0.0) || n_steps == 0)
    throw InvalidInput("ou_moment_ode_error: bad grid");
  const double h = t_max / static_cast<double>(n_steps);
  double mean = p.m0;
  double var = p.sigma0 * p.sigma0;
  double worst = 0.0;
  auto f_mean = [&](double m) { return -p.lambda * m; };
  auto f_var = [&](double v) { return 2.0 - 2.0 * p.lambda * v; };
  for (std::size_t i = 1; i <= n_steps; ++i) {
    const double k1m = f_mean(mean), k1v = f_var(var);
    const double k2m = f_mean(mean + 0.5 * h * k1m), k2v = f_var(var + 0.5 * h * k1v);
    const double k3m = f_mean(mean + 0.5 * h * k2m), k3v = f_var(var + 0.5 * h * k2v);
    const double k4m = f_mean(mean + h * k3m), k4v = f_var(var + h * k3v);
    mean += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
    var += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    const GaussianMoments exact = ou_exact(p, h * static_cast<double>(i));
    worst = std::max(worst, std::abs(mean - exact.mean));
    worst = std::max(worst, std::abs(std::sqrt(var) - exact.sigma));
  }
  return worst;
}

namespace {

struct BarenblattProfile {
  double m, k, kappa, c, r;       // r = sqrt(c/kappa): support radius in xi
  double p;                       // (m+1)/(m-1): cosine power in theta
  double amp;                     // C^{1/(m-1)} * r: quadrature prefactor
  std::vector<double> theta;      // quadrature grid on [-pi/2, pi/2]
  std::vector<double> cumulative; // integral of amp * cos^p up to theta_j

  explicit BarenblattProfile(const BarenblattParams& par) {
    if (!(par.m > 1.0) || !(par.m <= 4.0))
      throw InvalidInput("barenblatt: exponent must lie in (1, 4]");
    if (!(par.t0 > 0.0)) throw InvalidInput("barenblatt: t0 must be positive");
    m = par.m;
    k = 1.0 / (m + 1.0);
    kappa = k * (m - 1.0) / (2.0 * m);
    p = (m + 1.0) / (m - 1.0);
    // Unit mass: C^{1/(m-1) + 1/2} kappa^{-1/2} * int cos^p = 1 with
    // int_{-pi/2}^{pi/2} cos^p = sqrt(pi) Gamma((p+1)/2) / Gamma(p/2 + 1).
    const double ip = std::sqrt(M_PI) * std::tgamma(0.5 * (p + 1.0)) /
                      std::tgamma(0.5 * p + 1.0);
    c = std::pow(std::sqrt(kappa) / ip, 2.0 * (m - 1.0) / (m + 1.0));
    r = std::sqrt(c / kappa);
    amp = std::pow(c, 1.0 / (m - 1.0)) * r;

    const std::size_t cells = 20000;
    theta.resize(cells + 1);
    cumulative.resize(cells + 1);
    for (std::size_t j = 0; j <= cells; ++j)
      theta[j] = -0.5 * M_PI + M_PI * static_cast<double>(j) / static_cast<double>(cells);
    cumulative[0] = 0.0;
    for (std::size_t j = 1; j <= cells; ++j)
      cumulative[j] = cumulative[j - 1] + segment_integral(theta[j - 1], theta[j]);
  }

  double integrand(double th) const { return amp * std::pow(std::cos(th), p); }

  // 5-node Gauss-Legendre on [a, b]; the integrand is smooth in theta.
  double segment_integral(double a, double b) const {
    static const double node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                   0.5384693101056831, 0.9061798459386640};
    static const double weight[5] = {0.2369268850561891, 0.4786286704993665,
                                     0.5688888888888889, 0.4786286704993665,
                                     0.2369268850561891};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += weight[i] * integrand(mid + half * node[i]);
    return s * half;
  }

  double mass() const { return cumulative.back(); }

  // CDF value at angle th (xi = r sin th).
  double cdf(double th) const {
    th = std::clamp(th, -0.5 * M_PI, 0.5 * M_PI);
    const auto it = std::upper_bound(theta.begin(), theta.end(), th);
    std::size_t j = static_cast<std::size_t>(it - theta.begin());
    if (j == 0) return 0.0;
    j -= 1;
    return cumulative[j] + segment_integral(theta[j], th);
  }

  // Profile quantile in the self-similar variable xi.
  double quantile(double s) const {
    if (!(s > 0.0) || !(s < 1.0))
      throw InversionFailure("barenblatt quantile: s outside (0,1)");
    double a = -0.5 * M_PI, b = 0.5 * M_PI;
    double th = 0.0;
    bool done = false;
    for (int it = 0; it < 200; ++it) {
      const double err = cdf(th) - s;
      if (std::abs(err) <= 1e-13) {
        done = true;
        break;
      }
      if (err > 0.0) b = th; else a = th;
      const double dens = integrand(th);
      double next = (dens > 1e-280) ? th - err / dens : 0.5 * (a + b);
      if (!(next > a) || !(next < b)) next = 0.5 * (a + b);
      th = next;
    }
    if (!done) throw InversionFailure("barenblatt quantile: no convergence");
    return r * std::sin(th);
  }
};

}  // namespace

double barenblatt_density(const BarenblattParams& par, double t, double x) {
  const BarenblattProfile prof(par);
  if (!(t > 0.0)) throw InvalidInput("barenblatt_density: t must be positive");
  const double tk = std::pow(t, -prof.k);
  const double arg = prof.c - prof.kappa * x * x * tk * tk;
  if (arg <= 0.0) return 0.0;
  return tk * std::pow(arg, 1.0 / (prof.m - 1.0));
}

double barenblatt_support_radius(const BarenblattParams& par, double t) {
  const BarenblattProfile prof(par);
  return prof.r * std::pow(t, prof.k);
}

double barenblatt_mass_error(const BarenblattParams& par, double t) {
  (void)t;  // the profile mass is time invariant
  const BarenblattProfile prof(par);
  return std::abs(prof.mass() - 1.0);
}

wass1d::QuantileDensity barenblatt_quantiles(const BarenblattParams& par, double t,
                                             std::size_t n) {
  if (!(t >= par.t0)) throw InvalidInput("barenblatt_quantiles: t must be >= t0");
  const BarenblattProfile prof(par);
  const double tk = std::pow(t, prof.k);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i)
    q[i] = tk * prof.quantile(wass1d::QuantileDensity::cell_center(i, n));
  return wass1d::QuantileDensity(std::move(q));
}

double barenblatt_pde_residual(const BarenblattParams& par, double t_lo, double t_hi,
                               std::size_t n_t, std::size_t n_x) {
  if (!(t_lo >= par.t0) || !(t_hi > t_lo) || n_t < 2 || n_x < 2)
    throw InvalidInput("barenblatt_pde_residual: bad probe grid");
  const BarenblattProfile prof(par);
  auto rho = [&](double t, double x) {
    const double tk = std::pow(t, -prof.k);
    const double arg = prof.c - prof.kappa * x * x * tk * tk;
    return (arg <= 0.0) ? 0.0 : tk * std::pow(arg, 1.0 / (prof.m - 1.0));
  };
  auto rho_m = [&](double t, double x) { return std::pow(rho(t, x), prof.m); };

  double worst = 0.0;
  for (std::size_t it = 0; it < n_t; ++it) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(it) /
                               static_cast<double>(n_t - 1);
    const double radius = prof.r * std::pow(t, prof.k);
    const double dx = 3e-4 * (1.0 + radius);
    const double dt = 3e-4 * t;
    for (std::size_t ix = 0; ix < n_x; ++ix) {
      // interior probes only: stay 5% away from the support boundary
      const double x = -0.95 * radius + 1.9 * radius * static_cast<double>(ix) /
                                            static_cast<double>(n_x - 1);
      const double d_t = (rho(t + dt, x) - rho(t - dt, x)) / (2.0 * dt);
      const double d_xx =
          (-rho_m(t, x - 2.0 * dx) + 16.0 * rho_m(t, x - dx) - 30.0 * rho_m(t, x) +
           16.0 * rho_m(t, x + dx) - rho_m(t, x + 2.0 * dx)) /
          (12.0 * dx * dx);
      worst = std::max(worst, std::abs(d_t - d_xx));
    }
  }
  return worst;
}

}  // namespace gfsplit::oracles
