#include "gfsplit/wass1d.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gfsplit/errors.hpp"
#include "gfsplit/normal.hpp"

namespace gfsplit::wass1d {

QuantileDensity::QuantileDensity(std::vector<double> values) : q_(std::move(values)) {
  if (q_.size() < 4) throw InvalidInput("QuantileDensity: need at least 4 cells");
  for (double v : q_)
    if (!std::isfinite(v)) throw InvalidInput("QuantileDensity: values must be finite");
  for (std::size_t i = 0; i + 1 < q_.size(); ++i)
    if (!(q_[i + 1] - q_[i] > kGapFloor))
      throw NonMonotone("QuantileDensity: quantiles must be strictly increasing");
}

double QuantileDensity::min_gap() const {
  double g = q_[1] - q_[0];
  for (std::size_t i = 1; i + 1 < q_.size(); ++i) g = std::min(g, q_[i + 1] - q_[i]);
  return g;
}

double QuantileDensity::mean() const {
  double s = 0.0;
  for (double v : q_) s += v;
  return s / static_cast<double>(q_.size());
}

double QuantileDensity::second_moment() const {
  double s = 0.0;
  for (double v : q_) s += v * v;
  return s / static_cast<double>(q_.size());
}

PotentialSpec PotentialSpec::quadratic(double curvature) {
  if (!(curvature >= 0.0)) throw InvalidInput("PotentialSpec::quadratic: curvature < 0");
  PotentialSpec p;
  p.v = [curvature](double x) { return 0.5 * curvature * x * x; };
  p.dv = [curvature](double x) { return curvature * x; };
  p.d2v = [curvature](double) { return curvature; };
  p.laplacian_bound = curvature;
  return p;
}

PotentialSpec PotentialSpec::zero() { return quadratic(0.0); }

PotentialSpec PotentialSpec::log_cosh() {
  PotentialSpec p;
  // log cosh x evaluated via |x| + log1p(e^{-2|x|}) - log 2 to avoid overflow
  p.v = [](double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094;
  };
  p.dv = [](double x) { return std::tanh(x); };
  p.d2v = [](double x) {
    const double c = std::cosh(x);
    return (c > 1e150) ? 0.0 : 1.0 / (c * c);
  };
  p.laplacian_bound = 1.0;
  return p;
}

PotentialValidation validate_potential(const PotentialSpec& pot, double lo,
                                       double hi, std::size_t n_probe) {
  if (!(hi > lo) || n_probe < 2) throw InvalidInput("validate_potential: bad grid");
  PotentialValidation out;
  for (std::size_t i = 0; i < n_probe; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(n_probe - 1);
    const double d2 = pot.d2v(x);
    out.worst_d2v_low = std::min(out.worst_d2v_low, d2);
    out.worst_d2v_high = std::max(out.worst_d2v_high, d2 - pot.laplacian_bound);
    const double eps = 1e-5 * (1.0 + std::abs(x));
    const double fd = (pot.v(x + eps) - pot.v(x - eps)) / (2.0 * eps);
    out.worst_dv_fd = std::max(out.worst_dv_fd, std::abs(pot.dv(x) - fd));
  }
  return out;
}

EntropyKind EntropyKind::renyi(double m) {
  if (!(m > 1.0) || !(m <= 4.0))
    throw InvalidInput("EntropyKind::renyi: exponent must lie in (1, 4]");
  return EntropyKind(Tag::Renyi, m);
}

std::string EntropyKind::name() const {
  if (tag_ == Tag::Boltzmann) return "boltzmann";
  return "renyi(m=" + std::to_string(m_) + ")";
}

double w2_distance(const QuantileDensity& mu, const QuantileDensity& nu) {
  if (mu.size() != nu.size()) throw SizeMismatch("w2_distance: sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double d = mu[i] - nu[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(mu.size()));
}

double potential_energy(const QuantileDensity& mu, const PotentialSpec& pot) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += pot.v(mu[i]);
  return s / static_cast<double>(mu.size());
}

namespace {

// Per-gap integrand of the internal energy together with two derivatives.
// The discrete energy is sum_j f(gap_j); the discrete density on gap j is
// 1/(N gap_j).
struct GapEnergy {
  double n = 0.0;        // cell count as double
  double norm = 0.0;     // 1/(N-1)
  bool renyi = false;
  double m = 1.0;

  explicit GapEnergy(std::size_t cells, const EntropyKind& kind)
      : n(static_cast<double>(cells)),
        norm(1.0 / (static_cast<double>(cells) - 1.0)),
        renyi(kind.is_renyi()),
        m(kind.m()) {}

  double f(double g) const {
    if (renyi) return norm / (m - 1.0) * std::pow(n * g, 1.0 - m);
    return -norm * std::log(n * g);
  }
  double df(double g) const {
    if (renyi) return -norm * n * std::pow(n * g, -m);
    return -norm / g;
  }
  double d2f(double g) const {
    if (renyi) return norm * m * n * n * std::pow(n * g, -m - 1.0);
    return norm / (g * g);
  }
};

std::vector<double> gaps_of(const std::vector<double>& q) {
  std::vector<double> g(q.size() - 1);
  for (std::size_t i = 0; i + 1 < q.size(); ++i) g[i] = q[i + 1] - q[i];
  return g;
}

// Solves the SPD tridiagonal system (diag, off) p = rhs in place.
void solve_tridiagonal(std::vector<double> diag, std::vector<double> off,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

double entropy(const QuantileDensity& mu, const EntropyKind& kind) {
  const GapEnergy ge(mu.size(), kind);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
    const double g = mu[i + 1] - mu[i];
    if (!(g > kGapFloor)) throw NonMonotone("entropy: degenerate gap");
    s += ge.f(g);
  }
  return s;
}

PotentialResolventResult resolvent_potential(const QuantileDensity& mu,
                                             const PotentialSpec& pot, double h) {
  if (!(h > 0.0)) throw InvalidInput("resolvent_potential: h must be positive");
  std::vector<double> out(mu.size());
  double cert = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double target = mu[i];
    // y + h V'(y) is strictly increasing with slope >= 1, so the solution
    // lies within |g(y0) - target| of any starting point y0.
    double y = target;
    double r = y + h * pot.dv(y) - target;
    double lo = y - std::abs(r) - 1e-12;
    double hi = y + std::abs(r) + 1e-12;
    const double tol = 1e-13 * (1.0 + std::abs(target));
    bool done = std::abs(r) <= tol;
    for (int it = 0; it < 100 && !done; ++it) {
      const double slope = 1.0 + h * pot.d2v(y);
      double y_next = y - r / slope;
      if (!(y_next > lo) || !(y_next < hi)) y_next = 0.5 * (lo + hi);
      y = y_next;
      r = y + h * pot.dv(y) - target;
      if (r > 0.0) hi = y; else lo = y;
      done = std::abs(r) <= tol;
    }
    if (!done) throw NewtonFailure(i, "resolvent_potential: scalar solve stalled");
    out[i] = y;
    cert = std::max(cert, std::abs(r));
  }
  return {QuantileDensity(std::move(out)), cert};
}

EntropyResolventResult resolvent_entropy(const QuantileDensity& mu,
                                         const EntropyKind& kind, double h) {
  if (!(h > 0.0)) throw InvalidInput("resolvent_entropy: h must be positive");
  const std::size_t n = mu.size();
  const double nd = static_cast<double>(n);
  const GapEnergy ge(n, kind);
  // Stationarity in displacement scale:
  //   r_i = (y_i - mu_i) + w (f'(gap_{i-1}) - f'(gap_i)),  w = h N,
  // which is h N times the gradient of the penalized objective. Working in
  // this scale keeps the residual evaluable near machine precision for any h;
  // the gradient sup norm at termination is cert / max(1, w).
  const double w = h * nd;

  std::vector<double> y(mu.values());
  std::vector<double> g = gaps_of(y);

  // objective scaled by w: w * entropy + (1/2) sum (y - mu)^2
  auto objective = [&](const std::vector<double>& yy) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += w * ge.f(yy[i + 1] - yy[i]);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = yy[i] - mu[i];
      s += 0.5 * d * d;
    }
    return s;
  };

  std::vector<double> resid(n), diag(n), off(n - 1), step(n), y_trial(n);

  auto eval_residual = [&]() {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - mu[i];
      if (i + 1 < n) r -= w * ge.df(g[i]);
      if (i > 0) r += w * ge.df(g[i - 1]);
      resid[i] = r;
      worst = std::max(worst, std::abs(r));
    }
    return worst;
  };

  double obj = objective(y);
  int iterations = 0;
  bool polished = false;
  double cert = 0.0;
  for (int it = 1; it <= kMaxNewtonIterations; ++it) {
    iterations = it;
    cert = eval_residual();
    if (cert <= kSolverTol) {
      if (polished) break;
      polished = true;  // one extra iteration past the tolerance
    }
    for (std::size_t i = 0; i < n; ++i) {
      double dd = 1.0;
      if (i + 1 < n) dd += w * ge.d2f(g[i]);
      if (i > 0) dd += w * ge.d2f(g[i - 1]);
      diag[i] = dd;
      if (i + 1 < n) off[i] = -w * ge.d2f(g[i]);
    }

    for (std::size_t i = 0; i < n; ++i) step[i] = -resid[i];
    solve_tridiagonal(diag, off, step);

    // Directional derivative (negative by positive definiteness).
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += resid[i] * step[i];

    // Fraction-to-boundary damping on the gaps.
    double t = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double dg = step[i + 1] - step[i];
      if (dg < 0.0) t = std::min(t, -kBoundaryDamping * g[i] / dg);
    }

    // Backtracking on the objective; near machine precision the predicted
    // decrease is not representable, so the step is accepted as is.
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) y_trial[i] = y[i] + t * step[i];
      bool monotone = true;
      for (std::size_t i = 0; i + 1 < n && monotone; ++i)
        monotone = (y_trial[i + 1] - y_trial[i] > kGapFloor);
      if (monotone) {
        const double obj_trial = objective(y_trial);
        if (obj_trial <= obj + 1e-4 * t * slope ||
            std::abs(t * slope) <= 1e-14 * (1.0 + std::abs(obj))) {
          y.swap(y_trial);
          obj = obj_trial;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted)
      throw NewtonFailure(0, "resolvent_entropy: line search failed to descend");
    g = gaps_of(y);
  }
  cert = eval_residual();  // describe the returned point, not the last iterate
  if (cert > kSolverTol)
    throw NewtonFailure(0, "resolvent_entropy: no convergence within iteration cap");

  EntropyResolventResult out{QuantileDensity(std::move(y)), cert, iterations};
  return out;
}

double check_transport_optimality(const QuantileDensity& mu_out,
                                  const QuantileDensity& mu_in,
                                  const EntropyKind& kind, double h) {
  if (!(h > 0.0)) throw InvalidInput("check_transport_optimality: h must be positive");
  if (mu_out.size() != mu_in.size())
    throw SizeMismatch("check_transport_optimality: sizes differ");
  const std::size_t n = mu_out.size();
  const double nd = static_cast<double>(n);
  const GapEnergy ge(n, kind);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double g_right = mu_out[i + 1] - mu_out[i];
    const double g_left = mu_out[i] - mu_out[i - 1];
    const double r =
        (mu_out[i] - mu_in[i]) - h * nd * (ge.df(g_right) - ge.df(g_left));
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

CompatibilityReport check_compatibility(const QuantileDensity& mu,
                                        const PotentialSpec& pot,
                                        const EntropyKind& kind, double h) {
  if (!(h > 0.0)) throw InvalidInput("check_compatibility: h must be positive");
  const double c = pot.laplacian_bound;
  const double inv_n = 1.0 / static_cast<double>(mu.size());
  const EntropyKind boltz = EntropyKind::boltzmann();

  CompatibilityReport rep;
  auto fill = [&](CompatibilityLine& line, const std::string& name, double lhs,
                  double rhs) {
    line.name = name;
    line.applicable = true;
    line.lhs = lhs;
    line.rhs = rhs;
    line.tol = 10.0 * (kSolverTol + inv_n) * (1.0 + std::abs(lhs) + std::abs(rhs));
    line.holds = lhs <= rhs + line.tol;
  };

  const PotentialResolventResult jv = resolvent_potential(mu, pot, h);
  fill(rep.lines[0], "entropy-after-potential-step",
       entropy(jv.point, boltz), entropy(mu, boltz) + c * h);

  const EntropyResolventResult jh = resolvent_entropy(mu, boltz, h);
  fill(rep.lines[1], "potential-after-boltzmann-step",
       potential_energy(jh.point, pot), potential_energy(mu, pot) + c * h);

  if (kind.is_renyi()) {
    const double m = kind.m();
    fill(rep.lines[2], "power-energy-after-potential-step",
         entropy(jv.point, kind), std::exp((m - 1.0) * c * h) * entropy(mu, kind));

    const EntropyResolventResult jf = resolvent_entropy(mu, kind, h);
    fill(rep.lines[3], "potential-after-power-step",
         potential_energy(jf.point, pot),
         potential_energy(mu, pot) + c * (m - 1.0) * h * entropy(jf.point, kind));
  } else {
    rep.lines[2].name = "power-energy-after-potential-step";
    rep.lines[3].name = "potential-after-power-step";
  }
  return rep;
}

SplitProblem<QuantileDensity> build_wasserstein_problem(PotentialSpec pot,
                                                        EntropyKind kind,
                                                        Order order) {
  const PotentialValidation val = validate_potential(pot, -30.0, 30.0, 121);
  if (val.worst_d2v_low < -1e-12 || val.worst_d2v_high > 1e-12)
    throw InvalidInput("build_wasserstein_problem: potential curvature out of range");
  if (val.worst_dv_fd > 1e-6)
    throw InvalidInput("build_wasserstein_problem: potential derivative inconsistent");

  Functional<QuantileDensity> potential_fn;
  potential_fn.energy = [pot](const QuantileDensity& mu) -> Energy {
    return Energy(potential_energy(mu, pot));
  };
  potential_fn.in_domain = [](const QuantileDensity&) { return true; };
  potential_fn.resolvent = [pot](double h, const QuantileDensity& mu)
      -> ResolventResult<QuantileDensity> {
    PotentialResolventResult r = resolvent_potential(mu, pot, h);
    return {std::move(r.point), r.certificate};
  };

  Functional<QuantileDensity> entropy_fn;
  entropy_fn.energy = [kind](const QuantileDensity& mu) -> Energy {
    return Energy(entropy(mu, kind));
  };
  entropy_fn.in_domain = [](const QuantileDensity& mu) {
    return mu.min_gap() > kGapFloor;
  };
  entropy_fn.resolvent = [kind](double h, const QuantileDensity& mu)
      -> ResolventResult<QuantileDensity> {
    EntropyResolventResult r = resolvent_entropy(mu, kind, h);
    return {std::move(r.point), r.certificate};
  };

  SplitProblem<QuantileDensity> prob;
  prob.metric = [](const QuantileDensity& a, const QuantileDensity& b) {
    return w2_distance(a, b);
  };
  if (order == Order::EntropyFirst) {
    prob.phi1 = std::move(entropy_fn);
    prob.phi2 = std::move(potential_fn);
  } else {
    prob.phi1 = std::move(potential_fn);
    prob.phi2 = std::move(entropy_fn);
  }
  return prob;
}

QuantileDensity quantile_of_gaussian(double mean, double sigma, std::size_t n) {
  if (!(sigma > 0.0)) throw InvalidInput("quantile_of_gaussian: sigma must be positive");
  if (n < 4) throw InvalidInput("quantile_of_gaussian: need at least 4 cells");
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i)
    q[i] = mean + sigma * normal_quantile(QuantileDensity::cell_center(i, n));
  return QuantileDensity(std::move(q));
}

QuantileDensity quantile_of_mixture(const std::vector<GaussianComponent>& comps,
                                    std::size_t n) {
  if (comps.empty()) throw InvalidInput("quantile_of_mixture: no components");
  if (n < 4) throw InvalidInput("quantile_of_mixture: need at least 4 cells");
  double wsum = 0.0;
  for (const auto& cpt : comps) {
    if (!(cpt.weight > 0.0) || !(cpt.sigma > 0.0))
      throw InvalidInput("quantile_of_mixture: weights and sigmas must be positive");
    wsum += cpt.weight;
  }
  auto cdf = [&](double x) {
    double s = 0.0;
    for (const auto& cpt : comps)
      s += cpt.weight * normal_cdf((x - cpt.mean) / cpt.sigma);
    return s / wsum;
  };
  auto pdf = [&](double x) {
    double s = 0.0;
    for (const auto& cpt : comps)
      s += cpt.weight * normal_pdf((x - cpt.mean) / cpt.sigma) / cpt.sigma;
    return s / wsum;
  };
  double lo = comps[0].mean, hi = comps[0].mean;
  for (const auto& cpt : comps) {
    lo = std::min(lo, cpt.mean - 12.0 * cpt.sigma);
    hi = std::max(hi, cpt.mean + 12.0 * cpt.sigma);
  }

  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = QuantileDensity::cell_center(i, n);
    double a = lo, b = hi;
    for (int it = 0; it < 200 && cdf(a) > s; ++it) a -= (b - a);
    for (int it = 0; it < 200 && cdf(b) < s; ++it) b += (b - a);
    double x = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
      const double err = cdf(x) - s;
      if (std::abs(err) <= 1e-13) break;
      if (err > 0.0) b = x; else a = x;
      const double dens = pdf(x);
      double x_next = (dens > 1e-280) ? x - err / dens : 0.5 * (a + b);
      if (!(x_next > a) || !(x_next < b)) x_next = 0.5 * (a + b);
      x = x_next;
    }
    q[i] = x;
  }
  return QuantileDensity(std::move(q));
}

}  // namespace gfsplit::wass1d
