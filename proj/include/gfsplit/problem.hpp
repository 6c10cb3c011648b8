#pragma once

#include <functional>

#include "gfsplit/energy.hpp"
#include "gfsplit/errors.hpp"

namespace gfsplit {

// Output of a resolvent solve: the minimizer of phi(y) + d^2(x,y)/(2h)
// plus a certificate of solver accuracy (0 for closed forms, otherwise the
// achieved stationarity residual in the units of the metric).
template <class P>
struct ResolventResult {
  P point;
  double certificate = 0.0;
};

// One lower-semicontinuous functional together with its resolvent map and
// domain predicate. energy() returns the +infinity sentinel outside the
// domain.
template <class P>
struct Functional {
  std::function<Energy(const P&)> energy;
  std::function<bool(const P&)> in_domain;
  std::function<ResolventResult<P>(double h, const P&)> resolvent;
};

// A metric together with the two functionals whose sum drives the flow.
template <class P>
struct SplitProblem {
  std::function<double(const P&, const P&)> metric;
  Functional<P> phi1;
  Functional<P> phi2;

  Energy total_energy(const P& x) const { return phi1.energy(x) + phi2.energy(x); }
  bool in_domain(const P& x) const { return phi1.in_domain(x) && phi2.in_domain(x); }

  const Functional<P>& functional(int which) const {
    if (which == 1) return phi1;
    if (which == 2) return phi2;
    throw InvalidInput("SplitProblem::functional: which must be 1 or 2");
  }
};

// Value of the penalized objective phi_i(y) + d^2(x,y)/(2h); +infinity
// sentinel when y is outside the domain of phi_i.
template <class P>
Energy moreau_yosida_value(const SplitProblem<P>& prob, int which, double h,
                           const P& x, const P& y) {
  if (!(h > 0.0)) throw InvalidInput("moreau_yosida_value: h must be positive");
  const Functional<P>& f = prob.functional(which);
  if (!f.in_domain(y)) return Energy::infinity();
  const double d = prob.metric(x, y);
  return f.energy(y) + Energy(d * d / (2.0 * h));
}

}  // namespace gfsplit
