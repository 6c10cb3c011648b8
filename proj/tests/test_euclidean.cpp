#include <cmath>
#include <vector>

#include "doctest.h"
#include "gfsplit/convergence.hpp"
#include "gfsplit/euclidean.hpp"
#include "gfsplit/linalg.hpp"
#include "gfsplit/rng.hpp"
#include "gfsplit/trajectory.hpp"

using namespace gfsplit;
using euclidean::QuadraticFunctional;
using euclidean::Vec;

TEST_CASE("small dense linear algebra") {
  SUBCASE("cholesky solve against a known inverse") {
    linalg::Matrix a(2);
    a.at(0, 0) = 4.0; a.at(0, 1) = 1.0;
    a.at(1, 0) = 1.0; a.at(1, 1) = 3.0;
    const linalg::Vec x = linalg::cholesky_solve(a, {1.0, 2.0});
    // inverse of [[4,1],[1,3]] is [[3,-1],[-1,4]]/11
    CHECK(x[0] == doctest::Approx(1.0 / 11.0));
    CHECK(x[1] == doctest::Approx(7.0 / 11.0));
  }
  SUBCASE("cholesky rejects indefinite input") {
    linalg::Matrix a(2);
    a.at(0, 0) = 1.0; a.at(1, 1) = -1.0;
    CHECK_THROWS_AS(linalg::cholesky_solve(a, {1.0, 1.0}), SingularSystem);
  }
  SUBCASE("jacobi eigendecomposition reconstructs the matrix") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + rng.integer(3);
      linalg::Matrix a(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
          a.at(i, j) = a.at(j, i) = rng.uniform(-2.0, 2.0);
      const auto eig = linalg::jacobi_eigensym(a);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k)
            s += eig.q.at(i, k) * eig.eigenvalues[k] * eig.q.at(j, k);
          CHECK(s == doctest::Approx(a.at(i, j)).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("quadratic functional validation") {
  SUBCASE("asymmetric input is rejected") {
    linalg::Matrix a(2);
    a.at(0, 1) = 1.0;  // not mirrored
    CHECK_THROWS_AS(QuadraticFunctional(a, {0.0, 0.0}), InvalidInput);
  }
  SUBCASE("indefinite input is rejected") {
    linalg::Matrix a(2);
    a.at(0, 0) = 1.0; a.at(1, 1) = -1.0;
    CHECK_THROWS_AS(QuadraticFunctional(a, {0.0, 0.0}), InvalidInput);
  }
  SUBCASE("evaluation") {
    const auto f = QuadraticFunctional::isotropic(2, 2.0, {1.0, -1.0}, 3.0);
    CHECK(f(Vec{1.0, 2.0}) == doctest::Approx(0.5 * 2.0 * 5.0 + 1.0 - 2.0 + 3.0));
  }
}

TEST_CASE("closed-form resolvent of a quadratic") {
  SUBCASE("unit isotropic") {
    const auto f = QuadraticFunctional::isotropic(1, 1.0);
    CHECK(euclidean::prox_quadratic(f, 1.0, Vec{2.0})[0] == doctest::Approx(1.0));
  }
  SUBCASE("zero curvature is the identity") {
    const auto f = QuadraticFunctional::isotropic(3, 0.0);
    const Vec x{0.3, -2.0, 5.5};
    const Vec y = euclidean::prox_quadratic(f, 0.8, x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]));
  }
  SUBCASE("diagonal curvature acts componentwise") {
    const auto f = QuadraticFunctional(linalg::Matrix::diagonal({1.0, 3.0}),
                                       {0.0, 0.0});
    const Vec y = euclidean::prox_quadratic(f, 0.5, Vec{1.0, 1.0});
    CHECK(y[0] == doctest::Approx(2.0 / 3.0));
    CHECK(y[1] == doctest::Approx(0.4));
  }
  SUBCASE("h must be positive") {
    const auto f = QuadraticFunctional::isotropic(1, 1.0);
    CHECK_THROWS_AS(euclidean::prox_quadratic(f, 0.0, Vec{1.0}), InvalidInput);
  }
}

TEST_CASE("flow of the sum functional") {
  SUBCASE("two half-squares in one dimension") {
    const auto f = QuadraticFunctional::isotropic(1, 1.0);
    CHECK(euclidean::exact_flow(f, f, Vec{1.0}, 1.0)[0] ==
          doctest::Approx(std::exp(-2.0)));
  }
  SUBCASE("time zero returns the start") {
    const auto f = QuadraticFunctional::isotropic(2, 1.5, {0.2, -0.1});
    const Vec x0{0.7, -1.1};
    const Vec u = euclidean::exact_flow(f, f, x0, 0.0);
    CHECK(u[0] == doctest::Approx(x0[0]));
    CHECK(u[1] == doctest::Approx(x0[1]));
  }
  SUBCASE("diagonal curvatures decay componentwise") {
    const auto f1 = QuadraticFunctional(linalg::Matrix::diagonal({1.0, 4.0}),
                                        {0.0, 0.0});
    const auto f2 = QuadraticFunctional::isotropic(2, 0.0);
    const Vec u = euclidean::exact_flow(f1, f2, Vec{1.0, 1.0}, 0.5);
    CHECK(u[0] == doctest::Approx(std::exp(-0.5)));
    CHECK(u[1] == doctest::Approx(std::exp(-2.0)));
  }
  SUBCASE("shifted quadratic settles at its minimizer") {
    // phi1 = x^2/2, phi2 = (x-1)^2/2: minimizer of the sum at 1/2
    const auto f1 = QuadraticFunctional::isotropic(1, 1.0);
    const auto f2 = QuadraticFunctional::isotropic(1, 1.0, {-1.0}, 0.5);
    const Vec u = euclidean::exact_flow(f1, f2, Vec{0.0}, 50.0);
    CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("euclidean split problem") {
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(
        euclidean::build_euclidean_problem(QuadraticFunctional::isotropic(1, 1.0),
                                           QuadraticFunctional::isotropic(2, 1.0)),
        DimensionMismatch);
  }
  SUBCASE("composite map is division by (1+h)^2") {
    const auto prob = euclidean::build_euclidean_problem(
        QuadraticFunctional::isotropic(1, 1.0), QuadraticFunctional::isotropic(1, 1.0));
    const double h = 0.3;
    const auto half = prob.phi1.resolvent(h, Vec{1.0});
    const auto full = prob.phi2.resolvent(h, half.point);
    CHECK(full.point[0] == doctest::Approx(1.0 / ((1.0 + h) * (1.0 + h))));
  }
  SUBCASE("vanishing second functional leaves a single resolvent") {
    const auto prob = euclidean::build_euclidean_problem(
        QuadraticFunctional::isotropic(1, 1.0), QuadraticFunctional::isotropic(1, 0.0));
    const auto traj = run_scheme(prob, Vec{1.0}, Discretisation({0.25}));
    CHECK(traj.point(1)[0] == doctest::Approx(1.0 / 1.25));
    CHECK(traj.point(1)[0] == traj.half_point(1)[0]);
  }
  SUBCASE("shifted pair, one unit step from the origin") {
    const auto prob = euclidean::build_euclidean_problem(
        QuadraticFunctional::isotropic(1, 1.0),
        QuadraticFunctional::isotropic(1, 1.0, {-1.0}, 0.5));
    const auto traj = run_scheme(prob, Vec{0.0}, Discretisation({1.0}));
    CHECK(traj.half_point(1)[0] == doctest::Approx(0.0));
    CHECK(traj.point(1)[0] == doctest::Approx(0.5));
  }
}

TEST_CASE("firm nonexpansiveness of the closed-form resolvent") {
  Rng rng(17);
  const auto f = QuadraticFunctional(linalg::Matrix::diagonal({0.5, 2.0, 0.0}),
                                     {0.3, -0.2, 1.0});
  for (int trial = 0; trial < 50; ++trial) {
    const double h = rng.uniform(0.01, 2.0);
    Vec x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = rng.uniform(-4.0, 4.0);
      y[i] = rng.uniform(-4.0, 4.0);
    }
    const Vec jx = euclidean::prox_quadratic(f, h, x);
    const Vec jy = euclidean::prox_quadratic(f, h, y);
    CHECK(euclidean::euclidean_distance(jx, jy) <=
          euclidean::euclidean_distance(x, y) * (1.0 + 1e-12));
  }
}

TEST_CASE("scheme approaches the exact flow at first order") {
  const auto f = QuadraticFunctional::isotropic(1, 1.0);
  const auto prob = euclidean::build_euclidean_problem(f, f);
  const double T = 1.0;
  std::function<Vec(double)> reference = [&](double scheme_t) {
    return euclidean::exact_flow(f, f, Vec{1.0}, flow_time_of(scheme_t));
  };
  const auto table =
      trotter_convergence_study(prob, Vec{1.0}, T, {8, 16, 32, 64}, reference);
  REQUIRE(table.rows.size() == 4);
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    CHECK(table.rows[i].sup_error <= table.rows[i - 1].sup_error * 1.1);
  CHECK(table.fitted_slope >= 0.9);
}
