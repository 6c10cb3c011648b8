import math

import gfsplit


def test_normal_quantile_median():
    assert abs(gfsplit.normal_quantile(0.5)) < 1e-12
    assert abs(gfsplit.normal_quantile(0.975) - 1.959963984540054) < 1e-9


def test_prox_quadratic_scalar():
    # prox of x^2/2 at x = 2 with h = 1 is 1
    assert abs(gfsplit.prox_quadratic([1.0], [0.0], 1.0, [2.0])[0] - 1.0) < 1e-14


def test_w2_shift():
    mu = gfsplit.gaussian_quantiles(0.0, 1.0, 128)
    nu = [x + 0.75 for x in mu]
    assert abs(gfsplit.w2_distance(mu, nu) - 0.75) < 1e-12


def test_entropy_of_uniforms():
    n = 128
    u01 = [(2 * i + 1) / (2 * n) for i in range(n)]
    u02 = [2 * x for x in u01]
    assert abs(gfsplit.entropy(u01)) < 1e-12
    assert abs(gfsplit.entropy(u02) + math.log(2.0)) < 1e-12


def test_entropy_resolvent_optimality():
    mu = gfsplit.gaussian_quantiles(0.0, 1.0, 128)
    out, cert, iters = gfsplit.resolvent_entropy(mu, 0.05)
    assert cert <= 1e-10
    assert iters < 50
    assert gfsplit.transport_optimality_residual(out, mu, 0.05) <= 1e-8


def test_run_euclidean_matches_flow_at_half_clock():
    rec = gfsplit.run_euclidean([1.0], [0.0], [1.0], [0.0], [1.0], 1.0, 64)
    exact = gfsplit.exact_flow(
        [1.0], [0.0], [1.0], [0.0], [1.0], gfsplit.flow_time_of(1.0)
    )
    assert abs(rec["x_final"][0] - exact[0]) < 5e-3
    assert rec["discrete_evi_worst"] <= rec["tolerance"]
    assert rec["apriori_worst"] <= rec["tolerance"]


def test_run_fokker_planck_growth_bound():
    mu = gfsplit.gaussian_quantiles(1.0, 2.0, 128)
    rec = gfsplit.run_wasserstein(mu, 1.0, "boltzmann", 2.0, "entropy-first", 1.0, 32)
    # per-step increases of the first energy are controlled by c T / 2 = 0.5
    assert rec["Delta_n"] <= 0.5 + 1e-8
    assert rec["discrete_evi_worst"] <= rec["tolerance"]
    assert all(d >= 0.0 for d in rec["delta"])


def test_compatibility_lines_hold():
    mu = gfsplit.gaussian_quantiles(0.5, 1.5, 128)
    for line in gfsplit.compatibility(mu, 1.0, 2.0, 0.1):
        assert line["holds"]


def test_ou_and_barenblatt_oracles():
    mean, sigma = gfsplit.ou_exact(1.0, 1.0, 2.0, 1.0)
    assert abs(mean - math.exp(-1.0)) < 1e-12
    assert abs(sigma - math.sqrt(1.0 + 3.0 * math.exp(-2.0))) < 1e-12
    q = gfsplit.barenblatt_quantiles(2.0, 1.0, 2.0, 64)
    assert all(b > a for a, b in zip(q, q[1:]))


def test_gronwall_bound_dominates():
    taus = [0.1] * 10
    bounds = gfsplit.gronwall_bound(1.0, taus)
    acc = 0.0
    for i, tau in enumerate(taus):
        a = (1.0 + acc) / (1.0 - tau)
        acc += tau * a
        assert a <= bounds[i] + 1e-12
