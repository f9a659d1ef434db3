import numpy as np
import pytest

import fracp


def unit_kernel(p=2.0, h=1 / 32):
    return fracp.Kernel([fracp.Interval(0.0, 1.0)], h, fracp.Params(0.5, p, 1))


def test_lattice_and_kernel():
    K = fracp.Kernel([fracp.Interval(0.0, 1.0), fracp.Interval(2.0, 3.0)], 0.25, fracp.Params())
    assert K.size == 8
    assert K.components == 2
    assert K.measure == pytest.approx(2.0)
    assert K.coordinates[:4, 0] == pytest.approx([0.125, 0.375, 0.625, 0.875])
    assert np.allclose(K.pair_weights, K.pair_weights.T)


def test_invalid_params_raise():
    with pytest.raises(fracp.FracpError, match="0<s<1"):
        fracp.Params(1.5, 2.0, 1)


def test_lambda1_matches_matrix_oracle():
    K = unit_kernel()
    opts = fracp.SolverOptions()
    opts.grad_tol = 1e-10
    r = fracp.solve_lambda1(K, opts)
    oracle = fracp.matrix_oracle_p2(K)
    assert r.converged
    assert abs(r.lambda_ - oracle[0]) / oracle[0] < 1e-6
    assert np.all(r.u > 0)
    assert fracp.rayleigh_quotient(K, r.u) == pytest.approx(r.lambda_, rel=1e-12)


def test_lambda2_changes_sign():
    K = unit_kernel(p=3.0)
    r1 = fracp.solve_lambda1(K)
    r2 = fracp.solve_lambda2(K, r1.u)
    assert r2.lambda_ > r1.lambda_
    assert r2.u.min() < 0 < r2.u.max()
    assert fracp.loop_upper_bound(K, r2.u, 256) <= r2.lambda_ * (1 + 1e-4)


def test_budget_exhaustion_raises_not_converged():
    opts = fracp.SolverOptions()
    opts.max_iter = 1
    with pytest.raises(fracp.NotConverged):
        fracp.solve_lambda1(unit_kernel(), opts)


def test_gradient_matches_finite_differences():
    K = fracp.Kernel([fracp.Interval(0.0, 1.0)], 0.1, fracp.Params(0.5, 1.5, 1))
    rng = np.random.default_rng(3)
    u = rng.uniform(-1, 1, K.size)
    g = fracp.energy_gradient(K, u)
    step = 1e-6
    fd = np.array([(fracp.energy(K, u + step * e) - fracp.energy(K, u - step * e)) / (2 * step)
                   for e in np.eye(K.size)])
    assert np.linalg.norm(g - fd) / np.linalg.norm(g) < 1e-5


def test_pointwise_examples():
    assert fracp.j_p(2.0, 3.0) == 4.0
    assert fracp.estimate_cp(2.0) == pytest.approx(2.002)
    r = fracp.check_odd_loop(1.0, -1.0, 1.0, 0.0, 2.0)
    assert (r["lhs"], r["rhs"], r["holds"]) == (2.0, 1.0, True)
    assert fracp.check_jp_strong_monotone(1.0, 0.0, 3.0)["rhs"] == 0.5
    for row in fracp.run_property_battery(2000, 1):
        assert row["violations"] == 0


def test_inequalities():
    fk = fracp.faber_krahn([fracp.Interval(0.0, 1.0)], 1 / 32, fracp.Params())
    assert fk["holds"] and abs(fk["margin"]) < 0.02
    rows = fracp.hks_sweep(0.5, [2.0, 4.0], fracp.Params(), 1 / 32)
    assert rows[0]["gap"] > rows[1]["gap"] > 0
