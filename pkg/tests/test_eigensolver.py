import numpy as np
import pytest

import subeigen as se
from conftest import chain_grid, random_field

TWO_PI_SQ = 2 * np.pi ** 2


def small_square(n=10):
    return se.build_grid("euclidean2", [(0, 1), (0, 1)], (n, n))


def test_rayleigh_quotient_scale_invariance(unit_square, rng):
    u = random_field(unit_square, rng)
    for p, q in ((2.0, 2.0), (1.5, 3.0), (3.0, 1.5)):
        r = se.rayleigh_quotient(u, p, q)
        for t in (4.0, -0.3):
            assert se.rayleigh_quotient(t * u, p, q) == pytest.approx(r, rel=1e-12)
    with pytest.raises(ValueError):
        se.rayleigh_quotient(se.Field.zeros(unit_square), 2.0, 2.0)


def test_rayleigh_quotient_sine_anchor():
    g = se.build_grid("euclidean2", [(0, 1), (0, 1)], (64, 64))
    u = se.Field.from_function(g, lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y))
    assert se.rayleigh_quotient(u, 2.0, 2.0) == pytest.approx(TWO_PI_SQ, rel=0.01)


def test_rayleigh_quotient_chain_minimum():
    grid = chain_grid(3)
    oracle = se.brute_force_lambda(grid, 2.0, 2.0)
    assert oracle.lambda_star == pytest.approx(2 - np.sqrt(2), abs=1e-8)


def test_inverse_iteration_square_anchor():
    cfg = se.SolverConfig(grid=small_square(24), p=2.0, q=2.0)
    r = se.inverse_iteration(cfg)
    # exact discrete 5-point eigenvalue: per-axis (2 - 2 cos(pi h))/h^2
    h = 1.0 / 25
    lam_h = 2 * (2 - 2 * np.cos(np.pi * h)) / h ** 2
    assert r.converged
    assert r.lambda_hat == pytest.approx(lam_h, rel=1e-8)
    assert r.lambda_hat == pytest.approx(TWO_PI_SQ, rel=0.01)


def test_inverse_iteration_traces_monotone():
    for grid, p, q in ((small_square(), 2.0, 2.0), (small_square(), 1.5, 2.0),
                       (small_square(), 3.0, 3.0)):
        cfg = se.SolverConfig(grid=grid, p=p, q=q)
        r = se.inverse_iteration(cfg)
        slack = 10 * cfg.tol_inner
        assert all(b <= a * (1 + slack) for a, b in zip(r.mu_trace, r.mu_trace[1:]))
        assert all(un <= mu * (1 + slack) for un, mu in zip(r.unorm_trace, r.mu_trace))
        assert abs(r.unorm_trace[-1] - r.mu_trace[-1]) <= 1e-4 * r.lambda_hat
        assert r.converged


def test_inverse_iteration_eigenfunction_contract():
    cfg = se.SolverConfig(grid=small_square(), p=2.5, q=2.0)
    r = se.inverse_iteration(cfg)
    assert se.lq_norm(r.eigenfunction, 2.0) == pytest.approx(1.0, abs=1e-10)
    assert float(np.sum(r.eigenfunction.values)) >= 0.0
    assert r.residual <= 1e-4
    assert r.outer_iters == len(r.mu_trace)


def test_inverse_iteration_tiny_grid_matches_oracle():
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (3, 3))
    cfg = se.SolverConfig(grid=grid, p=2.5, q=2.0, tol_outer=1e-8)
    r = se.inverse_iteration(cfg)
    oracle = se.brute_force_lambda(grid, 2.5, 2.0)
    assert r.lambda_hat == pytest.approx(oracle.lambda_star, rel=1e-4)


def test_inverse_iteration_custom_start(rng):
    grid = small_square()
    cfg = se.SolverConfig(grid=grid, p=2.0, q=2.0)
    w0 = se.Field(grid, np.abs(rng.standard_normal(grid.n_nodes)) + 0.1)
    r = se.inverse_iteration(cfg, w0=w0)
    r_def = se.inverse_iteration(cfg)
    assert r.lambda_hat == pytest.approx(r_def.lambda_hat, rel=1e-6)
    with pytest.raises(ValueError):
        se.inverse_iteration(cfg, w0=se.Field.zeros(grid))
    with pytest.raises(ValueError):
        se.inverse_iteration(cfg, w0="bump")


def test_inverse_iteration_max_outer_reports_unconverged():
    cfg = se.SolverConfig(grid=small_square(), p=2.0, q=2.0, max_outer=2)
    r = se.inverse_iteration(cfg)
    assert not r.converged
    assert r.outer_iters == 2


def test_scalar_multiple_structure():
    cfg = se.SolverConfig(grid=small_square(), p=2.0, q=2.0)
    r = se.inverse_iteration(cfg)
    u, lam = r.eigenfunction, r.lambda_hat
    quot = se.rayleigh_quotient(u, 2.0, 2.0)
    assert quot == pytest.approx(lam, rel=1e-6)  # mu and the quotient agree at stop
    for t in (2.0, -5.0):
        assert se.rayleigh_quotient(t * u, 2.0, 2.0) == pytest.approx(quot, rel=1e-12)
        assert se.residual(t * u, lam, 2.0, 2.0) == pytest.approx(
            se.residual(u, lam, 2.0, 2.0), rel=1e-8, abs=1e-14)


def test_rayleigh_minimize_square_anchor():
    cfg = se.SolverConfig(grid=small_square(24), p=2.0, q=2.0)
    ri = se.inverse_iteration(cfg)
    rr = se.rayleigh_minimize(cfg)
    assert rr.converged
    assert rr.lambda_hat == pytest.approx(ri.lambda_hat, rel=0.01)
    assert rr.lambda_hat == pytest.approx(TWO_PI_SQ, rel=0.01)


def test_rayleigh_minimize_quotient_monotone():
    cfg = se.SolverConfig(grid=small_square(), p=2.5, q=2.0)
    r = se.rayleigh_minimize(cfg)
    assert all(b <= a * (1 + 1e-14) for a, b in zip(r.mu_trace, r.mu_trace[1:]))
    assert se.lq_norm(r.eigenfunction, 2.0) == pytest.approx(1.0, abs=1e-10)


def test_rayleigh_minimize_heisenberg_agreement():
    grid = se.build_grid("heisenberg1", [(0, 1), (0, 1), (0, 1)], (16, 16, 16))
    cfg = se.SolverConfig(grid=grid, p=2.0, q=2.0)
    ri = se.inverse_iteration(cfg)
    rr = se.rayleigh_minimize(cfg)
    assert abs(ri.lambda_hat - rr.lambda_hat) / ri.lambda_hat < 0.02


def test_oracle_lower_bound_certificate():
    # mu can dip below the discrete minimum only by inner-solve noise
    # (~tol_inner * mu), so the 1e-6 absolute bound needs tight inner solves
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (4, 4))
    for p, q in ((2.0, 2.0), (2.5, 2.0), (3.0, 3.0)):
        oracle = se.brute_force_lambda(grid, p, q, seed=7)
        cfg = se.SolverConfig(grid=grid, p=p, q=q, tol_outer=1e-9, tol_inner=1e-8)
        r = se.inverse_iteration(cfg)
        assert r.lambda_hat >= oracle.lambda_star - 1e-6
        assert r.lambda_hat <= oracle.lambda_star * (1 + 1e-4)
        # the returned eigenfunction's exact quotient obeys the bound as well
        quot = se.rayleigh_quotient(r.eigenfunction, p, q)
        assert quot >= oracle.lambda_star - 1e-6


def test_dilation_covariance_solver_level():
    # lambda(delta_s box) = s^(nu - p - nu p / q) lambda(box), exactly at the
    # discrete level; solver tolerances are the only slack
    gh = se.build_grid("heisenberg1", [(0, 1), (0, 1), (0, 1)], (3, 3, 2))
    nu, p, q = 4, 2.0, 3.0
    cfg = se.SolverConfig(grid=gh, p=p, q=q, tol_outer=1e-12, tol_inner=1e-12)
    lam = se.inverse_iteration(cfg).lambda_hat
    for s in (0.5, 2.0):
        gd = se.dilate_grid(gh, s)
        cfg_s = se.SolverConfig(grid=gd, p=p, q=q, tol_outer=1e-12, tol_inner=1e-12)
        lam_s = se.inverse_iteration(cfg_s).lambda_hat
        expected = s ** (nu - p - nu * p / q)
        assert lam_s / lam == pytest.approx(expected, rel=1e-6)


def test_solver_config_validation(unit_square):
    with pytest.raises(ValueError):
        se.SolverConfig(grid=unit_square, p=1.0, q=2.0)
    with pytest.raises(ValueError):
        se.SolverConfig(grid=unit_square, p=2.0, q=0.5)
    cfg = se.SolverConfig(grid=unit_square, p=2.0, q=2.0)
    assert cfg.tol_inner == 1e-8
    cfg2 = se.SolverConfig(grid=unit_square, p=2.5, q=2.0)
    assert cfg2.tol_inner == 1e-6
