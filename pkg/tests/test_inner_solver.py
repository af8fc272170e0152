import numpy as np
import pytest

import subeigen as se
from subeigen.inner_solver import (
    ConvergenceError,
    InnerConfig,
    default_inner_config,
    inner_objective,
    solve_inner,
    solve_linear_cg,
)
from subeigen.operators import DualField
from subeigen.oracle import multistart_minimize
from conftest import chain_grid, random_field


def test_config_validation():
    with pytest.raises(ValueError):
        InnerConfig(tol_grad=0.0)
    with pytest.raises(ValueError):
        InnerConfig(eps_schedule=(1e-4, 1e-2))
    with pytest.raises(ValueError):
        InnerConfig(eps_schedule=())
    cfg = InnerConfig(eps_schedule=(1e-2, 0.0))
    with pytest.raises(ValueError):
        cfg.validate_for(1.5)  # needs a positive floor below 2
    with pytest.raises(ValueError):
        InnerConfig(eps_schedule=(1e-2,)).validate_for(3.0)  # floor above 1e-8


def test_zero_rhs_returns_zero(unit_square):
    f = DualField(unit_square, np.zeros(unit_square.n_nodes))
    assert np.all(solve_linear_cg(f, default_inner_config(2.0)).values == 0.0)
    assert np.all(solve_inner(f, 3.0, default_inner_config(3.0)).values == 0.0)


def test_chain_linear_solve():
    # K = tridiag(2,-1) at h = 1; f = (1,0,0) has solution (0.75, 0.5, 0.25)
    grid = chain_grid(3)
    f = DualField(grid, np.array([1.0, 0.0, 0.0]))
    z = solve_linear_cg(f, default_inner_config(2.0, tol_grad=1e-12))
    assert np.allclose(z.values, [0.75, 0.5, 0.25], atol=1e-8)


def test_poisson_sine_solution():
    # -lap u = 2 sin x sin y on (0, pi)^2 has u = sin x sin y
    errors = []
    for n in (16, 32):
        g = se.build_grid("euclidean2", [(0, np.pi), (0, np.pi)], (n, n))
        rhs = se.Field.from_function(g, lambda x, y: 2 * np.sin(x) * np.sin(y))
        z = solve_inner(DualField(g, rhs.values), 2.0, default_inner_config(2.0, tol_grad=1e-10))
        exact = se.Field.from_function(g, lambda x, y: np.sin(x) * np.sin(y))
        errors.append(float(np.max(np.abs(z.values - exact.values))))
    assert errors[0] < 0.02
    assert errors[1] < 0.6 * errors[0]  # at least first-order decay


def test_p4_matches_derivative_free_minimizer(rng):
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (3, 3))
    f = DualField(grid, rng.standard_normal(9))
    icfg = default_inner_config(4.0, tol_grad=1e-8)
    z = solve_inner(f, 4.0, icfg)
    eps = icfg.eps_schedule[-1]

    def batch(X):
        return np.array([inner_objective(se.Field(grid, row), f, 4.0, eps) for row in X])

    starts = 0.3 * rng.standard_normal((33, 9))
    starts[0] = 0.1
    X, vals, _ = multistart_minimize(batch, starts, max_sweeps=800)
    best = X[np.argmin(vals)]
    assert np.max(np.abs(z.values - best)) < 1e-6


def test_cg_and_bb_agree_at_p2(rng):
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (4, 4))
    f = DualField(grid, rng.standard_normal(grid.n_nodes))
    tol = 1e-8
    z_cg = solve_linear_cg(f, default_inner_config(2.0, tol_grad=tol))
    z_bb = solve_inner(f, 2.0, InnerConfig(tol_grad=tol, eps_schedule=(1e-2, 1e-4, 1e-8),
                                           method="descent_bb"))
    assert np.max(np.abs(z_cg.values - z_bb.values)) < 10 * tol


def test_energy_descent_history(rng):
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (5, 5))
    f = DualField(grid, rng.standard_normal(grid.n_nodes))
    hist: list = []
    solve_inner(f, 3.0, default_inner_config(3.0), history=hist)
    hist = np.array(hist)
    assert len(hist) >= 2
    assert np.all(np.diff(hist) <= 1e-10 * np.maximum(np.abs(hist[:-1]), 1.0))


def test_homogeneity_transfer(rng):
    # A(z) = f and A(z') = t f imply z' = t^{1/(p-1)} z
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (3, 3))
    f = DualField(grid, rng.standard_normal(9))
    for p in (1.5, 3.0):
        cfg = default_inner_config(p, tol_grad=1e-9)
        z1 = solve_inner(f, p, cfg)
        z5 = solve_inner(DualField(grid, 5.0 * f.values), p, cfg)
        scale = 5.0 ** (1.0 / (p - 1.0))
        assert np.allclose(z5.values, scale * z1.values, rtol=1e-6, atol=1e-9)


def test_p2_weak_identity(rng):
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (6, 6))
    f = DualField(grid, rng.standard_normal(grid.n_nodes))
    tol = 1e-10
    z = solve_linear_cg(f, default_inner_config(2.0, tol_grad=tol))
    defect = se.apply_A(z, 2.0).values - f.values
    # against every node basis field the pairing defect is below tolerance
    assert np.max(np.abs(defect)) <= tol * np.linalg.norm(f.values)


def test_iteration_limit_error_carries_iterate(rng):
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (8, 8))
    f = DualField(grid, rng.standard_normal(grid.n_nodes))
    with pytest.raises(ConvergenceError) as info:
        solve_linear_cg(f, InnerConfig(tol_grad=1e-12, max_iters=2))
    assert info.value.last_iterate.grid == grid
    assert info.value.grad_norm > 0.0


def test_unreachable_tolerance_stalls_out(rng):
    grid = se.build_grid("euclidean2", [(0, 1), (0, 1)], (3, 3))
    f = DualField(grid, rng.standard_normal(9))
    with pytest.raises(ConvergenceError):
        solve_inner(f, 4.0, default_inner_config(4.0, tol_grad=1e-15))
