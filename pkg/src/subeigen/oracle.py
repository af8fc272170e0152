"""Independent ground truth for tiny grids (at most 25 interior nodes).

Two routes that share no code with the iterative solvers:

* ``dense_eig`` (p = q = 2): assemble the dense stiffness matrix and take
  the smallest symmetric eigenvalue -- exact up to LAPACK roundoff.
* ``multistart`` (any p, q > 1): derivative-free minimization of the
  Rayleigh quotient by coordinate-wise quadratic-fit line searches from
  many random unit-sphere starts, merged by minimum.  All restarts advance
  in lockstep as rows of one array, so the sweeps vectorize.

Node counts are capped so the multistart search stays trustworthy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .mesh import Field, Grid

__all__ = ["OracleResult", "brute_force_lambda", "multistart_minimize"]

NODE_CAP = 25


@dataclass
class OracleResult:
    lambda_star: float
    minimizer: Field
    method: str  # dense_eig | multistart
    restarts_used: int


def _quotient_batch(grid: Grid, p: float, q: float):
    """Vectorized Rayleigh quotient over rows of a (restarts, n_nodes) array."""
    G = grid.gradient_matrix
    n1 = grid.group.horizontal_dim
    vol = grid.cell_volume

    def quot(X: np.ndarray) -> np.ndarray:
        g = (G @ X.T).reshape(n1, grid.n_sites, X.shape[0])
        gsq = np.sum(g * g, axis=0)
        energy = np.sum(gsq ** (p / 2.0), axis=0) * vol
        lq = (np.sum(np.abs(X) ** q, axis=1) * vol) ** (1.0 / q)
        return energy / lq ** p

    return quot


def multistart_minimize(objective, starts: np.ndarray, max_sweeps: int = 500,
                        rel_tol: float = 1e-13, patience: int = 5) -> tuple[np.ndarray, np.ndarray, int]:
    """Coordinate-wise quadratic-fit descent on each row of ``starts``.

    ``objective`` maps a (restarts, n) array to (restarts,) values.  Per
    coordinate the objective is probed at +/- d, a parabola is fitted, and
    the best of {vertex, probes, stay} is kept; probe radii adapt per row.
    Returns (points, values, sweeps_run).
    """
    X = np.array(starts, dtype=float)
    R, n = X.shape
    rows = np.arange(R)
    vals = objective(X)
    d = 0.3 * np.maximum(np.max(np.abs(X), axis=1), 1e-12)
    stall = np.zeros(R, dtype=int)
    sweeps = 0
    for sweep in range(max_sweeps):
        sweeps = sweep + 1
        improved = np.zeros(R, dtype=bool)
        for i in range(n):
            base = X[:, i].copy()
            X[:, i] = base + d
            f_plus = objective(X)
            X[:, i] = base - d
            f_minus = objective(X)
            # parabola through (-d, 0, +d); vertex kept only when convex, clamped
            denom = f_plus - 2.0 * vals + f_minus
            with np.errstate(divide="ignore", invalid="ignore"):
                vertex = 0.5 * d * (f_minus - f_plus) / denom
            vertex = np.where((denom > 0) & np.isfinite(vertex),
                              np.clip(vertex, -4.0 * d, 4.0 * d), 0.0)
            X[:, i] = base + vertex
            f_vertex = objective(X)
            cand = np.stack([vals, f_minus, f_plus, f_vertex])
            offs = np.stack([np.zeros(R), -d, d, vertex])
            pick = np.argmin(cand, axis=0)
            new_vals = cand[pick, rows]
            X[:, i] = base + offs[pick, rows]
            improved |= new_vals < vals - rel_tol * np.abs(vals)
            vals = new_vals
        d = np.where(improved, d, d * 0.5)
        d = np.maximum(d, 1e-10)
        stall = np.where(improved, 0, stall + 1)
        if np.all(stall >= patience):
            break
    return X, vals, sweeps


def brute_force_lambda(grid: Grid, p: float, q: float, restarts: int = 64,
                       seed: int = 0, method: str = "auto") -> OracleResult:
    """Reference first (p,q)-eigenvalue on a tiny grid.

    Dispatches to the dense symmetric eigensolve when p = q = 2, otherwise
    to the seeded multistart search (positive start plus ``restarts`` random
    unit-sphere starts; at least 32 required).
    """
    if grid.n_nodes > NODE_CAP:
        raise ValueError(
            f"oracle is limited to {NODE_CAP} interior nodes, grid has {grid.n_nodes}"
        )
    if method not in ("auto", "dense_eig", "multistart"):
        raise ValueError(f"unknown oracle method {method!r}")
    if method == "dense_eig" and not (p == 2.0 and q == 2.0):
        raise ValueError("dense_eig oracle requires p = q = 2")
    use_dense = (method in ("auto", "dense_eig")) and p == 2.0 and q == 2.0

    if use_dense:
        K = grid.stiffness_p2.toarray()
        evals, evecs = scipy.linalg.eigh(K)
        u = _normalized(grid, evecs[:, 0], q)
        return OracleResult(float(evals[0]), u, "dense_eig", 0)

    if restarts < 32:
        raise ValueError(f"multistart oracle needs at least 32 restarts, got {restarts}")
    rng = np.random.default_rng(seed)
    n = grid.n_nodes
    starts = rng.standard_normal((restarts + 1, n))
    starts[0] = 1.0  # positive start targets the ground state
    vol = grid.cell_volume
    starts /= ((np.sum(np.abs(starts) ** q, axis=1) * vol) ** (1.0 / q))[:, None]
    quot = _quotient_batch(grid, p, q)
    start_vals = quot(starts)
    X, vals, _ = multistart_minimize(quot, starts)
    best = int(np.argmin(vals))
    if float(np.min(vals)) >= start_vals[0] * (1.0 - 1e-9):
        warnings.warn(
            "multistart oracle found no improvement over the raw positive start; "
            "treat lambda_star as suspect", RuntimeWarning, stacklevel=2,
        )
    u = _normalized(grid, X[best], q)
    return OracleResult(float(vals[best]), u, "multistart", restarts)


def _normalized(grid: Grid, values: np.ndarray, q: float) -> Field:
    vol = grid.cell_volume
    nrm = float((np.sum(np.abs(values) ** q) * vol) ** (1.0 / q))
    vals = values / nrm
    if vals.sum() < 0:
        vals = -vals
    return Field(grid, vals)
