"""The operator pair behind the eigenvalue problem, checked numerically.

A maps u to the (dual of the) horizontal p-Laplacian, B to the L^q source
|u|^{q-2} u.  Because the discrete gradient and divergence are exact
adjoints, the structural laws hold to machine precision, not just up to
discretization error: degree-(p-1)/(q-1) homogeneity, the Hoelder bounds
with equality exactly on rays, coercivity <A u, u> = energy, and
monotonicity of A.
"""

import numpy as np

import subeigen as se

rng = np.random.default_rng(0)
grid = se.build_grid("heisenberg1", [(0, 1), (0, 1), (0, 1)], (5, 5, 5))
u = se.Field(grid, rng.standard_normal(grid.n_nodes))
v = se.Field(grid, rng.standard_normal(grid.n_nodes))
p, q, t = 2.5, 3.0, -1.7

print("homogeneity  A(t u) = |t|^{p-2} t A(u):")
lhs = se.apply_A(t * u, p).values
rhs = abs(t) ** (p - 2) * t * se.apply_A(u, p).values
print(f"  max deviation {np.max(np.abs(lhs - rhs)):.2e} at scale {np.max(np.abs(rhs)):.1f}")

print("coercivity  <A u, u> = p-energy:")
print(f"  {se.pairing(se.apply_A(u, p), u):.12f} vs {se.p_energy(u, p):.12f}")

print("Hoelder bound  <A u, v> <= ||u||^{p-1} ||v||, equality on rays:")
pair = se.pairing(se.apply_A(u, p), v)
bound = se.p_energy(u, p) ** ((p - 1) / p) * se.p_energy(v, p) ** (1 / p)
print(f"  random pair: {pair:.6f} <= {bound:.6f}")
pair_eq = se.pairing(se.apply_A(2.0 * v, p), v)
bound_eq = se.p_energy(2.0 * v, p) ** ((p - 1) / p) * se.p_energy(v, p) ** (1 / p)
print(f"  on a ray:    {pair_eq:.6f} vs {bound_eq:.6f} (gap {abs(pair_eq - bound_eq):.2e})")

print("monotonicity  <A u - A v, u - v> >= 0 over 2000 random pairs:")
worst = min(
    se.pairing(se.apply_A(a, p) - se.apply_A(b, p), a - b)
    for a, b in ((se.Field(grid, rng.standard_normal(grid.n_nodes)),
                  se.Field(grid, rng.standard_normal(grid.n_nodes)))
                 for _ in range(2000)))
print(f"  smallest value seen: {worst:.3e}")

print("source term  <B u, u> = ||u||_q^q and B(-u) = -B(u):")
print(f"  {se.pairing(se.apply_B(u, q), u):.12f} vs {se.lq_norm(u, q) ** q:.12f}")
print(f"  antisymmetry deviation {np.max(np.abs(se.apply_B(-u, q).values + se.apply_B(u, q).values)):.2e}")

print("\npointwise vector law <|a|^{p-2}a - |b|^{p-2}b, a-b> >= C (|a|+|b|)^{p-2}|a-b|^2:")
for pp in (1.5, 2.0, 3.0, 4.0):
    a = rng.standard_normal((100_000, 2))
    b = rng.standard_normal((100_000, 2))
    na, nb = np.linalg.norm(a, axis=1), np.linalg.norm(b, axis=1)
    inner = np.sum(((na ** (pp - 2))[:, None] * a - (nb ** (pp - 2))[:, None] * b) * (a - b), axis=1)
    ratio = inner / ((na + nb) ** (pp - 2) * np.sum((a - b) ** 2, axis=1))
    print(f"  p = {pp}: all inner products >= 0: {bool(np.all(inner >= -1e-13))}, "
          f"empirical C >= {np.min(ratio):.4f}")
