"""Bounded-Lipschitz metric between finitely supported measures on the star graph.

beta(P, Q) = sup { |int g dP - int g dQ| : ||g||_inf + Lip(g) <= 1, g(0) = 0 }.

The sup over all test functions reduces to a finite linear program over the
values of g on supp(P) u supp(Q) u {0}: any feasible assignment on that
finite set extends to the whole graph with the same sup-norm and Lipschitz
budgets (Lipschitz extension with truncation), so the finite LP is exact.

Three routes are provided:

* ``beta_distance``      - the production path, a dense LP solved by HiGHS;
* ``beta_grid_oracle``   - brute-force grid search over g-values (<= 2 free
                           values; cost grows as (2/h+1)^k);
* ``beta_vertex_oracle`` - exact enumeration of the vertices of the feasible
                           polytope (<= 6 free values), independent of the
                           LP solver's pivoting path.

``beta_two_diracs`` / ``beta_two_spreads`` / ``beta_dirac_vs_spread`` are
closed-form fast paths for the measure shapes produced by flow kernels; they
exploit the tree structure (cross-ray Lipschitz constraints are implied by
the per-ray constraints through the junction anchor g(0) = 0).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .graph import DiscreteMeasure, GraphPoint, RayParams, graph_distance

_FEAS_TOL = 1e-9


def _signed_weights(P: DiscreteMeasure, Q: DiscreteMeasure) -> tuple[list[GraphPoint], np.ndarray]:
    """Union support without the junction, and the vector P - Q on it."""
    diff: dict[GraphPoint, Fraction] = {}
    for meas, sign in ((P, 1), (Q, -1)):
        for pt, w in meas.atoms.items():
            if pt.radius == 0:
                continue  # g(0) = 0, contributes nothing
            diff[pt] = diff.get(pt, Fraction(0)) + sign * w
    pts = [p for p, c in diff.items() if c != 0]
    c = np.array([float(diff[p]) for p in pts])
    return pts, c


def _constraint_rows(pts: list[GraphPoint]) -> tuple[np.ndarray, np.ndarray]:
    """Rows A, b with A v <= b for v = (g_1..g_k, L, M).

    Encodes |g_z| <= M, |g_z - g_w| <= L d(z, w) for all pairs including the
    junction (where g = 0), L + M <= 1, L >= 0, M >= 0.
    """
    k = len(pts)
    rows, rhs = [], []

    def row(gcoef, Lcoef, Mcoef, b):
        r = np.zeros(k + 2)
        for j, v in gcoef:
            r[j] = v
        r[k] = Lcoef
        r[k + 1] = Mcoef
        rows.append(r)
        rhs.append(b)

    for j, z in enumerate(pts):
        row([(j, 1.0)], 0.0, -1.0, 0.0)   # g_j <= M
        row([(j, -1.0)], 0.0, -1.0, 0.0)  # -g_j <= M
        dj0 = float(z.radius)
        row([(j, 1.0)], -dj0, 0.0, 0.0)   # g_j <= L d(z, 0)
        row([(j, -1.0)], -dj0, 0.0, 0.0)
    for j, l in itertools.combinations(range(k), 2):
        d = float(graph_distance(pts[j], pts[l]))
        row([(j, 1.0), (l, -1.0)], -d, 0.0, 0.0)
        row([(j, -1.0), (l, 1.0)], -d, 0.0, 0.0)
    row([], 1.0, 1.0, 1.0)    # L + M <= 1
    row([], -1.0, 0.0, 0.0)   # L >= 0
    row([], 0.0, -1.0, 0.0)   # M >= 0
    return np.array(rows), np.array(rhs)


def beta_distance(P: DiscreteMeasure, Q: DiscreteMeasure) -> float:
    """Exact bounded-Lipschitz distance via the finite LP (HiGHS)."""
    pts, c = _signed_weights(P, Q)
    if len(pts) == 0:
        return 0.0
    A, b = _constraint_rows(pts)
    k = len(pts)
    obj = np.concatenate([-c, [0.0, 0.0]])  # linprog minimizes
    bounds = [(-1.0, 1.0)] * k + [(0.0, 1.0), (0.0, 1.0)]
    res = linprog(obj, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    if not res.success:  # pragma: no cover - LP is always feasible (g = 0)
        raise RuntimeError(f"beta LP failed: {res.message}")
    return max(0.0, -res.fun)


def beta_grid_oracle(P: DiscreteMeasure, Q: DiscreteMeasure, resolution: float = 1e-3) -> float:
    """Brute-force grid search over g-values in [-1, 1].

    Enumerates every grid assignment and keeps those with
    ||g||_inf + Lip(g) <= 1.  Only practical for <= 2 free values.
    """
    pts, c = _signed_weights(P, Q)
    k = len(pts)
    if k == 0:
        return 0.0
    if k > 2:
        raise ValueError("grid oracle supports at most 2 free g-values")
    grid = np.arange(-1.0, 1.0 + resolution / 2, resolution)
    radii = np.array([float(p.radius) for p in pts])
    if k == 1:
        g = grid[:, None]
    else:
        g = np.stack(np.meshgrid(grid, grid, indexing="ij"), axis=-1).reshape(-1, 2)
    sup = np.abs(g).max(axis=1)
    lip = np.max(np.abs(g) / radii[None, :], axis=1)  # anchor pairs (z, 0)
    if k == 2:
        d = float(graph_distance(pts[0], pts[1]))
        lip = np.maximum(lip, np.abs(g[:, 0] - g[:, 1]) / d)
    feasible = sup + lip <= 1.0 + _FEAS_TOL
    vals = g[feasible] @ c
    return float(np.abs(vals).max(initial=0.0))


def beta_vertex_oracle(P: DiscreteMeasure, Q: DiscreteMeasure) -> float:
    """Exact optimum by enumerating basic feasible points of the polytope.

    Every vertex of {v : A v <= b} solves some n-subset of tight rows; the
    LP optimum is the best feasible such solution.  Exponential in the
    support size, intended for <= 4 non-junction support points.
    """
    pts, c = _signed_weights(P, Q)
    k = len(pts)
    if k == 0:
        return 0.0
    if k > 4:
        raise ValueError("vertex oracle supports at most 4 free g-values")
    A, b = _constraint_rows(pts)
    n = k + 2
    combos = np.array(list(itertools.combinations(range(len(A)), n)))
    sub_A = A[combos]                      # (m, n, n)
    sub_b = b[combos]
    dets = np.linalg.det(sub_A)
    good = np.abs(dets) > 1e-10
    verts = np.linalg.solve(sub_A[good], sub_b[good][..., None])[..., 0]
    feas = np.all(A @ verts.T <= b[:, None] + _FEAS_TOL, axis=0)
    verts = verts[feas]
    if len(verts) == 0:  # pragma: no cover - origin is always a vertex
        return 0.0
    vals = verts[:, :k] @ c
    return float(np.abs(vals).max(initial=0.0))


# ---------------------------------------------------------------------------
# Closed-form fast paths.
#
# With g(0) = 0 and budget L + M = 1, the constraint |g(z)| <= cap(z) with
# cap(z) = min(M, L |z|) makes every cross-ray pair constraint redundant
# (d(z, w) = |z| + |w| across rays), so the LP decouples along rays and the
# two-measure cases below reduce to one-dimensional maximizations over L.
# ---------------------------------------------------------------------------


def _max_of_min_lines(lines: list[tuple[float, float]]) -> float:
    """max over L in [0,1] of min_i (m_i L + c_i); exact via crossing candidates."""
    cands = {0.0, 1.0}
    for (m1, c1), (m2, c2) in itertools.combinations(lines, 2):
        if m1 != m2:
            L = (c2 - c1) / (m1 - m2)
            if 0.0 < L < 1.0:
                cands.add(L)
    best = 0.0
    for L in cands:
        best = max(best, min(m * L + c for m, c in lines))
    return best


def beta_two_diracs(a: GraphPoint, b: GraphPoint) -> float:
    """beta(delta_a, delta_b), exact."""
    ra, rb = float(a.radius), float(b.radius)
    if a == b:
        return 0.0
    d = float(graph_distance(a, b))
    # objective <= min(L d, cap(a) + cap(b)) and the bound is attained
    lines = [(d, 0.0), (-2.0, 2.0), (ra - 1.0, 1.0), (rb - 1.0, 1.0)]
    return _max_of_min_lines(lines)


def beta_two_spreads(u: float, v: float) -> float:
    """beta of two alpha-spreads at radii u and v (same alpha).

    Per-ray problems are identical two-point problems on one ray, so the
    value equals the same-ray two-Dirac distance at radii u, v.
    """
    if u == v:
        return 0.0
    lines = [(abs(u - v), 0.0), (-2.0, 2.0), (min(u, v) - 1.0, 1.0), (max(u, v) - 1.0, 1.0)]
    return _max_of_min_lines(lines)


def _ray_pair_max(cu: float, cv: float, step: float, a_r: float) -> float:
    """max g_u - a_r g_v s.t. |g_u|<=cu, |g_v|<=cv, |g_u-g_v|<=step."""
    best = -np.inf
    for gv in (-cv, cv, cu - step, -cu + step):
        gv = min(cv, max(-cv, gv))
        gu = min(cu, gv + step)
        best = max(best, gu - a_r * gv)
    return best


def beta_dirac_vs_spread(params: RayParams, dirac: GraphPoint, spread_radius: float,
                         n_grid: int = 8192) -> float:
    """beta(delta_x, alpha-spread at radius v), accurate to ~(radii)/n_grid.

    Used only in convergence profiling where a small tolerance is harmless;
    exact values go through ``beta_distance``.
    """
    u = float(dirac.radius)
    v = float(spread_radius)
    a_r = float(params.alpha[dirac.ray - 1]) if u > 0 else 0.0
    off_ray = 1.0 - a_r if u > 0 else 1.0
    best = 0.0
    for L in np.linspace(0.0, 1.0, n_grid + 1):
        M = 1.0 - L
        cu = min(M, L * u)
        cv = min(M, L * v)
        val = off_ray * cv
        if u > 0:
            val += _ray_pair_max(cu, cv, L * abs(u - v), a_r)
        else:
            val += 0.0  # g(junction) = 0 contributes nothing
        best = max(best, abs(val))
    return best
