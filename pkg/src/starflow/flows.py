"""Discrete flow of mappings and flow of kernels on the star-graph lattice.

One step of the mapping flow moves a point at radius >= 1 radially by the walk
increment, and sends the junction to (mark ray, 1) on an up step and back to
the junction on a down step.  The kernel flow replaces the mark by the alpha
spread.  Closed forms skip the composition: before the hitting time of -|x| by
the increment path the motion is a pure radial translation; after it the value
is the flow started at the junction, whose radius is the reflected increment
S+ and whose ray is the mark at the last junction departure.

Kernel weights are exact rationals; equality of measures is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import OutOfWindowError, WindowTooLargeError
from .graph import DiscreteMeasure, GraphPoint, RayParams, junction, move_along, point
from .rng import make_rng
from .walk import NOT_HIT, WalkWindow


@dataclass(frozen=True)
class FlowRealization:
    """A walk window plus one ray mark per time index (the junction-departure
    choices), independent of the walk."""

    walk: WalkWindow
    eta: np.ndarray  # eta[p - p_min] is the mark used by step p -> p+1
    params: RayParams

    @classmethod
    def generate(cls, walk: WalkWindow, params: RayParams, seed: int,
                 eta_stream_id: int) -> "FlowRealization":
        from .chain import draw_ray_marks

        n_marks = len(walk.increments)
        eta = draw_ray_marks(params, n_marks, seed, eta_stream_id)
        return cls(walk, eta, params)

    def mark(self, p: int) -> int:
        i = p - self.walk.p_min
        if not 0 <= i < len(self.eta):
            raise OutOfWindowError(f"no mark at time {p}")
        return int(self.eta[i])


def psi_one_step(fr: FlowRealization, p: int, x: GraphPoint) -> GraphPoint:
    """One transition of the mapping flow from time p to p+1."""
    step = fr.walk.diff(p, p + 1)
    if x.radius > 0:
        return move_along(x, step, fr.params.N)
    if step == 1:
        return point(fr.mark(p), 1, fr.params.N)
    return junction(fr.params.N)


def psi_compose(fr: FlowRealization, p: int, n: int, x: GraphPoint) -> GraphPoint:
    """Psi_{p,n}(x) as a left-to-right composition of one-step maps."""
    if n < p:
        raise OutOfWindowError(f"need p <= n, got {p} > {n}")
    y = x
    for k in range(p, n):
        y = psi_one_step(fr, k, y)
    return y


def _ray_from_last_departure(fr: FlowRealization, p: int, n: int) -> int:
    """Ray of Psi_{p,n}(0) when S+_{p,n} > 0: the mark at the last time
    J < n with S+_{p,J} = 0."""
    w = fr.walk
    vals = np.array([w.value(k) for k in range(p, n + 1)], dtype=np.int64)
    s_plus = vals - np.minimum.accumulate(vals)
    zeros = np.nonzero(s_plus[:-1] == 0)[0]
    j = p + int(zeros[-1])
    return fr.mark(j)


def psi_closed_form(fr: FlowRealization, p: int, n: int, x: GraphPoint) -> GraphPoint:
    """Psi_{p,n}(x) without composing: radial translation before the hitting
    time of -|x|, then the junction-started flow value."""
    if n < p:
        raise OutOfWindowError(f"need p <= n, got {p} > {n}")
    t_hit = fr.walk.hitting_time(p, x.radius)
    if n <= t_hit:  # NOT_HIT compares greater than every integer
        return move_along(x, fr.walk.diff(p, n), fr.params.N)
    radius = fr.walk.s_plus(p, n)
    if radius == 0:
        return junction(fr.params.N)
    return point(_ray_from_last_departure(fr, p, n), radius, fr.params.N)


def kernel_one_step(walk: WalkWindow, params: RayParams, p: int,
                    x: GraphPoint) -> DiscreteMeasure:
    step = walk.diff(p, p + 1)
    if x.radius > 0:
        return DiscreteMeasure.dirac(move_along(x, step, params.N))
    if step == 1:
        return DiscreteMeasure.ray_spread(params, 1)
    return DiscreteMeasure.dirac(junction(params.N))


def kernel_compose(walk: WalkWindow, params: RayParams, p: int, n: int,
                   x: GraphPoint) -> DiscreteMeasure:
    """K_{p,n}(x) by chaining one-step kernels with exact rational weights."""
    if n < p:
        raise OutOfWindowError(f"need p <= n, got {p} > {n}")
    current = DiscreteMeasure.dirac(x)
    for k in range(p, n):
        atoms: dict[GraphPoint, Fraction] = {}
        for y, w in current.atoms.items():
            for z, v in kernel_one_step(walk, params, k, y).atoms.items():
                atoms[z] = atoms.get(z, Fraction(0)) + w * v
        current = DiscreteMeasure(atoms.items())
    return current


def kernel_closed_form(walk: WalkWindow, params: RayParams, p: int, n: int,
                       x: GraphPoint) -> DiscreteMeasure:
    """K_{p,n}(x): Dirac at the radial translate before the hitting time,
    alpha spread at radius S+_{p,n} after."""
    if n < p:
        raise OutOfWindowError(f"need p <= n, got {p} > {n}")
    t_hit = walk.hitting_time(p, x.radius)
    if n <= t_hit:
        return DiscreteMeasure.dirac(move_along(x, walk.diff(p, n), params.N))
    return DiscreteMeasure.ray_spread(params, walk.s_plus(p, n))


def kernel_is_conditional_law(walk: WalkWindow, params: RayParams, p: int, n: int,
                              x: GraphPoint, max_steps: int = 16) -> bool:
    """Check K_{p,n}(x) = E[delta_{Psi_{p,n}(x)} | sigma(S)] by enumerating
    every mark assignment on the window with its product alpha weight."""
    n_marks = len(walk.increments)
    if n_marks > max_steps:
        raise WindowTooLargeError(f"{n_marks} steps exceeds enumeration limit {max_steps}")
    # the flow reads a mark only at a departure index j with S+_{p,j} = 0, so
    # marks elsewhere marginalize to total weight 1 and the sum over full
    # assignments collapses to a sum over the departure candidates
    free = [j for j in range(p, n) if walk.s_plus(p, j) == 0]
    atoms: dict[GraphPoint, Fraction] = {}
    eta = np.ones(n_marks, dtype=np.int64)
    for assignment in itertools.product(range(1, params.N + 1), repeat=len(free)):
        weight = Fraction(1)
        for ray in assignment:
            weight *= params.alpha[ray - 1]
        for j, ray in zip(free, assignment):
            eta[j - walk.p_min] = ray
        fr = FlowRealization(walk, eta, params)
        y = psi_closed_form(fr, p, n, x)
        atoms[y] = atoms.get(y, Fraction(0)) + weight
    return DiscreteMeasure(atoms.items()) == kernel_closed_form(walk, params, p, n, x)


# ---------------------------------------------------------------------------
# Vectorized helpers for large exhaustive / Monte Carlo checks
# ---------------------------------------------------------------------------

def psi_zero_batch(values: np.ndarray, eta: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """(rays, radii) of Psi_{p,n}(0) for all n >= p, batched over walks.

    values: (n_walks, length+1) anchored walk values; eta: (n_walks, length)
    marks.  Entry [w, n] describes walk w at absolute step index n (columns
    before p are filled with the start state).
    """
    vals = values[:, p:]
    s_plus = vals - np.minimum.accumulate(vals, axis=1)
    radii = s_plus
    # last index j <= n with s_plus[j] == 0, propagated forward
    idx = np.arange(vals.shape[1])[None, :]
    last_zero = np.maximum.accumulate(np.where(s_plus == 0, idx, -1), axis=1)
    # ray mark used at departure time J (absolute index p + last_zero)
    dep = p + np.minimum(last_zero, eta.shape[1] - 1 - p)
    rays = np.take_along_axis(eta, np.maximum(dep, 0), axis=1)
    rays = np.where(radii > 0, rays, 0)
    out_rays = np.zeros_like(values)
    out_radii = np.zeros_like(values)
    out_rays[:, p:] = rays
    out_radii[:, p:] = radii
    return out_rays, out_radii
