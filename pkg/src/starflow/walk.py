"""Simple random walks on two-sided integer index windows.

All quantities are anchor-free: only differences S_n - S_p are ever used, so
a window stores values relative to its own origin and supports negative
indices transparently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyWindowError, NegativeValueError, OutOfWindowError
from .rng import make_rng


class NotHitType:
    """Symbolic +infinity returned when a hitting level is never reached."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotHit"

    def __gt__(self, other):
        return True

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, NotHitType)


NOT_HIT = NotHitType()


class WalkWindow:
    """A +-1 increment path on [p_min, p_max], values anchored to S_{p_min} = 0.

    ``values[i] = S_{p_min + i} - S_{p_min}``; a sparse table over values
    gives O(1) range-minimum queries after O(n log n) preprocessing.
    """

    __slots__ = ("p_min", "p_max", "increments", "values", "_min_table")

    def __init__(self, p_min: int, increments: np.ndarray):
        increments = np.asarray(increments, dtype=np.int64)
        if increments.size == 0:
            raise EmptyWindowError("window has no steps")
        if not np.all(np.abs(increments) == 1):
            raise ValueError("increments must be +-1")
        self.p_min = int(p_min)
        self.p_max = int(p_min) + len(increments)
        self.increments = increments
        self.values = np.concatenate([[0], np.cumsum(increments)])
        self._min_table = None

    def __len__(self):
        return self.p_max - self.p_min

    def _idx(self, p: int) -> int:
        if not self.p_min <= p <= self.p_max:
            raise OutOfWindowError(f"index {p} outside [{self.p_min}, {self.p_max}]")
        return p - self.p_min

    def value(self, p: int) -> int:
        """S_p - S_{p_min}."""
        return int(self.values[self._idx(p)])

    def diff(self, p: int, n: int) -> int:
        """S_{p,n} = S_n - S_p."""
        return int(self.values[self._idx(n)] - self.values[self._idx(p)])

    def _build_min_table(self):
        v = self.values
        levels = [v]
        span = 1
        while span * 2 <= len(v):
            prev = levels[-1]
            levels.append(np.minimum(prev[: len(prev) - span], prev[span:]))
            span *= 2
        self._min_table = levels

    def window_min(self, p: int, n: int) -> int:
        """min_{h in [p,n]} S_h - S_p (anchor-free), O(1) per query."""
        i, j = self._idx(p), self._idx(n)
        if i > j:
            raise OutOfWindowError(f"empty range [{p}, {n}]")
        if self._min_table is None:
            self._build_min_table()
        length = j - i + 1
        k = length.bit_length() - 1
        span = 1 << k
        t = self._min_table[k]
        m = min(t[i], t[j - span + 1])
        return int(m - self.values[i])

    def s_plus(self, p: int, n: int) -> int:
        """S^+_{p,n} = S_{p,n} - min_{h in [p,n]} S_{p,h} >= 0."""
        return self.diff(p, n) - self.window_min(p, n)

    def hitting_time(self, w_p: int, depth: int):
        """Smallest q >= p with S_q - S_p = -depth, or NOT_HIT.

        Steps are +-1, so the first time the running minimum reaches -depth
        is the first hit of the level itself.
        """
        p = w_p
        i = self._idx(p)
        if depth < 0:
            raise ValueError("depth must be >= 0")
        if depth == 0:
            return p
        rel = self.values[i:] - self.values[i]
        hits = np.nonzero(rel == -depth)[0]
        if hits.size == 0:
            return NOT_HIT
        return p + int(hits[0])

    def slice_values(self, p: int, n: int) -> np.ndarray:
        """Values S_h - S_p for h in [p, n]."""
        i, j = self._idx(p), self._idx(n)
        return self.values[i : j + 1] - self.values[i]


def generate_walk(p_min: int, p_max: int, seed: int, stream_id: int = 0) -> WalkWindow:
    """Deterministic SRW on [p_min, p_max] from the (seed, stream_id) stream."""
    if p_min >= p_max:
        raise EmptyWindowError(f"window [{p_min}, {p_max}] has no steps")
    rng = make_rng(seed, stream_id)
    incs = rng.integers(0, 2, size=p_max - p_min) * 2 - 1
    return WalkWindow(p_min, incs)


@dataclass(frozen=True)
class Excursion:
    """An excursion interval [start, end] of a nonnegative path, with its
    global ordinal (1-based, in start order)."""

    start: int
    end: int
    ordinal: int


def excursions(path_y: np.ndarray, a: int = 0) -> list[Excursion]:
    """Decompose a nonnegative path on [a, a + len - 1] into excursions.

    An excursion [p, q] has Y_p = Y_{p-1} = Y_q = Y_{q+1} = 0 (with the
    convention Y_{a-1} = 0 at the window edge) and every interior zero is
    immediately followed by 1.  Intervals still open at the window end are
    discarded.  Returned in start order with ordinals 1, 2, ...
    """
    y = np.asarray(path_y)
    if np.any(y < 0):
        raise NegativeValueError("excursion decomposition needs a nonnegative path")
    n = len(y)
    out: list[Excursion] = []
    p = None  # current valid start: a zero whose predecessor is zero (edge counts)
    for j in range(n):
        if y[j] != 0:
            continue
        if p is None:
            if j == 0 or y[j - 1] == 0:
                p = j
            continue
        if j == p:
            continue
        if j == p + 1:
            # Y_p = 0 followed by Y_{p+1} = 0 violates the interior condition
            # at p, so no excursion starts at p; j itself is a valid start
            p = j
            continue
        if j + 1 >= n:
            break  # interval still open at the window edge: discarded
        if y[j + 1] == 0:
            # interior zeros were each followed by 1 (a violation would have
            # slid the start forward), so [p, j] satisfies the definition
            out.append(Excursion(a + p, a + j, len(out) + 1))
            p = j + 1
        # else: interior zero followed by 1, the interval continues
    return out


def excursions_brute(path_y: np.ndarray, a: int = 0) -> list[Excursion]:
    """Definition-checking oracle: test every (p, q) pair directly."""
    y = np.asarray(path_y)
    if np.any(y < 0):
        raise NegativeValueError("excursion decomposition needs a nonnegative path")
    n = len(y)

    def yv(j):
        if j == -1:
            return 0
        if 0 <= j < n:
            return int(y[j])
        return None  # outside the window: condition unverifiable

    found = []
    for p in range(n):
        for q in range(p + 1, n):
            vals = (yv(p), yv(p - 1), yv(q), yv(q + 1))
            if any(v is None or v != 0 for v in vals):
                continue
            if all(not (y[j] == 0 and y[j + 1] != 1) for j in range(p, q)):
                found.append((p, q))
    found.sort()
    return [Excursion(a + p, a + q, i + 1) for i, (p, q) in enumerate(found)]
