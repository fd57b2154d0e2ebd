"""The Csaki-Vincze walk transform, its inverse pair, and its invariants.

The transform maps a simple random walk S on [0, n] to another simple walk
S-bar on [0, n-1] whose running-max reflection stays within distance 2 of
|S|.  Block boundaries are the times tau_l where S_{i-1} S_{i+1} < 0 (with
tau_0 = 0); the sign of the transformed increment alternates between blocks.
The transform is even (T(S) = T(-S)) and invertible up to global sign given
the single extra bit S_1.
"""

from __future__ import annotations

import numpy as np

from .errors import TooShortError
from .walk import WalkWindow


def tau_sequence(values: np.ndarray) -> np.ndarray:
    """Block boundaries of the transform: all i >= 1 with S_{i-1} S_{i+1} < 0.

    ``values`` is S_0..S_n; the result lists the tau_l for l >= 1 in order
    (tau_0 = 0 is implicit).
    """
    s = np.asarray(values, dtype=np.int64)
    if len(s) < 3:
        return np.array([], dtype=np.int64)
    prod = s[:-2] * s[2:]  # index i-1 holds S_{i-1} S_{i+1}
    return np.nonzero(prod < 0)[0] + 1


def taus_from_first_hits(bar_values: np.ndarray) -> np.ndarray:
    """tau_l recovered from the transformed walk: first hit of 2l by S-bar."""
    s = np.asarray(bar_values, dtype=np.int64)
    runmax = np.maximum.accumulate(s)
    new_max = np.empty(len(s), dtype=bool)
    new_max[0] = False
    new_max[1:] = runmax[1:] > runmax[:-1]
    is_tau = new_max & (s >= 2) & (s % 2 == 0)
    return np.nonzero(is_tau)[0]


def cv_forward_increments(X: np.ndarray) -> np.ndarray:
    """Transform increments; works on a (R, n) batch or a single (n,) walk."""
    X = np.asarray(X, dtype=np.int64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    n = X.shape[1]
    if n < 2:
        raise TooShortError("transform needs walk length >= 2")
    S = np.concatenate([np.zeros((X.shape[0], 1), dtype=np.int64), np.cumsum(X, axis=1)], axis=1)
    ind = S[:, :-2] * S[:, 2:] < 0            # column i-1 <-> boundary at i, i = 1..n-1
    # l(j) = number of boundaries <= j - 1, for j = 1..n-1
    l = np.zeros((X.shape[0], n - 1), dtype=np.int64)
    if n > 2:
        l[:, 1:] = np.cumsum(ind[:, : n - 2], axis=1)
    sign = np.where(l % 2 == 0, -1, 1)        # (-1)^(l+1)
    Xbar = sign * X[:, :1] * X[:, 1:]
    return Xbar[0] if single else Xbar


def cv_inverse_increments(Xbar: np.ndarray, epsilon) -> np.ndarray:
    """Inverse transform; epsilon in {-1, +1} is the recovered first step."""
    Xbar = np.asarray(Xbar, dtype=np.int64)
    single = Xbar.ndim == 1
    if single:
        Xbar = Xbar[None, :]
    eps = np.asarray(epsilon, dtype=np.int64).reshape(-1, 1)
    if not np.all(np.abs(eps) == 1):
        raise ValueError("epsilon must be +-1")
    m = Xbar.shape[1]
    if m < 1:
        raise TooShortError("inverse transform needs length >= 1")
    Sbar = np.concatenate([np.zeros((Xbar.shape[0], 1), dtype=np.int64),
                           np.cumsum(Xbar, axis=1)], axis=1)
    runmax = np.maximum.accumulate(Sbar, axis=1)
    new_max = np.zeros_like(Sbar, dtype=bool)
    new_max[:, 1:] = runmax[:, 1:] > runmax[:, :-1]
    is_tau = new_max & (Sbar >= 2) & (Sbar % 2 == 0)
    # l(j) = number of taus <= j - 1, for j = 1..m
    l = np.cumsum(is_tau[:, :-1], axis=1)
    sign = np.where(l % 2 == 0, -1, 1)
    X = np.concatenate([eps, sign * eps * Xbar], axis=1)
    return X[0] if single else X


def cv_forward(w: WalkWindow) -> WalkWindow:
    """T(S): transform a walk window on [p, p+n] into one on [0, n-1]."""
    return WalkWindow(0, cv_forward_increments(w.increments))


def cv_inverse(w_bar: WalkWindow, epsilon: int) -> WalkWindow:
    """A member of T^{-1}{S-bar} with first step epsilon, on [0, m+1]."""
    return WalkWindow(0, cv_inverse_increments(w_bar.increments, epsilon))


def reflected_path(bar_values: np.ndarray) -> np.ndarray:
    """Y-bar_n = max_{k<=n} S-bar_k - S-bar_n."""
    s = np.asarray(bar_values)
    return np.maximum.accumulate(s, axis=-1) - s


def cv_invariant_check(w: WalkWindow) -> int:
    """max_n | Y-bar_n - |S_n| | over the common range; the contract is <= 2."""
    if len(w) < 2:
        raise TooShortError("invariant check needs walk length >= 2")
    sbar = np.concatenate([[0], np.cumsum(cv_forward_increments(w.increments))])
    ybar = reflected_path(sbar)
    s_abs = np.abs(w.values[: len(sbar)])
    return int(np.max(np.abs(ybar - s_abs)))


def cv_deviation_batch(X: np.ndarray) -> np.ndarray:
    """Per-walk max deviation | Y-bar - |S| | for a (R, n) increment batch."""
    Xbar = cv_forward_increments(X)
    R = X.shape[0]
    S = np.concatenate([np.zeros((R, 1), dtype=np.int64), np.cumsum(X, axis=1)], axis=1)
    Sbar = np.concatenate([np.zeros((R, 1), dtype=np.int64), np.cumsum(Xbar, axis=1)], axis=1)
    Ybar = reflected_path(Sbar)
    dev = np.abs(Ybar - np.abs(S[:, : Sbar.shape[1]]))
    return dev.max(axis=1)
