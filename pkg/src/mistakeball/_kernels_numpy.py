"""Pure-numpy kernel implementations.

Chunked, prune-as-you-go scans stand in for the early-exit loops in
``_kernels_numba``.  Every function here must return exactly the same value
as its numba twin on identical inputs; tests enforce that element for
element.  Offsets are processed in ascending order and filters preserve
order, so "first hit" semantics survive the vectorization.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 16
_PRUNE_EVERY = 8


def first_return_symbolic(x: np.ndarray, n: int, budget: int, k_max: int) -> int:
    """Smallest k in [1, k_max] with Hamming(x[k:k+n], x[:n]) <= budget, else 0."""
    pat = x[:n]
    lo = 1
    while lo <= k_max:
        hi = min(lo + _CHUNK, k_max + 1)
        ks = np.arange(lo, hi, dtype=np.int64)
        counts = np.zeros(ks.size, dtype=np.int64)
        pos = 0
        while pos < n and ks.size:
            stop = min(pos + _PRUNE_EVERY, n)
            for j in range(pos, stop):
                counts += x[ks + j] != pat[j]
            pos = stop
            keep = counts <= budget
            if not keep.all():
                ks = ks[keep]
                counts = counts[keep]
        if ks.size:
            return int(ks[0])
        lo = hi
    return 0


def first_return_metric(
    x: np.ndarray, n: int, eps: float, budget: int, k_max: int
) -> int:
    """Metric twin of first_return_symbolic; distance >= eps is a mismatch."""
    pat = x[:n]
    lo = 1
    while lo <= k_max:
        hi = min(lo + _CHUNK, k_max + 1)
        ks = np.arange(lo, hi, dtype=np.int64)
        counts = np.zeros(ks.size, dtype=np.int64)
        pos = 0
        while pos < n and ks.size:
            stop = min(pos + _PRUNE_EVERY, n)
            for j in range(pos, stop):
                counts += np.abs(x[ks + j] - pat[j]) >= eps
            pos = stop
            keep = counts <= budget
            if not keep.all():
                ks = ks[keep]
                counts = counts[keep]
        if ks.size:
            return int(ks[0])
        lo = hi
    return 0


def ball_membership_metric(
    x: np.ndarray, n: int, eps: float, budget: int, j_max: int
) -> np.ndarray:
    """Boolean array b with b[j] true iff the window at offset j (0..j_max)
    stays eps-close to x[:n] outside at most `budget` indices."""
    out = np.zeros(j_max + 1, dtype=bool)
    lo = 0
    while lo <= j_max:
        hi = min(lo + _CHUNK, j_max + 1)
        js = np.arange(lo, hi, dtype=np.int64)
        counts = np.zeros(js.size, dtype=np.int64)
        pos = 0
        while pos < n and js.size:
            stop = min(pos + _PRUNE_EVERY, n)
            for j in range(pos, stop):
                counts += np.abs(x[js + j] - x[j]) >= eps
            pos = stop
            keep = counts <= budget
            if not keep.all():
                js = js[keep]
                counts = counts[keep]
        out[js] = True
        lo = hi
    return out


def min_return_overlap(x: np.ndarray, two_budget: int) -> int:
    """Smallest k >= 1 with #{i in [k, n): x[i] != x[i-k]} <= two_budget.

    Exists and is <= n because the count is empty for k >= n.  A short
    prefix count abandons hopeless offsets before the full comparison.
    """
    n = int(x.size)
    probe = min(n, 4 * two_budget + 64)
    for k in range(1, n):
        span = n - k
        head = min(span, probe)
        c = int(np.count_nonzero(x[k : k + head] != x[:head]))
        if c > two_budget:
            continue
        if span > head:
            c += int(np.count_nonzero(x[k + head : n] != x[head : n - k]))
        if c <= two_budget:
            return k
    return n


def markov_path(cum_rows: np.ndarray, first: int, uniforms: np.ndarray) -> np.ndarray:
    """Symbol path of length len(uniforms)+1 started at `first`, stepping with
    inverse-CDF draws from the cumulative transition rows."""
    m = cum_rows.shape[1]
    out = np.empty(uniforms.size + 1, dtype=np.int8)
    out[0] = first
    s = first
    for t in range(uniforms.size):
        j = int(np.searchsorted(cum_rows[s], uniforms[t], side="right"))
        if j > m - 1:
            j = m - 1
        out[t + 1] = j
        s = j
    return out


def beta_orbit_fill(beta: float, x0: float, out: np.ndarray) -> None:
    """Fill out with the orbit of x0 under x -> frac(beta * x)."""
    x = x0
    for i in range(out.size):
        out[i] = x
        y = beta * x
        x = y - np.floor(y)
        if x >= 1.0:  # guard against rounding at the right endpoint
            x = 0.0
    return None
