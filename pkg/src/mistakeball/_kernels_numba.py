"""Numba-compiled kernel implementations.

Early-exit loops over window offsets; the pure-numpy twins live in
``_kernels_numpy`` and must agree exactly.  Compiled objects are cached on
disk so repeat runs skip JIT cost.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def first_return_symbolic(x, n, budget, k_max):
    for k in range(1, k_max + 1):
        c = 0
        hit = True
        for j in range(n):
            if x[k + j] != x[j]:
                c += 1
                if c > budget:
                    hit = False
                    break
        if hit:
            return k
    return 0


@numba.njit(cache=True, nogil=True)
def first_return_metric(x, n, eps, budget, k_max):
    for k in range(1, k_max + 1):
        c = 0
        hit = True
        for j in range(n):
            d = x[k + j] - x[j]
            if d < 0.0:
                d = -d
            if d >= eps:
                c += 1
                if c > budget:
                    hit = False
                    break
        if hit:
            return k
    return 0


@numba.njit(cache=True, nogil=True)
def ball_membership_metric(x, n, eps, budget, j_max):
    out = np.zeros(j_max + 1, dtype=np.bool_)
    for k in range(j_max + 1):
        c = 0
        hit = True
        for j in range(n):
            d = x[k + j] - x[j]
            if d < 0.0:
                d = -d
            if d >= eps:
                c += 1
                if c > budget:
                    hit = False
                    break
        out[k] = hit
    return out


@numba.njit(cache=True, nogil=True)
def min_return_overlap(x, two_budget):
    n = x.size
    for k in range(1, n):
        c = 0
        feasible = True
        for i in range(k, n):
            if x[i] != x[i - k]:
                c += 1
                if c > two_budget:
                    feasible = False
                    break
        if feasible:
            return k
    return n


@numba.njit(cache=True, nogil=True)
def markov_path(cum_rows, first, uniforms):
    m = cum_rows.shape[1]
    out = np.empty(uniforms.size + 1, dtype=np.int8)
    out[0] = first
    s = first
    for t in range(uniforms.size):
        u = uniforms[t]
        row = cum_rows[s]
        j = 0
        while j < m - 1 and row[j] <= u:
            j += 1
        out[t + 1] = j
        s = j
    return out


@numba.njit(cache=True, nogil=True)
def beta_orbit_fill(beta, x0, out):
    x = x0
    for i in range(out.size):
        out[i] = x
        y = beta * x
        x = y - np.floor(y)
        if x >= 1.0:
            x = 0.0
    return None
