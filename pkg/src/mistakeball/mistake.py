"""Mistake functions and mistake dynamical balls.

A mistake function g(n, eps) is nondecreasing in n, sublinear, and flat in
eps above a cap eps0.  A point y lies in the mistake ball B_n(g; x, eps)
iff the two length-n windows disagree (symbolically, or by distance >= eps)
in at most floor(g(n, eps)) positions; distance exactly eps counts as a
mismatch, so membership uses strict eps-closeness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import require_word
from .thermo import Potential

FAMILIES = ("zero", "constant", "power", "logarithmic")


@dataclass(frozen=True)
class MistakeFunction:
    """One of the supported mistake families.

    zero            g = 0 (classical Bowen balls)
    constant(c)     g = c
    power(C, theta) g = C * n**theta with 0 < theta < 1
    logarithmic(a)  g = a * ln(n)

    Budgets are floored to integers.  The supported families do not depend
    on eps, so the cap rule g(n, eps) = g(n, eps0) for eps > eps0 holds
    identically; eps is accepted for interface parity.
    """

    family: str
    c: int = 0
    coeff: float = 0.0
    theta: float = 0.0
    a: float = 0.0
    epsilon_cap: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown mistake family {self.family!r}")
        if self.epsilon_cap <= 0:
            raise ValueError("epsilon cap must be positive")

    @classmethod
    def zero(cls, epsilon_cap: float = 1.0) -> "MistakeFunction":
        return cls("zero", epsilon_cap=epsilon_cap)

    @classmethod
    def constant(cls, c: int, epsilon_cap: float = 1.0) -> "MistakeFunction":
        if c < 0 or c != int(c):
            raise ValueError("constant budget must be a nonnegative integer")
        return cls("constant", c=int(c), epsilon_cap=epsilon_cap)

    @classmethod
    def power(cls, coeff: float, theta: float, epsilon_cap: float = 1.0) -> "MistakeFunction":
        if coeff <= 0:
            raise ValueError("power coefficient must be positive")
        if not 0.0 < theta < 1.0:
            raise ValueError("power exponent must lie in (0, 1)")
        return cls("power", coeff=float(coeff), theta=float(theta), epsilon_cap=epsilon_cap)

    @classmethod
    def logarithmic(cls, a: float, epsilon_cap: float = 1.0) -> "MistakeFunction":
        if a <= 0:
            raise ValueError("logarithmic coefficient must be positive")
        return cls("logarithmic", a=float(a), epsilon_cap=epsilon_cap)

    def budget(self, n: int, eps: float | None = None) -> int:
        """floor(g(n, eps)); eps above the cap is clamped to the cap."""
        if n < 1:
            raise ValueError("window length must be positive")
        # eps enters only through the cap rule, and the families are flat
        # in eps, so the clamp is the identity; keep the argument checked.
        if eps is not None and eps <= 0:
            raise ValueError("eps must be positive")
        if self.family == "zero":
            return 0
        if self.family == "constant":
            return self.c
        if self.family == "power":
            return int(math.floor(self.coeff * n**self.theta))
        return int(math.floor(self.a * math.log(n)))

    @property
    def label(self) -> str:
        """Stable descriptor used in CSV rows and table labels."""
        if self.family == "zero":
            return "zero"
        if self.family == "constant":
            return f"constant({self.c})"
        if self.family == "power":
            return f"power({self.coeff:g},{self.theta:g})"
        return f"logarithmic({self.a:g})"


def mistake_budget(g: MistakeFunction, n: int, eps: float | None = None) -> int:
    return g.budget(n, eps)


def mismatch_count(x, y, n: int, eps: float | None = None) -> int:
    """Number of indices i < n where the windows disagree.

    Symbolic (eps None): integer words, inequality counts.  Metric: float
    sequences, |x_i - y_i| >= eps counts.
    """
    if n < 1:
        raise ValueError("window length must be positive")
    xa = np.asarray(x)
    ya = np.asarray(y)
    if xa.shape[0] < n or ya.shape[0] < n:
        raise ValueError("window extends past the end of an input")
    if eps is None:
        if not (np.issubdtype(xa.dtype, np.integer) and np.issubdtype(ya.dtype, np.integer)):
            raise ValueError("symbolic mismatch_count needs integer words")
        return int(np.count_nonzero(xa[:n] != ya[:n]))
    if eps <= 0:
        raise ValueError("eps must be positive")
    return int(np.count_nonzero(np.abs(xa[:n].astype(np.float64) - ya[:n].astype(np.float64)) >= eps))


def in_mistake_ball(x, y, n: int, g: MistakeFunction, eps: float | None = None) -> bool:
    """Membership of y in B_n(g; x, eps): mismatches within budget.

    Equivalent to the existence of an index set Lambda of size at least
    n - g(n, eps) on which the windows stay strictly eps-close; the
    brute-force subset enumeration in mistakeball.oracles checks exactly
    that equivalence.
    """
    return mismatch_count(x, y, n, eps) <= g.budget(n, eps)


def sup_birkhoff_over_ball(x, n: int, g: MistakeFunction, phi: Potential) -> float:
    """Supremum of the n-step Birkhoff sum of phi over B_n(g; x).

    For a depth-1 potential on symbolic windows the supremum is attained
    by upgrading the budgeted number of positions to the best symbol:
    S_n phi(x) plus the sum of the G largest gains max_a phi(a) - phi(x_i).
    Exceeds S_n phi(x) by at most 2 * ||phi||_inf * G.
    """
    if phi.depth != 1:
        raise ValueError("only depth-1 potentials are supported here")
    w = require_word(x, phi.table.size)
    if w.size < n:
        raise ValueError("word shorter than n")
    vals = phi.table[w[:n]]
    base = float(vals.sum())
    budget = g.budget(n)
    if budget <= 0:
        return base
    gains = float(phi.table.max()) - vals
    if budget >= n:
        return base + float(gains.sum())
    top = np.partition(gains, n - budget - 1)[n - budget :]
    return base + float(top.sum())
