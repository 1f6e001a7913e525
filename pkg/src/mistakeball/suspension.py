"""Suspension semiflows over symbolic or interval bases.

The escape-and-return time of the flow through the slab over a mistake
ball is estimated by the base Birkhoff sum of the roof along the minimal
return, minus the 2*eps cross-section slack; a certified interval widens
that value by S_n * alpha(eps) + 2 * sup(roof) * G2 + 2*eps, where
alpha(eps) is the roof's oscillation over eps-balls (zero for symbolic
roofs).  Flow entropy is then log R_n(g1) over tau_hat, to be compared
with the base entropy divided by the mean roof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import SymbolicSystem, require_word, sample_seed
from .estimators import (
    SYMBOLIC_EPSILON,
    RateTable,
    SampleRecord,
    _aggregate,
    _map_samples,
    _require_grid,
)
from .mistake import MistakeFunction
from .recurrence import (
    CensoredReturnError,
    first_return,
    min_return_full_shift,
    min_return_metric_upper,
    min_return_sft,
)
from .thermo import entropy_analytic


@dataclass(frozen=True, eq=False)
class Roof:
    """Strictly positive roof function: a per-symbol table, or an affine
    map c + d*x on [0, 1)."""

    kind: str
    table: np.ndarray | None = None
    intercept: float = 0.0
    slope: float = 0.0

    @classmethod
    def from_table(cls, values) -> "Roof":
        arr = np.asarray(values, dtype=np.float64).reshape(-1)
        if arr.size < 1 or not np.isfinite(arr).all():
            raise ValueError("roof table must hold finite values")
        if arr.min() <= 0:
            raise ValueError("roof must be strictly positive")
        return cls("table", table=arr)

    @classmethod
    def affine(cls, intercept: float, slope: float) -> "Roof":
        lo = min(intercept, intercept + slope)
        if lo <= 0:
            raise ValueError("affine roof must stay positive on [0, 1)")
        return cls("affine", intercept=float(intercept), slope=float(slope))

    @property
    def sup(self) -> float:
        if self.kind == "table":
            return float(self.table.max())
        return max(self.intercept, self.intercept + self.slope)

    @property
    def inf(self) -> float:
        if self.kind == "table":
            return float(self.table.min())
        return min(self.intercept, self.intercept + self.slope)

    def oscillation(self, eps: float) -> float:
        """alpha(eps): largest roof variation across an eps-ball of base
        points.  Symbol tables are locally constant, so zero."""
        if self.kind == "table":
            return 0.0
        return 2.0 * abs(self.slope) * eps

    def values_on(self, base_points: np.ndarray) -> np.ndarray:
        if self.kind == "table":
            word = require_word(base_points, self.table.size)
            return self.table[word]
        pts = np.asarray(base_points, dtype=np.float64)
        return self.intercept + self.slope * pts


def roof_birkhoff(base_points, roof: Roof, k: int) -> float:
    """Sum of the roof over the first k base points."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    arr = np.asarray(base_points)
    if arr.shape[0] < k:
        raise ValueError("fewer than k base points supplied")
    if k == 0:
        return 0.0
    return float(roof.values_on(arr[:k]).sum())


@dataclass(frozen=True)
class TauEstimate:
    """Point estimate and certified interval for the flow return time."""

    value: float
    lower: float
    upper: float
    min_return: int

    def __post_init__(self):
        if not self.lower <= self.value <= self.upper:
            raise ValueError("tau interval must bracket its value")


def tau_hat(
    x,
    n: int,
    eps: float,
    g2: MistakeFunction,
    roof: Roof,
    system: SymbolicSystem | None = None,
    horizon: int | None = None,
) -> TauEstimate:
    """Flow return-time estimate over the mistake ball B_n(g2; x, eps).

    Symbolic input (integer word, eps = 0 allowed) computes the exact
    minimal return; metric input needs a witness horizon and uses the
    orbit upper bound.  The interval correction
    S_n * alpha(eps) + 2 * sup(roof) * g2(n, eps) + 2 * eps
    is zero exactly when eps = 0, g2 = zero, and the roof is a symbol
    table; the lower endpoint turns positive once
    S_n * inf(roof) > correction + 2 * eps, which for sublinear g2 is a
    fixed finite-n threshold.
    """
    if n < 1:
        raise ValueError("window length must be positive")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    arr = np.asarray(x)
    symbolic = np.issubdtype(arr.dtype, np.integer)
    budget = g2.budget(n, eps if eps > 0 else None)
    if symbolic:
        word = require_word(arr)
        if system is None or system.is_full_shift:
            s_n = min_return_full_shift(word[:n], budget)
        else:
            s_n = min_return_sft(word[:n], budget, system)
    else:
        if eps <= 0:
            raise ValueError("metric input needs a positive eps")
        if horizon is None:
            raise ValueError("metric input needs a witness horizon")
        s_n = min_return_metric_upper(arr, n, eps, g2, horizon).require()
    value = roof_birkhoff(arr, roof, s_n) - 2.0 * eps
    corr = s_n * roof.oscillation(eps) + 2.0 * roof.sup * budget + 2.0 * eps
    return TauEstimate(value=value, lower=value - corr, upper=value + corr, min_return=s_n)


def abramov(base_entropy: float, mean_roof: float) -> float:
    """Flow entropy of a suspension: base entropy over the mean roof."""
    if mean_roof <= 0:
        raise ValueError("mean roof must be positive")
    return base_entropy / mean_roof


def mean_roof_analytic(roof: Roof, measure) -> float:
    """Integral of a table roof against a Bernoulli or Markov word measure."""
    if roof.kind != "table":
        raise ValueError("analytic roof means need a symbol table")
    if measure.kind == "bernoulli":
        return float(measure.p @ roof.table)
    if measure.kind == "markov":
        return float(measure.pi @ roof.table)
    raise ValueError("measure must be bernoulli or markov")


def flow_entropy_estimate(
    source,
    roof: Roof,
    g1: MistakeFunction,
    g2: MistakeFunction,
    n_grid,
    eps_grid=None,
    samples: int = 64,
    seed: int = 0,
    k_max: int = 10**7,
    workers: int = 1,
    target: float | None = None,
    horizon: int | None = None,
) -> RateTable:
    """Per-sample flow-entropy ratios log R_n(g1) / tau_hat(g2).

    With roof identically 1 on a symbolic base the ratio is log(R_n)/S_n
    pathwise.  The default target for symbolic sources is
    abramov(h(measure), mean roof); interval bases need a caller target.
    """
    n_grid = [int(n) for n in _require_grid(n_grid, "n_grid")]
    if samples < 1:
        raise ValueError("samples must be positive")
    symbolic = source.kind == "symbolic"
    if symbolic:
        eps_list = [SYMBOLIC_EPSILON]
        if target is None:
            target = abramov(
                entropy_analytic(source.measure),
                mean_roof_analytic(roof, source.measure),
            )
    else:
        eps_list = _require_grid(eps_grid if eps_grid is not None else [], "epsilon_grid")
        if any(e <= 0 for e in eps_list):
            raise ValueError("epsilon values must be positive")
        if horizon is None:
            horizon = k_max
    length = max(n_grid) + k_max
    system = source.system if symbolic else None

    def one_sample(i: int) -> list[SampleRecord]:
        s = sample_seed(seed, i)
        data = source.draw(s, length)
        out = []
        for n in n_grid:
            for eps in eps_list:
                r_res = first_return(
                    data, n, g1, k_max, eps=None if symbolic else eps
                )
                rate = None
                s_n = None
                censored = r_res.censored
                if not censored:
                    try:
                        tau = tau_hat(
                            data, n, eps, g2, roof, system=system, horizon=horizon
                        )
                        s_n = tau.min_return
                        if tau.value > 0:
                            rate = math.log(r_res.value) / tau.value
                        else:
                            censored = True  # estimate collapsed to <= 0
                    except CensoredReturnError:
                        censored = True
                out.append(
                    SampleRecord(
                        n=n,
                        epsilon=eps,
                        sample_index=i,
                        seed=s,
                        r_n=r_res.value,
                        s_n=s_n,
                        rate=rate,
                        censored=censored,
                    )
                )
        return out

    records = _map_samples(one_sample, samples, workers)
    return _aggregate(records, n_grid, eps_list, f"{g1.label}|{g2.label}", target)
