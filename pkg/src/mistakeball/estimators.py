"""Recurrence-rate estimators and their aggregation tables.

Each estimator draws per-sample data deterministically (seed derived from
the master seed and the sample index), computes a per-sample rate, and
aggregates into a RateTable.  Censored samples (scan bound hit) are kept
in the records, reported in the counts, and dropped from means and
medians.  The limsup/liminf proxies of a row are the max/min of the
per-n medians over the upper half of the n grid at that epsilon.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dynamics import (
    IntervalMap,
    MeasureSpec,
    SymbolicSystem,
    beta_orbit,
    sample_orbit_start,
    sample_seed,
    sample_word,
)
from .mistake import MistakeFunction, sup_birkhoff_over_ball
from .recurrence import (
    CensoredReturnError,
    first_return,
    min_return_full_shift,
    min_return_sft,
)
from .thermo import Potential, entropy_analytic, free_energy, integral_markov

SYMBOLIC_EPSILON = 0.0  # epsilon recorded for exact partition windows
CENSOR_FRACTION_LIMIT = 0.20


@dataclass(frozen=True)
class SampleRecord:
    """One (sample, n, epsilon) cell."""

    n: int
    epsilon: float
    sample_index: int
    seed: int
    r_n: int | None
    s_n: int | None
    rate: float | None
    censored: bool


@dataclass(frozen=True)
class RateRow:
    """Aggregate over samples at one (n, epsilon)."""

    n: int
    epsilon: float
    g_label: str
    sample_count: int
    censored_count: int
    mean_rate: float
    median_rate: float
    limsup_proxy: float
    liminf_proxy: float


@dataclass
class RateTable:
    records: list[SampleRecord]
    rows: list[RateRow]
    target: float | None
    g_label: str

    def row(self, n: int, epsilon: float = SYMBOLIC_EPSILON) -> RateRow:
        for row in self.rows:
            if row.n == n and row.epsilon == epsilon:
                return row
        raise KeyError(f"no row for n={n}, epsilon={epsilon}")

    def median(self, n: int, epsilon: float = SYMBOLIC_EPSILON) -> float:
        return self.row(n, epsilon).median_rate

    @property
    def censored_fraction(self) -> float:
        if not self.records:
            return 0.0
        return sum(r.censored for r in self.records) / len(self.records)


@dataclass(frozen=True, eq=False)
class SymbolicSource:
    """Sampling source pairing a subshift with a compatible word measure."""

    system: SymbolicSystem
    measure: MeasureSpec

    def __post_init__(self):
        if self.measure.kind == "lebesgue_start":
            raise ValueError("symbolic sources need a word measure")
        if self.measure.alphabet_size != self.system.alphabet_size:
            raise ValueError("measure and system alphabets disagree")
        if self.measure.kind == "bernoulli" and not self.system.is_full_shift:
            raise ValueError("bernoulli sampling is only valid on the full shift")
        if self.measure.kind == "markov":
            # revalidate support against this system's transitions
            MeasureSpec.markov(self.measure.P, pi=self.measure.pi, system=self.system)

    @property
    def kind(self) -> str:
        return "symbolic"

    def draw(self, seed: int, length: int) -> np.ndarray:
        return sample_word(self.measure, length, seed)


@dataclass(frozen=True, eq=False)
class IntervalSource:
    """Sampling source for interval-map orbits from Lebesgue starts."""

    imap: IntervalMap

    @property
    def kind(self) -> str:
        return "metric"

    def draw(self, seed: int, length: int) -> np.ndarray:
        return beta_orbit(self.imap, sample_orbit_start(seed), length)


def _require_grid(grid, name: str) -> list:
    vals = list(grid)
    if not vals:
        raise ValueError(f"{name} must be nonempty")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return vals


def _epsilon_list(source, eps_grid) -> list[float]:
    if source.kind == "symbolic":
        return [SYMBOLIC_EPSILON]
    eps = _require_grid(eps_grid if eps_grid is not None else [], "epsilon_grid")
    if any(e <= 0 for e in eps):
        raise ValueError("epsilon values must be positive")
    return [float(e) for e in eps]


def _map_samples(fn: Callable[[int], list[SampleRecord]], samples: int, workers: int):
    if workers <= 1:
        chunks = [fn(i) for i in range(samples)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(fn, range(samples)))
    return [rec for chunk in chunks for rec in chunk]


def _aggregate(
    records: list[SampleRecord],
    n_grid: list[int],
    eps_list: list[float],
    g_label: str,
    target: float | None,
) -> RateTable:
    rows = []
    upper_half = sorted(n_grid)[len(n_grid) // 2 :]
    medians: dict[float, dict[int, float]] = {}
    for eps in eps_list:
        medians[eps] = {}
        for n in n_grid:
            ok = [
                r.rate
                for r in records
                if r.n == n and r.epsilon == eps and not r.censored
            ]
            medians[eps][n] = float(np.median(ok)) if ok else math.nan
    for eps in eps_list:
        uppers = [medians[eps][n] for n in upper_half if not math.isnan(medians[eps][n])]
        limsup = max(uppers) if uppers else math.nan
        liminf = min(uppers) if uppers else math.nan
        for n in n_grid:
            cell = [r for r in records if r.n == n and r.epsilon == eps]
            ok = [r.rate for r in cell if not r.censored]
            rows.append(
                RateRow(
                    n=n,
                    epsilon=eps,
                    g_label=g_label,
                    sample_count=len(cell),
                    censored_count=sum(r.censored for r in cell),
                    mean_rate=float(np.mean(ok)) if ok else math.nan,
                    median_rate=medians[eps][n],
                    limsup_proxy=limsup,
                    liminf_proxy=liminf,
                )
            )
    rows.sort(key=lambda r: (r.n, r.epsilon))
    return RateTable(records=records, rows=rows, target=target, g_label=g_label)


def entropy_via_return(
    source,
    g: MistakeFunction,
    n_grid,
    eps_grid=None,
    samples: int = 64,
    seed: int = 0,
    k_max: int = 10**7,
    workers: int = 1,
    target: float | None = None,
) -> RateTable:
    """Entropy estimates (1/n) log R_n(g; x, eps) across a sample ensemble.

    Symbolic sources use exact partition windows and ignore eps_grid;
    interval sources need a positive eps grid.  The default target is the
    analytic measure entropy when one exists; interval maps have no
    analytic reference here, so pass one (log beta) explicitly.
    """
    n_grid = [int(n) for n in _require_grid(n_grid, "n_grid")]
    eps_list = _epsilon_list(source, eps_grid)
    if samples < 1:
        raise ValueError("samples must be positive")
    if target is None and source.kind == "symbolic":
        target = entropy_analytic(source.measure)
    length = max(n_grid) + k_max

    def one_sample(i: int) -> list[SampleRecord]:
        s = sample_seed(seed, i)
        data = source.draw(s, length)
        out = []
        for n in n_grid:
            for eps in eps_list:
                res = first_return(
                    data, n, g, k_max, eps=None if source.kind == "symbolic" else eps
                )
                rate = None if res.censored else math.log(res.value) / n
                out.append(
                    SampleRecord(
                        n=n,
                        epsilon=eps,
                        sample_index=i,
                        seed=s,
                        r_n=res.value,
                        s_n=None,
                        rate=rate,
                        censored=res.censored,
                    )
                )
        return out

    records = _map_samples(one_sample, samples, workers)
    return _aggregate(records, n_grid, eps_list, g.label, target)


def minreturn_linear_rate(
    source,
    g: MistakeFunction,
    n_grid,
    samples: int = 64,
    seed: int = 0,
    workers: int = 1,
) -> RateTable:
    """Minimal-return rates S_n(g; x) / n; the sublinear-mistake limit is 1."""
    if source.kind != "symbolic":
        raise ValueError("minimal-return rates are computed on symbolic sources")
    n_grid = [int(n) for n in _require_grid(n_grid, "n_grid")]
    if samples < 1:
        raise ValueError("samples must be positive")
    system = source.system
    length = max(n_grid)

    def one_sample(i: int) -> list[SampleRecord]:
        s = sample_seed(seed, i)
        word = source.draw(s, length)
        out = []
        for n in n_grid:
            budget = g.budget(n)
            if system.is_full_shift:
                s_n = min_return_full_shift(word[:n], budget)
            else:
                s_n = min_return_sft(word[:n], budget, system)
            out.append(
                SampleRecord(
                    n=n,
                    epsilon=SYMBOLIC_EPSILON,
                    sample_index=i,
                    seed=s,
                    r_n=None,
                    s_n=s_n,
                    rate=s_n / n,
                    censored=False,
                )
            )
        return out

    records = _map_samples(one_sample, samples, workers)
    return _aggregate(records, n_grid, [SYMBOLIC_EPSILON], g.label, 1.0)


def _logsumexp(a: np.ndarray) -> float:
    top = float(a.max())
    return top + float(np.log(np.exp(a - top).sum()))


def _birkhoff_window_sums(x: np.ndarray, phi: Potential, n: int, t_max: int) -> np.ndarray:
    """S_n phi(sigma^j x) for j = 0..t_max via prefix sums."""
    if phi.depth == 1:
        vals = phi.table[x]
        need = t_max + n
    else:
        vals = phi.table[x[:-1], x[1:]]
        need = t_max + n  # pair values; underlying word needs one more symbol
    if vals.size < need:
        raise ValueError("word too short for the requested window sums")
    cs = np.concatenate(([0.0], np.cumsum(vals)))
    return cs[n : n + t_max + 1] - cs[: t_max + 1]


def weighted_return_rate(
    x,
    phi: Potential,
    n: int,
    g: MistakeFunction,
    k_max: int,
    which: str = "first",
    system: SymbolicSystem | None = None,
) -> float:
    """(1/n) log sum_{j=0}^{T} exp(S_n phi(sigma^j x)) with T a return time.

    T is the first return R_n(g; x) ("first") or the minimal return S_n
    ("minimal"); the sum includes j = 0 and j = T.  Raises
    CensoredReturnError when the first return exceeds k_max.
    """
    if which not in ("first", "minimal"):
        raise ValueError("which must be 'first' or 'minimal'")
    word = np.asarray(x)
    if which == "first":
        t_val = first_return(word, n, g, k_max).require()
    else:
        budget = g.budget(n)
        if system is None or system.is_full_shift:
            t_val = min_return_full_shift(word[:n], budget)
        else:
            t_val = min_return_sft(word[:n], budget, system)
    sums = _birkhoff_window_sums(word, phi, n, t_val)
    return _logsumexp(sums) / n


def pressure_via_recurrence(
    x,
    phi: Potential,
    n: int,
    g: MistakeFunction,
    k_max: int,
) -> float:
    """(1/n) log( exp(sup over the ball of S_n phi) * R_n(g; x) )."""
    r_n = first_return(x, n, g, k_max).require()
    sup = sup_birkhoff_over_ball(x, n, g, phi)
    return (sup + math.log(r_n)) / n


def weighted_rate_table(
    source: SymbolicSource,
    phi: Potential,
    g: MistakeFunction,
    n_grid,
    samples: int = 64,
    seed: int = 0,
    k_max: int = 10**7,
    which: str = "first",
    workers: int = 1,
    target: float | None = None,
) -> RateTable:
    """Sampled weighted-return rates; first-return rates trend to
    h(mu) + c_{phi,1}, minimal-return rates to c_{phi,1}."""
    if source.kind != "symbolic":
        raise ValueError("weighted rates are computed on symbolic sources")
    n_grid = [int(n) for n in _require_grid(n_grid, "n_grid")]
    if which not in ("first", "minimal"):
        raise ValueError("which must be 'first' or 'minimal'")
    if target is None:
        c = free_energy(source.system, phi, 1.0)
        target = c if which == "minimal" else entropy_analytic(source.measure) + c
    pad = 1 if phi.depth == 2 else 0
    if which == "first":
        length = max(n_grid) + k_max + pad
    else:
        length = 2 * max(n_grid) + source.system.diameter() + 1 + pad

    def one_sample(i: int) -> list[SampleRecord]:
        s = sample_seed(seed, i)
        word = source.draw(s, length)
        out = []
        for n in n_grid:
            r_n = s_n = None
            try:
                if which == "first":
                    r_n = first_return(word, n, g, k_max).require()
                    t_val = r_n
                else:
                    budget = g.budget(n)
                    if source.system.is_full_shift:
                        s_n = min_return_full_shift(word[:n], budget)
                    else:
                        s_n = min_return_sft(word[:n], budget, source.system)
                    t_val = s_n
                sums = _birkhoff_window_sums(word, phi, n, t_val)
                rate = _logsumexp(sums) / n
                censored = False
            except CensoredReturnError:
                rate = None
                censored = True
            out.append(
                SampleRecord(
                    n=n,
                    epsilon=SYMBOLIC_EPSILON,
                    sample_index=i,
                    seed=s,
                    r_n=r_n,
                    s_n=s_n,
                    rate=rate,
                    censored=censored,
                )
            )
        return out

    records = _map_samples(one_sample, samples, workers)
    return _aggregate(records, n_grid, [SYMBOLIC_EPSILON], g.label, target)


def pressure_rate_table(
    source: SymbolicSource,
    phi: Potential,
    g: MistakeFunction,
    n_grid,
    samples: int = 64,
    seed: int = 0,
    k_max: int = 10**7,
    workers: int = 1,
    target: float | None = None,
) -> RateTable:
    """Sampled recurrence-pressure rates, trending to h(mu) + integral(phi)."""
    if source.kind != "symbolic":
        raise ValueError("pressure rates are computed on symbolic sources")
    if phi.depth != 1:
        raise ValueError("only depth-1 potentials are supported here")
    n_grid = [int(n) for n in _require_grid(n_grid, "n_grid")]
    if target is None:
        target = entropy_analytic(source.measure) + integral_markov(source.measure, phi)
    length = max(n_grid) + k_max

    def one_sample(i: int) -> list[SampleRecord]:
        s = sample_seed(seed, i)
        word = source.draw(s, length)
        out = []
        for n in n_grid:
            res = first_return(word, n, g, k_max)
            if res.censored:
                rate = None
            else:
                sup = sup_birkhoff_over_ball(word, n, g, phi)
                rate = (sup + math.log(res.value)) / n
            out.append(
                SampleRecord(
                    n=n,
                    epsilon=SYMBOLIC_EPSILON,
                    sample_index=i,
                    seed=s,
                    r_n=res.value,
                    s_n=None,
                    rate=rate,
                    censored=res.censored,
                )
            )
        return out

    records = _map_samples(one_sample, samples, workers)
    return _aggregate(records, n_grid, [SYMBOLIC_EPSILON], g.label, target)
