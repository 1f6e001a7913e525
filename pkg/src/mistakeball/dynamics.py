"""Symbolic and interval dynamics: systems, coding, and measure sampling.

Words are 1-D integer numpy arrays over {0, ..., m-1}; orbits of interval
maps are 1-D float arrays in [0, 1).  Sampling is deterministic given a
seed, and per-sample seeds are a pure function of (master seed, sample
index) so experiment output cannot depend on scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels

_STATIONARY_TOL = 1e-12
_ROW_SUM_TOL = 1e-12
_STATIONARY_CHECK_TOL = 1e-10


def sample_seed(master_seed: int, sample_index: int) -> int:
    """Per-sample u64 seed, a pure function of (master_seed, sample_index)."""
    ss = np.random.SeedSequence((int(master_seed), int(sample_index)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def require_word(word: np.ndarray, alphabet_size: int | None = None) -> np.ndarray:
    """Validate and return a word as a contiguous int8 array."""
    arr = np.asarray(word)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("word must be a nonempty 1-D sequence")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError("word entries must be integers")
    if arr.min() < 0:
        raise ValueError("word entries must be nonnegative")
    if alphabet_size is not None and arr.max() >= alphabet_size:
        raise ValueError(
            f"word entry {int(arr.max())} outside alphabet of size {alphabet_size}"
        )
    return np.ascontiguousarray(arr, dtype=np.int8)


@dataclass(frozen=True, eq=False)
class SymbolicSystem:
    """Subshift of finite type on m symbols with a 0/1 transition matrix.

    Every row and column must contain a 1 (no dead symbols) and the
    transition graph must be strongly connected.
    """

    transitions: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.transitions)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("transitions must be a square matrix")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("transitions entries must be 0 or 1")
        a = np.ascontiguousarray(a, dtype=np.uint8)
        if (a.sum(axis=1) == 0).any():
            raise ValueError("every symbol needs an outgoing transition")
        if (a.sum(axis=0) == 0).any():
            raise ValueError("every symbol needs an incoming transition")
        object.__setattr__(self, "transitions", a)
        if not (self._reaches_all(a) and self._reaches_all(a.T)):
            raise ValueError("transition graph must be strongly connected")

    @staticmethod
    def _reaches_all(a: np.ndarray) -> bool:
        m = a.shape[0]
        seen = np.zeros(m, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            nxt = []
            for u in frontier:
                for v in np.flatnonzero(a[u]):
                    if not seen[v]:
                        seen[v] = True
                        nxt.append(int(v))
            frontier = nxt
        return bool(seen.all())

    @property
    def alphabet_size(self) -> int:
        return int(self.transitions.shape[0])

    @property
    def is_full_shift(self) -> bool:
        return bool((self.transitions == 1).all())

    @classmethod
    def full_shift(cls, m: int) -> "SymbolicSystem":
        if m < 1:
            raise ValueError("alphabet size must be positive")
        return cls(np.ones((m, m), dtype=np.uint8))

    @classmethod
    def golden_mean(cls) -> "SymbolicSystem":
        return cls(np.array([[1, 1], [1, 0]], dtype=np.uint8))

    def diameter(self) -> int:
        """Maximum over ordered pairs u != v of the shortest path length."""
        a = self.transitions
        m = self.alphabet_size
        if m == 1:
            return 0
        dist = np.full((m, m), -1, dtype=np.int64)
        for s in range(m):
            dist[s, s] = 0
            frontier = [s]
            d = 0
            while frontier:
                d += 1
                nxt = []
                for u in frontier:
                    for v in np.flatnonzero(a[u]):
                        if dist[s, v] < 0:
                            dist[s, v] = d
                            nxt.append(int(v))
                frontier = nxt
        off = dist[~np.eye(m, dtype=bool)]
        return int(off.max())


def sft_admissible(word: np.ndarray, system: SymbolicSystem) -> bool:
    """True iff every adjacent symbol pair is an allowed transition."""
    w = require_word(word, system.alphabet_size)
    if w.size < 2:
        return True
    return bool(system.transitions[w[:-1], w[1:]].all())


@dataclass(frozen=True)
class IntervalMap:
    """Piecewise-expanding map x -> frac(beta * x) on [0, 1)."""

    kind: str
    beta: float

    def __post_init__(self):
        if self.kind not in ("beta", "doubling"):
            raise ValueError(f"unknown interval map kind {self.kind!r}")
        if self.kind == "doubling" and self.beta != 2.0:
            raise ValueError("doubling map has beta = 2")
        if self.beta <= 1.0:
            raise ValueError("beta must exceed 1")

    @classmethod
    def beta_map(cls, beta: float) -> "IntervalMap":
        return cls("beta", float(beta))

    @classmethod
    def doubling(cls) -> "IntervalMap":
        return cls("doubling", 2.0)

    @property
    def symbol_count(self) -> int:
        return int(np.ceil(self.beta)) if self.kind == "beta" else 2


def beta_orbit(imap: IntervalMap, x0: float, length: int) -> np.ndarray:
    """Orbit (x0, f(x0), ..., f^{length-1}(x0)) as a float64 array."""
    if not 0.0 <= x0 < 1.0:
        raise ValueError("starting point must lie in [0, 1)")
    if length < 1:
        raise ValueError("orbit length must be positive")
    out = np.empty(length, dtype=np.float64)
    kernels.beta_orbit_fill(float(imap.beta), float(x0), out)
    return out


def code_orbit(imap: IntervalMap, orbit: np.ndarray) -> np.ndarray:
    """Itinerary of an orbit through the coding partition.

    Cells are left-closed: symbol = floor(beta * x), clamped to the last
    cell for non-integer beta where the top cell is shorter.
    """
    pts = np.asarray(orbit, dtype=np.float64)
    if pts.ndim != 1:
        raise ValueError("orbit must be 1-D")
    if pts.size and (pts.min() < 0.0 or pts.max() >= 1.0):
        raise ValueError("orbit points must lie in [0, 1)")
    symbols = np.floor(imap.beta * pts).astype(np.int64)
    np.clip(symbols, 0, imap.symbol_count - 1, out=symbols)
    return symbols.astype(np.int8)


def _stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Stationary row vector of P to residual 1e-12, by damped power iteration."""
    m = P.shape[0]
    pi = np.full(m, 1.0 / m)
    half = 0.5 * (P + np.eye(m))  # same fixed vector, kills periodicity
    for _ in range(200000):
        nxt = pi @ half
        nxt /= nxt.sum()
        if np.abs(nxt @ P - nxt).max() <= _STATIONARY_TOL:
            return nxt
        pi = nxt
    raise RuntimeError("stationary distribution iteration did not converge")


@dataclass(frozen=True, eq=False)
class MeasureSpec:
    """Sampling measure: bernoulli(p), markov(P, pi), or lebesgue_start.

    lebesgue_start draws only the initial point of an interval-map orbit
    and is rejected by symbolic word sampling.
    """

    kind: str
    p: np.ndarray | None = None
    P: np.ndarray | None = None
    pi: np.ndarray | None = None

    @classmethod
    def bernoulli(cls, p) -> "MeasureSpec":
        arr = np.asarray(p, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("p must be a 1-D probability vector")
        if (arr < 0).any() or (arr > 1).any():
            raise ValueError("p entries must lie in [0, 1]")
        if abs(arr.sum() - 1.0) > _ROW_SUM_TOL:
            raise ValueError("p must sum to 1 within 1e-12")
        return cls("bernoulli", p=arr)

    @classmethod
    def markov(cls, P, pi=None, system: SymbolicSystem | None = None) -> "MeasureSpec":
        mat = np.asarray(P, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("P must be a square matrix")
        if (mat < 0).any():
            raise ValueError("P entries must be nonnegative")
        if np.abs(mat.sum(axis=1) - 1.0).max() > _ROW_SUM_TOL:
            raise ValueError("P rows must sum to 1 within 1e-12")
        if system is not None:
            if system.alphabet_size != mat.shape[0]:
                raise ValueError("P size does not match the alphabet")
            if ((mat > 0) & (system.transitions == 0)).any():
                raise ValueError("P puts mass on a forbidden transition")
        if pi is None:
            stat = _stationary_distribution(mat)
        else:
            stat = np.asarray(pi, dtype=np.float64)
            if stat.shape != (mat.shape[0],) or (stat < 0).any():
                raise ValueError("pi must be a nonnegative vector of matching size")
            if abs(stat.sum() - 1.0) > _ROW_SUM_TOL:
                raise ValueError("pi must sum to 1 within 1e-12")
            if np.abs(stat @ mat - stat).max() > _STATIONARY_CHECK_TOL:
                raise ValueError("pi is not stationary for P within 1e-10")
        return cls("markov", P=mat, pi=stat)

    @classmethod
    def lebesgue_start(cls) -> "MeasureSpec":
        return cls("lebesgue_start")

    @property
    def alphabet_size(self) -> int:
        if self.kind == "bernoulli":
            return int(self.p.size)
        if self.kind == "markov":
            return int(self.P.shape[0])
        raise ValueError("lebesgue_start has no alphabet")


def sample_word(measure: MeasureSpec, n: int, seed: int) -> np.ndarray:
    """Deterministic length-n word drawn from a symbolic measure."""
    if n < 1:
        raise ValueError("word length must be positive")
    if measure.kind == "lebesgue_start":
        raise ValueError("lebesgue_start samples orbit starts, not words")
    rng = np.random.Generator(np.random.PCG64(seed))
    if measure.kind == "bernoulli":
        cum = np.cumsum(measure.p)
        sym = np.searchsorted(cum, rng.random(n), side="right")
        np.clip(sym, 0, measure.p.size - 1, out=sym)
        return sym.astype(np.int8)
    cum_pi = np.cumsum(measure.pi)
    cum_rows = np.ascontiguousarray(np.cumsum(measure.P, axis=1))
    u = rng.random(n)
    first = min(int(np.searchsorted(cum_pi, u[0], side="right")), measure.pi.size - 1)
    return kernels.markov_path(cum_rows, first, u[1:])


def sample_orbit_start(seed: int) -> float:
    """Deterministic Lebesgue-distributed starting point in [0, 1)."""
    return float(np.random.Generator(np.random.PCG64(seed)).random())
