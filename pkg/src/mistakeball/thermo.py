"""Thermodynamic quantities for subshifts of finite type.

Entropy, topological pressure, free energies, equilibrium Markov chains,
Shannon-McMillan-Breiman rates, and exact Bernoulli measures of Hamming
balls.  Everything here is computed from transfer matrices or closed
forms, independently of any return-time machinery, so these functions
serve as the reference targets for the recurrence estimators.

All logarithms are natural.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import MeasureSpec, SymbolicSystem, require_word

RAYLEIGH_TOL = 1e-13
RESIDUAL_TOL = 1e-12
EQUILIBRIUM_IDENTITY_TOL = 1e-8
_MAX_POWER_ITER = 10**5


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge; the weighted transition matrix is
    likely non-primitive (periodic), so the caller must verify mixing."""


@dataclass(frozen=True, eq=False)
class Potential:
    """Locally constant potential: depth 1 (per symbol) or depth 2 (per
    allowed transition)."""

    table: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.table, dtype=np.float64)
        if arr.ndim not in (1, 2):
            raise ValueError("potential table must be 1-D or 2-D")
        if arr.ndim == 2 and arr.shape[0] != arr.shape[1]:
            raise ValueError("depth-2 potential table must be square")
        object.__setattr__(self, "table", arr)

    @classmethod
    def depth1(cls, values) -> "Potential":
        p = cls(np.asarray(values, dtype=np.float64).reshape(-1))
        if not np.isfinite(p.table).all():
            raise ValueError("potential values must be finite")
        return p

    @classmethod
    def depth2(cls, values) -> "Potential":
        return cls(np.asarray(values, dtype=np.float64))

    @property
    def depth(self) -> int:
        return int(self.table.ndim)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.table[np.isfinite(self.table)])))

    def scaled(self, t: float) -> "Potential":
        return Potential(t * self.table)


@dataclass(frozen=True, eq=False)
class PressureResult:
    """log of the Perron eigenvalue plus its positive eigendata.

    residual is max over both eigenvectors of ||Mv - lambda v||_inf / lambda
    and is at most 1e-12 on success.
    """

    value: float
    right_eigvec: np.ndarray
    left_eigvec: np.ndarray
    residual: float


def _weighted_matrix(system: SymbolicSystem, phi: Potential, t: float) -> np.ndarray:
    a = system.transitions.astype(np.float64)
    m = system.alphabet_size
    if phi.depth == 1:
        if phi.table.size != m:
            raise ValueError("potential size does not match the alphabet")
        return a * np.exp(t * phi.table)[:, None]
    if phi.table.shape != (m, m):
        raise ValueError("potential size does not match the alphabet")
    allowed = system.transitions == 1
    if not np.isfinite(phi.table[allowed]).all():
        raise ValueError("potential must be finite on allowed transitions")
    weights = np.zeros((m, m))
    weights[allowed] = np.exp(t * phi.table[allowed])
    return weights


def _perron(M: np.ndarray) -> tuple[float, np.ndarray, float]:
    """Perron eigenvalue and positive right eigenvector by power iteration."""
    m = M.shape[0]
    v = np.full(m, 1.0 / m)
    lam_prev = np.inf
    for _ in range(_MAX_POWER_ITER):
        w = M @ v
        total = w.sum()
        if total <= 0.0 or not np.isfinite(total):
            raise PowerIterationError("iterate left the positive cone")
        lam = float(v @ w / (v @ v))
        v = w / total
        res = float(np.abs(M @ v - lam * v).max() / lam) if lam > 0 else np.inf
        if abs(lam - lam_prev) <= max(RAYLEIGH_TOL, 8 * np.finfo(float).eps * lam) \
                and res <= RESIDUAL_TOL:
            return lam, v, res
        lam_prev = lam
    raise PowerIterationError(
        "power iteration did not converge in 1e5 steps; "
        "weighted transition matrix looks non-primitive"
    )


def pressure_transfer(system: SymbolicSystem, phi: Potential, t: float = 1.0) -> PressureResult:
    """Topological pressure P(t * phi) as log of the Perron eigenvalue of
    M_ij = A_ij exp(t * phi), with phi weighted on the source symbol for
    depth 1."""
    M = _weighted_matrix(system, phi, t)
    lam, right, res_r = _perron(M)
    lam_l, left, res_l = _perron(M.T)
    if abs(lam - lam_l) > 1e-9 * max(1.0, lam):
        raise PowerIterationError("left/right Perron values disagree")
    return PressureResult(
        value=float(np.log(lam)),
        right_eigvec=right,
        left_eigvec=left,
        residual=max(res_r, res_l),
    )


def free_energy(system: SymbolicSystem, phi: Potential, t: float) -> float:
    """c_{phi,t} = P((t+1) phi) - P(phi); vanishes at t = 0."""
    return pressure_transfer(system, phi, t + 1.0).value - pressure_transfer(system, phi, 1.0).value


def entropy_analytic(measure: MeasureSpec) -> float:
    """Kolmogorov-Sinai entropy of a Bernoulli or stationary Markov measure."""
    if measure.kind == "bernoulli":
        p = measure.p[measure.p > 0]
        return float(-(p * np.log(p)).sum())
    if measure.kind == "markov":
        P, pi = measure.P, measure.pi
        mask = P > 0
        terms = np.zeros_like(P)
        terms[mask] = P[mask] * np.log(P[mask])
        return float(-(pi @ terms.sum(axis=1)))
    raise ValueError(
        "lebesgue_start has no analytic entropy here; use the log(beta) "
        "reference constant supplied by the caller"
    )


def equilibrium_markov(system: SymbolicSystem, phi: Potential) -> MeasureSpec:
    """Equilibrium state of a locally constant potential as a Markov measure.

    Built from the Perron data of M_ij = A_ij e^{phi}: transition rows
    P_ij = M_ij r_j / (lambda r_i) and marginal pi_i proportional to
    l_i r_i.  The returned measure satisfies the equilibrium identity
    h(mu) + integral(phi) = P(phi) within 1e-8.
    """
    M = _weighted_matrix(system, phi, 1.0)
    res = pressure_transfer(system, phi, 1.0)
    lam = float(np.exp(res.value))
    r = res.right_eigvec
    l = res.left_eigvec
    P = M * r[None, :] / (lam * r[:, None])
    P /= P.sum(axis=1, keepdims=True)  # absorb eigensolve roundoff
    pi = l * r
    pi /= pi.sum()
    measure = MeasureSpec.markov(P, pi=pi, system=system)
    gap = abs(
        entropy_analytic(measure) + integral_markov(measure, phi) - res.value
    )
    if gap > EQUILIBRIUM_IDENTITY_TOL:
        raise PowerIterationError(
            f"equilibrium identity violated by {gap:.3e}; eigendata unreliable"
        )
    return measure


def integral_markov(measure: MeasureSpec, phi: Potential) -> float:
    """integral of phi against a Bernoulli or stationary Markov measure."""
    if measure.kind == "bernoulli":
        if phi.depth != 1:
            raise ValueError("depth-2 potential needs a markov measure")
        return float(measure.p @ phi.table)
    if measure.kind != "markov":
        raise ValueError("measure must be bernoulli or markov")
    if phi.depth == 1:
        return float(measure.pi @ phi.table)
    joint = measure.pi[:, None] * measure.P
    mask = joint > 0
    return float((joint[mask] * phi.table[mask]).sum())


def smb_rate(measure: MeasureSpec, word: np.ndarray) -> float:
    """Empirical Shannon-McMillan-Breiman rate -(1/n) log mu[word]."""
    w = require_word(word, measure.alphabet_size)
    n = w.size
    if measure.kind == "bernoulli":
        probs = measure.p[w]
        if (probs <= 0).any():
            raise ValueError("word hits a zero-probability symbol")
        return float(-np.log(probs).sum() / n)
    if measure.kind != "markov":
        raise ValueError("measure must be bernoulli or markov")
    start = measure.pi[w[0]]
    steps = measure.P[w[:-1], w[1:]] if n > 1 else np.ones(0)
    if start <= 0 or (steps <= 0).any():
        raise ValueError("word is not admissible for this markov measure")
    total = np.log(start) + np.log(steps).sum()
    return float(-total / n)


def ball_measure_bernoulli(p, x, n: int, budget: int):
    """Bernoulli measure of the Hamming ball of radius `budget` around x[:n].

    Dynamic program over (position, mistakes used), O(n * budget) scalar
    operations.  Written over generic numerics: feed float entries for the
    production path or fractions.Fraction entries for exact comparisons.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    weights = list(p)
    m = len(weights)
    w = require_word(x, m)
    if w.size < n:
        raise ValueError("word shorter than n")
    one = sum(weights) / sum(weights)  # multiplicative identity of the input type
    zero = one - one
    cap = min(budget, n)
    dp = [one] + [zero] * cap
    for i in range(n):
        stay = weights[int(w[i])]
        move = one - stay
        nxt = [zero] * (cap + 1)
        for used in range(cap + 1):
            cell = dp[used] * stay
            if used > 0:
                cell = cell + dp[used - 1] * move
            nxt[used] = cell
        dp = nxt
    return sum(dp)
