"""Return times of mistake dynamical balls.

First return: least k >= 1 with f^k(x) back in B_n(g; x, eps), found by
scanning window offsets.  Minimal return: least k >= 1 with
f^-k(B) intersecting B.  On the full shift the minimal return reduces to
the overlap-mismatch count D_k = #{i in [k, n): x_i != x_{i-k}} via
S_n = min{k >= 1 : D_k <= 2G}; on a general SFT it is decided exactly by
a feasibility DP over witness words carrying one mismatch budget per
window.  The same DP, run over two concatenated windows, checks the
gluing property behind almost specification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .dynamics import MeasureSpec, SymbolicSystem, require_word, sft_admissible
from .mistake import MistakeFunction


class CensoredReturnError(RuntimeError):
    """A return time exceeded its scan bound where a value was required."""

    def __init__(self, bound: int):
        super().__init__(f"return time exceeds scan bound {bound}")
        self.bound = bound


@dataclass(frozen=True)
class ReturnOutcome:
    """Return-time scan result: a value, or censored at the scan bound."""

    value: int | None
    bound: int

    @property
    def censored(self) -> bool:
        return self.value is None

    def require(self) -> int:
        if self.value is None:
            raise CensoredReturnError(self.bound)
        return self.value


def first_return(
    x,
    n: int,
    g: MistakeFunction,
    k_max: int,
    eps: float | None = None,
) -> ReturnOutcome:
    """First return time R_n(g; x, eps) of the orbit start to its own ball.

    Symbolic input (integer word, eps None) uses exact partition windows;
    metric input (float orbit, eps required) counts |x_i - y_i| >= eps as a
    mismatch.  The stream must hold at least n + k_max entries.
    """
    if n < 1:
        raise ValueError("window length must be positive")
    if k_max < 1:
        raise ValueError("k_max must be positive")
    arr = np.asarray(x)
    if arr.shape[0] < n + k_max:
        raise ValueError(
            f"stream of length {arr.shape[0]} cannot support n={n}, k_max={k_max}"
        )
    if eps is None:
        w = require_word(arr)
        k = kernels.first_return_symbolic(w, n, g.budget(n), k_max)
    else:
        if eps <= 0:
            raise ValueError("eps must be positive")
        orbit = np.ascontiguousarray(arr, dtype=np.float64)
        k = kernels.first_return_metric(orbit, n, float(eps), g.budget(n, eps), k_max)
    return ReturnOutcome(int(k) if k else None, k_max)


def min_return_full_shift(x, budget: int) -> int:
    """Minimal return S_n of the mistake ball around a full-shift word.

    Uses the overlap reduction: a witness word of length n + k realizing
    both windows within budget exists iff D_k <= 2 * budget, since every
    overlap disagreement costs exactly one mismatch that may be charged to
    either window.  Always <= n because D_k vanishes for k >= n.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    w = require_word(x)
    return int(kernels.min_return_overlap(w, 2 * budget))


def _charge_masks(budget: int) -> tuple[int, int, int]:
    """Bit masks for the (a, b) budget lattice packed as a*(W) + b, W = budget+1."""
    w = budget + 1
    full = (1 << (w * w)) - 1
    row = (1 << budget) - 1  # b < budget within one a-row
    mask_b = 0
    for a in range(w):
        mask_b |= row << (a * w)
    mask_a = (1 << (budget * w)) - 1  # a < budget
    return full, mask_a, mask_b


def _sft_witness_feasible(system: SymbolicSystem, x: np.ndarray, k: int, budget: int) -> bool:
    """Existence of an admissible word w of length n + k whose windows
    w[0:n] and w[k:k+n] each disagree with x in at most `budget` places.

    DP over positions; the state for each current symbol is a bitmask over
    (mismatches charged to the first window, to the second).
    """
    a_mat = system.transitions
    m = system.alphabet_size
    n = int(x.size)
    w = budget + 1
    _, mask_a, mask_b = _charge_masks(budget)
    states = [0] * m
    for s in range(m):
        if s != x[0]:  # position 0 always lies in the first window
            if budget >= 1:
                states[s] = 1 << w  # (a, b) = (1, 0)
        else:
            states[s] = 1
    for j in range(1, n + k):
        new = [0] * m
        alive = False
        cx = x[j] if j < n else -1
        cy = x[j - k] if j >= k else -1
        for t in range(m):
            acc = 0
            for s in range(m):
                if states[s] and a_mat[s, t]:
                    acc |= states[s]
            if not acc:
                continue
            if cx >= 0 and t != cx:
                acc = (acc & mask_a) << w
            if acc and cy >= 0 and t != cy:
                acc = (acc & mask_b) << 1
            if acc:
                new[t] = acc
                alive = True
        if not alive:
            return False
        states = new
    return True


def min_return_sft(x, budget: int, system: SymbolicSystem) -> int:
    """Exact minimal return of a mistake ball on a subshift of finite type.

    Scans k upward running the witness DP; a witness always exists by
    k = n + diameter + 1 (copy x on both windows and bridge the gap with a
    shortest path, or a short cycle when the bridge endpoints coincide).
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    w = require_word(x, system.alphabet_size)
    if not sft_admissible(w, system):
        raise ValueError("center word is not admissible")
    bound = w.size + system.diameter() + 1
    for k in range(1, bound + 1):
        if _sft_witness_feasible(system, w, k, budget):
            return k
    raise RuntimeError("no witness below the structural bound; system invalid?")


def min_return_metric_upper(
    orbit,
    n: int,
    eps: float,
    g: MistakeFunction,
    horizon: int,
) -> ReturnOutcome:
    """Upper bound for the metric minimal return via orbit-point witnesses.

    Every orbit offset j <= horizon landing in B_n(g; x, eps) is a witness;
    any two witnesses j1 < j2 certify S_n <= j2 - j1.  Offset 0 is always a
    member, so the bound is at most the first return time.  Censored when
    no second witness appears within the horizon.
    """
    if n < 1 or horizon < 1:
        raise ValueError("n and horizon must be positive")
    if eps <= 0:
        raise ValueError("eps must be positive")
    arr = np.ascontiguousarray(np.asarray(orbit), dtype=np.float64)
    if arr.size < horizon + n:
        raise ValueError("orbit too short for the requested horizon")
    member = kernels.ball_membership_metric(arr, n, float(eps), g.budget(n, eps), horizon)
    hits = np.flatnonzero(member)
    if hits.size < 2:
        return ReturnOutcome(None, horizon)
    return ReturnOutcome(int(np.diff(hits).min()), horizon)


def _budget_dp_end_symbols(
    system: SymbolicSystem,
    word: np.ndarray,
    budget: int,
    pred: np.ndarray | None,
) -> np.ndarray:
    """Symbols where an admissible window matching `word` within `budget`
    can end; `pred` restricts the symbol preceding the window."""
    a_mat = system.transitions
    m = system.alphabet_size
    cap = 1 << (budget + 1)
    states = [0] * m
    for s in range(m):
        if pred is not None and not any(pred[u] and a_mat[u, s] for u in range(m)):
            continue
        used = 0 if s == word[0] else 1
        if used <= budget:
            states[s] = 1 << used
    for j in range(1, len(word)):
        new = [0] * m
        for t in range(m):
            acc = 0
            for s in range(m):
                if states[s] and a_mat[s, t]:
                    acc |= states[s]
            if acc and t != word[j]:
                acc = (acc << 1) % cap
            new[t] = acc
        states = new
        if not any(states):
            break
    return np.array([bool(v) for v in states])


def concat_window_feasible(
    system: SymbolicSystem,
    y: np.ndarray,
    budget_y: int,
    x: np.ndarray,
    budget_x: int,
) -> bool:
    """Existence of an admissible word of length m + n whose first window
    matches y within budget_y and whose second matches x within budget_x.

    This is the set B_m(g; y) intersect f^{-m}(B_n(g; x)) being nonempty,
    decided on the first m + n coordinates (any admissible finite word
    extends to the subshift because rows are nonempty)."""
    end1 = _budget_dp_end_symbols(system, y, budget_y, None)
    if not end1.any():
        return False
    end2 = _budget_dp_end_symbols(system, x, budget_x, end1)
    return bool(end2.any())


def _admissible_word_count(system: SymbolicSystem, length: int) -> int:
    a = system.transitions.astype(object)
    ones = np.ones(system.alphabet_size, dtype=object)
    vec = ones.copy()
    for _ in range(length - 1):
        vec = a @ vec
    return int(ones @ vec)


def _admissible_words(system: SymbolicSystem, length: int) -> list[tuple[int, ...]]:
    words: list[tuple[int, ...]] = [(s,) for s in range(system.alphabet_size)]
    a = system.transitions
    for _ in range(length - 1):
        words = [w + (t,) for w in words for t in np.flatnonzero(a[w[-1]])]
    return words


def _random_admissible_word(system: SymbolicSystem, length: int, rng) -> tuple[int, ...]:
    a = system.transitions
    out = [int(rng.integers(system.alphabet_size))]
    for _ in range(length - 1):
        choices = np.flatnonzero(a[out[-1]])
        out.append(int(choices[rng.integers(choices.size)]))
    return tuple(out)


@dataclass
class AlmostSpecReport:
    """Outcome of the gluing check across word-length pairs."""

    mode: str
    pairs_tested: int
    failure_count: int
    failures: list[tuple[int, int, tuple, tuple]] = field(default_factory=list)
    smallest_feasible_n: int | None = None

    MAX_RECORDED = 200


_EXHAUSTIVE_PAIR_LIMIT = 10**7


def almost_spec_check(
    system: SymbolicSystem,
    g: MistakeFunction,
    n_range,
    m_range,
    mode: str = "exhaustive",
    sample_count: int | None = None,
    seed: int | None = None,
) -> AlmostSpecReport:
    """Check the gluing property behind almost specification.

    For each (n, m) and word pair (x of length n, y of length m), asks
    whether some admissible word carries y within g(m) mistakes followed
    by x within g(n) mistakes.  Exhaustive mode enumerates all admissible
    pairs (guarded to 1e7 candidates); sampled mode draws `sample_count`
    admissible pairs per (n, m) cell from `seed`.

    The report lists failing pairs and the smallest N in the tested range
    with no failures at any n, m >= N.
    """
    n_list = sorted(set(int(v) for v in n_range))
    m_list = sorted(set(int(v) for v in m_range))
    if not n_list or not m_list or n_list[0] < 1 or m_list[0] < 1:
        raise ValueError("n_range and m_range must hold positive lengths")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError("mode must be 'exhaustive' or 'sampled'")
    if mode == "sampled" and (sample_count is None or sample_count < 1 or seed is None):
        raise ValueError("sampled mode needs sample_count >= 1 and a seed")

    if mode == "exhaustive":
        total = sum(
            _admissible_word_count(system, n) * _admissible_word_count(system, m)
            for n in n_list
            for m in m_list
        )
        if total > _EXHAUSTIVE_PAIR_LIMIT:
            raise ValueError(
                f"exhaustive mode would test {total} pairs (limit {_EXHAUSTIVE_PAIR_LIMIT})"
            )

    rng = np.random.Generator(np.random.PCG64(seed)) if mode == "sampled" else None
    report = AlmostSpecReport(mode=mode, pairs_tested=0, failure_count=0)
    failed_cells: set[tuple[int, int]] = set()
    for n in n_list:
        g_n = g.budget(n)
        for m in m_list:
            g_m = g.budget(m)
            if mode == "exhaustive":
                pairs = (
                    (x, y)
                    for x in _admissible_words(system, n)
                    for y in _admissible_words(system, m)
                )
            else:
                pairs = (
                    (
                        _random_admissible_word(system, n, rng),
                        _random_admissible_word(system, m, rng),
                    )
                    for _ in range(sample_count)
                )
            for x, y in pairs:
                report.pairs_tested += 1
                xa = np.asarray(x, dtype=np.int8)
                ya = np.asarray(y, dtype=np.int8)
                if not concat_window_feasible(system, ya, g_m, xa, g_n):
                    report.failure_count += 1
                    failed_cells.add((n, m))
                    if len(report.failures) < AlmostSpecReport.MAX_RECORDED:
                        report.failures.append((n, m, x, y))
    lengths = sorted(set(n_list) | set(m_list))
    for cand in lengths:
        if all(nn < cand or mm < cand for nn, mm in failed_cells):
            report.smallest_feasible_n = cand
            break
    return report
