"""Brute-force reference implementations.

Everything here enumerates a definition literally: index subsets for ball
membership, witness words for minimal returns, whole word spaces for ball
measures and Birkhoff suprema, and a min-cost witness sweep for flow
return times.  These are deliberately slow, deliberately independent of
the production code paths, and sized for words up to length ~12.  The
`run_oracle_suite` entry point plays the fast implementations against
them and reports mismatch counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .dynamics import SymbolicSystem, beta_orbit, IntervalMap
from .mistake import MistakeFunction, in_mistake_ball, sup_birkhoff_over_ball
from .recurrence import _admissible_words, min_return_full_shift, min_return_sft
from .suspension import Roof, tau_hat
from .thermo import Potential, ball_measure_bernoulli, pressure_transfer


def first_return_naive(x, n: int, budget: int, k_max: int, eps: float | None = None):
    """Window-by-window rescan of the first return; None when censored."""
    arr = np.asarray(x)
    for k in range(1, k_max + 1):
        if eps is None:
            bad = int(np.count_nonzero(arr[k : k + n] != arr[:n]))
        else:
            bad = int(np.count_nonzero(np.abs(arr[k : k + n] - arr[:n]) >= eps))
        if bad <= budget:
            return k
    return None


def ball_member_by_subsets(x, y, n: int, budget: int, eps: float | None = None) -> bool:
    """Membership via literal enumeration of index sets Lambda of size at
    least n - budget on which the windows agree (stay strictly eps-close)."""
    xa = np.asarray(x)[:n]
    ya = np.asarray(y)[:n]
    if eps is None:
        bad = set(np.flatnonzero(xa != ya).tolist())
    else:
        bad = set(np.flatnonzero(np.abs(xa - ya) >= eps).tolist())
    for size in range(min(budget, n) + 1):
        for dropped in itertools.combinations(range(n), size):
            if bad.issubset(dropped):
                return True
    return False


def _popcounts(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values.astype(np.uint64)).astype(np.int64)


def _word_bits(word) -> int:
    bits = 0
    for i, s in enumerate(word):
        if s:
            bits |= 1 << i
    return bits


def min_return_witness_profile(x, n: int) -> list[int]:
    """For each k >= 1 (until the profile hits 0), the smallest budget G such
    that some binary witness of length n + k has both windows within G of x.

    Witnesses are enumerated exhaustively as integers; entry k-1 equals
    min over witnesses of max(window mismatches).  The minimal return for
    budget G is then 1 + the index of the first entry <= G.
    """
    xb = _word_bits(x)
    mask = (1 << n) - 1
    profile = []
    for k in range(1, n + 1):
        w = np.arange(1 << (n + k), dtype=np.uint64)
        pop1 = _popcounts((w & mask) ^ xb)
        pop2 = _popcounts((w >> k) & mask ^ xb)
        best = int(np.maximum(pop1, pop2).min())
        profile.append(best)
        if best == 0:
            break
    return profile


def min_return_witness_full_shift(x, budget: int) -> int:
    profile = min_return_witness_profile(x, len(x))
    for idx, need in enumerate(profile):
        if need <= budget:
            return idx + 1
    raise RuntimeError("no witness found; enumeration bound too small")


def min_return_witness_sft(x, budget: int, system: SymbolicSystem,
                           _cache: dict | None = None) -> int:
    """Minimal return by enumerating admissible witness words."""
    xa = np.asarray(x, dtype=np.int8)
    n = xa.size
    bound = n + system.diameter() + 1
    for k in range(1, bound + 1):
        if _cache is not None and (id(system), n + k) in _cache:
            words = _cache[(id(system), n + k)]
        else:
            words = np.asarray(_admissible_words(system, n + k), dtype=np.int8)
            if _cache is not None:
                _cache[(id(system), n + k)] = words
        bad1 = (words[:, :n] != xa).sum(axis=1)
        bad2 = (words[:, k : k + n] != xa).sum(axis=1)
        if bool(((bad1 <= budget) & (bad2 <= budget)).any()):
            return k
    raise RuntimeError("no admissible witness below the structural bound")


def ball_measure_enum(p, x, n: int, budget: int):
    """Sum of product weights over every word within Hamming budget of x.

    Arithmetic follows the entry type of p; feed fractions for exactness.
    """
    weights = list(p)
    m = len(weights)
    xa = [int(v) for v in np.asarray(x)[:n]]
    total = None
    for word in itertools.product(range(m), repeat=n):
        bad = sum(1 for a, b in zip(word, xa) if a != b)
        if bad > budget:
            continue
        w = reduce(lambda acc, s: acc * weights[s], word, weights[word[0]] / weights[word[0]])
        total = w if total is None else total + w
    return total


def sup_birkhoff_enum(x, n: int, budget: int, phi: Potential) -> float:
    """Max Birkhoff sum over every word within Hamming budget of x[:n]."""
    table = phi.table
    m = table.size
    xa = [int(v) for v in np.asarray(x)[:n]]
    best = -np.inf
    for word in itertools.product(range(m), repeat=n):
        bad = sum(1 for a, b in zip(word, xa) if a != b)
        if bad > budget:
            continue
        best = max(best, float(sum(table[s] for s in word)))
    return best


def weighted_sum_naive(x, phi: Potential, n: int, t: int) -> float:
    """(1/n) log sum_{j=0}^{t} exp(S_n phi(sigma^j x)) by direct resummation."""
    arr = np.asarray(x)
    total = 0.0
    for j in range(t + 1):
        if phi.depth == 1:
            s = float(phi.table[arr[j : j + n]].sum())
        else:
            seg = arr[j : j + n + 1]
            s = float(phi.table[seg[:-1], seg[1:]].sum())
        total += np.exp(s)
    return float(np.log(total)) / n


def tau_inf_exhaustive(
    x,
    budget: int,
    roof: Roof,
    system: SymbolicSystem | None = None,
) -> float:
    """Exact infimum over ball members y of the roof sum along y up to the
    first return of y to the ball (eps = 0 symbolic case).

    Min-cost sweep over witness words: for each k, the cheapest admissible
    word of length n + k whose two windows are within budget of x, costed
    on its first k letters.  Because the roof is strictly positive, a
    witness with an earlier return dominates its own truncation, so the
    unconstrained minimum over k equals the infimum over true first-return
    paths.  The sweep stops once k * inf(roof) can no longer beat the
    incumbent.
    """
    xa = np.asarray(x, dtype=np.int8)
    n = xa.size
    if roof.kind != "table":
        raise ValueError("exhaustive tau needs a symbol-table roof")
    m = roof.table.size
    if system is None:
        system = SymbolicSystem.full_shift(m)
    a_mat = system.transitions
    table = roof.table
    best = np.inf
    k = 0
    while True:
        k += 1
        if (k - 1) * roof.inf >= best:
            break
        if k > 4 * n + 4 * system.diameter() + 8:
            break  # safety net; positivity should stop the sweep first
        cost = np.full((m, budget + 1, budget + 1), np.inf)
        for s in range(m):
            a = 0 if s == xa[0] else 1
            if a <= budget:
                cost[s, a, 0] = table[s]  # position 0 lies before the return
        feasible = True
        for j in range(1, n + k):
            nxt = np.full_like(cost, np.inf)
            for t_sym in range(m):
                inc = np.full((budget + 1, budget + 1), np.inf)
                for s in range(m):
                    if a_mat[s, t_sym]:
                        inc = np.minimum(inc, cost[s])
                if not np.isfinite(inc).any():
                    continue
                if j < n and t_sym != xa[j]:
                    shifted = np.full_like(inc, np.inf)
                    shifted[1:, :] = inc[:-1, :]
                    inc = shifted
                if j >= k and t_sym != xa[j - k]:
                    shifted = np.full_like(inc, np.inf)
                    shifted[:, 1:] = inc[:, :-1]
                    inc = shifted
                if j < k:
                    inc = inc + table[t_sym]
                nxt[t_sym] = inc
            cost = nxt
            if not np.isfinite(cost).any():
                feasible = False
                break
        if feasible:
            k_best = float(cost.min())
            if k_best < best:
                best = k_best
    return best


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    mismatches: int


def _suite_ball_membership(rng) -> SuiteResult:
    cases = mismatches = 0
    budgets = [MistakeFunction.zero()] + [MistakeFunction.constant(c) for c in (1, 2, 3)]
    for n in range(2, 6):  # exhaustive over all binary pairs
        for bits_x in range(1 << n):
            x = np.array([(bits_x >> i) & 1 for i in range(n)], dtype=np.int8)
            for bits_y in range(1 << n):
                y = np.array([(bits_y >> i) & 1 for i in range(n)], dtype=np.int8)
                for g in budgets:
                    cases += 1
                    fast = in_mistake_ball(x, y, n, g)
                    slow = ball_member_by_subsets(x, y, n, g.budget(n))
                    mismatches += fast != slow
    for n in range(6, 13):  # sampled plus boundary-distance pairs
        for g in budgets:
            budget = g.budget(n)
            for _ in range(30):
                x = rng.integers(0, 2, n).astype(np.int8)
                y = rng.integers(0, 2, n).astype(np.int8)
                cases += 1
                mismatches += in_mistake_ball(x, y, n, g) != ball_member_by_subsets(
                    x, y, n, budget
                )
            for dist in (budget, budget + 1):
                if dist > n:
                    continue
                for _ in range(10):
                    x = rng.integers(0, 2, n).astype(np.int8)
                    y = x.copy()
                    flip = rng.choice(n, size=dist, replace=False)
                    y[flip] ^= 1
                    cases += 1
                    mismatches += in_mistake_ball(x, y, n, g) != ball_member_by_subsets(
                        x, y, n, budget
                    )
    imap = IntervalMap.doubling()
    for n in range(2, 9):  # metric windows on doubling orbits
        for eps in (0.1, 0.05):
            for g in budgets[:3]:
                for _ in range(10):
                    ox = beta_orbit(imap, float(rng.random()), n)
                    oy = beta_orbit(imap, float(rng.random()), n)
                    cases += 1
                    fast = in_mistake_ball(ox, oy, n, g, eps=eps)
                    slow = ball_member_by_subsets(ox, oy, n, g.budget(n, eps), eps=eps)
                    mismatches += fast != slow
    return SuiteResult("ball_membership_subsets", cases, mismatches)


def _suite_min_return_witness(rng) -> SuiteResult:
    cases = mismatches = 0
    for n in (4, 6, 8):  # all binary centers
        for bits in range(1 << n):
            x = np.array([(bits >> i) & 1 for i in range(n)], dtype=np.int8)
            profile = min_return_witness_profile(x, n)
            for budget in (0, 1, 2):
                cases += 1
                slow = next(i + 1 for i, need in enumerate(profile) if need <= budget)
                mismatches += min_return_full_shift(x, budget) != slow
    system = SymbolicSystem.golden_mean()
    cache: dict = {}
    for n in (4, 6, 8):  # all admissible centers
        for word in _admissible_words(system, n):
            x = np.array(word, dtype=np.int8)
            for budget in (0, 1, 2):
                cases += 1
                fast = min_return_sft(x, budget, system)
                slow = min_return_witness_sft(x, budget, system, _cache=cache)
                mismatches += fast != slow
    return SuiteResult("min_return_witness_search", cases, mismatches)


def _suite_ball_measure(rng) -> SuiteResult:
    cases = mismatches = 0
    weight_sets = [
        [Fraction(1, 2), Fraction(1, 2)],
        [Fraction(3, 10), Fraction(7, 10)],
        [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)],
    ]
    for weights in weight_sets:
        m = len(weights)
        n_top = 12 if m == 2 else 7
        for n in range(2, n_top + 1, 2):
            for budget in range(4):
                x = rng.integers(0, m, n).astype(np.int8)
                cases += 1
                exact_dp = ball_measure_bernoulli(weights, x, n, budget)
                exact_enum = ball_measure_enum(weights, x, n, budget)
                mismatches += exact_dp != exact_enum
    # dyadic float case against the binomial closed form, exactly
    for n in (6, 10, 12):
        for budget in range(4):
            x = rng.integers(0, 2, n).astype(np.int8)
            cases += 1
            from math import comb

            closed = sum(comb(n, j) for j in range(budget + 1)) / 2**n
            got = ball_measure_bernoulli(np.array([0.5, 0.5]), x, n, budget)
            mismatches += got != closed
    return SuiteResult("ball_measure_enumeration", cases, mismatches)


def _suite_pressure_closed_forms() -> SuiteResult:
    golden = (1 + 5**0.5) / 2
    checks = []
    for m in (2, 3, 5):
        shift = SymbolicSystem.full_shift(m)
        phi0 = Potential.depth1(np.zeros(m))
        checks.append((pressure_transfer(shift, phi0, 1.0).value, np.log(m)))
    checks.append(
        (
            pressure_transfer(SymbolicSystem.golden_mean(), Potential.depth1([0.0, 0.0]), 1.0).value,
            np.log(golden),
        )
    )
    shift2 = SymbolicSystem.full_shift(2)
    for a, b in ((0.0, -1.0), (0.3, -0.7)):
        phi = Potential.depth1([a, b])
        for t in (0.5, 1.0, 2.0):
            checks.append(
                (
                    pressure_transfer(shift2, phi, t).value,
                    np.log(np.exp(t * a) + np.exp(t * b)),
                )
            )
    phi2 = Potential.depth2([[0.2, -0.4], [0.2, -0.4]])  # column-constant depth 2
    checks.append(
        (pressure_transfer(shift2, phi2, 1.0).value, np.log(np.exp(0.2) + np.exp(-0.4)))
    )
    mism = sum(abs(got - want) > 1e-10 for got, want in checks)
    return SuiteResult("pressure_closed_forms", len(checks), mism)


def _suite_tau_interval(rng) -> SuiteResult:
    cases = mismatches = 0
    roofs = [Roof.from_table([1.0, 2.0]), Roof.from_table([2.0, 3.0]), Roof.from_table([0.5, 1.7])]
    budgets = [MistakeFunction.zero(), MistakeFunction.constant(1)]
    shift2 = SymbolicSystem.full_shift(2)
    golden = SymbolicSystem.golden_mean()
    for n in (6, 9, 12):
        for roof in roofs:
            for g2 in budgets:
                for _ in range(8):
                    x = rng.integers(0, 2, n).astype(np.int8)
                    est = tau_hat(x, n, 0.0, g2, roof, system=shift2)
                    inf_val = tau_inf_exhaustive(x, g2.budget(n), roof, system=shift2)
                    cases += 1
                    mismatches += not (est.lower <= inf_val + 1e-12 and inf_val <= est.upper + 1e-12)
        for g2 in budgets:  # golden-mean centers, table roof
            # minimal returns on this graph can exceed n, so the stream
            # carries a few extra admissible letters past the window
            words = _admissible_words(golden, n + 4)
            picks = rng.choice(len(words), size=8, replace=False)
            for idx in picks:
                stream = np.array(words[int(idx)], dtype=np.int8)
                roof = Roof.from_table([1.0, 2.0])
                est = tau_hat(stream, n, 0.0, g2, roof, system=golden)
                inf_val = tau_inf_exhaustive(stream[:n], g2.budget(n), roof, system=golden)
                cases += 1
                mismatches += not (est.lower <= inf_val + 1e-12 and inf_val <= est.upper + 1e-12)
    return SuiteResult("tau_interval_containment", cases, mismatches)


def run_oracle_suite(seed: int = 0) -> list[SuiteResult]:
    """Play the fast implementations against every brute-force reference."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return [
        _suite_ball_membership(rng),
        _suite_min_return_witness(rng),
        _suite_ball_measure(rng),
        _suite_pressure_closed_forms(),
        _suite_tau_interval(rng),
    ]
