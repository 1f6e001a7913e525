"""Systems, orbits, measures, and seeded sampling."""

import numpy as np
import pytest

from mistakeball import (
    IntervalMap,
    MeasureSpec,
    SymbolicSystem,
    beta_orbit,
    code_orbit,
    sample_orbit_start,
    sample_seed,
    sample_word,
    sft_admissible,
)


def test_sample_seed_is_deterministic_and_spreads():
    seen = set()
    for i in range(100):
        s = sample_seed(7, i)
        assert s == sample_seed(7, i)
        assert 0 <= s < 2**64
        seen.add(s)
    assert len(seen) == 100
    assert sample_seed(7, 0) != sample_seed(8, 0)


def test_full_shift_and_golden_mean_shapes():
    full = SymbolicSystem.full_shift(3)
    assert full.alphabet_size == 3
    assert full.is_full_shift
    gm = SymbolicSystem.golden_mean()
    assert not gm.is_full_shift
    assert gm.transitions.tolist() == [[1, 1], [1, 0]]


def test_system_validation():
    with pytest.raises(ValueError):
        SymbolicSystem(np.array([[1, 0, 1], [1, 1, 0]], dtype=np.int8))
    with pytest.raises(ValueError):
        SymbolicSystem(np.array([[1, 1], [0, 0]], dtype=np.int8))  # dead row
    with pytest.raises(ValueError):  # two components, not strongly connected
        SymbolicSystem(np.array([[1, 1], [0, 1]], dtype=np.int8))
    with pytest.raises(ValueError):
        SymbolicSystem(np.array([[2, 0], [1, 1]], dtype=np.int8))


def test_diameter():
    assert SymbolicSystem.full_shift(2).diameter() == 1
    assert SymbolicSystem.golden_mean().diameter() == 1
    ring = np.zeros((3, 3), dtype=np.int8)
    for i in range(3):
        ring[i, (i + 1) % 3] = 1
    assert SymbolicSystem(ring).diameter() == 2


def test_sft_admissible():
    gm = SymbolicSystem.golden_mean()
    assert sft_admissible(np.array([0, 1, 0, 1, 0], dtype=np.int8), gm)
    assert not sft_admissible(np.array([0, 1, 1, 0], dtype=np.int8), gm)
    assert sft_admissible(np.array([1], dtype=np.int8), gm)


def test_interval_map_validation():
    with pytest.raises(ValueError):
        IntervalMap.beta_map(1.0)
    with pytest.raises(ValueError):
        IntervalMap.beta_map(0.5)
    assert IntervalMap.doubling().beta == 2.0
    assert IntervalMap.beta_map(3.5).symbol_count == 4
    assert IntervalMap.beta_map(3.0).symbol_count == 3


def test_beta_orbit_matches_direct_iteration():
    imap = IntervalMap.beta_map(2.75)
    x = 0.313
    orbit = beta_orbit(imap, x, 6)
    y = x
    for i in range(6):
        assert orbit[i] == pytest.approx(y, abs=1e-12)
        y = (2.75 * y) % 1.0
    assert ((orbit >= 0) & (orbit < 1)).all()
    with pytest.raises(ValueError):
        beta_orbit(imap, 1.0, 4)
    with pytest.raises(ValueError):
        beta_orbit(imap, -0.1, 4)


def test_code_orbit_digits():
    imap = IntervalMap.beta_map(2.5)
    orbit = beta_orbit(imap, 0.7, 8)
    digits = code_orbit(imap, orbit)
    assert digits.tolist() == [int(2.5 * v) for v in orbit]
    assert digits.max() < imap.symbol_count


def test_measure_validation():
    with pytest.raises(ValueError):
        MeasureSpec.bernoulli([0.5, 0.6])
    with pytest.raises(ValueError):
        MeasureSpec.bernoulli([1.2, -0.2])
    with pytest.raises(ValueError):
        MeasureSpec.markov([[0.5, 0.6], [1.0, 0.0]])
    with pytest.raises(ValueError):  # pi not stationary for P
        MeasureSpec.markov([[0.5, 0.5], [0.5, 0.5]], pi=[0.9, 0.1])
    with pytest.raises(ValueError):  # positive step on a forbidden edge
        MeasureSpec.markov(
            [[0.5, 0.5], [0.5, 0.5]], system=SymbolicSystem.golden_mean()
        )


def test_markov_stationary_is_computed_when_omitted():
    P = [[0.9, 0.1], [0.4, 0.6]]
    m = MeasureSpec.markov(P)
    assert m.pi @ np.asarray(P) == pytest.approx(m.pi, abs=1e-10)
    assert m.pi.sum() == pytest.approx(1.0)


def test_sample_word_bernoulli_frequencies():
    m = MeasureSpec.bernoulli([0.2, 0.8])
    w = sample_word(m, 20000, sample_seed(0, 0))
    assert w.dtype == np.int8
    freq = (w == 1).mean()
    assert abs(freq - 0.8) < 0.02
    again = sample_word(m, 20000, sample_seed(0, 0))
    assert np.array_equal(w, again)
    other = sample_word(m, 20000, sample_seed(0, 1))
    assert not np.array_equal(w, other)


def test_sample_word_markov_respects_support():
    gm = SymbolicSystem.golden_mean()
    P = [[0.6, 0.4], [1.0, 0.0]]
    m = MeasureSpec.markov(P, system=gm)
    w = sample_word(m, 5000, 123)
    pairs = set(zip(w[:-1].tolist(), w[1:].tolist()))
    assert (1, 1) not in pairs
    # empirical marginal close to the stationary vector
    assert abs((w == 0).mean() - m.pi[0]) < 0.03


def test_sample_orbit_start_range_and_determinism():
    vals = [sample_orbit_start(s) for s in (0, 1, 2, 2)]
    assert all(0.0 <= v < 1.0 for v in vals)
    assert vals[2] == vals[3]
    assert vals[0] != vals[1]
