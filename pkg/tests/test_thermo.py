"""Pressure, free energy, equilibrium states, and ball measures."""

import math
from fractions import Fraction

import numpy as np
import pytest

from mistakeball import (
    MeasureSpec,
    Potential,
    PowerIterationError,
    SymbolicSystem,
    ball_measure_bernoulli,
    entropy_analytic,
    equilibrium_markov,
    free_energy,
    integral_markov,
    pressure_transfer,
    smb_rate,
)
from mistakeball.oracles import ball_measure_enum

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def test_potential_validation():
    with pytest.raises(ValueError):
        Potential.depth1([0.0, np.inf])
    with pytest.raises(ValueError):
        Potential(np.zeros((2, 3)))
    phi = Potential.depth2([[0.0, 1.0], [2.0, -np.inf]])
    assert phi.depth == 2
    assert Potential.depth1([0.5, -1.0]).scaled(2.0).table.tolist() == [1.0, -2.0]


def test_pressure_closed_forms():
    full3 = SymbolicSystem.full_shift(3)
    zero3 = Potential.depth1([0.0, 0.0, 0.0])
    assert pressure_transfer(full3, zero3).value == pytest.approx(math.log(3), abs=1e-12)

    gm = SymbolicSystem.golden_mean()
    assert pressure_transfer(gm, Potential.depth1([0.0, 0.0])).value == pytest.approx(
        math.log(GOLDEN), abs=1e-12
    )

    full2 = SymbolicSystem.full_shift(2)
    phi = Potential.depth1([0.3, -0.9])
    for t in (0.5, 1.0, 2.0):
        want = math.log(math.exp(t * 0.3) + math.exp(t * -0.9))
        assert pressure_transfer(full2, phi, t).value == pytest.approx(want, abs=1e-12)


def test_pressure_result_eigendata():
    gm = SymbolicSystem.golden_mean()
    res = pressure_transfer(gm, Potential.depth1([0.0, -0.5]))
    assert res.residual <= 1e-12
    assert (res.right_eigvec > 0).all() and (res.left_eigvec > 0).all()
    lam = math.exp(res.value)
    M = gm.transitions * np.exp(np.array([0.0, -0.5]))[:, None]
    assert M @ res.right_eigvec == pytest.approx(lam * res.right_eigvec, abs=1e-10)


def test_pressure_depth2_column_constant_reduces_to_depth1():
    full2 = SymbolicSystem.full_shift(2)
    phi2 = Potential.depth2([[0.2, -0.7], [0.2, -0.7]])
    phi1 = Potential.depth1([0.2, -0.7])
    assert pressure_transfer(full2, phi2).value == pytest.approx(
        pressure_transfer(full2, phi1).value, abs=1e-11
    )


def test_power_iteration_error_on_periodic_matrix():
    two_cycle = SymbolicSystem(np.array([[0, 1], [1, 0]], dtype=np.int8))
    with pytest.raises(PowerIterationError):
        pressure_transfer(two_cycle, Potential.depth1([0.0, -1.0]))


def test_free_energy_values():
    full2 = SymbolicSystem.full_shift(2)
    phi = Potential.depth1([0.0, -1.0])
    assert free_energy(full2, phi, 0.0) == pytest.approx(0.0, abs=1e-12)
    want = math.log((1 + math.e**-2) / (1 + math.e**-1))
    assert free_energy(full2, phi, 1.0) == pytest.approx(want, abs=1e-12)
    assert free_energy(full2, phi, 1.0) == pytest.approx(-0.18633367647525045, abs=1e-11)


def test_entropy_analytic():
    assert entropy_analytic(MeasureSpec.bernoulli([0.5, 0.5])) == pytest.approx(math.log(2))
    p = np.array([0.2, 0.8])
    want = float(-(p * np.log(p)).sum())
    assert entropy_analytic(MeasureSpec.bernoulli(p)) == pytest.approx(want)
    assert entropy_analytic(MeasureSpec.bernoulli([1.0, 0.0])) == 0.0
    with pytest.raises(ValueError):
        entropy_analytic(MeasureSpec.lebesgue_start())


def test_equilibrium_markov_full_shift_is_bernoulli_rows():
    full2 = SymbolicSystem.full_shift(2)
    phi = Potential.depth1([0.0, -1.0])
    mu = equilibrium_markov(full2, phi)
    z = 1 + math.e**-1
    want = np.array([1 / z, math.e**-1 / z])
    assert mu.P[0] == pytest.approx(want, abs=1e-10)
    assert mu.P[1] == pytest.approx(want, abs=1e-10)
    assert mu.pi == pytest.approx(want, abs=1e-10)


def test_equilibrium_markov_parry_measure_closed_form():
    gm = SymbolicSystem.golden_mean()
    mu = equilibrium_markov(gm, Potential.depth1([0.0, 0.0]))
    assert mu.P[0] == pytest.approx([1 / GOLDEN, 1 / GOLDEN**2], abs=1e-9)
    assert mu.P[1] == pytest.approx([1.0, 0.0], abs=1e-9)
    want_pi = np.array([GOLDEN**2, 1.0]) / (GOLDEN**2 + 1.0)
    assert mu.pi == pytest.approx(want_pi, abs=1e-9)
    assert entropy_analytic(mu) == pytest.approx(math.log(GOLDEN), abs=1e-9)


def test_equilibrium_identity_many_potentials():
    rng = np.random.default_rng(21)
    systems = [SymbolicSystem.full_shift(2), SymbolicSystem.golden_mean()]
    for trial in range(20):
        system = systems[trial % 2]
        m = system.alphabet_size
        if trial % 3:
            phi = Potential.depth1(rng.normal(scale=0.8, size=m))
        else:
            phi = Potential.depth2(rng.normal(scale=0.8, size=(m, m)))
        mu = equilibrium_markov(system, phi)
        lhs = entropy_analytic(mu) + integral_markov(mu, phi)
        assert lhs == pytest.approx(pressure_transfer(system, phi).value, abs=1e-8)


def test_integral_markov():
    phi = Potential.depth1([1.0, 3.0])
    assert integral_markov(MeasureSpec.bernoulli([0.25, 0.75]), phi) == pytest.approx(2.5)
    mu = MeasureSpec.markov([[0.5, 0.5], [1.0, 0.0]])
    phi2 = Potential.depth2([[1.0, 2.0], [4.0, 0.0]])
    joint = mu.pi[:, None] * mu.P
    want = joint[0, 0] * 1 + joint[0, 1] * 2 + joint[1, 0] * 4
    assert integral_markov(mu, phi2) == pytest.approx(want)
    with pytest.raises(ValueError):
        integral_markov(MeasureSpec.bernoulli([0.5, 0.5]), phi2)


def test_gibbs_deviation_constant_in_n_for_depth1_equilibrium():
    # equilibrium weights on a full shift are exactly multiplicative, so
    # -log mu[w] - (n P - S_n phi(w)) is the same constant for every word
    full2 = SymbolicSystem.full_shift(2)
    phi = Potential.depth1([0.4, -0.6])
    mu = equilibrium_markov(full2, phi)
    P = pressure_transfer(full2, phi).value
    rng = np.random.default_rng(22)
    devs = []
    for n in range(2, 9):
        w = rng.integers(0, 2, size=n).astype(np.int8)
        s_n = float(phi.table[w].sum())
        devs.append(n * smb_rate(mu, w) - (n * P - s_n))
    assert max(devs) - min(devs) <= 1e-9


def test_smb_rate():
    mu = MeasureSpec.bernoulli([0.5, 0.5])
    w = np.array([0, 1, 1, 0], dtype=np.int8)
    assert smb_rate(mu, w) == pytest.approx(math.log(2))
    gm_mu = MeasureSpec.markov([[0.5, 0.5], [1.0, 0.0]])
    with pytest.raises(ValueError):
        smb_rate(gm_mu, np.array([0, 1, 1], dtype=np.int8))


def test_ball_measure_binomial_closed_form():
    x = np.zeros(8, dtype=np.int8)
    for budget in range(4):
        want = sum(math.comb(8, j) for j in range(budget + 1)) / 2**8
        got = ball_measure_bernoulli([0.5, 0.5], x, 8, budget)
        assert float(got) == pytest.approx(want, abs=1e-13)


def test_ball_measure_exact_fractions():
    p = [Fraction(1, 4), Fraction(3, 4)]
    x = np.array([1, 0, 1], dtype=np.int8)
    got = ball_measure_bernoulli(p, x, 3, 1)
    assert got == ball_measure_enum(p, x, 3, 1)
    assert isinstance(got, Fraction)
    # budget >= n covers the whole space
    assert ball_measure_bernoulli(p, x, 3, 3) == 1
    assert ball_measure_bernoulli(p, x, 3, 7) == 1


def test_ball_measure_matches_enumeration_three_symbols():
    rng = np.random.default_rng(23)
    p = [0.2, 0.5, 0.3]
    for trial in range(10):
        n = int(rng.integers(1, 6))
        x = rng.integers(0, 3, size=n).astype(np.int8)
        for budget in range(n + 1):
            got = ball_measure_bernoulli(p, x, n, budget)
            want = ball_measure_enum(p, x, n, budget)
            assert float(got) == pytest.approx(float(want), abs=1e-13)
