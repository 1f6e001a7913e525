"""Agreement between the compiled and pure-numpy kernel backends."""

import os
import subprocess
import sys

import numpy as np
import pytest

from mistakeball import _kernels_numpy as knp
from mistakeball._backend import BACKEND

try:
    from mistakeball import _kernels_numba as knb

    HAVE_NUMBA = True
except ImportError:
    knb = None
    HAVE_NUMBA = False

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba backend unavailable")


@needs_numba
def test_first_return_symbolic_agreement():
    rng = np.random.default_rng(51)
    for trial in range(60):
        n = int(rng.integers(1, 10))
        k_max = int(rng.integers(1, 300))
        x = rng.integers(0, 3, size=n + k_max).astype(np.int8)
        budget = int(rng.integers(0, 3))
        assert knb.first_return_symbolic(x, n, budget, k_max) == knp.first_return_symbolic(
            x, n, budget, k_max
        )


@needs_numba
def test_first_return_metric_agreement():
    rng = np.random.default_rng(52)
    for trial in range(60):
        n = int(rng.integers(1, 8))
        k_max = int(rng.integers(1, 250))
        orbit = rng.random(n + k_max)
        eps = float(rng.choice([0.05, 0.1, 0.3]))
        budget = int(rng.integers(0, 3))
        assert knb.first_return_metric(orbit, n, eps, budget, k_max) == knp.first_return_metric(
            orbit, n, eps, budget, k_max
        )


@needs_numba
def test_ball_membership_metric_agreement():
    rng = np.random.default_rng(53)
    for trial in range(40):
        n = int(rng.integers(1, 7))
        horizon = int(rng.integers(1, 200))
        orbit = rng.random(n + horizon)
        eps = float(rng.choice([0.1, 0.2]))
        budget = int(rng.integers(0, 2))
        a = knb.ball_membership_metric(orbit, n, eps, budget, horizon)
        b = knp.ball_membership_metric(orbit, n, eps, budget, horizon)
        assert np.array_equal(a, b)


@needs_numba
def test_min_return_overlap_agreement():
    rng = np.random.default_rng(54)
    for trial in range(120):
        n = int(rng.integers(1, 14))
        x = rng.integers(0, 2, size=n).astype(np.int8)
        tb = int(rng.integers(0, 7))
        assert knb.min_return_overlap(x, tb) == knp.min_return_overlap(x, tb)


@needs_numba
def test_markov_path_agreement():
    rng = np.random.default_rng(55)
    P = np.array([[0.3, 0.7], [0.9, 0.1]])
    cum = np.ascontiguousarray(np.cumsum(P, axis=1))
    for trial in range(20):
        u = rng.random(int(rng.integers(1, 400)))
        first = int(rng.integers(0, 2))
        assert np.array_equal(knb.markov_path(cum, first, u), knp.markov_path(cum, first, u))


@needs_numba
def test_beta_orbit_fill_agreement():
    rng = np.random.default_rng(56)
    for beta in (2.0, 2.5, 3.141):
        x0 = float(rng.random())
        a = np.empty(200)
        b = np.empty(200)
        knb.beta_orbit_fill(beta, x0, a)
        knp.beta_orbit_fill(beta, x0, b)
        assert np.array_equal(a, b)


def test_membership_mask_matches_reference_counting():
    rng = np.random.default_rng(57)
    for trial in range(20):
        n = int(rng.integers(1, 6))
        horizon = int(rng.integers(1, 60))
        orbit = rng.random(n + horizon)
        eps, budget = 0.2, 1
        mask = knp.ball_membership_metric(orbit, n, eps, budget, horizon)
        assert mask.shape == (horizon + 1,)
        assert mask[0]  # offset zero always matches itself
        for j in range(horizon + 1):
            bad = int(np.count_nonzero(np.abs(orbit[j : j + n] - orbit[:n]) >= eps))
            assert bool(mask[j]) == (bad <= budget)


def _run_with_backend(backend: str) -> str:
    code = (
        "from mistakeball._backend import BACKEND\n"
        "import mistakeball as mb, numpy as np\n"
        "src = mb.SymbolicSource(mb.SymbolicSystem.full_shift(2), mb.MeasureSpec.bernoulli([0.5, 0.5]))\n"
        "t = mb.entropy_via_return(src, mb.MistakeFunction.constant(1), [4, 6], samples=6, seed=7, k_max=2000)\n"
        "vals = [(r.n, r.sample_index, r.r_n) for r in t.records]\n"
        "print(BACKEND); print(vals)\n"
    )
    env = dict(os.environ, MISTAKEBALL_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    return out.stdout


def test_env_flag_selects_backend_and_results_match():
    numpy_out = _run_with_backend("numpy")
    assert numpy_out.splitlines()[0] == "numpy"
    if HAVE_NUMBA:
        numba_out = _run_with_backend("numba")
        assert numba_out.splitlines()[0] == "numba"
        assert numba_out.splitlines()[1] == numpy_out.splitlines()[1]


def test_env_flag_rejects_unknown_backend():
    env = dict(os.environ, MISTAKEBALL_BACKEND="cuda")
    out = subprocess.run(
        [sys.executable, "-c", "import mistakeball"],
        env=env,
        capture_output=True,
        text=True,
    )
    assert out.returncode != 0
    assert "MISTAKEBALL_BACKEND" in out.stderr


def test_active_backend_is_exposed():
    assert BACKEND in ("numba", "numpy")
