"""Benchmark the compiled kernels against the pure-numpy fallback.

Imports both kernel modules directly (bypassing the MISTAKEBALL_BACKEND
selection) and times the same workloads on identical inputs.  Compiled
kernels are warmed once before timing so JIT compilation is excluded.

    python3 benchmarks/bench_backends.py --repeats 5
"""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from mistakeball import _kernels_numpy as knp

try:
    from mistakeball import _kernels_numba as knb
except ImportError:
    knb = None


@dataclass(frozen=True)
class Workload:
    name: str
    call: str  # kernel attribute name
    args: tuple


def build_workloads(rng: np.random.Generator) -> list[Workload]:
    word = rng.integers(0, 2, size=16 + 2_000_000).astype(np.int8)
    orbit = rng.random(12 + 500_000)
    long_word = rng.integers(0, 2, size=20_000).astype(np.int8)
    P = np.array([[0.3, 0.7], [0.9, 0.1]])
    cum_rows = np.ascontiguousarray(np.cumsum(P, axis=1))
    uniforms = rng.random(2_000_000)
    out = np.empty(1_000_000)
    return [
        Workload(
            "first_return_symbolic n=16 k=2e6",
            "first_return_symbolic",
            (word, 16, 0, 2_000_000),
        ),
        Workload(
            "first_return_metric n=12 k=5e5",
            "first_return_metric",
            (orbit, 12, 0.01, 0, 500_000),
        ),
        Workload(
            "ball_membership_metric n=12 h=5e5",
            "ball_membership_metric",
            (orbit, 12, 0.05, 1, 500_000),
        ),
        Workload(
            "min_return_overlap n=2e4",
            "min_return_overlap",
            (long_word, 2),
        ),
        Workload(
            "markov_path 2e6 steps",
            "markov_path",
            (cum_rows, 0, uniforms),
        ),
        Workload(
            "beta_orbit_fill 1e6 points",
            "beta_orbit_fill",
            (2.5, 0.3137, out),
        ),
    ]


def time_call(fn, args, repeats: int) -> tuple[float, float]:
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - start)
    arr = np.asarray(samples)
    return float(arr.mean()), float(arr.std())


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="timed runs per kernel")
    parser.add_argument("--seed", type=int, default=0, help="workload RNG seed")
    args = parser.parse_args()
    if args.repeats < 1:
        raise ValueError("repeats must be positive")

    rng = np.random.default_rng(args.seed)
    workloads = build_workloads(rng)

    if knb is None:
        print("numba backend unavailable; timing the numpy fallback only")
    header = f"{'workload':38s} {'numpy (ms)':>16s} {'numba (ms)':>16s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for wl in workloads:
        np_fn = getattr(knp, wl.call)
        np_mean, np_std = time_call(np_fn, wl.args, args.repeats)
        if knb is None:
            print(f"{wl.name:38s} {1e3 * np_mean:10.2f} ± {1e3 * np_std:4.2f}")
            continue
        nb_fn = getattr(knb, wl.call)
        nb_fn(*wl.args)  # warm-up: exclude JIT compilation from the timings
        nb_mean, nb_std = time_call(nb_fn, wl.args, args.repeats)
        print(
            f"{wl.name:38s} "
            f"{1e3 * np_mean:10.2f} ± {1e3 * np_std:4.2f} "
            f"{1e3 * nb_mean:10.2f} ± {1e3 * nb_std:4.2f} "
            f"{np_mean / nb_mean:7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
