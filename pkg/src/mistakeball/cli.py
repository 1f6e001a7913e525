"""Declarative experiment runner.

Reads a JSON config, dispatches to the estimator layer, and writes one
CSV row per sample cell plus a human-readable summary recomputed from
the CSV alone.  Output is byte-deterministic for a fixed (config, seed)
pair regardless of worker count; the optional --timings flag fills the
runtime_ms column and is the one switch that trades that determinism
away.

Exit status: 0 on success, 1 when censoring exceeds 20% or an oracle or
feasibility check fails, 2 on config or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .dynamics import IntervalMap, MeasureSpec, SymbolicSystem, sample_seed
from .estimators import (
    IntervalSource,
    RateTable,
    SymbolicSource,
    entropy_via_return,
    minreturn_linear_rate,
    pressure_rate_table,
    weighted_rate_table,
)
from .mistake import MistakeFunction
from .oracles import run_oracle_suite
from .recurrence import _random_admissible_word, almost_spec_check, concat_window_feasible
from .suspension import Roof, flow_entropy_estimate
from .thermo import Potential, PowerIterationError, equilibrium_markov, free_energy, entropy_analytic

EXPERIMENTS = (
    "entropy",
    "minreturn",
    "pressure",
    "theoremC",
    "suspension",
    "oracle",
    "check-spec",
)

_EXPERIMENT_HELP = {
    "entropy": "first-return rates (1/n) log R_n against the measure entropy",
    "minreturn": "minimal-return rates S_n / n against the limit 1",
    "pressure": "recurrence pressure (sup-ball Birkhoff + log R_n) / n",
    "theoremC": "weighted return rates against free-energy targets",
    "suspension": "flow return ratios log R_n / tau-hat against base entropy / mean roof",
    "oracle": "brute-force equivalence suites; reports mismatch counts",
    "check-spec": "orbit-gluing feasibility of mistake-ball windows",
}

CSV_COLUMNS = [
    "experiment_id",
    "system",
    "measure",
    "n",
    "epsilon",
    "g_spec",
    "sample_index",
    "seed",
    "R_n",
    "S_n",
    "rate",
    "target",
    "censored",
    "runtime_ms",
]

CENSOR_LIMIT = 0.20
_MAX_SEED = 2**64


class ConfigError(ValueError):
    """Config rejection carrying (path, message) diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{p}: {m}" for p, m in self.diagnostics))


@dataclass
class ExperimentConfig:
    experiment: str
    system: SymbolicSystem | IntervalMap | None = None
    system_label: str = ""
    measure: MeasureSpec | None = None
    measure_label: str = ""
    g: MistakeFunction | None = None
    g1: MistakeFunction | None = None
    g2: MistakeFunction | None = None
    phi: Potential | None = None
    t: float = 1.0
    which: str = "first"
    roof: Roof | None = None
    mode: str = "sampled"
    n_grid: list[int] = field(default_factory=list)
    epsilon_grid: list[float] | None = None
    samples: int = 64
    master_seed: int = 0
    k_max: int = 10**7
    horizon: int | None = None
    target: float | None = None
    output_path: str = "results.csv"


class _Check:
    """Diagnostic accumulator for config validation."""

    def __init__(self):
        self.diagnostics: list[tuple[str, str]] = []

    def fail(self, path: str, message: str):
        self.diagnostics.append((path, message))

    def raise_if_failed(self):
        if self.diagnostics:
            raise ConfigError(self.diagnostics)


def _as_int(chk: _Check, path: str, value, minimum=None, maximum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        chk.fail(path, "must be an integer")
        return None
    if minimum is not None and value < minimum:
        chk.fail(path, f"must be at least {minimum}")
        return None
    if maximum is not None and value >= maximum:
        chk.fail(path, f"must be below {maximum}")
        return None
    return value


def _as_float(chk: _Check, path: str, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        chk.fail(path, "must be a number")
        return None
    return float(value)


def _reject_unknown(chk: _Check, path: str, obj: dict, allowed):
    for key in obj:
        if key not in allowed:
            chk.fail(f"{path}.{key}" if path else key, "unknown key")


def _parse_system(chk: _Check, spec) -> tuple:
    if not isinstance(spec, dict) or "kind" not in spec:
        chk.fail("system", "must be an object with a 'kind' key")
        return None, ""
    kind = spec["kind"]
    if kind == "full_shift":
        _reject_unknown(chk, "system", spec, {"kind", "symbols"})
        m = _as_int(chk, "system.symbols", spec.get("symbols", 2), minimum=2)
        if m is None:
            return None, ""
        return SymbolicSystem.full_shift(m), f"full_shift({m})"
    if kind == "golden_mean":
        _reject_unknown(chk, "system", spec, {"kind"})
        return SymbolicSystem.golden_mean(), "golden_mean"
    if kind == "sft":
        _reject_unknown(chk, "system", spec, {"kind", "transitions"})
        try:
            system = SymbolicSystem(np.asarray(spec.get("transitions"), dtype=np.int8))
        except (ValueError, TypeError) as exc:
            chk.fail("system.transitions", str(exc))
            return None, ""
        return system, f"sft({system.alphabet_size})"
    if kind == "beta":
        _reject_unknown(chk, "system", spec, {"kind", "beta"})
        beta = _as_float(chk, "system.beta", spec.get("beta"))
        if beta is None:
            return None, ""
        if beta <= 1.0:
            chk.fail("system.beta", "beta must exceed 1")
            return None, ""
        return IntervalMap.beta_map(beta), f"beta({beta:.6g})"
    if kind == "doubling":
        _reject_unknown(chk, "system", spec, {"kind"})
        return IntervalMap.doubling(), "doubling"
    chk.fail("system.kind", f"unknown system kind {kind!r}")
    return None, ""


def _parse_mistake(chk: _Check, path: str, spec) -> MistakeFunction | None:
    if not isinstance(spec, dict) or "family" not in spec:
        chk.fail(path, "must be an object with a 'family' key")
        return None
    family = spec["family"]
    try:
        if family == "zero":
            _reject_unknown(chk, path, spec, {"family"})
            return MistakeFunction.zero()
        if family == "constant":
            _reject_unknown(chk, path, spec, {"family", "c"})
            c = _as_int(chk, f"{path}.c", spec.get("c"), minimum=0)
            return None if c is None else MistakeFunction.constant(c)
        if family == "power":
            _reject_unknown(chk, path, spec, {"family", "coeff", "theta"})
            coeff = _as_float(chk, f"{path}.coeff", spec.get("coeff"))
            theta = _as_float(chk, f"{path}.theta", spec.get("theta"))
            if coeff is None or theta is None:
                return None
            if not 0.0 < theta < 1.0:
                chk.fail(f"{path}.theta", "theta must lie in (0,1)")
                return None
            return MistakeFunction.power(coeff, theta)
        if family == "logarithmic":
            _reject_unknown(chk, path, spec, {"family", "a"})
            a = _as_float(chk, f"{path}.a", spec.get("a"))
            return None if a is None else MistakeFunction.logarithmic(a)
    except ValueError as exc:
        chk.fail(path, str(exc))
        return None
    chk.fail(f"{path}.family", f"unknown mistake family {family!r}")
    return None


def _parse_phi(chk: _Check, spec, system) -> Potential | None:
    values = spec
    depth = 1
    if isinstance(spec, dict):
        _reject_unknown(chk, "phi", spec, {"depth", "values"})
        depth = spec.get("depth", 1)
        values = spec.get("values")
        if depth not in (1, 2):
            chk.fail("phi.depth", "must be 1 or 2")
            return None
    try:
        phi = Potential.depth1(values) if depth == 1 else Potential.depth2(values)
    except (ValueError, TypeError) as exc:
        chk.fail("phi", str(exc))
        return None
    if isinstance(system, SymbolicSystem) and phi.table.shape[0] != system.alphabet_size:
        chk.fail("phi", "size does not match the system alphabet")
        return None
    return phi


def _parse_roof(chk: _Check, spec) -> Roof | None:
    if not isinstance(spec, dict) or "kind" not in spec:
        chk.fail("roof", "must be an object with a 'kind' key")
        return None
    try:
        if spec["kind"] == "table":
            _reject_unknown(chk, "roof", spec, {"kind", "values"})
            return Roof.from_table(spec.get("values"))
        if spec["kind"] == "affine":
            _reject_unknown(chk, "roof", spec, {"kind", "intercept", "slope"})
            intercept = _as_float(chk, "roof.intercept", spec.get("intercept"))
            slope = _as_float(chk, "roof.slope", spec.get("slope", 0.0))
            if intercept is None or slope is None:
                return None
            return Roof.affine(intercept, slope)
    except (ValueError, TypeError) as exc:
        chk.fail("roof", str(exc))
        return None
    chk.fail("roof.kind", "must be 'table' or 'affine'")
    return None


def _parse_measure(chk: _Check, spec, system, phi) -> tuple:
    if not isinstance(spec, dict) or "kind" not in spec:
        chk.fail("measure", "must be an object with a 'kind' key")
        return None, ""
    kind = spec["kind"]
    try:
        if kind == "bernoulli":
            _reject_unknown(chk, "measure", spec, {"kind", "p"})
            p = spec.get("p")
            measure = MeasureSpec.bernoulli(p)
            label = "bernoulli(" + ",".join(f"{v:.6g}" for v in measure.p) + ")"
            return measure, label
        if kind == "markov":
            _reject_unknown(chk, "measure", spec, {"kind", "P", "pi"})
            measure = MeasureSpec.markov(
                spec.get("P"),
                pi=spec.get("pi"),
                system=system if isinstance(system, SymbolicSystem) else None,
            )
            return measure, f"markov({measure.alphabet_size})"
        if kind == "equilibrium":
            _reject_unknown(chk, "measure", spec, {"kind"})
            if not isinstance(system, SymbolicSystem):
                chk.fail("measure", "equilibrium measures need a symbolic system")
                return None, ""
            if phi is None:
                chk.fail("measure", "equilibrium measures need a phi entry")
                return None, ""
            return equilibrium_markov(system, phi), "equilibrium"
        if kind == "lebesgue_start":
            _reject_unknown(chk, "measure", spec, {"kind"})
            return MeasureSpec.lebesgue_start(), "lebesgue_start"
    except (ValueError, TypeError, PowerIterationError) as exc:
        chk.fail("measure", str(exc))
        return None, ""
    chk.fail("measure.kind", f"unknown measure kind {kind!r}")
    return None, ""


def _parse_grid(chk: _Check, path: str, values, integral: bool):
    if not isinstance(values, list) or not values:
        chk.fail(path, "must be a nonempty array")
        return None
    out = []
    for idx, v in enumerate(values):
        parsed = (
            _as_int(chk, f"{path}[{idx}]", v, minimum=1)
            if integral
            else _as_float(chk, f"{path}[{idx}]", v)
        )
        if parsed is None:
            return None
        out.append(parsed)
    if any(b <= a for a, b in zip(out, out[1:])):
        chk.fail(path, "must be strictly increasing")
        return None
    if not integral and any(v <= 0 for v in out):
        chk.fail(path, "entries must be positive")
        return None
    return out


_ALLOWED_KEYS = {
    "entropy": {"experiment", "system", "measure", "g", "phi", "n_grid", "epsilon_grid",
                "samples", "master_seed", "k_max", "target", "output_path"},
    "minreturn": {"experiment", "system", "measure", "g", "phi", "n_grid",
                  "samples", "master_seed", "output_path"},
    "pressure": {"experiment", "system", "measure", "g", "phi", "n_grid",
                 "samples", "master_seed", "k_max", "target", "output_path"},
    "theoremC": {"experiment", "system", "measure", "g", "phi", "t", "which", "n_grid",
                 "samples", "master_seed", "k_max", "target", "output_path"},
    "suspension": {"experiment", "system", "measure", "g1", "g2", "phi", "roof", "n_grid",
                   "epsilon_grid", "samples", "master_seed", "k_max", "horizon",
                   "target", "output_path"},
    "oracle": {"experiment", "master_seed", "output_path"},
    "check-spec": {"experiment", "system", "g", "mode", "n_grid",
                   "samples", "master_seed", "output_path"},
}

_NEEDS_MEASURE = {"entropy", "minreturn", "pressure", "theoremC", "suspension"}
_SYMBOLIC_ONLY = {"minreturn", "pressure", "theoremC", "check-spec"}


def validate_config(text: str) -> ExperimentConfig:
    """Parse and fully resolve a JSON config; raise ConfigError otherwise."""
    chk = _Check()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("$", f"invalid JSON: {exc}")]) from exc
    if not isinstance(raw, dict):
        raise ConfigError([("$", "config must be a JSON object")])
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            [("experiment", "must be one of " + ", ".join(EXPERIMENTS))]
        )
    _reject_unknown(chk, "", raw, _ALLOWED_KEYS[experiment])
    chk.raise_if_failed()

    cfg = ExperimentConfig(experiment=experiment)
    cfg.samples = _as_int(chk, "samples", raw.get("samples", 64), minimum=1) or cfg.samples
    cfg.master_seed = _as_int(
        chk, "master_seed", raw.get("master_seed", 0), minimum=0, maximum=_MAX_SEED
    ) or 0
    cfg.k_max = _as_int(chk, "k_max", raw.get("k_max", 10**7), minimum=1) or cfg.k_max
    if "output_path" in raw:
        if not isinstance(raw["output_path"], str) or not raw["output_path"]:
            chk.fail("output_path", "must be a nonempty string")
        else:
            cfg.output_path = raw["output_path"]
    if "target" in raw:
        cfg.target = _as_float(chk, "target", raw["target"])
    if "horizon" in raw:
        cfg.horizon = _as_int(chk, "horizon", raw["horizon"], minimum=1)

    if experiment == "oracle":
        chk.raise_if_failed()
        return cfg

    if "system" not in raw:
        chk.fail("system", "is required")
        chk.raise_if_failed()
    cfg.system, cfg.system_label = _parse_system(chk, raw["system"])
    symbolic = isinstance(cfg.system, SymbolicSystem)
    if cfg.system is not None and experiment in _SYMBOLIC_ONLY and not symbolic:
        chk.fail("system", f"{experiment} runs on symbolic systems only")

    grid = _parse_grid(chk, "n_grid", raw.get("n_grid"), integral=True)
    cfg.n_grid = grid or []

    if "epsilon_grid" in raw:
        if symbolic:
            chk.fail("epsilon_grid", "applies to interval systems only")
        else:
            cfg.epsilon_grid = _parse_grid(chk, "epsilon_grid", raw["epsilon_grid"], integral=False)
    elif cfg.system is not None and not symbolic and experiment in ("entropy", "suspension"):
        chk.fail("epsilon_grid", "is required for interval systems")

    if "phi" in raw:
        cfg.phi = _parse_phi(chk, raw["phi"], cfg.system)
    if experiment in ("pressure", "theoremC") and cfg.phi is None and not chk.diagnostics:
        chk.fail("phi", "is required")
    if experiment == "pressure" and cfg.phi is not None and cfg.phi.depth != 1:
        chk.fail("phi", "pressure rates support depth-1 potentials only")

    if experiment == "suspension":
        if "g1" not in raw:
            chk.fail("g1", "is required")
        else:
            cfg.g1 = _parse_mistake(chk, "g1", raw["g1"])
            cfg.g2 = _parse_mistake(chk, "g2", raw["g2"]) if "g2" in raw else cfg.g1
        if "roof" not in raw:
            chk.fail("roof", "is required")
        else:
            cfg.roof = _parse_roof(chk, raw["roof"])
        if cfg.roof is not None and not symbolic and cfg.roof.kind == "table":
            chk.fail("roof", "interval suspensions need an affine roof")
        if (
            cfg.roof is not None
            and symbolic
            and cfg.roof.kind == "affine"
            and cfg.target is None
            and "target" not in raw
        ):
            chk.fail("target", "affine roofs on symbolic bases need an explicit target")
    else:
        if "g" not in raw and experiment != "oracle":
            chk.fail("g", "is required")
        else:
            cfg.g = _parse_mistake(chk, "g", raw["g"])

    if experiment == "theoremC":
        if "t" in raw:
            t = _as_float(chk, "t", raw["t"])
            if t is not None:
                cfg.t = t
        if "which" in raw:
            if raw["which"] not in ("first", "minimal"):
                chk.fail("which", "must be 'first' or 'minimal'")
            else:
                cfg.which = raw["which"]

    if experiment == "check-spec":
        if "mode" in raw:
            if raw["mode"] not in ("exhaustive", "sampled"):
                chk.fail("mode", "must be 'exhaustive' or 'sampled'")
            else:
                cfg.mode = raw["mode"]
    elif experiment in _NEEDS_MEASURE:
        if "measure" not in raw:
            chk.fail("measure", "is required")
        else:
            cfg.measure, cfg.measure_label = _parse_measure(
                chk, raw["measure"], cfg.system, cfg.phi
            )
        if cfg.measure is not None and not symbolic and cfg.measure.kind != "lebesgue_start":
            chk.fail("measure", "interval systems sample lebesgue_start only")
        if cfg.measure is not None and symbolic and cfg.measure.kind == "lebesgue_start":
            chk.fail("measure", "symbolic systems need a word measure")
        if (
            "phi" in raw
            and experiment in ("entropy", "minreturn", "suspension")
            and (not isinstance(raw.get("measure"), dict) or raw["measure"].get("kind") != "equilibrium")
        ):
            chk.fail("phi", "has no effect here unless the measure is equilibrium")

    chk.raise_if_failed()
    return cfg


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.12g}"
    return str(value)


def _table_rows(cfg: ExperimentConfig, table: RateTable, runtime_ms) -> list[list[str]]:
    rows = []
    records = sorted(table.records, key=lambda r: (r.n, r.epsilon, r.sample_index))
    for rec in records:
        rows.append(
            [
                cfg.experiment,
                cfg.system_label,
                cfg.measure_label,
                str(rec.n),
                _fmt(float(rec.epsilon)),
                table.g_label,
                str(rec.sample_index),
                str(rec.seed),
                _fmt(rec.r_n),
                _fmt(rec.s_n),
                _fmt(rec.rate),
                _fmt(table.target),
                "true" if rec.censored else "false",
                _fmt(runtime_ms),
            ]
        )
    return rows


def _oracle_rows(cfg: ExperimentConfig, runtime_ms) -> list[list[str]]:
    rows = []
    for idx, suite in enumerate(run_oracle_suite(cfg.master_seed)):
        rows.append(
            [
                cfg.experiment,
                suite.name,
                "",
                str(suite.cases),
                "0",
                "",
                str(idx),
                str(cfg.master_seed),
                "",
                "",
                _fmt(float(suite.mismatches)),
                "0",
                "false",
                _fmt(runtime_ms),
            ]
        )
    return rows


def _checkspec_rows(cfg: ExperimentConfig, runtime_ms) -> list[list[str]]:
    rows = []
    system = cfg.system
    for n in cfg.n_grid:
        budget = cfg.g.budget(n)
        if cfg.mode == "exhaustive":
            report = almost_spec_check(system, cfg.g, [n], [n], mode="exhaustive")
            cells = [(0, cfg.master_seed, 1.0 if not report.failures else 0.0)]
        else:
            cells = []
            for i in range(cfg.samples):
                s = sample_seed(cfg.master_seed, i)
                rng = np.random.Generator(np.random.PCG64(s))
                y = np.array(_random_admissible_word(system, n, rng), dtype=np.int8)
                x = np.array(_random_admissible_word(system, n, rng), dtype=np.int8)
                ok = concat_window_feasible(system, y, budget, x, budget)
                cells.append((i, s, 1.0 if ok else 0.0))
        for i, s, rate in cells:
            rows.append(
                [
                    cfg.experiment,
                    cfg.system_label,
                    "",
                    str(n),
                    "0",
                    cfg.g.label,
                    str(i),
                    str(s),
                    "",
                    "",
                    _fmt(rate),
                    "1",
                    "false",
                    _fmt(runtime_ms),
                ]
            )
    return rows


def _compute_rows(cfg: ExperimentConfig, workers: int, runtime_ms) -> list[list[str]]:
    if cfg.experiment == "oracle":
        return _oracle_rows(cfg, runtime_ms)
    if cfg.experiment == "check-spec":
        return _checkspec_rows(cfg, runtime_ms)
    if isinstance(cfg.system, SymbolicSystem):
        source = SymbolicSource(cfg.system, cfg.measure)
    else:
        source = IntervalSource(cfg.system)
    if cfg.experiment == "entropy":
        target = cfg.target
        if target is None and isinstance(cfg.system, IntervalMap):
            target = math.log(cfg.system.beta)
        table = entropy_via_return(
            source, cfg.g, cfg.n_grid, eps_grid=cfg.epsilon_grid,
            samples=cfg.samples, seed=cfg.master_seed, k_max=cfg.k_max,
            workers=workers, target=target,
        )
    elif cfg.experiment == "minreturn":
        table = minreturn_linear_rate(
            source, cfg.g, cfg.n_grid,
            samples=cfg.samples, seed=cfg.master_seed, workers=workers,
        )
    elif cfg.experiment == "pressure":
        table = pressure_rate_table(
            source, cfg.phi, cfg.g, cfg.n_grid,
            samples=cfg.samples, seed=cfg.master_seed, k_max=cfg.k_max,
            workers=workers, target=cfg.target,
        )
    elif cfg.experiment == "theoremC":
        target = cfg.target
        if target is None:
            target = free_energy(cfg.system, cfg.phi, cfg.t)
            if cfg.which == "first":
                target += entropy_analytic(cfg.measure)
        table = weighted_rate_table(
            source, cfg.phi.scaled(cfg.t), cfg.g, cfg.n_grid,
            samples=cfg.samples, seed=cfg.master_seed, k_max=cfg.k_max,
            which=cfg.which, workers=workers, target=target,
        )
    elif cfg.experiment == "suspension":
        table = flow_entropy_estimate(
            source, cfg.roof, cfg.g1, cfg.g2, cfg.n_grid,
            eps_grid=cfg.epsilon_grid, samples=cfg.samples, seed=cfg.master_seed,
            k_max=cfg.k_max, workers=workers, target=cfg.target,
            horizon=cfg.horizon,
        )
    else:  # unreachable once validated
        raise ValueError(f"unknown experiment {cfg.experiment!r}")
    return _table_rows(cfg, table, runtime_ms)


def write_csv(path: str, rows: list[list[str]]):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)


def summarize_csv(path: str) -> tuple[list[str], int]:
    """Summary lines and exit status, recomputed from the CSV alone."""
    with open(path, encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    if not rows:
        return ["empty result set"], 1
    experiment = rows[0]["experiment_id"]
    lines = [
        f"experiment: {experiment}  system: {rows[0]['system']}  "
        f"measure: {rows[0]['measure']}  g: {rows[0]['g_spec']}  (rates in nats)"
    ]
    if experiment == "oracle":
        status = 0
        for row in rows:
            mismatches = int(float(row["rate"]))
            verdict = "ok" if mismatches == 0 else "MISMATCH"
            lines.append(
                f"  suite {row['system']}: {row['n']} cases, "
                f"{mismatches} mismatches [{verdict}]"
            )
            status |= mismatches != 0
        lines.append(f"exit status: {status}")
        return lines, status

    cells: dict[tuple[int, float], list[dict]] = {}
    for row in rows:
        cells.setdefault((int(row["n"]), float(row["epsilon"])), []).append(row)
    lines.append(
        f"  {'n':>8} {'epsilon':>9} {'samples':>8} {'censored':>9} "
        f"{'median':>12} {'target':>12} {'rel_err':>9}"
    )
    censored_total = 0
    status = 0
    for (n, eps), cell in sorted(cells.items()):
        rates = [float(r["rate"]) for r in cell if r["censored"] == "false" and r["rate"]]
        censored = sum(r["censored"] == "true" for r in cell)
        censored_total += censored
        median = statistics.median(rates) if rates else math.nan
        target_text = cell[0]["target"]
        if target_text and not math.isnan(median) and float(target_text) != 0:
            rel = abs(median - float(target_text)) / abs(float(target_text))
            rel_text = f"{rel:9.3g}"
        else:
            rel_text = f"{'':>9}"
        lines.append(
            f"  {n:>8} {eps:>9.4g} {len(cell):>8} {censored:>9} "
            f"{median:>12.6g} {target_text:>12} {rel_text}"
        )
    frac = censored_total / len(rows)
    lines.append(f"overall censoring: {100 * frac:.1f}% (limit {100 * CENSOR_LIMIT:.0f}%)")
    if frac > CENSOR_LIMIT:
        status = 1
    if experiment == "check-spec":
        n_top = max(n for n, _ in cells)
        top_rates = [
            float(r["rate"]) for r in cells[(n_top, 0.0)] if r["rate"]
        ]
        if any(v < 1.0 for v in top_rates):
            lines.append(f"gluing failed at n = {n_top}")
            status = 1
    lines.append(f"exit status: {status}")
    return lines, status


def run_experiment(
    cfg: ExperimentConfig,
    out_path: str | None = None,
    workers: int = 1,
    timings: bool = False,
) -> int:
    path = out_path or cfg.output_path
    start = time.perf_counter()
    rows = _compute_rows(cfg, workers, None)
    if timings:
        elapsed_ms = int(round(1000 * (time.perf_counter() - start)))
        rows = [row[:-1] + [str(elapsed_ms)] for row in rows]
    write_csv(path, rows)
    lines, status = summarize_csv(path)
    print("\n".join(lines))
    return status


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mistakeball",
        description="Return-time experiments on mistake dynamical balls.",
    )
    parser.add_argument("--config", help="path to a JSON experiment config")
    parser.add_argument("--out", help="CSV output path (overrides the config)")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker threads; affects wall time only")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--list-experiments", action="store_true",
                        help="print the experiment names and exit")
    parser.add_argument("--timings", action="store_true",
                        help="fill runtime_ms (breaks byte-for-byte rerun identity)")
    args = parser.parse_args(argv)

    if args.list_experiments:
        for name in EXPERIMENTS:
            print(f"{name:12s} {_EXPERIMENT_HELP[name]}")
        return 0
    if not args.config:
        print("error: --config is required (or use --list-experiments)", file=sys.stderr)
        return 2
    try:
        text = open(args.config, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = validate_config(text)
    except ConfigError as exc:
        for path, message in exc.diagnostics:
            print(f"config error at {path}: {message}", file=sys.stderr)
        return 2
    if args.seed is not None:
        if not 0 <= args.seed < _MAX_SEED:
            print("error: --seed must be a u64", file=sys.stderr)
            return 2
        cfg.master_seed = args.seed
    if args.workers < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return 2
    try:
        return run_experiment(cfg, out_path=args.out, workers=args.workers,
                              timings=args.timings)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
