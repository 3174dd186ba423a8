"""Config-driven scenario runs, parameter sweeps, presets and self-validation.

A scenario is a JSON document::

    {"n_sites": 3, "initial": "GGG", "occupations": [0.2, 0.0]}

with optional ``gammas`` (default all 1), ``dt``, ``t_max``, ``record_stride``,
``steady_tol``, ``measures``, ``pairs`` and ``output_path``.  ``initial`` is
either a basis label or a list of ``[re, im]`` amplitude pairs.

Running a scenario writes a CSV with one row per recorded sample and a JSON
sidecar describing the run.  CSV columns, in order: ``t``; for each pair
``i<j`` (lexicographic) ``C_i_j, D_i_j_measB, D_i_j_measA, I_i_j``; then
``xi2, xi2_defined, Jx, Jy, Jz, trace_dev, min_eig``.  Columns of measures not
requested are left out; the remaining order is unchanged.
"""
from __future__ import annotations

import copy
import csv
import io
import itertools
import json
import logging
import math
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence, TextIO

import numpy as np

from . import __version__
from .dynamics import (
    DEFAULT_T_GUARD,
    BathSpec,
    EvolutionConfig,
    compile_generator,
    evolve,
    liouvillian_apply,
    rk4_step,
    steady_state,
)
from .hilbert import basis_state, check_n_sites, density_from_pure, partial_trace
from .measures import concurrence, discord, mutual_information
from .squeezing import SqueezingUndefined, collective_moments, spin_squeezing

log = logging.getLogger(__name__)

MEASURES = ("concurrence", "discord", "mutual_information", "spin_squeezing", "moments")
CONFIG_KEYS = ("n_sites", "initial", "gammas", "occupations", "dt", "t_max", "record_stride",
               "steady_tol", "measures", "pairs", "output_path")
SWEEP_KEYS = ("base", "axes", "output_dir", "workers")
MAX_SWEEP_POINTS = 10_000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioSpec:
    n_sites: int
    initial: str | tuple[complex, ...]
    occupations: tuple[float, ...]
    gammas: tuple[float, ...]
    dt: float = 1e-3
    t_max: float = 50.0
    record_stride: int = 100
    steady_tol: float = 1e-9
    measures: tuple[str, ...] = MEASURES
    pairs: tuple[tuple[int, int], ...] = ()
    output_path: str | None = None

    @property
    def bath(self) -> BathSpec:
        return BathSpec(self.gammas, self.occupations)

    @property
    def evolution(self) -> EvolutionConfig:
        return EvolutionConfig(self.dt, self.t_max, self.record_stride, self.steady_tol)

    def initial_state(self) -> np.ndarray:
        if isinstance(self.initial, str):
            return density_from_pure(basis_state(self.initial, self.n_sites))
        return density_from_pure(np.array(self.initial, dtype=complex))

    def to_dict(self) -> dict[str, Any]:
        initial = (self.initial if isinstance(self.initial, str)
                   else [[z.real, z.imag] for z in self.initial])
        return {
            "n_sites": self.n_sites,
            "initial": initial,
            "gammas": list(self.gammas),
            "occupations": list(self.occupations),
            "dt": self.dt,
            "t_max": self.t_max,
            "record_stride": self.record_stride,
            "steady_tol": self.steady_tol,
            "measures": list(self.measures),
            "pairs": [list(p) for p in self.pairs],
            "output_path": self.output_path,
        }


def _real_vector(cfg: dict, key: str, n: int) -> tuple[float, ...]:
    vals = cfg[key]
    if not isinstance(vals, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
        raise ConfigError(f"{key} must be a list of numbers")
    if len(vals) != n - 1:
        raise ConfigError(f"{key} has length {len(vals)}, expected n_sites - 1 = {n - 1}")
    if any(not math.isfinite(v) or v < 0 for v in vals):
        raise ConfigError(f"{key} entries must be finite and nonnegative")
    return tuple(float(v) for v in vals)


def _number(cfg: dict, key: str, default, kind=float):
    v = cfg.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key} must be a number, got {v!r}")
    if kind is int and int(v) != v:
        raise ConfigError(f"{key} must be an integer, got {v!r}")
    return kind(v)


def spec_from_dict(cfg: dict) -> ScenarioSpec:
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(cfg) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "n_sites" not in cfg:
        raise ConfigError("missing required key n_sites")
    n = cfg["n_sites"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ConfigError(f"n_sites must be an integer, got {n!r}")
    try:
        check_n_sites(n)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if n < 2:
        raise ConfigError("n_sites must be at least 2 (one fiber)")

    if "initial" not in cfg:
        raise ConfigError("missing required key initial")
    init = cfg["initial"]
    if isinstance(init, str):
        if len(init) != n:
            raise ConfigError(f"initial length {len(init)} ≠ n_sites {n}")
        if set(init) - set("GE"):
            raise ConfigError(f"initial label {init!r} may only contain G and E")
        initial: str | tuple[complex, ...] = init
    elif isinstance(init, list):
        if len(init) != 1 << n:
            raise ConfigError(f"initial amplitude list has length {len(init)}, expected 2^n_sites = {1 << n}")
        try:
            amps = tuple(complex(float(re_), float(im)) for re_, im in init)
        except (TypeError, ValueError):
            raise ConfigError("initial amplitudes must be [re, im] pairs") from None
        norm2 = sum(abs(a) ** 2 for a in amps)
        if abs(norm2 - 1.0) > 1e-9:
            raise ConfigError(f"initial amplitudes are not normalized (squared norm {norm2!r})")
        initial = amps
    else:
        raise ConfigError("initial must be a label string or a list of [re, im] pairs")

    if "occupations" not in cfg:
        raise ConfigError("missing required key occupations")
    occupations = _real_vector(cfg, "occupations", n)
    gammas = _real_vector(cfg, "gammas", n) if "gammas" in cfg else (1.0,) * (n - 1)

    measures = cfg.get("measures", list(MEASURES))
    if not isinstance(measures, list) or not all(isinstance(m, str) for m in measures):
        raise ConfigError("measures must be a list of names")
    bad = sorted(set(measures) - set(MEASURES))
    if bad:
        raise ConfigError(f"unknown measures: {', '.join(bad)}; choose from {', '.join(MEASURES)}")

    pairs_cfg = cfg.get("pairs", "all")
    all_pairs = list(itertools.combinations(range(1, n + 1), 2))
    if pairs_cfg == "all":
        pairs = all_pairs
    elif isinstance(pairs_cfg, list):
        try:
            pairs = [(int(i), int(j)) for i, j in pairs_cfg]
        except (TypeError, ValueError):
            raise ConfigError("pairs must be 'all' or a list of [i, j]") from None
        bad_pairs = [p for p in pairs if p not in all_pairs]
        if bad_pairs:
            raise ConfigError(f"invalid pairs {bad_pairs}: need 1 <= i < j <= {n}")
        pairs = sorted(set(pairs))
    else:
        raise ConfigError("pairs must be 'all' or a list of [i, j]")

    output_path = cfg.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError("output_path must be a string")

    spec = ScenarioSpec(
        n_sites=n,
        initial=initial,
        occupations=occupations,
        gammas=gammas,
        dt=_number(cfg, "dt", 1e-3),
        t_max=_number(cfg, "t_max", 50.0),
        record_stride=_number(cfg, "record_stride", 100, int),
        steady_tol=_number(cfg, "steady_tol", 1e-9),
        measures=tuple(m for m in MEASURES if m in measures),
        pairs=tuple(pairs),
        output_path=output_path,
    )
    try:
        spec.evolution
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return spec


def parse_config(text: str) -> ScenarioSpec:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None
    return spec_from_dict(cfg)


# ---------------------------------------------------------------- records


@dataclass
class CorrelationRecord:
    t: float
    concurrence: dict[tuple[int, int], float] = field(default_factory=dict)
    discord_meas_b: dict[tuple[int, int], float] = field(default_factory=dict)
    discord_meas_a: dict[tuple[int, int], float] = field(default_factory=dict)
    mutual_information: dict[tuple[int, int], float] = field(default_factory=dict)
    xi_squared: float = math.nan
    xi_squared_defined: bool = False
    mean_spin: tuple[float, float, float] = (math.nan, math.nan, math.nan)
    trace_dev: float = 0.0
    min_eig: float = 0.0


def evaluate_record(t: float, rho: np.ndarray, pairs: Sequence[tuple[int, int]],
                    measures: Sequence[str] = MEASURES) -> CorrelationRecord:
    rec = CorrelationRecord(t)
    for i, j in pairs:
        pair = partial_trace(rho, [i, j])
        if "concurrence" in measures:
            rec.concurrence[i, j] = concurrence(pair)
        if "discord" in measures:
            rec.discord_meas_b[i, j] = discord(pair, "B").discord
            rec.discord_meas_a[i, j] = discord(pair, "A").discord
        if "mutual_information" in measures:
            rec.mutual_information[i, j] = mutual_information(pair)
    if "spin_squeezing" in measures:
        try:
            rec.xi_squared = spin_squeezing(rho).xi_squared
            rec.xi_squared_defined = True
        except SqueezingUndefined:
            pass
    if "moments" in measures:
        rec.mean_spin = tuple(float(x) for x in collective_moments(rho).mean)
    rec.trace_dev = float(np.trace(rho).real - 1.0)
    rec.min_eig = float(np.linalg.eigvalsh(rho)[0])
    return rec


def csv_header(pairs: Sequence[tuple[int, int]], measures: Sequence[str] = MEASURES) -> list[str]:
    cols = ["t"]
    for i, j in pairs:
        if "concurrence" in measures:
            cols.append(f"C_{i}_{j}")
        if "discord" in measures:
            cols += [f"D_{i}_{j}_measB", f"D_{i}_{j}_measA"]
        if "mutual_information" in measures:
            cols.append(f"I_{i}_{j}")
    if "spin_squeezing" in measures:
        cols += ["xi2", "xi2_defined"]
    if "moments" in measures:
        cols += ["Jx", "Jy", "Jz"]
    return cols + ["trace_dev", "min_eig"]


def fmt(x: float) -> str:
    """Shortest round-trip decimal; NaN as ``nan`` and no negative zero."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x + 0.0)


def csv_row(rec: CorrelationRecord, pairs: Sequence[tuple[int, int]], measures: Sequence[str] = MEASURES) -> list[str]:
    row = [fmt(rec.t)]
    for p in pairs:
        if "concurrence" in measures:
            row.append(fmt(rec.concurrence[p]))
        if "discord" in measures:
            row += [fmt(rec.discord_meas_b[p]), fmt(rec.discord_meas_a[p])]
        if "mutual_information" in measures:
            row.append(fmt(rec.mutual_information[p]))
    if "spin_squeezing" in measures:
        row += [fmt(rec.xi_squared), "1" if rec.xi_squared_defined else "0"]
    if "moments" in measures:
        row += [fmt(v) for v in rec.mean_spin]
    return row + [fmt(rec.trace_dev), fmt(rec.min_eig)]


def write_csv(path: Path, records: Sequence[CorrelationRecord], pairs, measures) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(pairs, measures))
    for rec in records:
        w.writerow(csv_row(rec, pairs, measures))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue())


# ---------------------------------------------------------------- running


@dataclass
class ScenarioResult:
    records: list[CorrelationRecord]
    csv_path: Path | None
    meta_path: Path | None
    final_residual: float
    final_state: np.ndarray


def _sidecar(csv_path: Path) -> Path:
    return csv_path.with_suffix(".json")


def run_scenario(spec: ScenarioSpec, output_path: str | Path | None = None) -> ScenarioResult:
    """Integrate ``spec``, evaluate its measures at every sample, write CSV + JSON.

    Nothing is written when neither ``output_path`` nor ``spec.output_path`` is
    set.  ``IntegrationError`` from the integrator propagates.
    """
    start = time.perf_counter()
    records: list[CorrelationRecord] = []
    last: list[np.ndarray] = []

    def observe(t: float, rho: np.ndarray) -> None:
        records.append(evaluate_record(t, rho, spec.pairs, spec.measures))
        last[:] = [rho]

    traj = evolve(spec.initial_state(), spec.bath, spec.evolution, [observe], keep_states=False)
    final = last[0]
    residual = float(np.linalg.norm(liouvillian_apply(final, spec.bath)))
    wall = time.perf_counter() - start

    target = output_path if output_path is not None else spec.output_path
    csv_path = meta_path = None
    if target is not None:
        csv_path = Path(target)
        write_csv(csv_path, records, spec.pairs, spec.measures)
        meta_path = _sidecar(csv_path)
        meta = {
            "spec": spec.to_dict(),
            "version": __version__,
            "wall_time_s": wall,
            "final_residual": residual,
            "max_trace_drift": traj.max_trace_drift,
            "n_records": len(records),
        }
        meta_path.write_text(json.dumps(meta, indent=2) + "\n")
    log.info("scenario done in %.1fs, %d records, final ||L[rho]|| = %.2e", wall, len(records), residual)
    return ScenarioResult(records, csv_path, meta_path, residual, final)


def run_steady(spec: ScenarioSpec, t_guard: float = DEFAULT_T_GUARD,
               output_path: str | Path | None = None) -> ScenarioResult:
    """Integrate to the steady state and record its correlations as one row at the reach time."""
    start = time.perf_counter()
    ss = steady_state(spec.initial_state(), spec.bath, spec.steady_tol, t_guard, spec.dt)
    rec = evaluate_record(ss.time, ss.rho, spec.pairs, spec.measures)
    target = output_path if output_path is not None else spec.output_path
    csv_path = meta_path = None
    if target is not None:
        csv_path = Path(target)
        write_csv(csv_path, [rec], spec.pairs, spec.measures)
        meta_path = _sidecar(csv_path)
        meta = {
            "spec": spec.to_dict(),
            "version": __version__,
            "wall_time_s": time.perf_counter() - start,
            "final_residual": ss.residual,
            "steady_time": ss.time,
            "t_guard": t_guard,
        }
        meta_path.write_text(json.dumps(meta, indent=2) + "\n")
    return ScenarioResult([rec], csv_path, meta_path, ss.residual, ss.rho)


# ---------------------------------------------------------------- sweeps

_PATH = re.compile(r"^([a-z_]+)(?:\[(\d+)\])?$")


def set_path(cfg: dict, path: str, value) -> None:
    """Assign ``value`` at ``key`` or ``key[index]`` inside a config dict."""
    m = _PATH.match(path)
    if not m:
        raise ConfigError(f"bad parameter path {path!r}; use 'key' or 'key[index]'")
    key, index = m.group(1), m.group(2)
    if key not in CONFIG_KEYS:
        raise ConfigError(f"parameter path {path!r} names unknown key {key!r}")
    if index is None:
        cfg[key] = copy.deepcopy(value)
        return
    seq = cfg.get(key)
    if key == "gammas" and seq is None and isinstance(cfg.get("n_sites"), int):
        seq = cfg["gammas"] = [1.0] * (cfg["n_sites"] - 1)
    if not isinstance(seq, list) or not int(index) < len(seq):
        raise ConfigError(f"parameter path {path!r} does not address an existing list entry")
    seq[int(index)] = value


def _token(path: str, value) -> str:
    name = re.sub(r"[^A-Za-z0-9_]", "", path)
    val = value if isinstance(value, str) else json.dumps(value, separators=(",", ""))
    return f"{name}={re.sub(r'[^A-Za-z0-9_.,=+-]', '', str(val))}"


@dataclass
class SweepSpec:
    base: dict[str, Any]
    axes: list[tuple[str, list]]
    output_dir: str
    workers: int = 1

    def points(self) -> list[dict[str, Any]]:
        """One ``{path: value}`` dict per grid point, first axis slowest."""
        names = [a[0] for a in self.axes]
        return [dict(zip(names, combo)) for combo in itertools.product(*(a[1] for a in self.axes))]

    def size(self) -> int:
        return math.prod(len(v) for _, v in self.axes)


def sweep_from_dict(cfg: dict) -> SweepSpec:
    if not isinstance(cfg, dict):
        raise ConfigError("sweep config must be a JSON object")
    unknown = sorted(set(cfg) - set(SWEEP_KEYS))
    if unknown:
        raise ConfigError(f"unknown sweep keys: {', '.join(unknown)}")
    for key in ("base", "output_dir"):
        if key not in cfg:
            raise ConfigError(f"missing required sweep key {key}")
    axes_cfg = cfg.get("axes", [])
    if not isinstance(axes_cfg, list):
        raise ConfigError("axes must be a list of [path, values] pairs")
    axes = []
    for ax in axes_cfg:
        if not (isinstance(ax, list) and len(ax) == 2 and isinstance(ax[0], str) and isinstance(ax[1], list)):
            raise ConfigError(f"axis {ax!r} must be [path, [values...]]")
        axes.append((ax[0], ax[1]))
    workers = cfg.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError("workers must be a positive integer")
    sweep = SweepSpec(dict(cfg["base"]), axes, str(cfg["output_dir"]), workers)
    if sweep.size() > MAX_SWEEP_POINTS:
        raise ConfigError(f"sweep has {sweep.size()} points, more than the limit of {MAX_SWEEP_POINTS}")
    return sweep


def parse_sweep(text: str) -> SweepSpec:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"sweep config is not valid JSON: {e}") from None
    return sweep_from_dict(cfg)


def _run_point(cfg: dict, csv_path: str) -> dict[str, Any]:
    try:
        spec = spec_from_dict(cfg)
        res = run_scenario(spec, csv_path)
        return {"status": "ok", "final_residual": res.final_residual}
    except Exception as e:  # recorded in the index, reported through the exit status
        return {"status": "error", "error": f"{type(e).__name__}: {e}"}


@dataclass
class SweepResult:
    index_path: Path
    entries: list[dict[str, Any]]

    @property
    def failed(self) -> int:
        return sum(e["status"] != "ok" for e in self.entries)


def run_sweep(sweep: SweepSpec) -> SweepResult:
    """Run every grid point as its own scenario and write ``index.json``.

    Points may run in a process pool (``workers > 1``); every output depends
    only on its own point, so scheduling does not change any file.
    """
    if sweep.size() > MAX_SWEEP_POINTS:
        raise ConfigError(f"sweep has {sweep.size()} points, more than the limit of {MAX_SWEEP_POINTS}")
    out = Path(sweep.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = []
    for params in sweep.points():
        cfg = copy.deepcopy(sweep.base)
        cfg.pop("output_path", None)
        for path, value in params.items():
            set_path(cfg, path, value)
        stem = "__".join(_token(p, v) for p, v in params.items()) or "run"
        jobs.append((params, cfg, str(out / f"{stem}.csv")))

    if sweep.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=sweep.workers) as pool:
            outcomes = list(pool.map(_run_point, [j[1] for j in jobs], [j[2] for j in jobs]))
    else:
        outcomes = [_run_point(cfg, path) for _, cfg, path in jobs]

    entries = []
    for (params, _, path), outcome in zip(jobs, outcomes):
        csv_name = Path(path).name
        entries.append({"params": params, "csv": csv_name,
                        "meta": Path(path).with_suffix(".json").name, **outcome})
    index_path = out / "index.json"
    index_path.write_text(json.dumps({"base": sweep.base, "axes": [list(a) for a in sweep.axes],
                                      "points": entries}, indent=2) + "\n")
    return SweepResult(index_path, entries)


# ---------------------------------------------------------------- presets


def _preset_fig2() -> dict:
    return {"base": {"n_sites": 3, "initial": "GGG", "occupations": [0.2, 0.0]},
            "axes": [["occupations[0]", [0.2, 1.0]]], "output_dir": "fig2"}


def _preset_fig3() -> dict:
    return {"base": {"n_sites": 3, "initial": "EEE", "occupations": [0.0, 0.0]},
            "axes": [["occupations[0]", [0.0, 0.2]]], "output_dir": "fig3"}


def _preset_fig4(n: float | None = None, initial: str | None = None) -> dict:
    if n is None or initial is None:
        raise ConfigError("preset fig4 needs both n (fiber occupation, n1 = n2 = n) and initial (e.g. EEG)")
    return {"base": {"n_sites": 3, "initial": initial, "occupations": [n, n],
                     "measures": ["spin_squeezing", "moments"]},
            "axes": [], "output_dir": "fig4"}


def _preset_fig5() -> dict:
    return {"base": {"n_sites": 5, "initial": "GGGGG", "occupations": [0.0, 0.2, 0.0, 0.0]},
            "axes": [["occupations[1]", [0.2, 1.0]]], "output_dir": "fig5"}


def _preset_fig6() -> dict:
    return {"base": {"n_sites": 5, "initial": "EEEEE", "occupations": [0.0, 0.2, 0.0, 0.0]},
            "axes": [["occupations[1]", [0.2, 1.0]]], "output_dir": "fig6"}


PRESETS: dict[str, Callable[..., dict]] = {
    "fig2": _preset_fig2,
    "fig3": _preset_fig3,
    "fig4": _preset_fig4,
    "fig5": _preset_fig5,
    "fig6": _preset_fig6,
}


def preset(name: str, **params) -> SweepSpec:
    """Named preset sweep over the regimes of interest.

    Only ``fig4`` takes parameters (``n`` and ``initial``).
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    cfg = PRESETS[name](**params) if name == "fig4" else PRESETS[name]()
    sweep = sweep_from_dict(cfg)
    for params_ in sweep.points():
        point = copy.deepcopy(sweep.base)
        for path, value in params_.items():
            set_path(point, path, value)
        spec_from_dict(point)
    return sweep


def preset_specs(sweep: SweepSpec) -> list[ScenarioSpec]:
    specs = []
    for params in sweep.points():
        cfg = copy.deepcopy(sweep.base)
        for path, value in params.items():
            set_path(cfg, path, value)
        specs.append(spec_from_dict(cfg))
    return specs


# ---------------------------------------------------------------- validation


@dataclass
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation < self.tolerance)

    @property
    def margin(self) -> float:
        return self.tolerance / self.deviation if self.deviation > 0 else math.inf


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def validate(tighten: float = 1.0, verbose: bool = False,
             fast_apply: Callable[[np.ndarray, BathSpec], np.ndarray] = liouvillian_apply,
             stream: TextIO | None = None, seed: int = 20240611) -> ValidationReport:
    """Cross-check every fast path against its oracle and print one line per check.

    ``tighten`` divides every tolerance.  ``fast_apply`` replaces the
    Liouvillian under test (used for negative controls).
    """
    from . import oracle  # keeps scenario importable without scipy.linalg cost

    stream = stream or sys.stdout
    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = []

    def record(name: str, deviation: float, tol: float) -> None:
        c = CheckResult(name, float(deviation), tol / tighten)
        checks.append(c)
        line = f"{'PASS' if c.passed else 'FAIL'}  {name:<28} deviation={c.deviation:.3e}  tol={c.tolerance:.1e}"
        if verbose or tighten != 1.0:
            line += f"  margin={c.margin:.3g}x"
        print(line, file=stream)

    # dense superoperator vs fast Liouvillian and compiled generator
    dev = dev_gen = 0.0
    for k in range(50):
        n = 2 + k % 2
        bath = oracle.random_bath(n, rng)
        rho = oracle.random_density(n, rng)
        ref = oracle.apply_dense(oracle.dense_liouvillian(bath), rho)
        dev = max(dev, np.abs(fast_apply(rho, bath) - ref).max())
        gen = compile_generator(bath)
        dev_gen = max(dev_gen, np.abs(gen(rho.ravel()).reshape(rho.shape) - ref).max())
    record("liouvillian_equivalence", dev, 1e-12)
    record("generator_equivalence", dev_gen, 1e-12)

    # RK4 vs matrix exponential, thermal-blockade regime
    bath = BathSpec.uniform([0.2, 0.0])
    rho0 = density_from_pure(basis_state("GGG"))
    exact = oracle.expm_propagate(oracle.dense_liouvillian(bath), rho0, 1.0)
    traj = evolve(rho0, bath, EvolutionConfig(dt=1e-3, t_max=1.0, record_stride=1000))
    record("rk4_vs_expm", np.abs(traj.states[-1] - exact).max(), 1e-8)

    # one RK4 step vs the exact propagator on a small register
    bath2 = BathSpec.uniform([0.0])
    rho_ee = density_from_pure(basis_state("EE"))
    step = rk4_step(rho_ee, 1e-3, bath2)
    record("rk4_single_step", np.abs(step - oracle.expm_propagate(oracle.dense_liouvillian(bath2), rho_ee, 1e-3)).max(),
           1e-13)

    # steady state by integration vs spectral projection
    bath3 = BathSpec.uniform([0.5, 0.3])
    ss = steady_state(density_from_pure(basis_state("EGE")), bath3, 1e-10, 500.0, dt=0.01)
    proj = oracle.steady_projection(oracle.dense_liouvillian(bath3), density_from_pure(basis_state("EGE")))
    record("steady_state_vs_nullspace", np.abs(ss.rho - proj).max(), 1e-7)

    # discord optimizer vs exhaustive grid
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    pairs = [
        density_from_pure(np.array([1, 0, 0, 1]) / np.sqrt(2)),
        0.8 * np.outer(singlet, singlet) + 0.05 * np.eye(4),
        oracle.random_density(2, rng),
        oracle.random_density(2, rng, rank=2),
    ]
    dev = 0.0
    for k, pair in enumerate(pairs):
        side = "AB"[k % 2]
        dev = max(dev, abs(discord(pair, side).discord - oracle.discord_grid(pair, side, 0.5)))
    record("discord_optimizer_vs_grid", dev, 1e-4)

    # squeezing eigenvalue route vs angular scan
    zero = BathSpec.uniform([0.0, 0.0])
    snap = evolve(density_from_pure(basis_state("EEG")), zero,
                  EvolutionConfig(dt=1e-3, t_max=2.0, record_stride=2000)).states[-1]
    u = [np.array([np.cos(a / 2), np.exp(1j * b) * np.sin(a / 2)]) for a, b in rng.uniform(0, np.pi, (3, 2))]
    product = density_from_pure(np.kron(np.kron(u[0], u[1]), u[2]))
    dev = max(abs(spin_squeezing(r).xi_squared - oracle.squeezing_scan(r, 0.1)) for r in (snap, product))
    record("squeezing_eigen_vs_scan", dev, 1e-6)

    report = ValidationReport(checks)
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed", file=stream)
    return report
