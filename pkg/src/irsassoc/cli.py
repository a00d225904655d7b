"""Sweep runner and the ``simulate`` command.

An experiment document names a scenario, one swept parameter (``N``,
``L`` or ``sigma2``), the association solvers to compare and optional
Monte-Carlo settings. :func:`run_experiment` turns it into a
:class:`ResultTable` holding linear SINRs; :func:`emit` writes CSV and
JSON renderings. The CSV column layout is documented in ``docs/results.md``.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .analytic import SinrEvaluator, avg_sinr
from .assoc import (
    DEFAULT_BUDGET,
    CodebookBudgetError,
    exhaustive_search,
    nearest_rule,
    random_assignment,
    successive_refinement,
)
from .beamform import power_allocation
from .montecarlo import McConfig, mc_average_sinr
from .scenario import ConfigurationError, scenario_from_dict

__all__ = [
    "AXES",
    "SOLVERS",
    "PRESETS",
    "SPEC_SCHEMA_VERSION",
    "ExperimentSpec",
    "Row",
    "ResultTable",
    "load_spec",
    "load_preset",
    "run_experiment",
    "emit",
    "to_csv",
    "to_json",
    "parse_csv",
    "parse_json",
    "main",
]

SPEC_SCHEMA_VERSION = 1
AXES = ("N", "L", "sigma2")
# Canonical order; rows for one axis point follow it.
SOLVERS = ("none", "random", "nearest", "sr", "exhaustive")
DEPLOYMENTS = ("distributed", "centralized")
PRESETS = ("noise_sweep", "bounds_sweep", "solver_comparison", "irs_count", "deployment")
THREADS_ENV = "IRSASSOC_THREADS"

_AXIS_COLUMN = {"N": "N", "L": "L", "sigma2": "sigma2_dBm"}


# ---------------------------------------------------------------- spec


def _err(path: str, msg: str) -> ConfigurationError:
    return ConfigurationError(f"field '{path}': {msg}")


def _int(value, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _err(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise _err(path, f"must be >= {minimum}, got {value}")
    return value


def _str_list(value, path: str, allowed) -> tuple:
    items = [value] if isinstance(value, str) else value
    if not isinstance(items, list) or not items:
        raise _err(path, "expected a non-empty list of names")
    out = []
    for i, item in enumerate(items):
        if item not in allowed:
            raise _err(f"{path}[{i}]", f"expected one of {', '.join(allowed)}, got {item!r}")
        if item not in out:
            out.append(item)
    return tuple(out)


def _mc_from_dict(value) -> McConfig | None:
    if value is None:
        return None
    if not isinstance(value, dict):
        raise _err("mc", "expected an object or null")
    extra = sorted(set(value) - {"trials", "seed", "confidence"})
    if extra:
        raise _err("mc", f"unknown key(s) {', '.join(extra)}")
    trials = _int(value.get("trials", 1000), "mc.trials", 1)
    seed = _int(value.get("seed", 0), "mc.seed", 0)
    conf = value.get("confidence", 0.95)
    if isinstance(conf, bool) or not isinstance(conf, (int, float)) or not 0 < conf < 1:
        raise _err("mc.confidence", f"expected a number in (0, 1), got {conf!r}")
    return McConfig(trials=trials, seed=seed, confidence=float(conf))


@dataclass(frozen=True)
class ExperimentSpec:
    """A validated sweep description.

    ``scenario`` is a scenario configuration document (see
    :func:`~irsassoc.scenario.scenario_from_dict`); the swept field is
    overwritten per axis point. Noise values on the ``sigma2`` axis are in
    dBm. On the ``N`` axis ``N_z`` stays fixed and ``N_x = N / N_z``.
    """

    axis: str
    values: tuple
    solvers: tuple
    scenario: dict = field(default_factory=dict, compare=False)
    deployments: tuple = ("distributed",)
    mc: McConfig | None = None
    output: str | None = None
    random_seed: int = 0
    budget: int = DEFAULT_BUDGET
    power: tuple | None = None
    name: str = ""

    def __post_init__(self):
        if self.axis not in AXES:
            raise _err("axis", f"expected one of {', '.join(AXES)}, got {self.axis!r}")
        if not self.values:
            raise _err("values", "at least one axis value is required")
        if any(not b > a for a, b in zip(self.values, self.values[1:])):
            raise _err("values", "axis values must be strictly increasing")
        if not self.solvers:
            raise _err("solvers", "at least one solver is required")
        bad = [s for s in self.solvers if s not in SOLVERS]
        if bad:
            raise _err("solvers", f"unknown solver(s) {', '.join(map(repr, bad))}")
        bad = [d for d in self.deployments if d not in DEPLOYMENTS]
        if bad or not self.deployments:
            raise _err("deployment", f"expected entries from {', '.join(DEPLOYMENTS)}")

    def scenario_doc(self, value, deployment: str) -> dict:
        """Scenario document for one axis point."""
        doc = copy.deepcopy(self.scenario)
        doc["deployment"] = deployment
        if self.axis == "sigma2":
            doc["noise_dbm"] = value
            return doc
        dims = doc.setdefault("dims", {})
        if self.axis == "L":
            dims["L"] = value
        else:
            N_z = dims.get("N_z", 4)
            dims["N_x"] = value // N_z
        return doc

    @classmethod
    def from_dict(cls, data, base_dir: str | os.PathLike | None = None) -> "ExperimentSpec":
        if not isinstance(data, dict):
            raise ConfigurationError("experiment config must be a JSON object")
        allowed = {
            "schema_version", "name", "description", "scenario", "scenario_file", "axis", "values",
            "solvers", "deployment", "mc", "output", "random_seed", "budget", "power",
        }
        extra = sorted(set(data) - allowed)
        if extra:
            raise ConfigurationError(f"unknown field(s) under '<root>': {', '.join(extra)}")
        version = data.get("schema_version", SPEC_SCHEMA_VERSION)
        if version != SPEC_SCHEMA_VERSION:
            raise _err("schema_version", f"unsupported version {version!r}")

        if "scenario" in data and "scenario_file" in data:
            raise _err("scenario_file", "give either 'scenario' or 'scenario_file', not both")
        if "scenario_file" in data:
            ref = data["scenario_file"]
            if not isinstance(ref, str):
                raise _err("scenario_file", "expected a path string")
            path = Path(base_dir or ".") / ref
            try:
                scenario = json.loads(path.read_text())
            except OSError as exc:
                raise _err("scenario_file", f"cannot read {path}: {exc.strerror}") from None
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        else:
            scenario = data.get("scenario", {})
        if not isinstance(scenario, dict):
            raise _err("scenario", "expected an object")

        axis = data.get("axis")
        if axis not in AXES:
            raise _err("axis", f"expected one of {', '.join(AXES)}, got {axis!r}")
        raw = data.get("values")
        if not isinstance(raw, list) or not raw:
            raise _err("values", "expected a non-empty list")
        values = []
        for i, v in enumerate(raw):
            if axis == "sigma2":
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise _err(f"values[{i}]", f"expected a noise power in dBm, got {v!r}")
                values.append(float(v))
            else:
                values.append(_int(v, f"values[{i}]", 1))
        if axis == "N":
            N_z = scenario.get("dims", {}).get("N_z", 4) if isinstance(scenario.get("dims", {}), dict) else 4
            for i, v in enumerate(values):
                if v % N_z:
                    raise _err(f"values[{i}]", f"N={v} is not a multiple of N_z={N_z}")
        if any(not b > a for a, b in zip(values, values[1:])):
            raise _err("values", "axis values must be strictly increasing")

        solvers = _str_list(data.get("solvers"), "solvers", SOLVERS)
        deployments = _str_list(data.get("deployment", "distributed"), "deployment", DEPLOYMENTS)
        mc = _mc_from_dict(data.get("mc"))
        output = data.get("output")
        if output is not None and not isinstance(output, str):
            raise _err("output", "expected a directory path")
        random_seed = _int(data.get("random_seed", 0), "random_seed", 0)
        budget = _int(data.get("budget", DEFAULT_BUDGET), "budget", 1)

        power = data.get("power")
        if power is not None:
            if not isinstance(power, list) or not power:
                raise _err("power", "expected a list of per-user powers in watts")
            for i, p in enumerate(power):
                if isinstance(p, bool) or not isinstance(p, (int, float)) or not p > 0:
                    raise _err(f"power[{i}]", f"expected a positive number, got {p!r}")
            power = tuple(float(p) for p in power)

        spec = cls(
            axis=axis,
            values=tuple(values),
            solvers=tuple(s for s in SOLVERS if s in solvers),
            scenario=scenario,
            deployments=deployments,
            mc=mc,
            output=output,
            random_seed=random_seed,
            budget=budget,
            power=power,
            name=str(data.get("name", "")),
        )
        # Build every axis point once so scenario errors surface before any solver runs.
        for i, v in enumerate(spec.values):
            for dep in spec.deployments:
                try:
                    scn = scenario_from_dict(spec.scenario_doc(v, dep))
                except ConfigurationError as exc:
                    raise ConfigurationError(f"{exc} (at values[{i}]={v!r})") from None
                if power is not None:
                    if len(power) != scn.dims.K:
                        raise _err("power", f"expected {scn.dims.K} entries, got {len(power)}")
                    if sum(power) > scn.P_max * (1 + 1e-12):
                        raise _err("power", f"total {sum(power)} W exceeds P_max_W={scn.P_max}")
        return spec


_FIELD_RE = re.compile(r"field '([^']+)'")


def _locate(text: str, message: str) -> int | None:
    """Line of the first occurrence of the key named in a field diagnostic."""
    m = _FIELD_RE.search(message)
    if not m:
        return None
    leaf = re.sub(r"\[\d+\]$", "", m.group(1).split(".")[-1])
    needle = f'"{leaf}"'
    for n, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return n
    return None


def _parse_text(text: str, origin: str, base_dir) -> ExperimentSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{origin}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return ExperimentSpec.from_dict(data, base_dir)
    except ConfigurationError as exc:
        line = _locate(text, str(exc))
        where = f"{origin}:{line}" if line else origin
        raise ConfigurationError(f"{where}: {exc}") from None


def load_spec(path) -> ExperimentSpec:
    """Read and validate an experiment file; errors carry ``file:line``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"{path}: {exc.strerror}") from None
    return _parse_text(text, str(path), path.parent)


def load_preset(name: str) -> ExperimentSpec:
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    text = resources.files(__package__).joinpath("presets", f"{name}.json").read_text()
    return _parse_text(text, f"preset:{name}", None)


# ---------------------------------------------------------------- results


def _tuple(x):
    return None if x is None else tuple(float(v) for v in np.asarray(x).reshape(-1))


@dataclass(frozen=True)
class Row:
    """One (axis value, deployment, solver) result. SINRs are linear."""

    value: float | int
    deployment: str
    solver: str
    users: tuple | None = None
    gamma: tuple | None = None
    low: tuple | None = None
    up: tuple | None = None
    mc_mean: tuple | None = None
    mc_stderr: tuple | None = None
    mc_ratio: tuple | None = None
    error: str | None = None
    solve: dict | None = field(default=None, compare=False)

    @property
    def min_user(self) -> int | None:
        return None if self.gamma is None else int(np.argmin(self.gamma))

    @property
    def min_sinr(self) -> float | None:
        return None if self.gamma is None else min(self.gamma)


@dataclass(frozen=True)
class ResultTable:
    axis: str
    K: int
    rows: tuple = ()

    def columns(self) -> list:
        users = range(self.K)
        cols = [_AXIS_COLUMN[self.axis], "deployment", "solver", "association", "min_user", "min_dB"]
        for prefix in ("gamma_dB", "low_dB", "up_dB", "mc_dB", "mc_stderr", "mc_ratio_dB"):
            cols += [f"{prefix}_{k}" for k in users]
        return cols + ["error"]

    def select(self, **where) -> list:
        """Rows whose attributes equal the given values."""
        return [r for r in self.rows if all(getattr(r, k) == v for k, v in where.items())]


# ---------------------------------------------------------------- runner


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV} must be an integer") from None


def _solve(spec: ExperimentSpec, solver: str, scn, ev, seed):
    """``(users, solve_info)`` for one solver; ``users`` is None without IRSs."""
    if solver == "none":
        return None, None
    if solver == "nearest":
        return nearest_rule(scn), None
    if solver == "random":
        return random_assignment(scn.dims.K, scn.dims.L, seed), None
    if solver == "sr":
        res = successive_refinement(scn, p=ev.p, evaluator=ev)
    else:
        res = exhaustive_search(scn, p=ev.p, budget=spec.budget, evaluator=ev)
    info = res.to_dict()
    return res.assoc, {k: info[k] for k in ("iterations", "evaluations", "trajectory")}


def _run_point(spec: ExperimentSpec, index: int, value, mc_workers, dump: dict | None) -> list:
    rows = []
    for d_idx, dep in enumerate(spec.deployments):
        scn = scenario_from_dict(spec.scenario_doc(value, dep))
        K, M = scn.dims.K, scn.dims.M
        p = np.full(K, scn.P_max / K) if spec.power is None else np.asarray(spec.power)
        ev = SinrEvaluator(scn, p=p)
        for solver in spec.solvers:
            seed = np.random.SeedSequence([spec.random_seed, index, d_idx])
            try:
                assoc, info = _solve(spec, solver, scn, ev, seed)
            except CodebookBudgetError as exc:
                rows.append(Row(value=value, deployment=dep, solver=solver, error=str(exc)))
                continue
            if assoc is None:
                Rs = np.array([scn.beta_d[k] * np.eye(M, dtype=complex) for k in range(K)])
            else:
                Rs = ev.correlation(assoc.users)
            pow = power_allocation(p, scn.P_max, np.real(np.trace(Rs, axis1=1, axis2=2)))
            rep = avg_sinr(Rs, pow, scn.sigma2)
            mc = None
            if spec.mc is not None:
                cfg = replace(spec.mc, workers=mc_workers)
                mc = mc_average_sinr(
                    scn, None if assoc is None else assoc.lam, pow, cfg, keep_samples=dump is not None
                )
                if dump is not None:
                    dump[(index, dep, solver)] = mc.samples
            rows.append(
                Row(
                    value=value,
                    deployment=dep,
                    solver=solver,
                    users=None if assoc is None else tuple(int(u) for u in assoc.users),
                    gamma=_tuple(rep.gamma_bar),
                    low=_tuple(rep.gamma_low),
                    up=_tuple(rep.gamma_up),
                    mc_mean=None if mc is None else _tuple(mc.mean),
                    mc_stderr=None if mc is None else _tuple(mc.stderr),
                    mc_ratio=None if mc is None else _tuple(mc.ratio_of_means),
                    solve=info,
                )
            )
    return rows


def run_experiment(spec: ExperimentSpec, dump: dict | None = None) -> ResultTable:
    """Evaluate every solver at every axis point.

    Axis points run on ``IRSASSOC_THREADS`` threads; the row order is
    ``(axis value, deployment, solver)`` whatever the schedule. Pass a
    dict as ``dump`` to collect per-trial Monte-Carlo SINRs keyed by
    ``(axis index, deployment, solver)``.
    """
    threads = min(_threads(), len(spec.values))
    mc_workers = 1 if threads > 1 else None
    jobs = list(enumerate(spec.values))
    if threads <= 1:
        parts = [_run_point(spec, i, v, mc_workers, dump) for i, v in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda iv: _run_point(spec, iv[0], iv[1], mc_workers, dump), jobs))
    K = scenario_from_dict(spec.scenario_doc(spec.values[0], spec.deployments[0])).dims.K
    return ResultTable(axis=spec.axis, K=K, rows=tuple(r for part in parts for r in part))


# ---------------------------------------------------------------- output


def _db(x: float) -> str:
    return format(10.0 * math.log10(x), ".6g")


def _fmt_value(v) -> str:
    return str(v) if isinstance(v, int) else repr(float(v))


def to_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(table.columns())
    blank = [""] * table.K
    for r in table.rows:
        line = [
            _fmt_value(r.value),
            r.deployment,
            r.solver,
            "" if r.users is None else " ".join(map(str, r.users)),
            "" if r.gamma is None else r.min_user,
            "" if r.gamma is None else _db(r.min_sinr),
        ]
        for vals, fmt in (
            (r.gamma, _db), (r.low, _db), (r.up, _db),
            (r.mc_mean, _db), (r.mc_stderr, lambda x: format(x, ".6g")), (r.mc_ratio, _db),
        ):
            line += blank if vals is None else [fmt(x) for x in vals]
        line.append(r.error or "")
        w.writerow(line)
    return buf.getvalue()


def parse_csv(text: str) -> ResultTable:
    """Inverse of :func:`to_csv`; dB fields come back as linear values."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    axis = {v: k for k, v in _AXIS_COLUMN.items()}[header[0]]
    K = sum(1 for h in header if h.startswith("gamma_dB_"))
    pos = {h: i for i, h in enumerate(header)}

    def block(line, prefix, lin):
        cells = [line[pos[f"{prefix}_{k}"]] for k in range(K)]
        if all(c == "" for c in cells):
            return None
        return tuple(float(c) if lin else 10.0 ** (float(c) / 10.0) for c in cells)

    rows = []
    for line in reader:
        raw = line[0]
        value = int(raw) if axis != "sigma2" else float(raw)
        rows.append(
            Row(
                value=value,
                deployment=line[1],
                solver=line[2],
                users=tuple(int(u) for u in line[3].split()) if line[3] else None,
                gamma=block(line, "gamma_dB", False),
                low=block(line, "low_dB", False),
                up=block(line, "up_dB", False),
                mc_mean=block(line, "mc_dB", False),
                mc_stderr=block(line, "mc_stderr", True),
                mc_ratio=block(line, "mc_ratio_dB", False),
                error=line[-1] or None,
            )
        )
    return ResultTable(axis=axis, K=K, rows=tuple(rows))


_ROW_FIELDS = ("value", "deployment", "solver", "users", "gamma", "low", "up", "mc_mean", "mc_stderr", "mc_ratio", "error")


def to_json(table: ResultTable) -> str:
    rows = []
    for r in table.rows:
        d = {k: getattr(r, k) for k in _ROW_FIELDS}
        d["min_user"], d["min_sinr"] = r.min_user, r.min_sinr
        if r.solve is not None:
            d["solve"] = r.solve
        rows.append(d)
    doc = {"schema_version": SPEC_SCHEMA_VERSION, "axis": table.axis, "K": table.K, "rows": rows}
    return json.dumps(doc, indent=1) + "\n"


def parse_json(text: str) -> ResultTable:
    doc = json.loads(text)
    rows = []
    for d in doc["rows"]:
        kw = {k: d[k] for k in _ROW_FIELDS}
        for k in ("users", "gamma", "low", "up", "mc_mean", "mc_stderr", "mc_ratio"):
            if kw[k] is not None:
                kw[k] = tuple(kw[k])
        rows.append(Row(solve=d.get("solve"), **kw))
    return ResultTable(axis=doc["axis"], K=doc["K"], rows=tuple(rows))


def _write(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from None
    return path


def emit(table: ResultTable, out_dir, formats=("csv", "json"), stem: str = "results") -> list:
    """Write the table as ``<stem>.csv`` and/or ``<stem>.json``; returns the paths."""
    out_dir = Path(out_dir)
    render = {"csv": to_csv, "json": to_json}
    unknown = [f for f in formats if f not in render]
    if unknown:
        raise ValueError(f"unknown format(s): {', '.join(unknown)}")
    return [_write(out_dir / f"{stem}.{fmt}", render[fmt](table)) for fmt in formats]


def _emit_trials(dump: dict, spec: ExperimentSpec, out_dir: Path) -> list:
    paths = []
    for (i, dep, solver), samples in sorted(dump.items()):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["trial"] + [f"sinr_{k}" for k in range(samples.shape[1])])
        for t, s in enumerate(samples):
            w.writerow([t] + [repr(float(x)) for x in s])
        paths.append(_write(out_dir / "trials" / f"{spec.axis}{i}_{dep}_{solver}.csv", buf.getvalue()))
    return paths


# ---------------------------------------------------------------- entry point


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="simulate",
        description="Run an IRS association sweep and write plot-ready tables.",
        epilog=f"Set {THREADS_ENV} to run axis points (or Monte-Carlo trials) on several threads.",
    )
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", metavar="FILE", help="experiment JSON file")
    src.add_argument("--preset", choices=PRESETS, help="built-in figure configuration")
    ap.add_argument("--out", metavar="DIR", help="output directory (overrides the file's 'output')")
    ap.add_argument("--mc-trials", type=int, metavar="T", help="Monte-Carlo trials; 0 disables the simulation")
    ap.add_argument("--seed", type=int, metavar="S", help="seed for Monte Carlo and random association")
    ap.add_argument(
        "--solver", action="append", metavar="NAME",
        help=f"solver(s) to run, repeatable or comma separated: {', '.join(SOLVERS)}",
    )
    ap.add_argument("--budget", type=int, metavar="B", help="largest codebook exhaustive search may enumerate")
    ap.add_argument("--format", choices=("csv", "json"), help="write only this format (default: both)")
    ap.add_argument("--dump-trials", action="store_true", help="also write per-trial Monte-Carlo SINRs")
    return ap


def _apply_overrides(spec: ExperimentSpec, args) -> ExperimentSpec:
    changes = {}
    if args.solver:
        names = [n.strip() for s in args.solver for n in s.split(",") if n.strip()]
        bad = [n for n in names if n not in SOLVERS]
        if bad or not names:
            raise ConfigurationError(f"--solver: expected names from {', '.join(SOLVERS)}, got {', '.join(bad) or 'nothing'}")
        changes["solvers"] = tuple(s for s in SOLVERS if s in names)
    mc = spec.mc
    if args.mc_trials is not None:
        if args.mc_trials < 0:
            raise ConfigurationError("--mc-trials must be >= 0")
        mc = None if args.mc_trials == 0 else replace(mc or McConfig(), trials=args.mc_trials)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigurationError("--seed must be >= 0")
        changes["random_seed"] = args.seed
        if mc is not None:
            mc = replace(mc, seed=args.seed)
    changes["mc"] = mc
    if args.budget is not None:
        if args.budget < 1:
            raise ConfigurationError("--budget must be >= 1")
        changes["budget"] = args.budget
    if args.out:
        changes["output"] = args.out
    return replace(spec, **changes)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec = load_preset(args.preset) if args.preset else load_spec(args.config)
        spec = _apply_overrides(spec, args)
        if not spec.output:
            raise ConfigurationError("no output directory: pass --out or set 'output'")
        dump = {} if args.dump_trials and spec.mc is not None else None
        table = run_experiment(spec, dump)
        formats = (args.format,) if args.format else ("csv", "json")
        paths = emit(table, spec.output, formats)
        if dump:
            paths += _emit_trials(dump, spec, Path(spec.output))
    except ConfigurationError as exc:
        print(f"simulate: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"simulate: error: {exc.strerror or exc}", file=sys.stderr)
        return 1
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
