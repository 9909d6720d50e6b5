"""Command-line front end: ``mv-mam <runfile> [--output-dir DIR] [--jobs N] [--set section.key=value ...]``.

Run files are TOML. Top-level keys are ``command``, ``initial_path`` and
``output_dir``; sections are ``[model]``, ``[solver]``, ``[sim]`` and the
command-specific ``[scan]``, ``[fixed_points]`` and ``[equipotentials]``.
Model parameters (``beta``, ``delta``, ...) sit directly in ``[model]`` and
are routed to the field or the interaction that declares them.

Exit codes: 0 success, 1 numerical failure or unwritable output, 2 bad
configuration.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np
import tomli

from . import __version__
from .amam import SolverConfig, build_initial_path, quasi_potential_scan, solve_mlp
from .equilibria import find_fixed_points, seed_grid
from .exceptions import ConfigurationError, MVMAMError, NumericalError
from .model import FIELDS, INTERACTIONS
from .models import build_model
from .particles import SimConfig, empirical_transition_stats, simulate_corresponding_sde, simulate_particles
from .skeleton import FlowFailure, equipotential_field, integrate_skeleton, uniform_grid

logger = logging.getLogger("mvmam")

COMMANDS = ("solve", "qp-scan", "equipotentials", "fixed-points", "simulate")
TOP_KEYS = {"command", "initial_path", "output_dir"}
MODEL_KEYS = {"field", "interaction", "x1", "x2", "fd_step"}
SOLVER_KEYS = {f.name for f in fields(SolverConfig)}
SIM_KEYS = {f.name for f in fields(SimConfig)} | {"record_stride", "target_radius"}
SECTION_DEFAULTS = {
    "scan": {"T_list": [5.0, 10.0, 20.0, 40.0], "warm_start": True},
    "fixed_points": {"seeds": None, "grid_lo": -1.5, "grid_hi": 1.5, "grid_n": 5, "tol": 1e-12, "max_iter": 100,
                     "anchor": None},
    "equipotentials": {"seeds": None, "grid_lo": -1.5, "grid_hi": 1.5, "grid_n": 5, "t_end": 1.0, "dt": 1e-3,
                       "anchor": None},
}
SIM_EXTRA_DEFAULTS = {"record_stride": 1, "target_radius": 0.1}
LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class RunFileError(ConfigurationError):
    """Configuration problem in a run file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class RunFile:
    command: str
    model: object
    solver: SolverConfig
    sim: SimConfig
    initial_path: str = "parabola"
    output_dir: str = "."
    record_stride: int = 1
    target_radius: float = 0.1
    scan: dict = field(default_factory=dict)
    fixed_points: dict = field(default_factory=dict)
    equipotentials: dict = field(default_factory=dict)

    def echo(self):
        """Fully-defaulted configuration, enough to reproduce the run."""
        return {
            "command": self.command,
            "initial_path": self.initial_path,
            "output_dir": self.output_dir,
            "model": self.model.describe(),
            "solver": self.solver.to_dict(),
            "sim": {**self.sim.to_dict(), "record_stride": self.record_stride, "target_radius": self.target_radius},
            "scan": self.scan,
            "fixed_points": self.fixed_points,
            "equipotentials": self.equipotentials,
        }


# -- parsing ----------------------------------------------------------------------

def _key_lines(text):
    """Map ``(section, key)`` to the line where it is defined."""
    out, section = {}, ""
    for no, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"^\[\s*([A-Za-z0-9_.-]+)\s*\]", s)
        if m:
            section = m.group(1)
            out.setdefault((section, None), no)
            continue
        m = re.match(r"^([A-Za-z0-9_-]+)\s*=", s)
        if m:
            out.setdefault((section, m.group(1)), no)
    return out


def _parse_value(raw):
    try:
        return tomli.loads(f"v = {raw}")["v"]
    except tomli.TOMLDecodeError:
        return raw


def apply_overrides(data, overrides):
    """Apply ``section.key=value`` (or top-level ``key=value``) strings; flags win."""
    for item in overrides or ():
        if "=" not in item:
            raise RunFileError(f"--set expects section.key=value, got {item!r}")
        target, raw = item.split("=", 1)
        parts = target.strip().split(".")
        if len(parts) > 2 or not all(parts):
            raise RunFileError(f"--set target must be key or section.key, got {target!r}")
        value = _parse_value(raw.strip())
        if len(parts) == 1:
            data[parts[0]] = value
        else:
            sec = data.setdefault(parts[0], {})
            if not isinstance(sec, dict):
                raise RunFileError(f"{parts[0]!r} is not a section")
            sec[parts[1]] = value
    return data


def parse_run_file(text, overrides=None, base_dir=None, output_dir=None) -> RunFile:
    """Parse and validate run-file text; raises :class:`RunFileError`."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise RunFileError(f"syntax error: {exc}", int(m.group(1)) if m else None) from None
    data = apply_overrides(data, overrides)
    if output_dir is not None:
        data["output_dir"] = output_dir
    lines = _key_lines(text)

    def where(section, key=None):
        return lines.get((section, key)) or lines.get((section, None))

    def fail(msg, section="", key=None):
        raise RunFileError(msg, where(section, key))

    for key, value in data.items():
        if isinstance(value, dict):
            if key not in {"model", "solver", "sim", *SECTION_DEFAULTS}:
                fail(f"unknown section [{key}]", key)
        elif key not in TOP_KEYS:
            fail(f"unknown key {key!r}", "", key)
    if "command" not in data:
        raise RunFileError("missing command")
    command = data["command"]
    if command not in COMMANDS:
        fail(f"unknown command {command!r}; expected one of {list(COMMANDS)}", "", "command")

    model = _parse_model(data.get("model", {}), fail)
    solver_sec = data.get("solver", {})
    for k in solver_sec:
        if k not in SOLVER_KEYS:
            fail(f"unknown key {k!r} in [solver]", "solver", k)
    try:
        solver = SolverConfig(**solver_sec)
    except (ConfigurationError, TypeError) as exc:
        fail(f"[solver]: {exc}", "solver")

    sim_sec = dict(data.get("sim", {}))
    for k in sim_sec:
        if k not in SIM_KEYS:
            fail(f"unknown key {k!r} in [sim]", "sim", k)
    extra = {k: sim_sec.pop(k, v) for k, v in SIM_EXTRA_DEFAULTS.items()}
    try:
        sim = SimConfig(**sim_sec)
    except (ConfigurationError, TypeError) as exc:
        fail(f"[sim]: {exc}", "sim")
    if not (isinstance(extra["record_stride"], int) and extra["record_stride"] >= 1):
        fail("record_stride must be an integer >= 1", "sim", "record_stride")
    if not extra["target_radius"] > 0:
        fail("target_radius must be > 0", "sim", "target_radius")

    sections = {}
    for name, defaults in SECTION_DEFAULTS.items():
        sec = data.get(name, {})
        for k in sec:
            if k not in defaults:
                fail(f"unknown key {k!r} in [{name}]", name, k)
        sections[name] = {**defaults, **sec}
    if not sections["scan"]["T_list"] or any(not (isinstance(T, (int, float)) and T > 0) for T in sections["scan"]["T_list"]):
        fail("T_list must be a non-empty list of positive numbers", "scan", "T_list")

    initial_path = str(data.get("initial_path", "parabola"))
    if initial_path not in ("parabola", "line"):
        p = Path(initial_path)
        if not p.is_absolute() and base_dir is not None:
            p = Path(base_dir) / p
        if not p.is_file():
            fail(f"initial path file {initial_path!r} does not exist", "", "initial_path")
        initial_path = str(p)
    elif initial_path == "parabola" and model.dim != 2 and command in ("solve", "qp-scan"):
        fail(f"initial_path 'parabola' needs a 2-D model, got dim = {model.dim}", "", "initial_path")

    return RunFile(
        command=command, model=model, solver=solver, sim=sim, initial_path=initial_path,
        output_dir=str(data.get("output_dir", ".")), record_stride=extra["record_stride"],
        target_radius=float(extra["target_radius"]), **sections,
    )


def _parse_model(sec, fail):
    sec = dict(sec)
    for k in ("field", "x1"):
        if k not in sec:
            fail(f"[model] is missing {k!r}", "model")
    field_kind = sec.pop("field")
    interaction_kind = sec.pop("interaction", "zero")
    if field_kind not in FIELDS:
        fail(f"unknown vector field {field_kind!r}; known: {sorted(FIELDS)}", "model", "field")
    if interaction_kind not in INTERACTIONS:
        fail(f"unknown interaction {interaction_kind!r}; known: {sorted(INTERACTIONS)}", "model", "interaction")
    x1, x2, fd_step = sec.pop("x1"), sec.pop("x2", None), sec.pop("fd_step", None)
    fparams, iparams = {}, {}
    fnames, inames = FIELDS[field_kind].params, INTERACTIONS[interaction_kind].params
    for k, v in sec.items():
        if k in fnames and k in inames:
            fail(f"parameter {k!r} is ambiguous between field and interaction", "model", k)
        if k in fnames:
            fparams[k] = v
        elif k in inames:
            iparams[k] = v
        else:
            fail(f"unknown key {k!r} in [model]", "model", k)
    try:
        return build_model(field_kind, fparams, interaction_kind, iparams, x1, x2, fd_step)
    except (MVMAMError, ValueError, TypeError) as exc:
        fail(f"[model]: {exc}", "model")


# -- output helpers -------------------------------------------------------------

def _num(x):
    return format(float(x), ".17g")


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else (str(v) if isinstance(v, (int, np.integer)) else _num(v))
                              for v in row) + "\n")


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o)}")


def _state_header(dim):
    return [f"x_{i + 1}" for i in range(dim)]


def _seeds(sec, dim):
    if sec["seeds"] is not None:
        return [np.asarray(s, dtype=float) for s in sec["seeds"]]
    return list(seed_grid(dim, sec["grid_lo"], sec["grid_hi"], sec["grid_n"]))


def _prepare_output(out):
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".mv-mam-write-test"
        probe.write_text("", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {str(out)!r} is not writable: {exc}") from exc


# -- commands ---------------------------------------------------------------------

def _cmd_solve(rf, out, jobs):
    p0 = build_initial_path(rf.initial_path, rf.model, rf.solver.N, rf.solver.T)
    rep = solve_mlp(rf.model, rf.solver, p0)
    p = rep.path
    rows = [[i, p.alpha[i], p.times[i], *p.states[i]] for i in range(p.N + 1)]
    write_csv(out / "path.csv", ["index", "alpha", "t", *_state_header(rf.model.dim)], rows)
    if not rep.converged:
        logger.warning("solver stopped without converging (%s)", rep.stop_reason)
    return {
        "action_value": rep.action_value,
        "iterations": rep.iterations,
        "converged": rep.converged,
        "stop_reason": rep.stop_reason,
        "restarts": rep.restarts,
        "residual_history": rep.residual_history,
        "action_history": rep.action_history,
    }


def _cmd_scan(rf, out, jobs):
    p0 = build_initial_path(rf.initial_path, rf.model, rf.solver.N, rf.solver.T)
    table = quasi_potential_scan(rf.model, rf.solver, rf.scan["T_list"], p0,
                                 warm_start=rf.scan["warm_start"], jobs=jobs)
    rows = [[r["T"], "" if r["min_action"] is None else _num(r["min_action"]), m,
             "true" if r["converged"] else "false", r["iterations"]]
            for r, m in zip(table.rows, table.running_min)]
    write_csv(out / "qp_scan.csv", ["T", "min_action", "running_min", "converged", "iterations"], rows)
    return {"rows": table.rows, "running_min": table.running_min, "quasi_potential": table.estimate}


def _cmd_equipotentials(rf, out, jobs):
    sec = rf.equipotentials
    anchor = rf.model.x1 if sec["anchor"] is None else np.asarray(sec["anchor"], dtype=float)
    seeds = _seeds(sec, rf.model.dim)
    trajs = equipotential_field(rf.model, anchor, seeds, sec["t_end"], sec["dt"])
    failures = []
    for k, tr in enumerate(trajs):
        if isinstance(tr, FlowFailure):
            failures.append({"seed_index": k, "error": str(tr.error)})
            continue
        rows = [[i, tr.grid[i], *tr.states[i]] for i in range(len(tr))]
        write_csv(out / f"equipotential_{k}.csv", ["index", "t", *_state_header(rf.model.dim)], rows)
    return {"n_seeds": len(seeds), "failures": failures}


def _cmd_fixed_points(rf, out, jobs):
    sec = rf.fixed_points
    anchor = rf.model.x1 if sec["anchor"] is None else np.asarray(sec["anchor"], dtype=float)
    seeds = _seeds(sec, rf.model.dim) + rf.model.field_fixed_points()
    fps = find_fixed_points(rf.model, anchor, seeds, tol=sec["tol"], max_iter=sec["max_iter"])
    doc = {"anchor": anchor.tolist(), "fixed_points": [fp.to_dict() for fp in fps]}
    write_json(out / "fixed_points.json", doc)
    return {"n_roots": len(fps), "kinds": [fp.kind for fp in fps]}


def _cmd_simulate(rf, out, jobs):
    cfg, dim = rf.sim, rf.model.dim
    snaps = simulate_particles(rf.model, cfg, rf.record_stride)
    rows = []
    for s, snap in enumerate(snaps):
        for i, x in enumerate(snap.positions):
            rows.append([s, snap.time, i, *x])
    write_csv(out / "snapshots.csv", ["snapshot", "t", "particle", *_state_header(dim)], rows)
    final = snaps[-1].positions
    skeleton = integrate_skeleton(rf.model, rf.model.x1, uniform_grid(cfg.t_end, cfg.dt))
    paths = simulate_corresponding_sde(rf.model, skeleton, cfg)
    frac, mean_hit = empirical_transition_stats(paths, rf.model.x2, rf.target_radius)
    stats = {
        "final_time": snaps[-1].time,
        "ensemble_mean": final.mean(axis=0).tolist(),
        "ensemble_cov": np.atleast_2d(np.cov(final, rowvar=False)).tolist() if final.shape[0] > 1 else None,
        "transition_fraction": frac,
        "mean_hit_time": mean_hit,
        "target": rf.model.x2.tolist(),
        "target_radius": rf.target_radius,
        "n_paths": cfg.n_paths,
    }
    write_json(out / "stats.json", stats)
    return {"n_snapshots": len(snaps), "transition_fraction": frac}


DISPATCH = {
    "solve": _cmd_solve,
    "qp-scan": _cmd_scan,
    "equipotentials": _cmd_equipotentials,
    "fixed-points": _cmd_fixed_points,
    "simulate": _cmd_simulate,
}


def run(runfile: RunFile, jobs=1):
    """Execute a parsed run file; returns the exit code."""
    out = Path(runfile.output_dir)
    try:
        _prepare_output(out)
    except OSError as exc:
        logger.error("%s", exc)
        return 1
    t0 = time.perf_counter()
    try:
        result = DISPATCH[runfile.command](runfile, out, jobs)
    except NumericalError as exc:
        logger.error("numerical failure: %s", exc)
        return 1
    except ConfigurationError as exc:
        logger.error("configuration error: %s", exc)
        return 2
    except OSError as exc:
        logger.error("%s", exc)
        return 1
    report = {
        **result,
        "command": runfile.command,
        "config": runfile.echo(),
        "version": __version__,
        "wall_time": time.perf_counter() - t0,
    }
    write_json(out / "report.json", report)
    logger.info("%s finished in %.2f s", runfile.command, report["wall_time"])
    return 0


def _setup_logging():
    level = os.environ.get("MV_MAM_LOG", "warn").strip().lower()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("mv-mam %(levelname)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(LOG_LEVELS.get(level, logging.WARNING))
    logger.propagate = False


def main(argv=None):
    _setup_logging()
    ap = argparse.ArgumentParser(prog="mv-mam", description="Most likely transition paths for McKean-Vlasov SDEs.")
    ap.add_argument("runfile")
    ap.add_argument("--output-dir")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    ap.add_argument("--version", action="version", version=f"mv-mam {__version__}")
    args = ap.parse_args(argv)
    if args.jobs < 1:
        print("mv-mam: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        text = Path(args.runfile).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"mv-mam: cannot read run file: {exc}", file=sys.stderr)
        return 2
    try:
        rf = parse_run_file(text, args.set, base_dir=Path(args.runfile).parent, output_dir=args.output_dir)
    except ConfigurationError as exc:
        print(f"mv-mam: {args.runfile}: {exc}", file=sys.stderr)
        return 2
    return run(rf, jobs=args.jobs)


if __name__ == "__main__":
    sys.exit(main())
