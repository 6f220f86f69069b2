"""ricci-lab command line.

Exit codes: 0 all checks pass / run complete, 1 a check failed or a step
failed, 2 invalid input (config, domain, initial data).
"""

import argparse
import csv
import hashlib
import io
import json
import os
import sys

import jsonschema
import numpy as np

from . import identities as ids
from . import ode, presets, structure
from .errors import BadInitialData, ConfigError, RicciLabError, StepFailure

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_INT3 = {"type": "integer", "minimum": 3}
_GRID = {
    "type": "object",
    "properties": {"lo": _NUM, "hi": _NUM, "count": {"type": "integer", "minimum": 2}},
    "required": ["lo", "hi", "count"],
    "additionalProperties": False,
}
_EXAMPLE_PARAMS = {
    "name": {"enum": list(presets.EXAMPLES)},
    "m": _POS, "R3": _POS, "lambda": _POS, "mu": _POS, "h": _NUM, "n": _INT3,
    "grid": _GRID, "tolerance": _POS,
}
_INTEGRATE = {
    "type": "object",
    "properties": {
        "preset": {"enum": ["sphere", "flat", "hyperbolic"]},
        "n": _INT3, "h": _NUM, "kappa0": _NUM, "a0": _NUM, "kappa": _NUM,
        "b0": _NUM, "bp_sign": {"enum": [1, -1]}, "f0": _NUM, "t0": _NUM,
        "lambda": _POS, "mu": _POS,
        "t_span": _POS, "dt": _POS,
    },
    "additionalProperties": False,
}
_STRUCTURE = {
    "type": "object",
    "properties": {
        "example": {"enum": list(presets.EXAMPLES)},
        "m": _POS, "R3": _POS, "lambda": _POS, "mu": _POS, "h": _NUM, "n": _INT3,
        "trajectory": {"type": "string"}, "kappa0": _NUM,
    },
    "additionalProperties": False,
}
_H_OVERRIDE = {
    "type": "object",
    "properties": {
        "preset": {"enum": [p.value for p in structure.Preset]},
        "constant": _NUM, "c": _NUM, "kappa": _NUM, "rho": _NUM, "mu": _NUM,
    },
    "additionalProperties": False,
}
SCHEMA = {
    "type": "object",
    "properties": {
        "example": {"type": "object", "properties": _EXAMPLE_PARAMS, "additionalProperties": False},
        "identities": {
            "type": "object",
            "properties": {
                "structure": _STRUCTURE,
                "h_override": _H_OVERRIDE,
                "suite": {"type": "array", "items": {"enum": list(ids.IDENTITY_IDS)}},
                "tolerances": {"type": "object", "additionalProperties": _POS},
                "grid": _GRID,
            },
            "required": ["structure", "suite"],
            "additionalProperties": False,
        },
        "integrate": _INTEGRATE,
        "sweep": {
            "type": "object",
            "properties": {
                "parameter": {"enum": sorted(_INTEGRATE["properties"])},
                "values": {"type": "array"},
                "inner": _INTEGRATE,
            },
            "required": ["parameter", "values", "inner"],
            "additionalProperties": False,
        },
        "tolerance": _POS,
        "seed": {"type": "integer"},
    },
    "additionalProperties": False,
}


# helpers ---------------------------------------------------------------------


def load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None
    return cfg


def config_hash(command, cfg, extra=None):
    payload = {"command": command, "config": cfg, "extra": extra or {}}
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(out_dir, name, text):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def _emit(out_dir, name, obj):
    text = dumps(obj)
    if out_dir is None:
        sys.stdout.write(text)
    else:
        _write(out_dir, name, text)


def _global_tolerance(cfg, default):
    if "tolerance" in cfg:
        return float(cfg["tolerance"])
    env = os.environ.get("RICCI_LAB_TOL")
    if env:
        try:
            tol = float(env)
        except ValueError:
            raise ConfigError(f"RICCI_LAB_TOL={env!r} is not a number") from None
        if not tol > 0:
            raise ConfigError("RICCI_LAB_TOL must be positive")
        return tol
    return default


def _check_grid(grid):
    if grid is not None and not grid["lo"] < grid["hi"]:
        raise ConfigError("grid needs lo < hi")


# verify-example ---------------------------------------------------------------


def cmd_verify_example(name, cfg, out_dir):
    block = dict(cfg.get("example", {}))
    if block.pop("name", name) != name:
        raise ConfigError("example name in config does not match the command line")
    tol = float(block.pop("tolerance", _global_tolerance(cfg, presets.GOLDEN_TOL)))
    _check_grid(block.get("grid"))
    try:
        ex = presets.build_example(name, **block)
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from None
    samples = []
    dev = {}
    for t in ex.grid:
        t = float(t)
        golden = ex.golden(t)
        computed = ex.computed(t)
        for k, v in golden.items():
            dev[k] = max(dev.get(k, 0.0), abs(computed[k] - v))
        for k in ("einstein_residual", "trace_residual", "trace_form_residual"):
            if k in computed:
                dev[k] = max(dev.get(k, 0.0), abs(computed[k]))
        samples.append({"t": t, "computed": computed, "golden": golden})
    checks = {k: {"max_abs_deviation": v, "pass": bool(v <= tol)} for k, v in sorted(dev.items())}
    s_all = [smp["computed"]["s"] for smp in samples]
    report = {
        "command": "verify-example",
        "example": name,
        "params": ex.params,
        "config_sha256": config_hash("verify-example", cfg, {"name": name}),
        "tolerance": tol,
        "grid": {"lo": float(ex.grid[0]), "hi": float(ex.grid[-1]), "count": int(ex.grid.size)},
        "s_max_abs": float(max(map(abs, s_all))),
        "s_min": float(min(s_all)),
        "s_max": float(max(s_all)),
        "checks": checks,
        "pass": all(c["pass"] for c in checks.values()),
        "samples": samples,
    }
    _emit(out_dir, f"verify_{name}.json", report)
    return 0 if report["pass"] else 1


# identities -----------------------------------------------------------------------


def _h_override(spec):
    if "constant" in spec:
        return structure.ConstantH(float(spec["constant"]))
    if "preset" not in spec:
        raise ConfigError("h_override needs 'preset' or 'constant'")
    kw = {k: v for k, v in spec.items() if k != "preset"}
    return structure.PresetH(spec["preset"], **kw)


def trajectory_from_csv(path, n, h, kappa0=1.0):
    try:
        with open(path) as fh:
            header = fh.readline().strip()
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read trajectory {path}: {exc}") from None
    if header != ode.CSV_HEADER:
        raise ConfigError(f"trajectory {path} does not have the expected header")
    params = ode.OdeParams(n, h, kappa0)
    states = [ode.OdeState(*map(float, row[:5])) for row in data]
    if len(states) < 6:
        raise ConfigError("trajectory needs at least 6 states")
    traj = ode.OdeTrajectory(params, float(states[1].t - states[0].t), (), (), ())
    return traj.with_states(states)


def _resolve_structure(spec):
    spec = dict(spec)
    if "trajectory" in spec:
        for key in ("n", "h"):
            if key not in spec:
                raise ConfigError(f"trajectory structure needs '{key}'")
        traj = trajectory_from_csv(spec["trajectory"], spec["n"], float(spec["h"]),
                                   float(spec.get("kappa0", 1.0)))
        ets = ode.trajectory_structure(traj)
        return ets, np.array(ode.sample_nodes(traj, count=min(64, len(traj) - 6)))
    name = spec.pop("example", None)
    if name is None:
        raise ConfigError("structure needs 'example' or 'trajectory'")
    spec.pop("kappa0", None)
    try:
        ex = presets.build_example(name, **spec)
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from None
    return ex.ets, ex.grid


def cmd_identities(cfg, out_dir):
    block = cfg.get("identities")
    if block is None:
        raise ConfigError("config has no 'identities' block")
    ets, grid = _resolve_structure(block["structure"])
    if "h_override" in block:
        ets = ets.with_h(_h_override(block["h_override"]))
    if "grid" in block:
        _check_grid(block["grid"])
        g = block["grid"]
        grid = np.linspace(g["lo"], g["hi"], g["count"])
    tolerances = dict(block.get("tolerances", {}))
    if "tolerance" in cfg or os.environ.get("RICCI_LAB_TOL"):
        base = _global_tolerance(cfg, None)
        for i in block["suite"]:
            tolerances.setdefault(i, base)
    entries = ids.run_suite(block["suite"], ets, grid, tolerances)
    failed = [e.identity_id for e in entries if e.status == "FAIL"]
    report = {
        "command": "identities",
        "config_sha256": config_hash("identities", cfg),
        "tolerances": {e.identity_id: e.report.tolerance for e in entries if e.report},
        "results": [e.to_dict() for e in entries],
        "summary": {s: sum(e.status == s for e in entries) for s in ("PASS", "FAIL", "SKIP")},
        "pass": not failed,
    }
    _emit(out_dir, "identities.json", report)
    if out_dir is not None:
        for e in entries:
            if e.report is not None:
                _write(out_dir, f"identity_{e.identity_id}.json", dumps(e.report.to_dict()))
    return 1 if failed else 0


# integrate / sweep ------------------------------------------------------------------


def build_initial(block):
    """(initial state, params, t_span, dt) from an integrate block."""
    b = dict(block)
    t_span = float(b.pop("t_span", 1.0))
    dt = float(b.pop("dt", ode.DT))
    preset = b.pop("preset", None)
    n = int(b.pop("n", 3))
    try:
        if preset is not None:
            t0 = float(b.pop("t0", 0.3))
            if preset == "sphere":
                fam = ode.sphere_family(n, float(b.pop("lambda", 2.0)), float(b.pop("h", 2.0)))
            elif preset == "hyperbolic":
                fam = ode.hyperbolic_family(n, float(b.pop("mu", 2.0)), float(b.pop("h", 2.0)))
            else:
                fam = ode.flat_family(n, float(b.pop("f0", 1.0)))
            if b:
                raise ConfigError(f"parameters {sorted(b)} do not apply to preset {preset}")
            return fam.initial_state(t0), fam.params(), t_span, dt
        for key in ("h", "a0"):
            if key not in b:
                raise ConfigError(f"integrate block needs '{key}' (or a 'preset')")
        for key in ("lambda", "mu"):
            if key in b:
                raise ConfigError(f"'{key}' only applies to a preset")
        st, params = ode.synthesize_initial_state(
            n, float(b["h"]), float(b["a0"]), kappa=b.get("kappa"),
            b0=float(b.get("b0", 1.0)), bp_sign=int(b.get("bp_sign", 1)),
            kappa0=float(b.get("kappa0", 1.0)), t0=float(b.get("t0", 0.0)),
            f0=float(b.get("f0", 1.0)))
        return st, params, t_span, dt
    except BadInitialData:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def run_integration(block):
    st, params, t_span, dt = build_initial(block)
    try:
        traj = ode.integrate(st, params, t_span, dt)
    except BadInitialData:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return traj, ode.classify(traj), ode.first_integrals(traj)


def cmd_integrate(cfg, out_dir):
    block = cfg.get("integrate")
    if block is None:
        raise ConfigError("config has no 'integrate' block")
    traj, cls, fi = run_integration(block)
    _write(out_dir, "trajectory.csv", traj.to_csv())
    _write(out_dir, "events.json", traj.events_json())
    report = {
        "command": "integrate",
        "config_sha256": config_hash("integrate", cfg),
        "params": traj.params.to_dict(),
        "dt": traj.dt,
        "tolerances": {"a0_tol": ode.A0_TOL, "fit_tol": ode.FIT_TOL, "s_tol": ode.S_TOL,
                       "b_min_guard": traj.params.b_min_guard, "f_guard": traj.params.f_guard,
                       "curvature_rate_max": ode.CURV_RATE_MAX,
                       "f_rate_max": ode.F_RATE_MAX, "rate_growth": ode.RATE_GROWTH},
        "n_states": len(traj),
        "status": traj.status,
        "classification": cls.to_dict(),
        "first_integrals": fi.to_dict(),
    }
    _write(out_dir, "classification.json", dumps(report))
    sys.stdout.write(f"{cls.label.value}: {cls.reason}\n")
    return 0


SWEEP_HEADER = ["index", "parameter", "value", "label", "reason", "status", "t_end",
                "n_states", "a0_drift", "kappa_drift", "f2s_drift", "error"]


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def sweep_row(index, param, value, inner):
    block = dict(inner)
    block[param] = value
    row = {"index": index, "parameter": param, "value": value}
    try:
        traj, cls, fi = run_integration(block)
    except (RicciLabError, ValueError, TypeError) as exc:
        row.update(label="", reason="", status="ERROR", t_end="", n_states=0,
                   a0_drift="", kappa_drift="", f2s_drift="",
                   error=f"{type(exc).__name__}: {exc}")
        return row
    row.update(label=cls.label.value, reason=cls.reason, status=traj.status,
               t_end=float(traj.t[-1]), n_states=len(traj), a0_drift=fi.drifts["a0"],
               kappa_drift=fi.drifts["kappa"], f2s_drift=fi.drifts["f2s"], error="")
    return row


def cmd_sweep(cfg, out_dir):
    block = cfg.get("sweep")
    if block is None:
        raise ConfigError("config has no 'sweep' block")
    rows = [sweep_row(i, block["parameter"], v, block["inner"])
            for i, v in enumerate(block["values"])]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([_fmt(r[k]) for k in SWEEP_HEADER])
    _write(out_dir, "sweep.csv", buf.getvalue())
    report = {
        "command": "sweep",
        "config_sha256": config_hash("sweep", cfg),
        "tolerances": {"a0_tol": ode.A0_TOL, "fit_tol": ode.FIT_TOL, "s_tol": ode.S_TOL},
        "rows": rows,
    }
    _write(out_dir, "sweep.json", dumps(report))
    for r in rows:
        sys.stdout.write(f"{r['parameter']}={_fmt(r['value'])}: {r['label'] or r['error']}\n")
    return 0


# entry point --------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="ricci-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify-example", help="golden-value check of a named example")
    v.add_argument("name", choices=presets.EXAMPLES)
    v.add_argument("--config")
    v.add_argument("--out", help="directory for the JSON report (default: stdout)")
    i = sub.add_parser("identities", help="run an identity suite")
    i.add_argument("--config", required=True)
    i.add_argument("--out", help="directory for the JSON reports (default: stdout)")
    for name, text in (("integrate", "integrate System A and classify"),
                       ("sweep", "parameter sweep of integrations")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = load_config(args.config)
        if args.command == "verify-example":
            return cmd_verify_example(args.name, cfg, args.out)
        if args.command == "identities":
            return cmd_identities(cfg, args.out)
        if args.command == "integrate":
            return cmd_integrate(cfg, args.out)
        return cmd_sweep(cfg, args.out)
    except StepFailure as exc:
        sys.stderr.write(f"ricci-lab: step failure: {exc}\n")
        return 1
    except (RicciLabError, ValueError, KeyError) as exc:
        sys.stderr.write(f"ricci-lab: invalid input: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
