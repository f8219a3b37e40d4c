"""Command-line front end.

Every subcommand reads one JSON configuration file and writes a CSV or JSON
report to ``--out`` (format chosen by the file suffix) or to standard output.

Exit codes: 0 when the run passes or completes, 1 when a residual or
acceptance check fails (the report is still written), 2 for an invalid
configuration.

Usage::

    sktlab verify-determining --config case12.json --out case12.csv
    sktlab scenario --config fig1.json
    sktlab list-catalog
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .catalog.ansatz import AnsatzRow
from .catalog.families import FamilyTag, SolutionFamily, paired_operators
from .catalog.operators import OperatorKind, SymmetryOperator
from .errors import ConfigError, SktError
from .model import CASES, PARAM_NAMES, SktParams, TransformId, validate_params
from .solver import (
    BoundarySpec,
    ConstantSolution,
    FieldState,
    Grid1D,
    TimeSpec,
    asymptotic_probe,
    convergence_study,
    initial_state,
    integrate,
)
from .verify.conservation import ConservedWeight, conservation_check
from .verify.determining import determining_residual
from .verify.pde import invariant_surface_residual, verify_family
from .verify.reduced import ReducedContext, ReducedSystemId, family_profiles, reduced_ode_residual, reduction_consistency
from .verify.report import CSV_COLUMNS, ResidualReport, SamplingSpec, fmt17

__all__ = ["main", "run_command", "COMMANDS", "SCHEMAS", "validate_config"]

# -- configuration schema ---------------------------------------------------

NUM = "number"
INT = "integer"
STR = "string"
BOOL = "boolean"
ANY_NUMS = "number map"

PARAMS = {k: NUM for k in PARAM_NAMES}
RANGE = [NUM]
SAMPLING = {"t_range": RANGE, "x_range": RANGE, "u_range": RANGE, "v_range": RANGE, "n": INT, "seed": INT}
FAMILY = {k: NUM for k in ("C1", "C2", "C3", "C4", "x0", "alpha", "alpha1", "alpha2", "K", "a3", "d3",
                           "a1", "b2", "d1", "d2")}
FAMILY.update(tag=STR, params=PARAMS, sign=INT)
CONSTANTS = {"alpha": NUM, "alpha0": NUM, "alpha1": NUM, "alpha2": NUM}
OPERATOR = dict(CONSTANTS, kind=STR, params=PARAMS)
GRID = {"x_min": NUM, "x_max": NUM, "n": INT}
TIME = {"t_end": NUM, "cfl_factor": NUM, "max_steps": INT, "blowup_threshold": NUM, "store_every": INT}
BOUNDARY = {"kind": STR, "family": FAMILY, "ua": NUM, "ub": NUM, "va": NUM, "vb": NUM, "first_order": BOOL}
INITIAL = {"family": FAMILY, "constant": [NUM], "u": [NUM], "v": [NUM]}
RUN = {"params": PARAMS, "grid": GRID, "time": TIME, "boundary": BOUNDARY, "initial": INITIAL}

SCHEMAS = {
    "verify-determining": {"case": INT, "operator": STR, "params": ANY_NUMS, "draws": INT, "seed": INT,
                           "constants": CONSTANTS, "sampling": SAMPLING, "tolerance": NUM, "metric": STR},
    "verify-solution": {"family": FAMILY, "sampling": SAMPLING, "tolerance": NUM},
    "verify-surface": {"family": FAMILY, "operator": OPERATOR, "sampling": SAMPLING, "tolerance": NUM},
    "verify-ode": {"system": STR, "family": FAMILY, "row": STR, "params": PARAMS, "constants": CONSTANTS,
                   "x_range": RANGE, "n": INT, "seed": INT, "tolerance": NUM},
    "simulate": RUN,
    "converge": {"family": FAMILY, "grids": [INT], "x_range": RANGE, "t_end": NUM, "cfl_factor": NUM,
                 "first_order_boundary": BOOL, "order_range": RANGE, "constant": [NUM], "params": PARAMS},
    "scenario": {"family": FAMILY, "T": NUM, "x_range": RANGE, "n_x": INT, "n_t": INT},
    "conserve": dict(RUN, weights=[{"species": STR, "sign": INT}], tolerance=NUM),
    "list-catalog": {},
}

REQUIRED = {
    "verify-determining": ("case",),
    "verify-solution": ("family",),
    "verify-surface": ("family",),
    "verify-ode": (),
    "simulate": ("params", "grid", "time", "boundary", "initial"),
    "converge": ("grids", "t_end"),
    "scenario": ("family", "T"),
    "conserve": ("params", "grid", "time", "boundary", "initial"),
    "list-catalog": (),
}


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _check(value, spec, path: str):
    if isinstance(spec, dict):
        if not isinstance(value, dict):
            raise ConfigError(f"{path}: expected an object")
        for k, v in value.items():
            if k not in spec:
                raise ConfigError(f"{path}.{k}: unknown key")
            _check(v, spec[k], f"{path}.{k}")
    elif isinstance(spec, list):
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list")
        for i, v in enumerate(value):
            _check(v, spec[0], f"{path}[{i}]")
    elif spec == NUM and not _is_num(value):
        raise ConfigError(f"{path}: expected a number")
    elif spec == INT and not (isinstance(value, int) and not isinstance(value, bool)):
        raise ConfigError(f"{path}: expected an integer")
    elif spec == STR and not isinstance(value, str):
        raise ConfigError(f"{path}: expected a string")
    elif spec == BOOL and not isinstance(value, bool):
        raise ConfigError(f"{path}: expected true or false")
    elif spec == ANY_NUMS:
        if not isinstance(value, dict):
            raise ConfigError(f"{path}: expected an object")
        for k, v in value.items():
            if not _is_num(v):
                raise ConfigError(f"{path}.{k}: expected a number")


def validate_config(command: str, config) -> dict:
    """Check a configuration against the command's schema.

    Raises
    ------
    ConfigError
        With a message naming the offending key path (rooted at ``config``).
    """
    _check(config, SCHEMAS[command], "config")
    for k in REQUIRED[command]:
        if k not in config:
            raise ConfigError(f"config.{k}: required key missing")
    return config


# -- builders --------------------------------------------------------------


def _params(data, path) -> SktParams:
    p = SktParams.from_dict(data)
    check = validate_params(p)
    if not check.ok:
        raise ConfigError(f"{path}: parameters violate the restrictions: {'; '.join(check.violations)}")
    return p


def _family(data, path) -> SolutionFamily:
    try:
        return SolutionFamily.from_dict(data)
    except SktError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _sampling(cfg, default_n) -> SamplingSpec:
    data = dict(cfg.get("sampling", {}))
    data.setdefault("n", default_n)
    try:
        return SamplingSpec.from_dict(data)
    except ValueError as exc:
        raise ConfigError(f"config.sampling: {exc}") from None


def _range(cfg, key, default):
    r = cfg.get(key, default)
    if len(r) != 2 or not r[0] < r[1]:
        raise ConfigError(f"config.{key}: expected [lo, hi] with lo < hi")
    return float(r[0]), float(r[1])


def _initial(data, grid: Grid1D) -> FieldState:
    keys = set(data)
    if keys == {"family"}:
        return initial_state(_family(data["family"], "config.initial.family"), grid)
    if keys == {"constant"}:
        if len(data["constant"]) != 2:
            raise ConfigError("config.initial.constant: expected [u0, v0]")
        u0, v0 = data["constant"]
        return FieldState(0.0, np.full(grid.n, float(u0)), np.full(grid.n, float(v0)))
    if keys == {"u", "v"}:
        if len(data["u"]) != grid.n or len(data["v"]) != grid.n:
            raise ConfigError(f"config.initial: u and v need {grid.n} entries")
        return FieldState(0.0, data["u"], data["v"])
    raise ConfigError("config.initial: give exactly one of family, constant, or u with v")


def _run_inputs(cfg):
    p = _params(cfg["params"], "config.params")
    try:
        grid = Grid1D(**cfg["grid"])
        ts = TimeSpec(**cfg["time"])
    except TypeError as exc:
        raise ConfigError(f"config: {exc}") from None
    bd = dict(cfg["boundary"])
    if "family" in bd:
        bd["family"] = _family(bd["family"], "config.boundary.family")
    try:
        bc = BoundarySpec(**bd)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config.boundary: {exc}") from None
    return p, _initial(cfg["initial"], grid), bc, ts, grid


# -- output ----------------------------------------------------------------


def _reports_csv(reports: list[ResidualReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("report",) + CSV_COLUMNS)
    for r in reports:
        for row in csv.reader(io.StringIO(r.to_csv())):
            if row and row[0] != "equation_id":
                w.writerow([r.name] + row)
    return buf.getvalue()


def _dump(obj) -> str:
    from .verify.report import _jsonable

    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _emit(out, csv_text: str | None, json_obj):
    """Write CSV or JSON to ``out`` by suffix; JSON-only results always go as JSON."""
    if out is None:
        sys.stdout.write(csv_text if csv_text is not None else _dump(json_obj))
        return
    path = Path(out)
    text = _dump(json_obj) if csv_text is None or path.suffix.lower() == ".json" else csv_text
    path.write_text(text, newline="\n")


# -- commands --------------------------------------------------------------


def _cmd_verify_determining(cfg, out):
    try:
        entry = CASES[cfg["case"]]
    except KeyError:
        raise ConfigError(f"config.case: unknown case {cfg['case']!r}; expected 1..12") from None
    ops = [cfg["operator"]] if "operator" in cfg else list(entry.operators)
    for k in ops:
        if k not in entry.operators:
            raise ConfigError(f"config.operator: {k!r} is not listed for case {entry.case_id}")
    consts = {"alpha": 0.5, "alpha0": 0.5, "alpha1": 0.3, "alpha2": -0.2}
    consts.update(cfg.get("constants", {}))
    rng = np.random.default_rng(cfg.get("seed", 0))
    if "params" in cfg:
        try:
            systems = [entry.params(**cfg["params"])]
        except SktError as exc:
            raise ConfigError(f"config.params: {exc}") from None
    else:
        systems = [entry.draw(rng) for _ in range(cfg.get("draws", 3))]
    spec = _sampling(cfg, 100)
    metric = cfg.get("metric", "abs")
    if metric not in ("abs", "scaled"):
        raise ConfigError("config.metric: expected 'abs' or 'scaled'")
    reports = []
    for p in systems:
        for k in ops:
            op = SymmetryOperator(k, p, **consts)
            reports.append(determining_residual(entry, op, spec, cfg.get("tolerance", 1e-9), metric))
    _emit(out, _reports_csv(reports), [r.to_dict() for r in reports])
    return 0 if all(r.passed for r in reports) else 1


def _cmd_verify_solution(cfg, out):
    fam = _family(cfg["family"], "config.family")
    r = verify_family(fam.params, fam, _sampling(cfg, 200), cfg.get("tolerance", 1e-8))
    _emit(out, _reports_csv([r]), [r.to_dict()])
    return 0 if r.passed else 1


def _cmd_verify_surface(cfg, out):
    fam = _family(cfg["family"], "config.family")
    if "operator" in cfg:
        od = dict(cfg["operator"])
        od.setdefault("params", fam.params.to_dict())
        try:
            pairs = [(SymmetryOperator.from_dict(od), fam)]
        except SktError as exc:
            raise ConfigError(f"config.operator: {exc}") from None
    else:
        pairs = paired_operators(fam)
    spec = _sampling(cfg, 200)
    reports = [invariant_surface_residual(op, sol, spec, cfg.get("tolerance", 1e-8)) for op, sol in pairs]
    _emit(out, _reports_csv(reports), [r.to_dict() for r in reports])
    return 0 if all(r.passed for r in reports) else 1


def _cmd_verify_ode(cfg, out):
    tol = cfg.get("tolerance", 1e-8)
    if ("family" in cfg) == ("row" in cfg):
        raise ConfigError("config: give exactly one of family or row")
    if "family" in cfg:
        fam = _family(cfg["family"], "config.family")
        sid, prof, ctx = family_profiles(fam, cfg.get("constants", {}).get("alpha0", 1.0))
        if "system" in cfg and cfg["system"] != sid.value:
            raise ConfigError(f"config.system: the {fam.tag.value} profiles solve {sid.value}, not {cfg['system']}")
        lo, hi = _range(cfg, "x_range", [-2.0, 2.0])
        r = reduced_ode_residual(sid, prof, np.linspace(lo, hi, cfg.get("n", 201)), ctx, tol)
    else:
        try:
            row = AnsatzRow(cfg["row"])
            system = ReducedSystemId(cfg["system"]) if "system" in cfg else None
        except ValueError as exc:
            raise ConfigError(f"config: {exc}") from None
        if "params" not in cfg:
            raise ConfigError("config.params: required with row")
        ctx = ReducedContext(_params(cfg["params"], "config.params"), **cfg.get("constants", {}))
        r = reduction_consistency(row, ctx, cfg.get("n", 200), cfg.get("seed", 0), system, tol)
    _emit(out, _reports_csv([r]), [r.to_dict()])
    return 0 if r.passed else 1


def _cmd_simulate(cfg, out):
    p, init, bc, ts, grid = _run_inputs(cfg)
    traj = integrate(p, init, bc, ts, grid)
    if out is None:
        sys.stdout.write(traj.to_csv())
    else:
        path = Path(out)
        path.write_text(traj.to_csv(), newline="\n")
        path.with_suffix(".json").write_text(traj.to_json() + "\n", newline="\n")
    return 0


def _cmd_converge(cfg, out):
    lo, hi = _range(cfg, "x_range", [-3.0, 3.0])
    grids = [Grid1D(lo, hi, n) for n in cfg["grids"]]
    if "family" in cfg:
        if "constant" in cfg:
            raise ConfigError("config: give either family or constant")
        fam = _family(cfg["family"], "config.family")
        p = fam.params
    else:
        if "constant" not in cfg or "params" not in cfg:
            raise ConfigError("config: give family, or constant with params")
        p = _params(cfg["params"], "config.params")
        fam = ConstantSolution(*cfg["constant"])
    rep = convergence_study(p, fam, grids, cfg["t_end"], cfg.get("cfl_factor", 0.2),
                            cfg.get("first_order_boundary", False))
    olo, ohi = _range(cfg, "order_range", [1.8, 2.2])
    _emit(out, rep.to_csv(), rep.to_dict())
    return 0 if rep.exact or rep.order_in(olo, ohi) else 1


def _cmd_scenario(cfg, out):
    fam = _family(cfg["family"], "config.family")
    if fam.tag is not FamilyTag.CASE1_EXPLICIT30:
        raise ConfigError("config.family: scenario needs a Case1_Explicit30 family")
    rep = asymptotic_probe(fam.params, fam, cfg["T"], _range(cfg, "x_range", [-3.0, 3.0]),
                           cfg.get("n_x", 121), cfg.get("n_t", 41))
    _emit(out, None, rep.to_dict())
    return 0 if rep.agrees else 1


def _cmd_conserve(cfg, out):
    p, init, bc, ts, grid = _run_inputs(cfg)
    weights = cfg.get("weights", [{"species": "u", "sign": 1}, {"species": "u", "sign": -1}])
    ws = []
    for i, w in enumerate(weights):
        try:
            ws.append(ConservedWeight(w.get("species", "u"), w.get("sign", 1), p))
        except SktError as exc:
            raise ConfigError(f"config.weights[{i}]: {exc}") from None
    traj = integrate(p, init, bc, ts, grid)
    results = []
    for w in ws:
        r = conservation_check(p, traj, w)
        results.append({"species": w.species, "sign": w.sign, "max_defect": r.max_defect,
                        "intervals": len(r.defects)})
    tol = cfg.get("tolerance")
    ok = tol is None or all(r["max_defect"] <= tol for r in results)
    _emit(out, None, {"termination": traj.termination.value, "tolerance": tol, "pass": ok, "weights": results})
    return 0 if ok else 1


def _cmd_list_catalog(cfg, out):
    data = {
        "cases": [{"case": e.case_id, "free": list(e.free), "operators": list(e.operators)}
                  for e in CASES.values()],
        "families": [t.value for t in FamilyTag],
        "operators": [k.value for k in OperatorKind],
        "transforms": [t.value for t in TransformId],
        "reduced_systems": [s.value for s in ReducedSystemId],
    }
    _emit(out, None, data)
    return 0


COMMANDS = {
    "verify-determining": _cmd_verify_determining,
    "verify-solution": _cmd_verify_solution,
    "verify-surface": _cmd_verify_surface,
    "verify-ode": _cmd_verify_ode,
    "simulate": _cmd_simulate,
    "converge": _cmd_converge,
    "scenario": _cmd_scenario,
    "conserve": _cmd_conserve,
    "list-catalog": _cmd_list_catalog,
}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sktlab", description="Verification and simulation for the SKT system.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=name != "list-catalog", help="JSON configuration file")
        sp.add_argument("--out", help="output file (.csv or .json); standard output if omitted")
    return ap


def run_command(argv) -> int:
    """Run one subcommand and return its exit code."""
    try:
        args = _parser().parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = {}
        if args.config is not None:
            try:
                cfg = json.loads(Path(args.config).read_text())
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from None
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
        validate_config(args.command, cfg)
        return COMMANDS[args.command](cfg, args.out)
    except SktError as exc:
        print(f"sktlab {args.command}: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
