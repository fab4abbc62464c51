"""Command-line front end.

Exit status: 0 success, 1 a ``--verify`` check failed, 2 bad input,
3 numerical failure (the error class name is printed on stderr).
Output files are written only after the computation has succeeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import errors
from .analysis import liouville_check, wronskian
from .eigen import fundamental_eigen, right_eigenpairs
from .engine import (IVP, LinearQDE, fundamental_constant, fundamental_numeric,
                     fundamental_split, second_order_reduce, solve_ivp)
from .presets import PRESETS, run_preset
from .qmatrix import QMat, QVec, ddet, expm, expm_series
from .quat import Quat, format_quat

log = logging.getLogger("qde")

DIGITS = 17

NUMERIC_ERRORS = (errors.ConditionViolated, errors.DefectiveMatrix, errors.SingularMatrix,
                  errors.SplitRejected, errors.ConvergenceError, errors.ResidualTooLarge,
                  errors.NotASolution)
INPUT_ERRORS = (errors.ParseError, errors.DimensionMismatch, errors.DomainError,
                errors.StructureError, OSError, KeyError, ValueError, json.JSONDecodeError)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# builtin time-varying coefficient families for scenario files

def _diag_cos(t):
    c = math.cos(t)
    return QMat([[Quat(0, c), 0], [0, Quat(0, 0, c)]])


def _mixed(t):
    return QMat([[Quat(0.1 * t, 1), 1], [Quat(0, 0, -t), Quat(0, 0, 0, math.cos(t))]])


def _builtin_family(name: str, interval) -> LinearQDE:
    if name == "diag-cos":
        return LinearQDE(2, _diag_cos, interval, name)
    if name == "mixed":
        return LinearQDE(2, _mixed, interval, name)
    if name == "oscillator":
        return second_order_reduce(lambda t: 0.0, lambda t: 1.0, interval)
    raise KeyError(f"unknown builtin coefficient family {name!r} "
                   "(choose diag-cos, mixed, oscillator)")


# ---------------------------------------------------------------------------
# input helpers

def load_matrix(source: str) -> QMat:
    """Inline text, a text file (one row per line) or a JSON file."""
    path = Path(source)
    if "," not in source and ";" not in source and path.suffix and path.exists():
        text = path.read_text()
        if path.suffix == ".json":
            return QMat.from_json(text)
        return QMat.parse(text)
    return QMat.parse(source)


def _matrix_value(value) -> QMat:
    if isinstance(value, str):
        return QMat.parse(value)
    if isinstance(value, dict):
        return QMat.from_json(value)
    return QMat([[Quat.coerce(v) for v in row] for row in value])


def _vector_value(value) -> QVec:
    if isinstance(value, str):
        return QVec.parse(value)
    return QVec([Quat.coerce(v) for v in value])


def load_scenario(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("scenario file must hold a JSON object")
    t0 = float(data.get("t0", 0.0))
    t_end = float(data.get("t_end", t0 + 1.0))
    interval = (min(t0, t_end), max(t0, t_end))
    if "A" in data:
        a = _matrix_value(data["A"])
        qde = LinearQDE.constant(a, interval, "scenario")
    elif "A_t" in data:
        a = None
        qde = _builtin_family(data["A_t"], interval)
    else:
        raise ValueError("scenario needs either 'A' or 'A_t'")
    if "dim" in data and int(data["dim"]) != qde.dim:
        raise errors.DimensionMismatch(f"scenario dim {data['dim']} != coefficient dim {qde.dim}")
    x0 = _vector_value(data["x0"]) if "x0" in data else None
    return {"qde": qde, "A": a, "t0": t0, "t_end": t_end, "x0": x0,
            "steps": data.get("steps"), "method": data.get("method", "auto")}


def _system_from_args(args, need_constant=False) -> dict:
    if args.scenario:
        sc = load_scenario(args.scenario)
        if args.t0 is not None:
            sc["t0"] = args.t0
        if args.t1 is not None:
            sc["t_end"] = args.t1
        if getattr(args, "x0", None):
            sc["x0"] = QVec.parse(args.x0)
        if args.steps is not None:
            sc["steps"] = args.steps
        if getattr(args, "method", None) not in (None, "auto"):
            sc["method"] = args.method
    elif args.matrix:
        a = load_matrix(args.matrix)
        t0 = 0.0 if args.t0 is None else args.t0
        t_end = t0 + 1.0 if args.t1 is None else args.t1
        interval = (min(t0, t_end), max(t0, t_end))
        sc = {"qde": LinearQDE.constant(a, interval, "cli"), "A": a, "t0": t0,
              "t_end": t_end, "x0": QVec.parse(args.x0) if getattr(args, "x0", None) else None,
              "steps": args.steps, "method": getattr(args, "method", None) or "auto"}
    else:
        raise UsageError("give --matrix or --scenario")
    if need_constant and sc["A"] is None:
        raise UsageError("this command needs a constant coefficient matrix")
    return sc


# ---------------------------------------------------------------------------
# formatting

def _num(v: float) -> str:
    return f"{v + 0.0:.{DIGITS}g}"


def _matrix_out(m: QMat, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(m.to_json()) + "\n"
    return m.to_text(digits=DIGITS)


def trajectory_csv(ts, states) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    n = states.shape[1]
    header = ["t"] + [f"x{i + 1}_{c}" for i in range(n) for c in "wxyz"]
    w.writerow(header)
    for t, x in zip(ts, states):
        w.writerow([_num(t)] + [_num(v) for v in x.reshape(-1)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands; each returns (text, verify_ok)

def cmd_exp(args):
    a = load_matrix(args.matrix) if args.matrix else _system_from_args(args, True)["A"]
    t = 1.0 if args.t is None else args.t
    m = expm_series(a, t) if args.method == "series" else expm(a, t)
    return _matrix_out(m, args.format), True


def _build_fundamental(sc, method: str):
    qde, a, t0 = sc["qde"], sc["A"], sc["t0"]
    if method == "numeric" or a is None:
        return fundamental_numeric(qde, t0, sc["steps"])
    if method == "expm":
        return fundamental_constant(a, t0)
    if method == "split":
        return fundamental_split(a, t0)
    if method == "eigen":
        return fundamental_eigen(a, t0)
    if method != "auto":
        raise UsageError(f"unknown method {method!r}")
    for builder in (fundamental_split, fundamental_eigen):
        try:
            return builder(a, t0)
        except (errors.SplitRejected, errors.DefectiveMatrix, errors.ResidualTooLarge) as exc:
            log.info("falling back: %s", exc)
    return fundamental_constant(a, t0)


def cmd_fund(args):
    sc = _system_from_args(args)
    fm = _build_fundamental(sc, sc["method"])
    t = sc["t_end"] if args.t is None else args.t
    m = fm(t)
    ok = True
    if args.format == "json":
        payload = {"method": fm.method.value, "t": t, "certificate": fm.certificate,
                   "matrix": m.to_json()}
        text = json.dumps(payload) + "\n"
    else:
        text = (f"# method={fm.method.value} t={_num(t)} ddet(M(t0))={_num(fm.certificate)}\n"
                + _matrix_out(m, "csv"))
    if args.verify:
        lo, hi = sc["qde"].interval
        ts = np.linspace(lo, hi, 18)[1:-1] if hi > lo else [lo]
        res = fm.residual(sc["qde"], ts)
        ok = res <= 1e-6
        text += f"{'PASS' if ok else 'FAIL'} residual = {res:.6e} (<= 1.0e-06)\n"
    return text, ok


def cmd_solve(args):
    sc = _system_from_args(args)
    if sc["x0"] is None:
        raise UsageError("solve needs --x0 (or x0 in the scenario)")
    traj = solve_ivp(IVP(sc["qde"], sc["t0"], sc["x0"]), sc["t_end"], sc["steps"])
    samples = max(2, args.samples)
    ts = np.linspace(sc["t0"], sc["t_end"], samples)
    states = np.array([traj(t) for t in ts])
    if args.format == "json":
        return json.dumps({"t": ts.tolist(), "x": states.tolist()}) + "\n", True
    return trajectory_csv(ts, states), True


def cmd_eig(args):
    a = load_matrix(args.matrix) if args.matrix else _system_from_args(args, True)["A"]
    pairs = right_eigenpairs(a)
    if args.format == "json":
        return json.dumps([{"lambda": list(p.lam), "vector": p.vector.array.tolist(),
                            "residual": p.residual} for p in pairs]) + "\n", True
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "vector", "residual"])
    for p in pairs:
        w.writerow([format_quat(p.lam, DIGITS),
                    " ".join(format_quat(q, DIGITS) for q in p.vector), _num(p.residual)])
    return buf.getvalue(), True


def cmd_wronskian(args):
    m = load_matrix(args.matrix)
    w = wronskian(m) if m.shape == (2, 2) else ddet(m)
    return _num(w) + "\n", True


def cmd_liouville(args):
    sc = _system_from_args(args)
    if sc["qde"].dim != 2:
        raise errors.DimensionMismatch("liouville needs a 2x2 system")
    fm = fundamental_numeric(sc["qde"], sc["t0"], sc["steps"])
    ts = np.linspace(sc["t0"], sc["t_end"], max(2, args.samples))
    report = liouville_check(sc["qde"], fm, sc["t0"], ts)
    text = report.to_csv(DIGITS)
    ok = True
    if args.verify:
        ok = report.max_rel_err <= 1e-6
        text += f"# {'PASS' if ok else 'FAIL'} max_rel_err = {report.max_rel_err:.6e} (<= 1.0e-06)\n"
    return text, ok


def cmd_preset(args):
    names = list(PRESETS) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in PRESETS:
        raise UsageError(f"unknown preset {args.name!r}; choose from all, {', '.join(PRESETS)}")
    jobs = max(1, args.jobs or 1)
    if jobs > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda n: run_preset(n, args.t), names))
    else:
        results = [run_preset(n, args.t) for n in names]
    text = ""
    ok = True
    for r in results:
        text += r.output
        if args.verify:
            text += r.report()
            ok = ok and r.ok
    return text, ok


COMMANDS = {"exp": cmd_exp, "solve": cmd_solve, "fund": cmd_fund, "eig": cmd_eig,
            "wronskian": cmd_wronskian, "liouville": cmd_liouville, "preset": cmd_preset}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qde", description="Linear quaternion ODE toolkit.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, system=True):
        if system:
            sp.add_argument("--matrix", help="inline 'a,b;c,d', a text file or a .json file")
            sp.add_argument("--scenario", help="JSON scenario file")
            sp.add_argument("--t0", type=float)
            sp.add_argument("--t1", type=float)
            sp.add_argument("--steps", type=int)
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("exp", help="matrix exponential exp(A t)")
    common(sp)
    sp.add_argument("--t", type=float)
    sp.add_argument("--method", choices=("adjoint", "series"), default="adjoint")

    sp = sub.add_parser("solve", help="integrate an initial value problem")
    common(sp)
    sp.add_argument("--x0")
    sp.add_argument("--samples", type=int, default=11)

    sp = sub.add_parser("fund", help="fundamental matrix")
    common(sp)
    sp.add_argument("--t", type=float)
    sp.add_argument("--method", choices=("auto", "numeric", "expm", "split", "eigen"),
                    default=None)
    sp.add_argument("--verify", action="store_true")

    sp = sub.add_parser("eig", help="standardized right eigenpairs")
    common(sp)

    sp = sub.add_parser("wronskian", help="ddet of a (solution) matrix")
    common(sp)

    sp = sub.add_parser("liouville", help="Wronskian vs Liouville formula")
    common(sp)
    sp.add_argument("--samples", type=int, default=11)
    sp.add_argument("--verify", action="store_true")

    sp = sub.add_parser("preset", help="reproduce a worked example")
    sp.add_argument("name", help="all, " + ", ".join(PRESETS))
    sp.add_argument("--t", type=float)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    common(sp, system=False)
    return p


def _configure_logging():
    level = os.environ.get("QDE_LOG", "warn").upper()
    level = {"WARN": "WARNING"}.get(level, level)
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, ok = COMMANDS[args.verb](args)
    except NUMERIC_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (UsageError, *INPUT_ERRORS) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
