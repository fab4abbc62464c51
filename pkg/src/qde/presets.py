"""Named, self-verifying reproductions of the worked examples.

Each preset returns a :class:`PresetResult` holding printable output and a
list of checks ``(name, value, limit, kind)``; ``kind`` is ``"max"`` when
the value must not exceed the limit and ``"min"`` when it must reach it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analysis import module_structure_check
from .applications import (BodyRates, CurveGeometry, attitude_csv, axis_angle_quat,
                           frame_from_quat, frenet_reference, propagate_attitude,
                           propagate_frenet)
from .eigen import fundamental_eigen, right_eigenpairs
from .engine import (LinearQDE, fundamental_numeric, fundamental_split)
from .qmatrix import QMat, QVec, ddet, expm, expm_series
from .quadrature import adaptive_simpson
from .quat import Quat, exp_quat, qmul_arr

__all__ = ["PresetResult", "PRESETS", "run_preset", "example1_closed_form",
           "example2_closed_form", "EXAMPLE1", "EXAMPLE2", "EXAMPLE3", "COUNTEREXAMPLE"]

EXAMPLE1 = QMat.parse("i,1;0,j")
EXAMPLE2 = QMat.parse("k,1;0,k")
EXAMPLE3 = QMat.parse("i,j;0,i+j")
COUNTEREXAMPLE = QMat.parse("i,0;0,j")
I_, J_, K_ = Quat(0, 1), Quat(0, 0, 1), Quat(0, 0, 0, 1)


@dataclass
class PresetResult:
    name: str
    output: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(_passes(c) for c in self.checks)

    def report(self) -> str:
        lines = []
        for name, value, limit, kind in self.checks:
            op = "<=" if kind == "max" else ">="
            status = "PASS" if _passes((name, value, limit, kind)) else "FAIL"
            lines.append(f"{status} {self.name}.{name} = {value:.6e} ({op} {limit:.1e})")
        return "\n".join(lines) + ("\n" if lines else "")


def _passes(check) -> bool:
    _, value, limit, kind = check
    return value <= limit if kind == "max" else value >= limit


def _fmt_matrix(m: QMat) -> str:
    return m.to_text(digits=17)


def example1_closed_form(t: float, t0: float = 0.0, tol: float = 1e-10) -> QMat:
    """[[e^{it}, e^{it} int_{t0}^t e^{-is} e^{js} ds], [0, e^{jt}]]."""
    def integrand(s):
        return qmul_arr(exp_quat(I_ * -s).as_array(), exp_quat(J_ * s).as_array())

    integral = Quat.from_array(adaptive_simpson(integrand, t0, t, tol=tol))
    eit = exp_quat(I_ * t)
    return QMat([[eit, eit * integral], [0, exp_quat(J_ * t)]])


def example2_closed_form(t: float) -> QMat:
    ekt = exp_quat(K_ * t)
    return QMat([[ekt, ekt * t], [0, ekt]])


def preset_example1(t: float = 1.0, steps: int = 10_000) -> PresetResult:
    qde = LinearQDE.constant(EXAMPLE1, (0.0, 2.0), "example1")
    fm = fundamental_numeric(qde, 0.0, steps)
    grid = np.linspace(0.0, 2.0, 21)
    err = max(fm(s).max_abs_diff(example1_closed_form(s)) for s in grid)
    res = fm.residual(qde, np.linspace(0.05, 1.95, 16))
    out = f"# example1 numeric fundamental matrix at t={t!r}\n" + _fmt_matrix(fm(t))
    return PresetResult("example1", out, [("closed_form_err", err, 1e-7, "max"),
                                          ("ode_residual", res, 1e-6, "max")])


def preset_example2(t: float = 1.0) -> PresetResult:
    fm = fundamental_split(EXAMPLE2)
    errs, agree = [], []
    for s in (0.1, 1.0, 5.0):
        closed = example2_closed_form(s)
        errs.append(fm(s).max_abs_diff(closed))
        agree.append(max(expm(EXAMPLE2, s).max_abs_diff(closed),
                         expm_series(EXAMPLE2, s).max_abs_diff(closed)))
    out = f"# example2 exp(At) at t={t!r}\n" + _fmt_matrix(fm(t))
    return PresetResult("example2", out, [("split_vs_closed", max(errs), 1e-10, "max"),
                                          ("expm_series_vs_closed", max(agree), 1e-10, "max")])


def preset_example3(t: float = 0.5) -> PresetResult:
    from .analysis import line_residual
    pairs = right_eigenpairs(EXAMPLE3)
    fm = fundamental_eigen(EXAMPLE3)
    qde = LinearQDE.constant(EXAMPLE3, (0.0, 1.0))
    samples = np.linspace(0.0, 1.0, 16)
    res = fm.residual(qde, samples)
    wmin = min(abs(ddet(fm(s))) for s in samples)
    line = max(min(line_residual(p.vector, d) for d in (QVec([1, 0]), QVec([1, 1])))
               for p in pairs)
    lines = ["# example3 right eigenpairs (lambda; vector)"]
    for p in pairs:
        lines.append(f"{p.lam}; " + ", ".join(str(q) for q in p.vector))
    out = "\n".join(lines) + f"\n# eigenvector fundamental matrix at t={t!r}\n" + _fmt_matrix(fm(t))
    return PresetResult("example3", out, [("eigenline_residual", line, 1e-8, "max"),
                                          ("ode_residual", res, 1e-7, "max"),
                                          ("min_abs_ddet", wmin, 1e-3, "min")])


def preset_counterexample(t: float = 1.0) -> PresetResult:
    qde = LinearQDE.constant(COUNTEREXAMPLE, (0.0, 1.0))
    ts = np.linspace(0.05, 0.95, 10)
    right, _ = module_structure_check(qde, lambda s: QVec([exp_quat(I_ * s), 0]), K_, ts)
    scalar = LinearQDE.constant(QMat([[I_]]), (0.0, 1.0))
    _, left = module_structure_check(scalar, lambda s: QVec([exp_quat(I_ * s)]), J_, ts)
    out = (f"# x(t) = (e^(it), 0): residual of x(t) k = {right:.17g}\n"
           f"# x(t) = e^(it) for x' = i x: residual of j x(t) = {left:.17g}\n")
    return PresetResult("counterexample", out, [("right_residual", right, 1e-6, "max"),
                                                ("left_residual", left, 0.5, "min"),
                                                ("left_vs_2", abs(left - 2.0) / 2.0, 0.1, "max")])


def preset_frenet_helix(t: float = 1.0, kappa: float = 0.8, tau: float = 0.3) -> PresetResult:
    geom = CurveGeometry.helix(kappa, tau)
    ss, qs = propagate_frenet(geom, s_end=t)
    _, frames = frenet_reference(geom, np.eye(3), t, steps=len(ss) - 1)
    err = max(np.abs(np.array(frame_from_quat(q)) - f).max() for q, f in zip(qs, frames))
    norm_err = float(np.abs(np.linalg.norm(qs, axis=1) - 1.0).max())
    gram = max(np.abs(np.array(frame_from_quat(q)) @ np.array(frame_from_quat(q)).T
                      - np.eye(3)).max() for q in qs[::100])
    tbn = frame_from_quat(qs[-1])
    out = (f"# frenet helix kappa={kappa!r} tau={tau!r}, frame at s={t!r} (rows T, B, N)\n"
           + "".join(",".join(f"{v:.17g}" for v in row) + "\n" for row in tbn))
    return PresetResult("frenet-helix", out, [("frame_vs_direct", err, 1e-6, "max"),
                                              ("unit_norm", norm_err, 1e-8, "max"),
                                              ("orthonormality", gram, 1e-6, "max")])


def preset_attitude_spin(t: float = 1.0, rate: float = 1.0) -> PresetResult:
    traj = propagate_attitude(BodyRates.constant(0.0, 0.0, rate), Quat(1.0), t)
    q_end = traj.states[-1, 0]
    ref = axis_angle_quat((0.0, 0.0, 1.0), rate * t).as_array()
    err = float(np.abs(q_end - ref).max())
    norm_err = float(np.abs(np.linalg.norm(traj.states[:, 0, :], axis=1) - 1.0).max())
    stride = max(1, (len(traj.ts) - 1) // 10)
    out = "# attitude spin about z\n" + attitude_csv(traj.ts[::stride], traj.states[::stride, 0])
    return PresetResult("attitude-spin", out, [("axis_angle_err", err, 1e-8, "max"),
                                               ("unit_norm", norm_err, 1e-8, "max")])


PRESETS = {
    "example1": preset_example1,
    "example2": preset_example2,
    "example3": preset_example3,
    "counterexample": preset_counterexample,
    "frenet-helix": preset_frenet_helix,
    "attitude-spin": preset_attitude_spin,
}


def run_preset(name: str, t: float | None = None) -> PresetResult:
    try:
        fn = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return fn() if t is None else fn(t=t)
