"""Model problems: rigid-body attitude kinematics and Frenet frame transport.

Attitude
    ``q' = 1/2 q w(t)`` with ``w = wx i + wy j + wz k`` the body rate.
    The rate multiplies on the right, while :class:`~qde.engine.LinearQDE`
    takes its coefficient on the left, so the system handed to the solver
    is the conjugate one ``p' = -1/2 w(t) p`` for ``p = conj(q)``.
    :func:`propagate_attitude` hides the conjugation.

    The real 4x4 form ``q' = 1/2 Omega q`` uses the scalar-last vector
    ``(q1, q2, q3, q4) = (x, y, z, w)``; with that ordering the two forms
    produce identical components.

Frenet frame
    ``q' = 1/2 v K q`` with the 4x4 skew matrix ``K(kappa, tau)``.  ``K q``
    equals the quaternion product ``q (tau i + kappa k)``, hence the frame
    vectors ``q i q*``, ``q j q*``, ``q k q*`` obey
    ``T' = v kappa B``, ``B' = v(-kappa T + tau N)``, ``N' = -v tau B``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .engine import IVP, LinearQDE, Trajectory, default_steps, solve_ivp
from .errors import NonUnitAxis
from .qmatrix import QMat, QVec
from .quat import Quat, qconj_arr

__all__ = [
    "BodyRates", "CurveGeometry", "axis_angle_quat", "attitude_qde",
    "wertz_omega", "wertz_qde", "propagate_attitude", "propagate_attitude_wertz",
    "rotate", "frenet_K", "frenet_qde", "propagate_frenet", "frame_from_quat",
    "frenet_reference", "rates_from_csv", "attitude_csv", "frame_csv",
]


@dataclass(frozen=True)
class BodyRates:
    """Angular velocity provider ``t -> (wx, wy, wz)`` in rad/s."""

    provider: Callable[[float], tuple]

    @classmethod
    def constant(cls, wx=0.0, wy=0.0, wz=0.0) -> "BodyRates":
        w = (float(wx), float(wy), float(wz))
        return cls(lambda t: w)

    def __call__(self, t):
        w = tuple(float(v) for v in self.provider(t))
        if len(w) != 3 or not all(math.isfinite(v) for v in w):
            raise ValueError(f"body rate at t={t} must be three finite numbers, got {w}")
        return w


@dataclass(frozen=True)
class CurveGeometry:
    speed: Callable[[float], float]
    curvature: Callable[[float], float]
    torsion: Callable[[float], float]

    @classmethod
    def helix(cls, kappa: float, tau: float, speed: float = 1.0) -> "CurveGeometry":
        return cls(lambda s: speed, lambda s: kappa, lambda s: tau)


def axis_angle_quat(axis, theta: float) -> Quat:
    """Unit quaternion ``cos(theta/2) + sin(theta/2) (ex i + ey j + ez k)``."""
    e = np.asarray(axis, dtype=float)
    if e.shape != (3,) or abs(np.linalg.norm(e) - 1.0) > 1e-10:
        raise NonUnitAxis(f"rotation axis must be a unit 3-vector, got {axis!r}")
    s = math.sin(theta / 2.0)
    return Quat(math.cos(theta / 2.0), e[0] * s, e[1] * s, e[2] * s)


def rotate(q: Quat, v) -> np.ndarray:
    """Rotation action ``v -> q v q*`` on a 3-vector."""
    p = Quat(0.0, *np.asarray(v, dtype=float))
    r = q * p * q.conj()
    return np.array([r.x, r.y, r.z])


# ---------------------------------------------------------------------------
# attitude

def attitude_qde(rates: BodyRates, interval=(0.0, 1.0)) -> LinearQDE:
    """1-dim system for ``p = conj(q)``: ``p' = -1/2 w(t) p``."""
    def coeff(t):
        wx, wy, wz = rates(t)
        return QMat(np.array([[[0.0, -0.5 * wx, -0.5 * wy, -0.5 * wz]]]))

    return LinearQDE(1, coeff, tuple(interval), "attitude")


def wertz_omega(w) -> np.ndarray:
    wx, wy, wz = w
    return np.array([[0.0, wz, -wy, wx],
                     [-wz, 0.0, wx, wy],
                     [wy, -wx, 0.0, wz],
                     [-wx, -wy, -wz, 0.0]])


def _real_matrix(m: np.ndarray) -> QMat:
    out = np.zeros(m.shape + (4,))
    out[..., 0] = m
    return QMat(out)


def wertz_qde(rates: BodyRates, interval=(0.0, 1.0)) -> LinearQDE:
    """Real 4-dim system ``q' = 1/2 Omega(w) q`` on scalar-last components."""
    return LinearQDE(4, lambda t: _real_matrix(0.5 * wertz_omega(rates(t))),
                     tuple(interval), "attitude-wertz")


def propagate_attitude(rates: BodyRates, q0=Quat(1.0), t_end: float = 1.0,
                       steps: int | None = None, t0: float = 0.0) -> Trajectory:
    """Integrate ``q' = 1/2 q w``; trajectory states are ``(N, 1, 4)`` quaternions."""
    qde = attitude_qde(rates, (min(t0, t_end), max(t0, t_end)))
    p0 = QVec([Quat.coerce(q0).conj()])
    traj = solve_ivp(IVP(qde, t0, p0), t_end, steps)
    return Trajectory(traj.ts, qconj_arr(traj.states), qconj_arr(traj.derivs))


def propagate_attitude_wertz(rates: BodyRates, q0=Quat(1.0), t_end: float = 1.0,
                             steps: int | None = None, t0: float = 0.0) -> np.ndarray:
    """Same motion via the Omega form; returns (ts, quaternions (N, 4) in w,x,y,z order)."""
    qde = wertz_qde(rates, (min(t0, t_end), max(t0, t_end)))
    q0 = Quat.coerce(q0)
    x0 = QVec([q0.x, q0.y, q0.z, q0.w])
    traj = solve_ivp(IVP(qde, t0, x0), t_end, steps)
    comps = traj.states[..., 0]          # (N, 4) scalar-last
    return traj.ts, comps[:, [3, 0, 1, 2]]


# ---------------------------------------------------------------------------
# Frenet frame

def frenet_K(kappa: float, tau: float) -> np.ndarray:
    return np.array([[0.0, -tau, 0.0, -kappa],
                     [tau, 0.0, kappa, 0.0],
                     [0.0, -kappa, 0.0, tau],
                     [kappa, 0.0, -tau, 0.0]])


def frenet_qde(geom: CurveGeometry, interval=(0.0, 1.0)) -> LinearQDE:
    """Real 4-dim system ``q' = 1/2 v(s) K(s) q`` on ``(q0, q1, q2, q3)``."""
    def coeff(s):
        return _real_matrix(0.5 * geom.speed(s) * frenet_K(geom.curvature(s), geom.torsion(s)))

    return LinearQDE(4, coeff, tuple(interval), "frenet")


def propagate_frenet(geom: CurveGeometry, q0=Quat(1.0), s_end: float = 1.0,
                     steps: int | None = None) -> tuple:
    """Returns ``(ss, qs)`` with ``qs`` the (N, 4) frame quaternions."""
    qde = frenet_qde(geom, (0.0, s_end))
    traj = solve_ivp(IVP(qde, 0.0, QVec(list(Quat.coerce(q0)))), s_end, steps)
    return traj.ts, traj.states[..., 0]


def frame_from_quat(q) -> tuple:
    """(T, B, N) = (q i q*, q j q*, q k q*)."""
    q = Quat.coerce(q)
    q = q / q.norm()
    return tuple(rotate(q, e) for e in np.eye(3))


def frenet_reference(geom: CurveGeometry, frame0, s_end: float, steps: int | None = None):
    """Integrate the 9-dim real frame system directly with RK4.

    Returns ``(ss, frames)`` with ``frames`` of shape (N, 3, 3), rows T, B, N.
    """
    if steps is None:
        steps = default_steps(s_end)
    h = s_end / steps

    def f(s, y):
        k, t, v = geom.curvature(s), geom.torsion(s), geom.speed(s)
        gen = v * np.array([[0.0, k, 0.0], [-k, 0.0, t], [0.0, -t, 0.0]])
        return gen @ y

    y = np.array(frame0, dtype=float)
    out = [y.copy()]
    ss = h * np.arange(steps + 1)
    for i in range(steps):
        s = ss[i]
        k1 = f(s, y)
        k2 = f(s + h / 2, y + h / 2 * k1)
        k3 = f(s + h / 2, y + h / 2 * k2)
        k4 = f(s + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(y.copy())
    return ss, np.array(out)


# ---------------------------------------------------------------------------
# CSV plumbing

def rates_from_csv(path_or_text) -> BodyRates:
    """Load ``t, wx, wy, wz`` rows; rates are linearly interpolated in t."""
    text = path_or_text
    if "\n" not in str(path_or_text):
        with open(path_or_text, newline="") as fh:
            text = fh.read()
    rows = []
    for rec in csv.reader(io.StringIO(text)):
        if not rec or not rec[0].strip():
            continue
        try:
            rows.append([float(v) for v in rec[:4]])
        except ValueError:
            if rows:
                raise
            continue                      # header line
    data = np.array(rows)
    if data.ndim != 2 or data.shape[1] != 4 or len(data) < 2:
        raise ValueError("rate table needs at least two rows of t, wx, wy, wz")
    order = np.argsort(data[:, 0])
    data = data[order]
    t = data[:, 0]
    return BodyRates(lambda s: tuple(np.interp(s, t, data[:, c]) for c in (1, 2, 3)))


def attitude_csv(ts, qs, digits: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "q0", "q1", "q2", "q3", "norm"])
    for t, q in zip(ts, np.asarray(qs).reshape(len(ts), 4)):
        w.writerow([f"{v + 0.0:.{digits}g}" for v in (t, *q, float(np.linalg.norm(q)))])
    return buf.getvalue()


def frame_csv(ss, qs, digits: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "Tx", "Ty", "Tz", "Bx", "By", "Bz", "Nx", "Ny", "Nz"])
    for s, q in zip(ss, qs):
        frame = frame_from_quat(q)
        w.writerow([f"{v + 0.0:.{digits}g}" for v in (s, *np.concatenate(frame))])
    return buf.getvalue()
