"""Linear quaternion ODE systems ``x' = A(t) x`` and their fundamental matrices.

The coefficient always acts from the left.  Solutions then form a right
module: if ``x(t)`` solves the system so does ``x(t) q`` for any constant
quaternion ``q``, and a fundamental matrix ``M(t)`` generates every
solution as ``M(t) c``.

Constructions provided here:

* :func:`solve_ivp` / :func:`fundamental_numeric` -- fixed-step RK4, the
  reference every closed form is checked against;
* :func:`fundamental_constant` -- ``exp(A (t - t0))`` via the complex adjoint;
* :func:`fundamental_split` -- ``exp(D t) exp(N t)`` when the diagonal part
  ``D`` commutes with the nilpotent rest ``N``;
* :func:`fundamental_jordan` -- closed form for a single Jordan block;
* :func:`diagonal_timevarying` -- ``diag(exp(int a_i))`` when each ``a_i``
  commutes with its own integral.

The eigenvector construction lives in :mod:`qde.eigen`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (ConditionViolated, DimensionMismatch, DomainError,
                     NonSquare, SingularCertificate, SplitRejected)
from .qmatrix import (QMat, QVec, apply_left_operator, ddet, diag_exp, expm,
                      inverse, left_mult_operator, qmatmul_arr, singular_threshold)
from .quadrature import adaptive_simpson
from .quat import Quat, qexp_arr, qmul_arr

__all__ = [
    "Method", "LinearQDE", "IVP", "Trajectory", "FundamentalMatrix",
    "solve_ivp", "integrate_rk4", "fundamental_numeric", "fundamental_constant",
    "commuting_split", "nilpotent_exp", "fundamental_split", "jordan_exp",
    "fundamental_jordan", "diagonal_timevarying", "second_order_reduce",
    "default_steps", "STEPS_PER_UNIT", "matrix_residual",
]

STEPS_PER_UNIT = 10_000
FD_STEP = 1e-6


class Method(enum.Enum):
    NUMERIC = "numeric"
    EXPM = "expm"
    SPLIT = "split"
    JORDAN = "jordan"
    EIGEN = "eigen"
    DIAGONAL = "diagonal"


def default_steps(span: float) -> int:
    return max(1, int(math.ceil(STEPS_PER_UNIT * abs(span))))


@dataclass(frozen=True)
class LinearQDE:
    """The system ``x' = A(t) x`` on ``interval`` with ``A(t)`` n x n."""

    dim: int
    coeff: Callable[[float], QMat]
    interval: tuple = (0.0, 1.0)
    label: str = ""
    constant_matrix: QMat | None = field(default=None, compare=False)

    @classmethod
    def constant(cls, a, interval=(0.0, 1.0), label="") -> "LinearQDE":
        a = a if isinstance(a, QMat) else QMat(a)
        if not a.is_square:
            raise NonSquare(f"coefficient must be square, got {a.rows}x{a.cols}")
        return cls(a.rows, lambda t: a, tuple(interval), label, a)

    def __call__(self, t: float) -> QMat:
        return self.coeff(t)

    def coeff_array(self, t: float) -> np.ndarray:
        if self.constant_matrix is not None:
            return self.constant_matrix.array
        a = self.coeff(t)
        arr = a.array if isinstance(a, QMat) else np.asarray(a, dtype=float)
        if arr.shape != (self.dim, self.dim, 4):
            raise DimensionMismatch(f"A({t}) has shape {arr.shape[:2]}, expected "
                                    f"{(self.dim, self.dim)}")
        return arr

    def contains(self, t: float) -> bool:
        a, b = self.interval
        return a - 1e-12 <= t <= b + 1e-12

    def continuity_defect(self, t: float, h: float = 1e-7) -> float:
        """||A(t+h) - A(t)||; small values are evidence of continuity at t."""
        return float(np.sqrt(np.sum((self.coeff_array(t + h) - self.coeff_array(t)) ** 2,
                                    axis=-1)).sum())


@dataclass(frozen=True)
class IVP:
    qde: LinearQDE
    t0: float
    x0: QVec

    def __post_init__(self):
        x0 = self.x0 if isinstance(self.x0, QVec) else QVec(self.x0)
        object.__setattr__(self, "x0", x0)
        if x0.dim != self.qde.dim:
            raise DimensionMismatch(f"x0 has length {x0.dim}, system has dim {self.qde.dim}")
        if not self.qde.contains(self.t0):
            raise DomainError(f"t0={self.t0} outside {self.qde.interval}")


class Trajectory:
    """Grid solution with piecewise cubic Hermite interpolation.

    ``states`` has shape ``(N, *shape, 4)``; ``derivs`` holds the exact
    slopes ``A(t_i) x_i`` used by the interpolant.  Nodes are reproduced
    exactly.
    """

    def __init__(self, ts, states, derivs):
        ts = np.asarray(ts, dtype=float)
        if ts.size > 1 and ts[1] < ts[0]:
            ts, states, derivs = ts[::-1], states[::-1], derivs[::-1]
        if np.any(np.diff(ts) <= 0):
            raise ValueError("trajectory times must be strictly monotone")
        if len(ts) != len(states) or len(ts) != len(derivs):
            raise DimensionMismatch("times, states and slopes differ in length")
        self.ts = ts
        self.states = np.ascontiguousarray(states)
        self.derivs = np.ascontiguousarray(derivs)

    @property
    def xs(self) -> list:
        if self.states.ndim != 3:
            raise TypeError("trajectory states are matrices; use states directly")
        return [QVec(s) for s in self.states]

    def __len__(self):
        return len(self.ts)

    def __call__(self, t: float) -> np.ndarray:
        ts = self.ts
        if t < ts[0] - 1e-12 or t > ts[-1] + 1e-12:
            raise DomainError(f"t={t} outside trajectory span [{ts[0]}, {ts[-1]}]")
        i = int(np.searchsorted(ts, t))
        if i < len(ts) and ts[i] == t:
            return self.states[i].copy()
        i = min(max(i, 1), len(ts) - 1)
        t0, t1 = ts[i - 1], ts[i]
        h = t1 - t0
        s = (t - t0) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return (h00 * self.states[i - 1] + h10 * h * self.derivs[i - 1]
                + h01 * self.states[i] + h11 * h * self.derivs[i])

    def at(self, t: float) -> QVec:
        return QVec(self(t))


def integrate_rk4(qde: LinearQDE, t0: float, y0: np.ndarray, t_end: float, steps: int):
    """Classical RK4 for ``y' = A(t) y``; ``y`` is ``(n, 4)`` or ``(n, m, 4)``.

    Returns (ts, ys, dys) with ``dys[i] = A(ts[i]) ys[i]``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    h = (t_end - t0) / steps
    fixed = None
    if qde.constant_matrix is not None:
        fixed = left_mult_operator(qde.constant_matrix.array)

    def f(t, y):
        op = fixed if fixed is not None else left_mult_operator(qde.coeff_array(t))
        return apply_left_operator(op, y)

    ys = np.empty((steps + 1,) + y0.shape)
    dys = np.empty_like(ys)
    ts = t0 + h * np.arange(steps + 1)
    ts[-1] = t_end
    y = np.array(y0, dtype=float)
    ys[0] = y
    k1 = f(t0, y)
    dys[0] = k1
    for s in range(steps):
        t = ts[s]
        k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ys[s + 1] = y
        k1 = f(ts[s + 1], y)
        dys[s + 1] = k1
    return ts, ys, dys


def solve_ivp(ivp: IVP, t_end: float, steps: int | None = None) -> Trajectory:
    """Fixed-step RK4 from ``ivp.t0`` to ``t_end`` (either direction)."""
    if not ivp.qde.contains(t_end):
        raise DomainError(f"t_end={t_end} outside {ivp.qde.interval}")
    if steps is None:
        steps = default_steps(t_end - ivp.t0)
    if t_end == ivp.t0:
        y = ivp.x0.array
        return Trajectory([t_end], y[None], qmatmul_arr(ivp.qde.coeff_array(t_end), y)[None])
    ts, ys, dys = integrate_rk4(ivp.qde, ivp.t0, ivp.x0.array, t_end, steps)
    return Trajectory(ts, ys, dys)


def matrix_residual(qde: LinearQDE, m_of_t: Callable[[float], QMat], t: float,
                    h: float = FD_STEP) -> float:
    """||M'(t) - A(t) M(t)|| with a central difference for M'."""
    mp = _as_array(m_of_t(t + h))
    mm = _as_array(m_of_t(t - h))
    deriv = (mp - mm) / (2.0 * h)
    r = deriv - qmatmul_arr(qde.coeff_array(t), _as_array(m_of_t(t)))
    return float(np.sqrt(np.sum(r * r, axis=-1)).sum())


def _as_array(v):
    return v.array if isinstance(v, (QMat, QVec)) else np.asarray(v, dtype=float)


@dataclass(frozen=True)
class FundamentalMatrix:
    """``t -> M(t)`` with ``ddet M(t0)`` stored as the validity certificate."""

    dim: int
    eval: Callable[[float], QMat]
    method: Method
    t0: float = 0.0
    certificate: float = field(default=float("nan"))
    trajectory: Trajectory | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        m0 = self.eval(self.t0)
        if m0.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"M(t0) has shape {m0.shape}, expected dim {self.dim}")
        cert = ddet(m0)
        object.__setattr__(self, "certificate", cert)
        if abs(cert) <= singular_threshold(m0):
            raise SingularCertificate(f"ddet M(t0) = {cert:.3e}: not a fundamental matrix")

    def __call__(self, t: float) -> QMat:
        return self.eval(t)

    def normalized(self) -> Callable[[float], QMat]:
        """``t -> M(t) M(t0)^-1``, the fundamental matrix equal to I at t0."""
        q = inverse(self.eval(self.t0))
        return lambda t: self.eval(t) @ q

    def residual(self, qde: LinearQDE, ts: Sequence[float], h: float = FD_STEP) -> float:
        """Largest ||M' - A M|| over ``ts`` (central differences)."""
        return max(matrix_residual(qde, self.eval, t, h) for t in ts)

    def solution(self, c) -> Callable[[float], QVec]:
        """The solution ``t -> M(t) c`` for a constant vector ``c``."""
        c = c if isinstance(c, QVec) else QVec(c)
        return lambda t: self.eval(t) @ c


# ---------------------------------------------------------------------------
# numeric columns

def fundamental_numeric(qde: LinearQDE, t0: float | None = None,
                        steps: int | None = None) -> FundamentalMatrix:
    """Integrate ``M' = A M`` from ``M(t0) = I`` across the whole interval.

    ``steps`` counts RK4 steps over the full interval (default 10^4 per unit
    time) and is shared between the two sides of ``t0``.
    """
    a, b = qde.interval
    if t0 is None:
        t0 = a
    if not qde.contains(t0):
        raise DomainError(f"t0={t0} outside {qde.interval}")
    span = b - a
    if steps is None:
        steps = default_steps(span)
    n = qde.dim
    eye = QMat.identity(n).array
    pieces = []
    for end in (a, b):
        if abs(end - t0) > 0:
            nsteps = max(1, int(round(steps * abs(end - t0) / span)))
            pieces.append(integrate_rk4(qde, t0, eye, end, nsteps))
    if not pieces:
        raise DomainError("degenerate interval")
    if len(pieces) == 1:
        traj = Trajectory(*pieces[0])
    else:
        (tl, yl, dl), (tr, yr, dr) = pieces
        traj = Trajectory(np.concatenate([tl[::-1], tr[1:]]),
                          np.concatenate([yl[::-1], yr[1:]]),
                          np.concatenate([dl[::-1], dr[1:]]))
    return FundamentalMatrix(n, lambda t: QMat(traj(t)), Method.NUMERIC, t0, trajectory=traj)


# ---------------------------------------------------------------------------
# constant coefficients

def fundamental_constant(a: QMat, t0: float = 0.0) -> FundamentalMatrix:
    """``M(t) = exp(A (t - t0))``."""
    a = a if isinstance(a, QMat) else QMat(a)
    if not a.is_square:
        raise NonSquare(f"expected square matrix, got {a.rows}x{a.cols}")
    return FundamentalMatrix(a.rows, lambda t: expm(a, t - t0), Method.EXPM, t0)


def _is_nilpotent(n_arr: np.ndarray, atol: float) -> bool:
    p = n_arr
    for _ in range(n_arr.shape[0] - 1):
        p = qmatmul_arr(p, n_arr)
    return bool(np.all(np.abs(p) <= atol))


def commuting_split(a: QMat, atol: float = 1e-12):
    """Split ``A = D + N`` (diagonal + rest).

    Returns ``(D, N)`` when ``N`` is nilpotent and ``D N = N D``, otherwise
    ``None``.
    """
    a = a if isinstance(a, QMat) else QMat(a)
    if not a.is_square:
        raise NonSquare(f"expected square matrix, got {a.rows}x{a.cols}")
    n = a.rows
    d = np.zeros_like(a.array)
    idx = np.arange(n)
    d[idx, idx] = a.array[idx, idx]
    rest = a.array - d
    scale = max(1.0, a.norm())
    if not _is_nilpotent(rest, atol * scale ** n):
        return None
    comm = qmatmul_arr(d, rest) - qmatmul_arr(rest, d)
    if np.abs(comm).max(initial=0.0) > atol * scale ** 2:
        return None
    return QMat(d), QMat(rest)


def nilpotent_exp(n_mat: QMat, t: float) -> QMat:
    """Finite series sum_{m<n} N^m t^m / m! for nilpotent ``N``."""
    size = n_mat.rows
    term = QMat.identity(size).array
    total = term.copy()
    nt = n_mat.array * t
    for m in range(1, size):
        term = qmatmul_arr(term, nt) / m
        total = total + term
    return QMat(total)


def fundamental_split(a: QMat, t0: float = 0.0) -> FundamentalMatrix:
    """``exp(D s) exp(N s)`` with ``s = t - t0``; raises SplitRejected if D, N do not commute."""
    split = commuting_split(a)
    if split is None:
        raise SplitRejected("diagonal and off-diagonal parts do not commute "
                            "(or the off-diagonal part is not nilpotent)")
    d, n = split
    diag = [d[i, i] for i in range(d.rows)]

    def ev(t):
        s = t - t0
        return diag_exp(diag, s) @ nilpotent_exp(n, s)

    return FundamentalMatrix(d.rows, ev, Method.SPLIT, t0)


def jordan_exp(lam, n: int, t: float) -> QMat:
    """Closed-form exp(J t) for the n x n Jordan block with ``lam`` on the diagonal."""
    if n < 1:
        raise ValueError("block size must be >= 1")
    lam = Quat.coerce(lam)
    e = qexp_arr(lam.as_array() * t)
    out = np.zeros((n, n, 4))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = e * (t ** (j - i) / math.factorial(j - i))
    return QMat(out)


def jordan_block(lam, n: int) -> QMat:
    lam = Quat.coerce(lam)
    out = np.zeros((n, n, 4))
    for i in range(n):
        out[i, i] = lam.as_array()
        if i + 1 < n:
            out[i, i + 1, 0] = 1.0
    return QMat(out)


def fundamental_jordan(lam, n: int, t0: float = 0.0) -> FundamentalMatrix:
    return FundamentalMatrix(n, lambda t: jordan_exp(lam, n, t - t0), Method.JORDAN, t0)


# ---------------------------------------------------------------------------
# time-varying diagonal systems

def _chebyshev_points(a, b, count):
    k = np.arange(count)
    x = np.cos((2 * k + 1) * np.pi / (2 * count))
    return np.sort(0.5 * (a + b) + 0.5 * (b - a) * x)


def diagonal_timevarying(coeffs: Sequence[Callable[[float], Quat]], t0: float = 0.0,
                         interval=None, samples: int = 16,
                         tol: float = 1e-9) -> FundamentalMatrix:
    """Fundamental matrix ``diag(exp(int_{t0}^t a_i))`` for ``x_i' = a_i(t) x_i``.

    Valid only when every ``a_i(t)`` commutes with its own integral; that is
    checked at ``samples`` Chebyshev points of ``interval`` and a failure
    raises :class:`ConditionViolated`.
    """
    if interval is None:
        interval = (t0, t0 + 1.0)
    a_lo, a_hi = interval
    coeffs = list(coeffs)

    def integral(fn, t):
        return Quat.from_array(adaptive_simpson(lambda s: Quat.coerce(fn(s)).as_array(),
                                                t0, t, tol=1e-10))

    for idx, fn in enumerate(coeffs):
        for t in _chebyshev_points(a_lo, a_hi, samples):
            at = Quat.coerce(fn(t))
            it = integral(fn, t)
            comm = (at * it - it * at).norm()
            if comm > tol * max(1.0, at.norm() * it.norm()):
                raise ConditionViolated(
                    f"coefficient {idx} does not commute with its integral at t={t:.6g} "
                    f"(|[a, int a]| = {comm:.3e})")

    def ev(t):
        out = np.zeros((len(coeffs), len(coeffs), 4))
        for i, fn in enumerate(coeffs):
            out[i, i] = integral(fn, t).exp().as_array()
        return QMat(out)

    return FundamentalMatrix(len(coeffs), ev, Method.DIAGONAL, t0)


def diagonal_qde(coeffs, interval=(0.0, 1.0), label="diagonal") -> LinearQDE:
    coeffs = list(coeffs)
    return LinearQDE(len(coeffs), lambda t: QMat.diag([Quat.coerce(f(t)) for f in coeffs]),
                     tuple(interval), label)


# ---------------------------------------------------------------------------
# second order equations

def second_order_reduce(q1: Callable[[float], Quat], q2: Callable[[float], Quat],
                        interval=(0.0, 1.0)) -> LinearQDE:
    """First-order form of ``x'' + q1(t) x' + q2(t) x = 0``.

    State ``(x, x')`` with ``x1' = x2`` and ``x2' = -q2 x1 - q1 x2``.
    """
    def coeff(t):
        a = np.zeros((2, 2, 4))
        a[0, 1, 0] = 1.0
        a[1, 0] = -Quat.coerce(q2(t)).as_array()
        a[1, 1] = -Quat.coerce(q1(t)).as_array()
        return QMat(a)

    return LinearQDE(2, coeff, tuple(interval), "second-order")


def right_multiply_trajectory(x: Callable[[float], QVec], q) -> Callable[[float], QVec]:
    q = Quat.coerce(q).as_array()
    return lambda t: QVec(qmul_arr(_as_array(x(t)), q))
