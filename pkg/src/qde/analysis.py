"""Solution-structure tools: dependence tests, the Wronskian and Liouville's formula.

For a 2x2 solution matrix ``M(t)`` the Wronskian is the real number
``W(t) = ddet M(t) = rdet(M M^+)``.  It obeys

    W(t) = exp( int_{t0}^{t} tr[A(s) + A^+(s)] ds ) W(t0),

and ``tr[A + A^+] = 2 Re(a11 + a22)`` is real, so ``W`` either vanishes
identically or nowhere.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .engine import FD_STEP, FundamentalMatrix, LinearQDE
from .errors import DimensionMismatch, NotASolution
from .qmatrix import QMat, QVec, ddet_w2, qmatmul_arr, rank, to_adjoint
from .quadrature import adaptive_simpson
from .quat import Quat, qconj_arr, qmul_arr

__all__ = [
    "Dependence", "right_dependent", "left_dependent", "wronskian",
    "WronskianReport", "liouville_check", "trace_term", "module_structure_check",
    "vector_residual", "line_residual",
]


@dataclass(frozen=True)
class Dependence:
    """Outcome of a dependence test; truthy when the vectors are dependent.

    ``coefficients`` (when dependent) satisfy ``sum x_i c_i = 0`` for right
    dependence or ``sum c_i x_i = 0`` for left dependence, scaled so the
    largest coefficient is exactly 1.
    """

    dependent: bool
    coefficients: QVec | None = None
    residual: float = 0.0

    def __bool__(self):
        return self.dependent


def _stack_columns(vectors) -> np.ndarray:
    vecs = [v if isinstance(v, QVec) else QVec(v) for v in vectors]
    if not vecs:
        raise ValueError("need at least one vector")
    dims = {v.dim for v in vecs}
    if len(dims) != 1:
        raise DimensionMismatch(f"vectors have different lengths {sorted(dims)}")
    return np.stack([v.array for v in vecs], axis=1)


def right_dependent(vectors, rtol: float = 1e-10) -> Dependence:
    """Is there a nonzero ``c`` with ``sum_i x_i c_i = 0``?"""
    cols = _stack_columns(vectors)
    k = cols.shape[1]
    mat = QMat(cols)
    if rank(mat, rtol) == k:
        return Dependence(False)
    # null vector (u, v) of chi(X) corresponds to the quaternion vector u - conj(v) j
    _, _, vh = np.linalg.svd(to_adjoint(mat).matrix)
    c = vh[-1].conj()
    u, v = c[:k], -np.conj(c[k:])
    coeffs = np.stack([u.real, u.imag, v.real, v.imag], axis=-1)
    big = int(np.argmax(np.sum(coeffs ** 2, axis=-1)))
    coeffs = qmul_arr(coeffs, Quat.from_array(coeffs[big]).inv().as_array())
    coeffs[big] = [1.0, 0.0, 0.0, 0.0]
    res = float(np.sqrt(np.sum(qmatmul_arr(cols, coeffs) ** 2)))
    return Dependence(True, QVec(coeffs), res)


def left_dependent(vectors, rtol: float = 1e-10) -> Dependence:
    """Is there a nonzero ``c`` with ``sum_i c_i x_i = 0``?

    Conjugating entrywise turns ``sum c_i x_i`` into ``sum conj(x_i) conj(c_i)``,
    so this is right dependence of the conjugated vectors.
    """
    conj_vecs = [QVec(qconj_arr((v if isinstance(v, QVec) else QVec(v)).array))
                 for v in vectors]
    dep = right_dependent(conj_vecs, rtol)
    if not dep:
        return dep
    coeffs = qconj_arr(dep.coefficients.array)
    cols = _stack_columns(vectors)
    combo = np.sum(qmul_arr(coeffs[None, :, :], cols), axis=1)
    return Dependence(True, QVec(coeffs), float(np.sqrt(np.sum(combo ** 2))))


def wronskian(m: Callable[[float], QMat] | QMat, t: float | None = None) -> float:
    """W(t) for a 2x2 solution matrix, by the four-term real formula."""
    mat = m(t) if callable(m) else m
    return ddet_w2(mat)


def trace_term(qde: LinearQDE, s: float) -> float:
    """tr[A(s) + A^+(s)] = 2 Re tr A(s)."""
    a = qde.coeff_array(s)
    return 2.0 * float(np.trace(a[..., 0]))


@dataclass
class WronskianReport:
    t_samples: np.ndarray
    w_values: np.ndarray
    formula_values: np.ndarray
    max_rel_err: float

    @property
    def rel_errors(self) -> np.ndarray:
        denom = np.maximum(np.abs(self.formula_values), 1e-300)
        return np.abs(self.w_values - self.formula_values) / denom

    def to_csv(self, digits: int = 17) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "w_direct", "w_formula", "rel_err"])
        for row in zip(self.t_samples, self.w_values, self.formula_values, self.rel_errors):
            writer.writerow([f"{v + 0.0:.{digits}g}" for v in row])
        return buf.getvalue()


def liouville_check(qde: LinearQDE, m: FundamentalMatrix | Callable[[float], QMat],
                    t0: float, ts: Sequence[float], tol: float = 1e-10) -> WronskianReport:
    """Compare W(t) computed from ``m`` with the Liouville right-hand side."""
    if qde.dim != 2:
        raise DimensionMismatch("the Liouville check is implemented for 2x2 systems only")
    w0 = wronskian(m, t0)
    ts = np.asarray(ts, dtype=float)
    direct = np.array([wronskian(m, t) for t in ts])
    formula = np.array([
        math.exp(adaptive_simpson(lambda s: trace_term(qde, s), t0, t, tol=tol)) * w0
        for t in ts])
    denom = np.maximum(np.abs(formula), 1e-300)
    err = float(np.max(np.abs(direct - formula) / denom)) if ts.size else 0.0
    return WronskianReport(ts, direct, formula, err)


def vector_residual(qde: LinearQDE, x: Callable[[float], QVec], t: float,
                    h: float = FD_STEP) -> float:
    """||x'(t) - A(t) x(t)||, derivative by central differences."""
    def arr(s):
        v = x(s)
        return v.array if isinstance(v, QVec) else np.asarray(v, dtype=float)

    deriv = (arr(t + h) - arr(t - h)) / (2.0 * h)
    r = deriv - qmatmul_arr(qde.coeff_array(t), arr(t))
    return float(np.sqrt(np.sum(r * r)))


def module_structure_check(qde: LinearQDE, x: Callable[[float], QVec], q,
                           ts: Sequence[float], precondition_tol: float = 1e-8):
    """Residuals of ``x(t) q`` and ``q x(t)`` as candidate solutions.

    Returns ``(right_residual, left_residual)``, each the maximum over
    ``ts``.  ``x`` itself must solve the system to ``precondition_tol``.
    """
    q_arr = Quat.coerce(q).as_array()

    def arr(s):
        v = x(s)
        return v.array if isinstance(v, QVec) else np.asarray(v, dtype=float)

    base = max(vector_residual(qde, arr, t) for t in ts)
    if base > precondition_tol:
        raise NotASolution(f"trajectory residual {base:.3e} exceeds {precondition_tol:g}")
    right = max(vector_residual(qde, lambda s: qmul_arr(arr(s), q_arr), t) for t in ts)
    left = max(vector_residual(qde, lambda s: qmul_arr(q_arr, arr(s)), t) for t in ts)
    return right, left


def line_residual(v, direction) -> float:
    """Distance from ``v`` to the right line ``direction * H``."""
    v = v if isinstance(v, QVec) else QVec(v)
    d = direction if isinstance(direction, QVec) else QVec(direction)
    u = d.array / d.norm()
    # projection coefficient c = u^+ v, a quaternion
    c = np.sum(qmul_arr(qconj_arr(u), v.array), axis=0)
    r = v.array - qmul_arr(u, c)
    return float(np.sqrt(np.sum(r * r)))
