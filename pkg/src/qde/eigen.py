"""Right eigenpairs ``A q = q lam`` and the eigenvector fundamental matrix.

Right eigenvalues come in similarity classes ``{a^-1 lam a}``; each class
contains exactly one complex number ``w + x i`` with ``x >= 0`` and that is
the representative reported here.  The complex adjoint of an n x n matrix
has 2n eigenvalues in conjugate pairs, one pair per class, so keeping the
half with nonnegative imaginary part gives the n standardized values.

For a complex eigenvalue ``mu`` of ``chi(A)`` with eigenvector ``(u, v)``
the quaternion vector ``u - conj(v) j`` satisfies ``A q = q mu``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _linalg
from .engine import FundamentalMatrix, Method
from .errors import DefectiveMatrix, NonSquare, ResidualTooLarge, SingularCertificate
from .qmatrix import QMat, QVec, qmatmul_arr, rank, to_adjoint
from .quat import Quat, qexp_arr, qmul_arr

__all__ = ["RightEigenpair", "right_eigenpairs", "fundamental_eigen", "eigen_residual"]

RESIDUAL_TOL = 1e-8


def eigen_residual(a: QMat, vector: QVec, lam) -> float:
    """||A v - v lam|| (Euclidean)."""
    lam = Quat.coerce(lam).as_array()
    r = qmatmul_arr(a.array, vector.array) - qmul_arr(vector.array, lam)
    return float(np.sqrt(np.sum(r * r)))


@dataclass(frozen=True)
class RightEigenpair:
    lam: Quat
    vector: QVec
    residual: float

    def rotated(self, alpha) -> tuple:
        """Equivalent pair ``(alpha^-1 lam alpha, q alpha)``."""
        alpha = Quat.coerce(alpha)
        return alpha.inv() * self.lam * alpha, self.vector * alpha


def _cluster(values, tol):
    """Group nearly equal complex numbers; returns list of index lists."""
    order = sorted(range(len(values)), key=lambda i: (values[i].real, values[i].imag))
    groups = []
    for i in order:
        for g in groups:
            if abs(values[g[0]] - values[i]) <= tol:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _to_quat_vector(c: np.ndarray, n: int) -> np.ndarray:
    u, v = c[:n], c[n:]
    x2 = -np.conj(v)
    return np.stack([u.real, u.imag, x2.real, x2.imag], axis=-1)


def _standardize(vec: np.ndarray) -> np.ndarray:
    """Unit norm, then a complex phase on the right so that the first
    nonzero entry has a real nonnegative complex part (or, if that part is
    zero, a real positive j-coefficient)."""
    vec = vec / math.sqrt(float(np.sum(vec * vec)))
    mags = np.sqrt(np.sum(vec * vec, axis=-1))
    first = int(np.argmax(mags > 1e-12 * mags.max()))
    w, x, y, z = vec[first]
    if math.hypot(w, x) > 1e-12:
        phi = math.atan2(x, w)           # a -> a e^{-i phi}
    else:
        phi = -math.atan2(z, y)          # b j e^{-i phi} = b e^{i phi} j
    phase = np.array([math.cos(phi), -math.sin(phi), 0.0, 0.0])
    return _snap(qmul_arr(vec, phase), 1.0)


def _snap(arr, scale, rel=1e-14):
    """Zero out round-off sized components."""
    arr = np.array(arr, dtype=float)
    arr[np.abs(arr) < rel * scale] = 0.0
    return arr


def right_eigenpairs(a: QMat, cluster_tol: float = 1e-6) -> list:
    """Standardized right eigenpairs of a square quaternion matrix.

    Returns up to n pairs sorted by eigenvalue.  A defective matrix yields
    fewer pairs than n (its eigenvectors cannot span); :func:`fundamental_eigen`
    turns that into :class:`DefectiveMatrix`.
    """
    a = a if isinstance(a, QMat) else QMat(a)
    if not a.is_square:
        raise NonSquare(f"expected square matrix, got {a.rows}x{a.cols}")
    n = a.rows
    chi = to_adjoint(a).matrix
    mus = _linalg.eigvals(chi)
    scale = max(1.0, float(np.abs(chi).max()))
    tol = cluster_tol * scale
    pairs = []
    for group in _cluster(list(mus), tol):
        center = complex(np.mean(mus[group]))
        if center.imag < -tol:
            continue
        if abs(center.imag) <= tol:
            center = complex(center.real, 0.0)
            wanted = (len(group) + 1) // 2
        else:
            wanted = len(group)
        basis = _linalg.null_space(chi - center * np.eye(2 * n), rtol=1e-7)
        lam = Quat(*_snap([center.real, abs(center.imag)], scale))
        chosen = []
        for col in basis.T:
            cand = _to_quat_vector(col, n)
            trial = chosen + [cand]
            if rank(QMat(np.stack(trial, axis=1))) == len(trial):
                chosen = trial
            if len(chosen) == wanted:
                break
        for vec in chosen:
            vec = _standardize(vec)
            qv = QVec(vec)
            res = eigen_residual(a, qv, lam)
            if res > RESIDUAL_TOL * scale:
                raise ResidualTooLarge(f"eigenpair residual {res:.3e} for lambda={lam}")
            pairs.append(RightEigenpair(lam, qv, res))
    pairs.sort(key=lambda p: (p.lam.w, p.lam.x))
    return pairs


def fundamental_eigen(a: QMat, t0: float = 0.0) -> FundamentalMatrix:
    """``M(t)`` with columns ``q_i exp(lam_i (t - t0))`` (exponential on the right)."""
    a = a if isinstance(a, QMat) else QMat(a)
    pairs = right_eigenpairs(a)
    n = a.rows
    if len(pairs) < n:
        raise DefectiveMatrix(f"only {len(pairs)} independent right eigenvectors for n={n}")
    vecs = np.stack([p.vector.array for p in pairs], axis=1)
    lams = np.stack([p.lam.as_array() for p in pairs])

    def ev(t):
        return QMat(qmul_arr(vecs, qexp_arr(lams * (t - t0))[None, :, :]))

    try:
        fm = FundamentalMatrix(n, ev, Method.EIGEN, t0)
    except SingularCertificate as exc:
        raise DefectiveMatrix(f"eigenvectors are right dependent: {exc}") from exc
    return fm
