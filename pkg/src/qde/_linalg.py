"""Dense complex kernels: Hessenberg/QR eigenvalues and the Pade exponential.

numpy supplies the BLAS-level pieces (matmul, LU solve, SVD); the
eigenvalue iteration and the exponential are written out here.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import EigenFailure

__all__ = ["hessenberg", "eigvals", "expm_complex", "null_space"]


def _householder(x):
    """Return (v, beta) with (I - beta v v^H) x = alpha e1."""
    v = np.array(x, dtype=complex, copy=True)
    nx = np.linalg.norm(v)
    if nx == 0.0:
        return v, 0.0
    phase = v[0] / abs(v[0]) if v[0] != 0 else 1.0
    v[0] += phase * nx
    vv = np.vdot(v, v).real
    if vv == 0.0:
        return v, 0.0
    return v, 2.0 / vv


def hessenberg(a: np.ndarray) -> np.ndarray:
    """Upper Hessenberg form of ``a`` by Householder reflections (similarity)."""
    h = np.array(a, dtype=complex, copy=True)
    n = h.shape[0]
    for k in range(n - 2):
        v, beta = _householder(h[k + 1:, k])
        if beta == 0.0:
            continue
        h[k + 1:, k:] -= beta * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= beta * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _givens(a, b):
    """c, s with [[c, s], [-conj(s), c]] @ [a, b] = [r, 0] (c real)."""
    if b == 0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, np.conj(b) / abs(b)
    na = abs(a)
    r = math.hypot(na, abs(b))
    c = na / r
    s = (a / na) * np.conj(b) / r
    return c, s


def _wilkinson(h, hi):
    a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
    c, d = h[hi, hi - 1], h[hi, hi]
    tr = a + d
    det = a * d - b * c
    disc = np.sqrt(tr * tr / 4.0 - det)
    mu1, mu2 = tr / 2.0 + disc, tr / 2.0 - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def eigvals(a: np.ndarray, max_iter: int | None = None) -> np.ndarray:
    """Eigenvalues of a complex square matrix.

    Householder reduction to Hessenberg form followed by single-shift QR
    sweeps (Givens rotations, Wilkinson shift, exceptional shift every ten
    stalled sweeps).  Raises :class:`EigenFailure` after ``max_iter`` sweeps,
    100*n by default.
    """
    h = hessenberg(a)
    n = h.shape[0]
    if max_iter is None:
        max_iter = 100 * max(n, 1)
    eps = np.finfo(float).eps
    hi = n - 1
    total = 0
    stall = 0
    while hi > 0:
        # find the start of the active unreduced block
        lo = hi
        while lo > 0:
            scale = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if scale == 0.0:
                scale = np.abs(h).max() or 1.0
            if abs(h[lo, lo - 1]) <= eps * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            stall = 0
            continue
        if total >= max_iter:
            raise EigenFailure(f"QR iteration did not converge in {max_iter} sweeps")
        total += 1
        stall += 1
        if stall % 10 == 0:
            mu = h[hi, hi] + 1.5 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson(h, hi)
        # one shifted QR sweep on rows/cols lo..hi, via bulge-free Givens
        for k in range(lo, hi + 1):
            h[k, k] -= mu
        rots = []
        for k in range(lo, hi):
            c, s = _givens(h[k, k], h[k + 1, k])
            rows = h[k:k + 2, k:].copy()
            h[k, k:] = c * rows[0] + s * rows[1]
            h[k + 1, k:] = -np.conj(s) * rows[0] + c * rows[1]
            rots.append((c, s))
        for k, (c, s) in zip(range(lo, hi), rots):
            cols = h[:k + 2, k:k + 2].copy()
            h[:k + 2, k] = c * cols[:, 0] + np.conj(s) * cols[:, 1]
            h[:k + 2, k + 1] = -s * cols[:, 0] + c * cols[:, 1]
        for k in range(lo, hi + 1):
            h[k, k] += mu
    return np.diag(h).copy()


def null_space(a: np.ndarray, rtol: float = 1e-7) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of ``a``."""
    a = np.asarray(a, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    scale = max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > rtol * scale))
    return vh[rank:].conj().T


# ---------------------------------------------------------------------------
# scaling and squaring with diagonal Pade approximants

_THETA = {3: 1.495585217958292e-2, 5: 2.539398330063230e-1,
          7: 9.504178996162932e-1, 9: 2.097847961257068e0,
          13: 5.371920351148152e0}


def _pade_coeffs(m):
    return [math.factorial(2 * m - j) * math.factorial(m)
            / (math.factorial(2 * m) * math.factorial(j) * math.factorial(m - j))
            for j in range(m + 1)]


def _pade(a, m):
    n = a.shape[0]
    b = _pade_coeffs(m)
    ident = np.eye(n, dtype=a.dtype)
    powers = [ident, a]
    for _ in range(2, m + 1):
        powers.append(powers[-1] @ a)
    u = sum(b[j] * powers[j] for j in range(1, m + 1, 2))
    v = sum(b[j] * powers[j] for j in range(0, m + 1, 2))
    return np.linalg.solve(v - u, v + u)


def expm_complex(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a complex square matrix."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return a.copy()
    norm1 = np.abs(a).sum(axis=0).max()
    for m in (3, 5, 7, 9):
        if norm1 <= _THETA[m]:
            return _pade(a, m)
    s = max(0, int(math.ceil(math.log2(norm1 / _THETA[13])))) if norm1 > 0 else 0
    r = _pade(a / 2.0 ** s, 13)
    for _ in range(s):
        r = r @ r
    return r
