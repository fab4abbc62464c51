"""Adaptive Simpson quadrature for real- and quaternion-valued integrands."""
from __future__ import annotations

import numpy as np

from .errors import IntegrationError

__all__ = ["adaptive_simpson"]


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, max_level: int = 30,
                     min_level: int = 3):
    """Integrate ``f`` over ``[a, b]``.

    ``f`` may return a float or a numpy array (a quaternion ``(4,)`` array,
    say); the error estimate uses the largest component.  A ``Quat`` result
    is converted through ``as_array``.  Raises :class:`IntegrationError`
    when an interval still fails the tolerance after ``max_level``
    bisections.  The first ``min_level`` bisections are always taken so a
    periodic integrand cannot fool the initial estimate.
    """
    def g(t):
        v = f(t)
        return np.asarray(v.as_array() if hasattr(v, "as_array") else v, dtype=float)

    if a == b:
        zero = np.zeros_like(g(a))
        return zero if zero.ndim else 0.0
    fa, fm, fb = g(a), g(0.5 * (a + b)), g(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    # explicit stack instead of recursion: (a, b, fa, fm, fb, whole, tol, level)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = np.zeros_like(whole)
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, level = stack.pop()
        mid = 0.5 * (lo + hi)
        f1, f2 = g(0.5 * (lo + mid)), g(0.5 * (mid + hi))
        left = (mid - lo) / 6.0 * (flo + 4.0 * f1 + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * f2 + fhi)
        err = np.max(np.abs(left + right - est))
        if err <= 15.0 * eps and level >= min_level:
            total = total + left + right + (left + right - est) / 15.0
        elif level >= max_level:
            raise IntegrationError(
                f"adaptive Simpson did not converge on [{lo}, {hi}] after {max_level} levels")
        else:
            stack.append((mid, hi, fmid, f2, fhi, right, eps / 2.0, level + 1))
            stack.append((lo, mid, flo, f1, fmid, left, eps / 2.0, level + 1))
    return total if total.ndim else float(total)
