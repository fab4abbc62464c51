"""Quaternion scalars.

A quaternion is stored as four doubles ``(w, x, y, z)`` meaning
``w + x i + y j + z k`` with ``i^2 = j^2 = k^2 = ijk = -1``.

Besides the immutable :class:`Quat` value type this module carries the
array kernels (``*_arr``) used by the matrix and solver layers.  Those
operate on ``float64`` arrays whose last axis has length 4 and broadcast
over the leading axes.
"""
from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import DomainError, ParseError

__all__ = [
    "Quat", "mul", "conj", "norm", "inv", "re", "im", "exp_quat",
    "parse_quat", "format_quat", "qmul_arr", "qconj_arr", "qexp_arr",
    "EPS_PURE",
]

# below this pure-part length exp() uses the series limit of sin(r)/r
EPS_PURE = 1e-12


@dataclass(frozen=True)
class Quat:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    # construction ---------------------------------------------------------
    @classmethod
    def from_array(cls, a) -> "Quat":
        w, x, y, z = (float(v) for v in a)
        return cls(w, x, y, z)

    @classmethod
    def coerce(cls, value) -> "Quat":
        """Accept a Quat, a real number, a complex number or a literal string."""
        if isinstance(value, Quat):
            return value
        if isinstance(value, str):
            return parse_quat(value)
        if isinstance(value, Real):
            return cls(float(value))
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        arr = np.asarray(value, dtype=float)
        if arr.shape == (4,):
            return cls.from_array(arr)
        raise TypeError(f"cannot interpret {value!r} as a quaternion")

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __iter__(self):
        return iter((self.w, self.x, self.y, self.z))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Real):
            return Quat(self.w + other, self.x, self.y, self.z)
        if not isinstance(other, Quat):
            return NotImplemented
        return Quat(self.w + other.w, self.x + other.x,
                    self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __neg__(self):
        return Quat(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        if isinstance(other, Real):
            return Quat(self.w - other, self.x, self.y, self.z)
        if not isinstance(other, Quat):
            return NotImplemented
        return Quat(self.w - other.w, self.x - other.x,
                    self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real):
            return Quat(self.w * other, self.x * other,
                        self.y * other, self.z * other)
        if not isinstance(other, Quat):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        # only reached for real left operands, which commute
        if isinstance(other, Real):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Quat(self.w / other, self.x / other,
                        self.y / other, self.z / other)
        return NotImplemented

    def __abs__(self):
        return self.norm()

    # unary helpers --------------------------------------------------------
    def conj(self) -> "Quat":
        return Quat(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.hypot(self.w, self.x, self.y, self.z)     # no under/overflow

    def inv(self) -> "Quat":
        return inv(self)

    @property
    def real(self) -> float:
        return self.w

    @property
    def pure(self) -> "Quat":
        return Quat(0.0, self.x, self.y, self.z)

    def exp(self) -> "Quat":
        return exp_quat(self)

    def __str__(self):
        return format_quat(self)


def mul(p: Quat, q: Quat) -> Quat:
    """Hamilton product ``p q``."""
    return Quat(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def conj(q: Quat) -> Quat:
    return q.conj()


def norm(q: Quat) -> float:
    return q.norm()


def inv(q: Quat) -> Quat:
    n = q.norm()
    if n == 0.0:
        raise DomainError("zero quaternion has no inverse")
    return (q.conj() / n) / n


def re(q: Quat) -> float:
    return q.w


def im(q: Quat) -> Quat:
    return q.pure


def exp_quat(q: Quat) -> Quat:
    """Exponential via the Euler form ``e^w (cos r + sin r * v/r)``, r = |v|."""
    r = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    ew = math.exp(q.w)
    if r < EPS_PURE:
        s = 1.0 - r * r / 6.0
    else:
        s = math.sin(r) / r
    c = math.cos(r)
    return Quat(ew * c, ew * s * q.x, ew * s * q.y, ew * s * q.z)


# ---------------------------------------------------------------------------
# array kernels

def qmul_arr(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Broadcasting Hamilton product over the last axis."""
    pw, px, py, pz = np.moveaxis(np.asarray(p, dtype=float), -1, 0)
    qw, qx, qy, qz = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    return np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ], axis=-1)


def qconj_arr(q: np.ndarray) -> np.ndarray:
    out = np.array(q, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qexp_arr(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    v = q[..., 1:]
    r = np.sqrt(np.sum(v * v, axis=-1))
    small = r < EPS_PURE
    safe_r = np.where(small, 1.0, r)
    s = np.where(small, 1.0 - r * r / 6.0, np.sin(r) / safe_r)
    ew = np.exp(q[..., 0])
    out = np.empty_like(q)
    out[..., 0] = ew * np.cos(r)
    out[..., 1:] = (ew * s)[..., None] * v
    return out


# ---------------------------------------------------------------------------
# literal grammar: signed decimal terms with an optional unit suffix

_NUMBER = _re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_UNITS = {"": 0, "i": 1, "j": 2, "k": 3}


def parse_quat(text: str) -> Quat:
    """Parse literals such as ``"1-2i+0.5k"`` or ``"2k+1"``.

    Terms may come in any order; each unit (real, i, j, k) may appear at
    most once.  Whitespace is ignored.
    """
    if not isinstance(text, str):
        raise TypeError("parse_quat expects a string")
    comps = [0.0, 0.0, 0.0, 0.0]
    seen = [False] * 4
    pos, n = 0, len(text)
    nterms = 0

    def skip_ws(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    pos = skip_ws(pos)
    if pos == n:
        raise ParseError("empty quaternion literal", pos)
    while pos < n:
        start = pos
        sign = 1.0
        if text[pos] in "+-":
            sign = -1.0 if text[pos] == "-" else 1.0
            pos = skip_ws(pos + 1)
        elif nterms > 0:
            raise ParseError("expected '+' or '-' between terms", pos)
        m = _NUMBER.match(text, pos)
        if m:
            value = float(m.group())
            pos = skip_ws(m.end())
        else:
            value = None
        unit = ""
        if pos < n and text[pos] in "ijk":
            unit = text[pos]
            pos += 1
        if value is None:
            if not unit:
                raise ParseError(f"unexpected character {text[pos:pos + 1]!r}"
                                 if pos < n else "dangling sign", pos)
            value = 1.0
        slot = _UNITS[unit]
        if seen[slot]:
            raise ParseError(f"duplicate {'real' if not unit else unit} term", start)
        seen[slot] = True
        comps[slot] = sign * value
        nterms += 1
        pos = skip_ws(pos)
    return Quat(*comps)


def _fmt(v: float, digits) -> str:
    if digits is not None:
        return f"{v:.{digits}g}"
    text = repr(v)
    return text[:-2] if text.endswith(".0") else text


def format_quat(q: Quat, digits: int | None = None) -> str:
    """Inverse of :func:`parse_quat`.

    ``digits=None`` uses the shortest round-tripping repr; an integer gives
    a fixed number of significant digits (17 also round-trips exactly).
    """
    parts = []
    for value, unit in zip(q, ("", "i", "j", "k")):
        if value == 0.0:
            continue
        if not math.isfinite(value):
            raise DomainError(f"cannot format non-finite component {value}")
        mag = _fmt(abs(value), digits)
        if unit and mag == "1":
            mag = ""
        sign = "-" if value < 0 else "+"
        parts.append((sign, mag + unit))
    if not parts:
        return "0"
    out = []
    for idx, (sign, body) in enumerate(parts):
        if idx == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(sign + body)
    return "".join(out)


# unit constants
ONE = Quat(1.0)
I = Quat(0.0, 1.0)
J = Quat(0.0, 0.0, 1.0)
K = Quat(0.0, 0.0, 0.0, 1.0)
