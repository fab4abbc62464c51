"""Dense quaternion matrices and vectors.

Entries live in a read-only ``float64`` array of shape ``(rows, cols, 4)``
(``(dim, 4)`` for vectors).  Quaternion vectors form a *right* module:
``v * q`` scales on the right and ``q * v`` on the left, and the two differ.

Spectral work (inverse, rank, exponential, eigenvalues) goes through the
complex adjoint.  Writing ``A = A1 + A2 j`` with complex ``A1, A2``::

    chi(A) = [[ A1,        A2       ],
              [-conj(A2),  conj(A1) ]]

which is multiplicative and maps the conjugate transpose to the Hermitian
adjoint.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from . import _linalg
from .errors import (ConvergenceError, DimensionMismatch, NonSquare,
                     ParseError, SingularMatrix, StructureError)
from .quat import Quat, format_quat, parse_quat, qconj_arr, qexp_arr, qmul_arr

__all__ = [
    "QMat", "QVec", "ComplexAdjoint", "matmul", "add", "conj_transpose",
    "right_scale", "left_scale", "rdet2", "cdet2", "ddet", "ddet_w2",
    "to_adjoint", "from_adjoint", "inverse", "rank", "expm", "expm_series",
    "singular_threshold", "qmatmul_arr", "left_mult_operator", "apply_left_operator",
]


def qmatmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quaternion matrix product on raw arrays ``(n, m, 4) @ (m, p, 4)``.

    Also accepts ``b`` of shape ``(m, 4)`` (a column vector).
    """
    vec = b.ndim == 2
    if vec:
        b = b[:, None, :]
    aw, ax, ay, az = (a[..., c] for c in range(4))
    bw, bx, by, bz = (b[..., c] for c in range(4))
    out = np.stack([
        aw @ bw - ax @ bx - ay @ by - az @ bz,
        aw @ bx + ax @ bw + ay @ bz - az @ by,
        aw @ by - ax @ bz + ay @ bw + az @ bx,
        aw @ bz + ax @ by - ay @ bx + az @ bw,
    ], axis=-1)
    return out[:, 0, :] if vec else out


# structure constants: (p q)_c = sum_ab p_a q_b _HAMILTON[a, b, c]
_HAMILTON = np.zeros((4, 4, 4))
for _a, _b, _c, _s in [
        (0, 0, 0, 1), (1, 1, 0, -1), (2, 2, 0, -1), (3, 3, 0, -1),
        (0, 1, 1, 1), (1, 0, 1, 1), (2, 3, 1, 1), (3, 2, 1, -1),
        (0, 2, 2, 1), (1, 3, 2, -1), (2, 0, 2, 1), (3, 1, 2, 1),
        (0, 3, 3, 1), (1, 2, 3, 1), (2, 1, 3, -1), (3, 0, 3, 1)]:
    _HAMILTON[_a, _b, _c] = _s


def left_mult_operator(a: np.ndarray) -> np.ndarray:
    """Real ``(4n, 4m)`` matrix L with ``vec(A x) = L vec(x)`` for ``x`` in H^m.

    ``vec`` flattens an ``(m, 4)`` quaternion vector row by row.
    """
    n, m = a.shape[:2]
    return np.tensordot(a, _HAMILTON, axes=(2, 0)).transpose(0, 3, 1, 2).reshape(4 * n, 4 * m)


def apply_left_operator(op: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``A y`` for y of shape ``(m, 4)`` or ``(m, p, 4)`` given ``op = left_mult_operator(A)``."""
    if y.ndim == 2:
        return (op @ y.reshape(-1)).reshape(-1, 4)
    m, p, _ = y.shape
    out = op @ y.transpose(0, 2, 1).reshape(4 * m, p)
    return out.reshape(-1, 4, p).transpose(0, 2, 1)


def _freeze(arr):
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


def _entries_to_array(rows):
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        raise DimensionMismatch("matrix must have at least one row and column")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatch("ragged matrix rows")
    return np.array([[Quat.coerce(v).as_array() for v in r] for r in rows])


class QVec:
    """Quaternion column vector."""

    __slots__ = ("_a",)

    def __init__(self, data):
        if isinstance(data, QVec):
            arr = data._a
        elif isinstance(data, np.ndarray) and data.dtype != object and data.ndim == 2:
            arr = data
        else:
            arr = np.array([Quat.coerce(v).as_array() for v in data])
        if arr.ndim != 2 or arr.shape[1] != 4 or arr.shape[0] < 1:
            raise DimensionMismatch(f"bad vector array shape {arr.shape}")
        self._a = _freeze(arr)

    @classmethod
    def parse(cls, text: str) -> "QVec":
        """Comma-separated quaternion literals, e.g. ``"1,i"``."""
        return cls([parse_quat(t) for t in _split_nonempty(text, ",")])

    @classmethod
    def basis(cls, n: int, k: int) -> "QVec":
        a = np.zeros((n, 4))
        a[k, 0] = 1.0
        return cls(a)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    def __len__(self):
        return self.dim

    def __getitem__(self, i) -> Quat:
        return Quat.from_array(self._a[i])

    def __iter__(self):
        return (Quat.from_array(r) for r in self._a)

    @property
    def entries(self) -> list:
        return list(self)

    def norm(self) -> float:
        """Euclidean norm sqrt(sum |x_i|^2)."""
        return float(np.sqrt(np.sum(self._a ** 2)))

    def __add__(self, other):
        other = _as_qvec(other)
        _check_same(self.dim, other.dim)
        return QVec(self._a + other._a)

    def __sub__(self, other):
        other = _as_qvec(other)
        _check_same(self.dim, other.dim)
        return QVec(self._a - other._a)

    def __neg__(self):
        return QVec(-self._a)

    def __mul__(self, q):
        if isinstance(q, Real):
            return QVec(self._a * q)
        return QVec(qmul_arr(self._a, Quat.coerce(q).as_array()))

    def __rmul__(self, q):
        if isinstance(q, Real):
            return QVec(self._a * q)
        return QVec(qmul_arr(Quat.coerce(q).as_array(), self._a))

    def conj(self) -> "QVec":
        return QVec(qconj_arr(self._a))

    def as_matrix(self) -> "QMat":
        return QMat(self._a[:, None, :])

    def allclose(self, other, atol=1e-12) -> bool:
        other = _as_qvec(other)
        return self.dim == other.dim and bool(np.allclose(self._a, other._a, rtol=0, atol=atol))

    def __repr__(self):
        return "QVec([" + ", ".join(format_quat(q) for q in self) + "])"


class QMat:
    """Immutable dense quaternion matrix, row-major."""

    __slots__ = ("_a",)

    def __init__(self, data):
        if isinstance(data, QMat):
            arr = data._a
        elif isinstance(data, np.ndarray) and data.dtype != object and data.ndim == 3:
            arr = data
        else:
            arr = _entries_to_array(data)
        if arr.ndim != 3 or arr.shape[2] != 4 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(f"bad matrix array shape {arr.shape}")
        self._a = _freeze(arr)

    # constructors ---------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "QMat":
        a = np.zeros((n, n, 4))
        a[np.arange(n), np.arange(n), 0] = 1.0
        return cls(a)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "QMat":
        return cls(np.zeros((rows, rows if cols is None else cols, 4)))

    @classmethod
    def diag(cls, values) -> "QMat":
        values = [Quat.coerce(v) for v in values]
        n = len(values)
        a = np.zeros((n, n, 4))
        for i, v in enumerate(values):
            a[i, i] = v.as_array()
        return cls(a)

    @classmethod
    def from_columns(cls, columns) -> "QMat":
        cols = [_as_qvec(c) for c in columns]
        if len({c.dim for c in cols}) != 1:
            raise DimensionMismatch("columns have different lengths")
        return cls(np.stack([c.array for c in cols], axis=1))

    @classmethod
    def parse(cls, text: str) -> "QMat":
        """Parse the inline (``"k,1;0,k"``) or multi-line matrix text format."""
        rows = [r for r in text.replace("\n", ";").split(";") if r.strip()]
        if not rows:
            raise ParseError("empty matrix literal", 0)
        entries = []
        for r in rows:
            entries.append([parse_quat(t) for t in _split_nonempty(r, ",")])
        return cls(entries)

    @classmethod
    def from_json(cls, payload) -> "QMat":
        if isinstance(payload, str):
            payload = json.loads(payload)
        rows, cols = int(payload["rows"]), int(payload["cols"])
        flat = np.asarray(payload["entries"], dtype=float)
        if flat.shape != (rows * cols, 4):
            raise DimensionMismatch(f"expected {rows * cols} entries of 4 components")
        return cls(flat.reshape(rows, cols, 4))

    # views ----------------------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self):
        return self._a.shape[:2]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx) -> Quat:
        i, j = idx
        return Quat.from_array(self._a[i, j])

    @property
    def entries(self) -> list:
        """Row-major list of entries."""
        return [Quat.from_array(v) for v in self._a.reshape(-1, 4)]

    def column(self, j: int) -> QVec:
        return QVec(self._a[:, j, :])

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": self._a.reshape(-1, 4).tolist()}

    def to_text(self, digits: int | None = None) -> str:
        return "\n".join(",".join(format_quat(Quat.from_array(v), digits) for v in row)
                         for row in self._a) + "\n"

    # arithmetic -----------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, QVec):
            if self.cols != other.dim:
                raise DimensionMismatch(f"{self.shape} @ vector of length {other.dim}")
            return QVec(qmatmul_arr(self._a, other.array))
        return matmul(self, other)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        other = _as_qmat(other)
        _check_same(self.shape, other.shape)
        return QMat(self._a - other._a)

    def __neg__(self):
        return QMat(-self._a)

    def __mul__(self, q):
        if isinstance(q, Real):
            return QMat(self._a * q)
        return right_scale(self, q)

    def __rmul__(self, q):
        if isinstance(q, Real):
            return QMat(self._a * q)
        return left_scale(q, self)

    @property
    def H(self) -> "QMat":
        return conj_transpose(self)

    def norm(self) -> float:
        """Sum of entry moduli."""
        return float(np.sqrt(np.sum(self._a ** 2, axis=-1)).sum())

    def allclose(self, other, atol=1e-12) -> bool:
        other = _as_qmat(other)
        return self.shape == other.shape and bool(
            np.allclose(self._a, other._a, rtol=0, atol=atol))

    def max_abs_diff(self, other) -> float:
        other = _as_qmat(other)
        _check_same(self.shape, other.shape)
        return float(np.abs(self._a - other._a).max())

    def __eq__(self, other):
        if not isinstance(other, QMat):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    __hash__ = None

    def __repr__(self):
        body = "; ".join(", ".join(format_quat(Quat.from_array(v)) for v in row)
                         for row in self._a)
        return f"QMat([{body}])"


def _split_nonempty(text, sep):
    parts = text.split(sep)
    if any(not p.strip() for p in parts):
        raise ParseError(f"empty entry in {text!r}", 0)
    return parts


def _as_qmat(m) -> QMat:
    return m if isinstance(m, QMat) else QMat(m)


def _as_qvec(v) -> QVec:
    return v if isinstance(v, QVec) else QVec(v)


def _check_same(a, b):
    if a != b:
        raise DimensionMismatch(f"shape {a} does not match {b}")


def _check_square(m: QMat):
    if not m.is_square:
        raise NonSquare(f"expected a square matrix, got {m.rows}x{m.cols}")


# ---------------------------------------------------------------------------
# basic operations

def matmul(a: QMat, b: QMat) -> QMat:
    a, b = _as_qmat(a), _as_qmat(b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return QMat(qmatmul_arr(a.array, b.array))


def add(a: QMat, b: QMat) -> QMat:
    a, b = _as_qmat(a), _as_qmat(b)
    _check_same(a.shape, b.shape)
    return QMat(a.array + b.array)


def conj_transpose(a: QMat) -> QMat:
    return QMat(qconj_arr(_as_qmat(a).array).transpose(1, 0, 2))


def right_scale(a: QMat, q) -> QMat:
    """Every entry multiplied by ``q`` on the right."""
    return QMat(qmul_arr(_as_qmat(a).array, Quat.coerce(q).as_array()))


def left_scale(q, a: QMat) -> QMat:
    """Every entry multiplied by ``q`` on the left."""
    return QMat(qmul_arr(Quat.coerce(q).as_array(), _as_qmat(a).array))


def _check_2x2(m: QMat):
    if m.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {m.rows}x{m.cols}")


def rdet2(m: QMat) -> Quat:
    """Row expansion ``a11 a22 - a12 a21``."""
    m = _as_qmat(m)
    _check_2x2(m)
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def cdet2(m: QMat) -> Quat:
    """Column expansion ``a11 a22 - a21 a12``."""
    m = _as_qmat(m)
    _check_2x2(m)
    return m[0, 0] * m[1, 1] - m[1, 0] * m[0, 1]


def ddet_w2(m: QMat) -> float:
    """Four-term real expression of rdet(M M^+) for a 2x2 matrix."""
    m = _as_qmat(m)
    _check_2x2(m)
    a, b = m[0, 0], m[0, 1]
    c, d = m[1, 0], m[1, 1]
    cross = b * d.conj() * c * a.conj()
    # the last two terms are conjugates of each other, so their sum is 2 Re
    return (a.norm2() * d.norm2() + b.norm2() * c.norm2() - 2.0 * cross.w)


def ddet(m: QMat) -> float:
    """Double determinant.

    2x2 matrices use the closed four-term form; other sizes use the
    determinant of the complex adjoint, which agrees with it on 2x2 input
    and vanishes exactly on singular matrices.
    """
    m = _as_qmat(m)
    _check_square(m)
    if m.rows == 2:
        return ddet_w2(m)
    return float(np.linalg.det(to_adjoint(m).matrix).real)


def singular_threshold(m: QMat) -> float:
    """Scale-aware zero threshold for ddet: 1e-10 * max(1, ||M||^(2n))."""
    m = _as_qmat(m)
    return 1e-10 * max(1.0, m.norm() ** (2 * m.rows))


# ---------------------------------------------------------------------------
# complex adjoint

@dataclass(frozen=True)
class ComplexAdjoint:
    matrix: np.ndarray
    source_dims: tuple

    @property
    def rows(self):
        return self.matrix.shape[0]

    @property
    def cols(self):
        return self.matrix.shape[1]

    def __matmul__(self, other):
        n, _ = self.source_dims
        _, p = other.source_dims
        return ComplexAdjoint(self.matrix @ other.matrix, (n, p))


def _split_complex(arr):
    a1 = arr[..., 0] + 1j * arr[..., 1]
    a2 = arr[..., 2] + 1j * arr[..., 3]
    return a1, a2


def _adjoint_array(arr: np.ndarray) -> np.ndarray:
    a1, a2 = _split_complex(arr)
    return np.block([[a1, a2], [-a2.conj(), a1.conj()]])


def to_adjoint(a: QMat) -> ComplexAdjoint:
    a = _as_qmat(a)
    return ComplexAdjoint(_adjoint_array(a.array), a.shape)


def _structure_defect(c: np.ndarray, n: int, m: int) -> float:
    a1, a2 = c[:n, :m], c[:n, m:]
    return max(float(np.abs(c[n:, :m] + a2.conj()).max(initial=0.0)),
               float(np.abs(c[n:, m:] - a1.conj()).max(initial=0.0)))


def from_adjoint(c, tol: float = 1e-10) -> QMat:
    """Map a complex adjoint back to a quaternion matrix.

    Raises :class:`StructureError` if the block symmetry is violated by
    more than ``tol`` (relative to the largest entry when that exceeds 1).
    """
    if isinstance(c, ComplexAdjoint):
        n, m = c.source_dims
        c = c.matrix
    else:
        c = np.asarray(c, dtype=complex)
        if c.shape[0] % 2 or c.shape[1] % 2:
            raise StructureError(f"adjoint must have even dimensions, got {c.shape}")
        n, m = c.shape[0] // 2, c.shape[1] // 2
    if c.shape != (2 * n, 2 * m):
        raise StructureError(f"adjoint shape {c.shape} does not match {(n, m)}")
    scale = max(1.0, float(np.abs(c).max(initial=0.0)))
    if _structure_defect(c, n, m) > tol * scale:
        raise StructureError("matrix lacks the quaternion block structure")
    a1 = 0.5 * (c[:n, :m] + c[n:, m:].conj())
    a2 = 0.5 * (c[:n, m:] - c[n:, :m].conj())
    return QMat(np.stack([a1.real, a1.imag, a2.real, a2.imag], axis=-1))


def inverse(m: QMat) -> QMat:
    m = _as_qmat(m)
    _check_square(m)
    d = ddet(m)
    if abs(d) <= singular_threshold(m):
        raise SingularMatrix(f"matrix is singular (ddet = {d:.3e})")
    return from_adjoint(ComplexAdjoint(np.linalg.inv(to_adjoint(m).matrix), m.shape),
                        tol=1e-8)


def rank(m: QMat, rtol: float = 1e-10) -> int:
    """Quaternion rank; singular values of the adjoint come in equal pairs."""
    m = _as_qmat(m)
    s = np.linalg.svd(to_adjoint(m).matrix, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s[::2] > rtol * max(1.0, s[0])))


# ---------------------------------------------------------------------------
# exponentials

def expm(a: QMat, t: float = 1.0) -> QMat:
    """exp(A t) through the complex adjoint (scaling and squaring, Pade)."""
    a = _as_qmat(a)
    _check_square(a)
    c = _linalg.expm_complex(_adjoint_array(a.array) * t)
    return from_adjoint(ComplexAdjoint(c, a.shape), tol=1e-8)


def expm_series(a: QMat, t: float = 1.0, tol: float = 1e-18, max_terms: int = 200) -> QMat:
    """exp(A t) by the truncated power series in quaternion arithmetic.

    Stops once a term's norm drops below ``tol``; hitting ``max_terms``
    with a term still above 1e-12 raises :class:`ConvergenceError`.
    """
    a = _as_qmat(a)
    _check_square(a)
    at = a.array * t
    n = a.rows
    term = QMat.identity(n).array
    total = term.copy()
    term_norm = 1.0
    for k in range(1, max_terms + 1):
        term = qmatmul_arr(term, at) / k
        total += term
        term_norm = float(np.sqrt(np.sum(term ** 2, axis=-1)).sum())
        if term_norm < tol:
            return QMat(total)
    if term_norm > 1e-12:
        raise ConvergenceError(f"series not converged after {max_terms} terms "
                               f"(last term norm {term_norm:.3e})")
    return QMat(total)


def diag_exp(values, t: float = 1.0) -> QMat:
    """exp(D t) for D = diag(values): the scalar exponentials on the diagonal."""
    vals = np.array([Quat.coerce(v).as_array() for v in values]) * t
    n = len(vals)
    out = np.zeros((n, n, 4))
    out[np.arange(n), np.arange(n)] = qexp_arr(vals)
    return QMat(out)


def frobenius(m: QMat) -> float:
    return math.sqrt(float(np.sum(_as_qmat(m).array ** 2)))
