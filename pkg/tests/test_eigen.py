import math

import numpy as np
import pytest

from conftest import random_qmat
from qde import (DefectiveMatrix, LinearQDE, NonSquare, QMat, QVec, Quat, ddet, exp_quat,
                 expm, fundamental_eigen, inverse, right_eigenpairs)
from qde.analysis import line_residual
from qde.eigen import eigen_residual

I, J, K = Quat(0, 1), Quat(0, 0, 1), Quat(0, 0, 0, 1)
SAMPLES = np.linspace(0.0, 1.0, 16)


def test_diag_i_j():
    pairs = right_eigenpairs(QMat.parse("i,0;0,j"))
    assert [p.lam for p in pairs] == [I, I]
    for p in pairs:
        assert p.residual <= 1e-10
    lines = sorted(min(line_residual(p.vector, d) for d in ([1, 0], [0, 1])) for p in pairs)
    assert lines[-1] <= 1e-12


def test_example3_eigenlines():
    a = QMat.parse("i,j;0,i+j")
    pairs = right_eigenpairs(a)
    assert pairs[0].lam == I
    assert pairs[1].lam.as_array() == pytest.approx([0, math.sqrt(2), 0, 0], abs=1e-12)
    assert line_residual(pairs[0].vector, [1, 0]) <= 1e-8
    assert line_residual(pairs[1].vector, [1, 1]) <= 1e-8


def test_example3_eigenvalue_i_plus_j_is_in_class():
    # i+j is similar to sqrt(2) i: same real part and same modulus of the pure part
    lam = Quat(0, 1, 1, 0)
    assert lam.norm() == pytest.approx(math.sqrt(2)) and lam.w == 0.0
    a = QMat.parse("i,j;0,i+j")
    assert eigen_residual(a, QVec([1, 1]), lam) <= 1e-15
    assert eigen_residual(a, QVec([1, 0]), I) <= 1e-15


def test_real_diagonal():
    pairs = right_eigenpairs(QMat.parse("2,0;0,3"))
    assert [p.lam for p in pairs] == [Quat(2.0), Quat(3.0)]


def test_pair_invariants(rng):
    for n in (1, 2, 3, 4):
        for _ in range(5):
            a = random_qmat(rng, n)
            pairs = right_eigenpairs(a)
            assert len(pairs) == n
            for p in pairs:
                assert p.lam.x >= 0 and p.lam.y == 0 and p.lam.z == 0
                assert p.vector.norm() == pytest.approx(1.0, abs=1e-12)
                assert p.residual <= 1e-8
                first = next(q for q in p.vector if q.norm() > 1e-12)
                assert first.x == 0.0 and (first.w > 0 or (first.w == 0 and first.y > 0))


def test_rotation_covariance(rng):
    a = random_qmat(rng, 3)
    for p in right_eigenpairs(a):
        for _ in range(5):
            alpha = Quat(*rng.standard_normal(4))
            lam, q = p.rotated(alpha)
            assert eigen_residual(a, q, lam) <= 1e-8 * max(1.0, alpha.norm())


def test_defective():
    a = QMat.parse("k,1;0,k")
    assert len(right_eigenpairs(a)) == 1
    with pytest.raises(DefectiveMatrix):
        fundamental_eigen(a)
    with pytest.raises(NonSquare):
        right_eigenpairs(QMat.zeros(2, 3))


def test_example3_fundamental():
    a = QMat.parse("i,j;0,i+j")
    qde = LinearQDE.constant(a, (0.0, 1.0))
    fm = fundamental_eigen(a)
    assert fm.residual(qde, SAMPLES) <= 1e-7
    assert min(abs(ddet(fm(t))) for t in SAMPLES) >= 0.1
    # the form written with the unstandardized pairs (1,0) i and (1,1) (i+j)
    def book(t):
        e1, e2 = exp_quat(I * t), exp_quat(Quat(0, t, t, 0))
        return QMat([[e1, e2], [0, e2]])
    from qde.engine import matrix_residual
    assert max(matrix_residual(qde, book, t) for t in SAMPLES) <= 1e-7
    q = inverse(fm(0.0)) @ book(0.0)
    for t in SAMPLES:
        assert (fm(t) @ q).max_abs_diff(book(t)) <= 1e-10


def test_diagonal_fundamental():
    fm = fundamental_eigen(QMat.parse("2,0;0,3"))
    assert fm(0.5).allclose(QMat.diag([math.exp(1.0), math.exp(1.5)]), 1e-12)


def test_eigen_vs_expm_right_factor(rng):
    for n in (2, 3):
        a = random_qmat(rng, n)
        fm = fundamental_eigen(a)
        q = inverse(fm(0.0))
        for t in (0.3, 1.0):
            assert (fm(t) @ q).max_abs_diff(expm(a, t)) <= 1e-8 * max(1.0, expm(a, t).norm())
