import math

import numpy as np
import pytest

from conftest import random_qmat
from qde import (DimensionMismatch, LinearQDE, NotASolution, QMat, QVec, Quat, ddet, exp_quat,
                 fundamental_numeric, left_dependent, liouville_check, module_structure_check,
                 right_dependent, singular_threshold, wronskian)
from qde.analysis import trace_term, vector_residual
from qde.presets import example1_closed_form
from qde.quat import qmul_arr

I, J, K = Quat(0, 1), Quat(0, 0, 1), Quat(0, 0, 0, 1)
TS = np.linspace(0.0, 1.0, 11)


# dependence -----------------------------------------------------------------------

def test_basis_independent():
    assert not right_dependent([[1, 0], [0, 1]])
    assert not left_dependent([[1, 0], [0, 1]])


def test_example3_vectors_independent():
    assert not right_dependent([[1, 0], [1, 1]])


def test_right_dependent_certificate(rng):
    for _ in range(50):
        v = QVec(rng.standard_normal((3, 4)))
        eta = Quat(*rng.standard_normal(4))
        dep = right_dependent([v, v * eta])
        assert dep and dep.residual <= 1e-8
        c1, c2 = dep.coefficients
        # v c1 + v eta c2 = 0  =>  c1 = -eta c2
        assert np.allclose(c1.as_array(), (-(eta * c2)).as_array(), atol=1e-8)
        assert max(c1.norm(), c2.norm()) == pytest.approx(1.0)


def test_left_dependent_certificate(rng):
    for _ in range(50):
        v = QVec(rng.standard_normal((2, 4)))
        eta = Quat(*rng.standard_normal(4))
        dep = left_dependent([v, eta * v])
        assert dep and dep.residual <= 1e-8
        c1, c2 = dep.coefficients
        assert np.allclose(c1.as_array(), (-(c2 * eta)).as_array(), atol=1e-8)


def test_right_but_not_left_witness():
    pair = [[1, I], [J, K]]          # (j, k) = (1, i) j, but q (1, i) = (j, k) forces q = j, ji = -k
    assert right_dependent(pair)
    assert not left_dependent(pair)


def test_random_search_finds_side_asymmetry(rng):
    found = 0
    for _ in range(20):
        v = QVec(rng.standard_normal((2, 4)))
        w = v * Quat(*rng.standard_normal(4))
        if right_dependent([v, w]) and not left_dependent([v, w]):
            found += 1
    assert found >= 15


def test_three_vectors_in_h2_dependent(rng):
    vecs = [QVec(rng.standard_normal((2, 4))) for _ in range(3)]
    dep = right_dependent(vecs)
    assert dep and dep.residual <= 1e-8


def test_dependence_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        right_dependent([[1, 0], [1, 0, 0]])
    with pytest.raises(DimensionMismatch):
        left_dependent([[1], [1, 0]])


# Wronskian ------------------------------------------------------------------------

def test_wronskian_examples():
    assert wronskian(lambda t: QMat.identity(2), 0.3) == 1.0
    assert wronskian(example1_closed_form, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_wronskian_equals_ddet(rng):
    for _ in range(100):
        m = random_qmat(rng, 2)
        assert wronskian(m) == pytest.approx(ddet(m), rel=1e-12, abs=1e-12)


def test_wronskian_zero_for_dependent_solutions(rng):
    a = random_qmat(rng, 2)
    qde = LinearQDE.constant(a, (0.0, 1.0))
    fm = fundamental_numeric(qde, 0.0, 2000)
    eta = Quat(*rng.standard_normal(4))
    x1 = fm.solution(QVec([1, I]))
    x2 = lambda t: x1(t) * eta
    m = lambda t: QMat.from_columns([x1(t), x2(t)])
    for t in TS:
        assert abs(wronskian(m, t)) <= singular_threshold(m(t))


def test_zero_or_nowhere_dichotomy(rng):
    for _ in range(5):
        a = random_qmat(rng, 2)
        fm = fundamental_numeric(LinearQDE.constant(a, (0.0, 1.0)), 0.0, 2000)
        eta = Quat(*rng.standard_normal(4))
        c = QVec(rng.standard_normal((2, 4)))
        cols = lambda t: QMat.from_columns([fm.solution(c)(t), fm.solution(c)(t) * eta])
        assert abs(wronskian(cols, 0.0)) <= singular_threshold(cols(0.0))
        for t in TS:
            scale = max(1.0, cols(t).norm() ** 4)
            assert abs(wronskian(cols, t)) <= 1e-8 * scale
        # independent columns stay away from zero
        m = fm.eval
        assert min(abs(wronskian(m, t)) for t in TS) > 0


def test_wronskian_dependence_equivalence(rng):
    for k in range(200):
        v = QVec(rng.standard_normal((2, 4)))
        w = v * Quat(*rng.standard_normal(4)) if k % 2 else QVec(rng.standard_normal((2, 4)))
        m = QMat.from_columns([v, w])
        assert bool(right_dependent([v, w])) == (abs(wronskian(m)) <= singular_threshold(m))


# Liouville ------------------------------------------------------------------------

def test_liouville_trace_free_example1():
    a = QMat.parse("i,1;0,j")
    qde = LinearQDE.constant(a, (0.0, 1.0))
    assert trace_term(qde, 0.5) == 0.0
    rep = liouville_check(qde, example1_closed_form, 0.0, TS)
    assert rep.max_rel_err <= 1e-8
    assert np.abs(rep.w_values - 1.0).max() <= 1e-8


def test_liouville_zero_system():
    qde = LinearQDE.constant(QMat.zeros(2), (0.0, 1.0))
    m0 = QMat.parse("1,i;j,2")
    rep = liouville_check(qde, lambda t: m0, 0.0, TS)
    assert np.all(rep.w_values == ddet(m0)) and rep.max_rel_err == 0.0


def test_liouville_real_diagonal():
    qde = LinearQDE.constant(QMat.identity(2), (0.0, 1.0))
    fm = fundamental_numeric(qde)
    rep = liouville_check(qde, fm, 0.0, TS)
    assert np.allclose(rep.formula_values, np.exp(4 * TS), rtol=1e-12)
    assert rep.max_rel_err <= 1e-9


def test_liouville_time_varying_interior_t0():
    coeff = lambda t: QMat([[Quat(math.sin(t), 1), Quat(0, 0, t)],
                            [Quat(1), Quat(-0.3 * t, 0, 0, 1)]])
    qde = LinearQDE(2, coeff, (0.0, 1.0))
    fm = fundamental_numeric(qde, 0.5)
    rep = liouville_check(qde, fm, 0.5, TS)
    assert rep.max_rel_err <= 1e-6


def test_liouville_requires_2x2():
    qde = LinearQDE.constant(QMat.identity(3), (0.0, 1.0))
    with pytest.raises(DimensionMismatch):
        liouville_check(qde, lambda t: QMat.identity(3), 0.0, TS)


def test_report_csv():
    qde = LinearQDE.constant(QMat.identity(2), (0.0, 1.0))
    rep = liouville_check(qde, lambda t: QMat.identity(2) * math.exp(t), 0.0, [0.0, 1.0])
    lines = rep.to_csv().splitlines()
    assert lines[0] == "t,w_direct,w_formula,rel_err"
    assert lines[1] == "0,1,1,0"
    assert len(rep.rel_errors) == 2


# module structure -----------------------------------------------------------------

def test_counterexample_right_action():
    qde = LinearQDE.constant(QMat.parse("i,0;0,j"), (0.0, 1.0))
    x = lambda t: QVec([exp_quat(I * t), 0])
    right, left = module_structure_check(qde, x, K, TS[1:-1])
    assert right <= 1e-6
    right, left = module_structure_check(qde, x, Quat(1.0), TS[1:-1])
    assert right <= 1e-6 and left <= 1e-6


def test_left_action_failure_value_two():
    qde = LinearQDE.constant(QMat([[I]]), (0.0, 1.0))
    _, left = module_structure_check(qde, lambda t: QVec([exp_quat(I * t)]), J, TS)
    assert left >= 0.5
    assert left == pytest.approx(2.0, abs=1e-8)


def test_not_a_solution():
    qde = LinearQDE.constant(QMat([[I]]), (0.0, 1.0))
    with pytest.raises(NotASolution):
        module_structure_check(qde, lambda t: QVec([exp_quat(J * t)]), K, TS)


def test_superposition_closure(rng):
    coeff = lambda t: QMat([[Quat(0, math.cos(t)), Quat(1, 0, t)], [K, Quat(0.1, 1)]])
    qde = LinearQDE(2, coeff, (0.0, 1.0))
    fm = fundamental_numeric(qde)
    x1, x2 = fm.solution(QVec([1, 0])), fm.solution(QVec([J, 1]))
    for _ in range(5):
        q1, q2 = (rng.standard_normal(4) for _ in range(2))
        x = lambda t: QVec(qmul_arr(x1(t).array, q1) + qmul_arr(x2(t).array, q2))
        assert max(vector_residual(qde, x, t) for t in TS[1:-1]) <= 1e-6
