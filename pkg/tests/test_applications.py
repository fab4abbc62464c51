import math

import numpy as np
import pytest

from qde import (BodyRates, CurveGeometry, NonUnitAxis, Quat, axis_angle_quat,
                 frame_from_quat, propagate_attitude, propagate_attitude_wertz,
                 propagate_frenet, rotate)
from qde.applications import (attitude_csv, attitude_qde, frame_csv, frenet_K,
                              frenet_reference, rates_from_csv)
from qde.quat import exp_quat

K = Quat(0, 0, 0, 1)


def test_axis_angle_examples():
    assert np.allclose(axis_angle_quat((0, 0, 1), math.pi).as_array(), [0, 0, 0, 1], atol=1e-16)
    assert axis_angle_quat((0, 1, 0), 0.0) == Quat(1.0)
    s = math.sqrt(2) / 2
    assert np.allclose(axis_angle_quat((1, 0, 0), math.pi / 2).as_array(), [s, s, 0, 0])
    with pytest.raises(NonUnitAxis):
        axis_angle_quat((1, 1, 0), 1.0)
    e = np.array([1.0, 2.0, -2.0]) / 3.0
    assert axis_angle_quat(e, 2.2).norm() == pytest.approx(1.0, abs=1e-12)


def test_rotate():
    q = axis_angle_quat((0, 0, 1), math.pi / 2)
    assert np.allclose(rotate(q, (1, 0, 0)), (0, 1, 0), atol=1e-15)


def test_spin_about_z():
    c, t = 1.3, 1.0
    traj = propagate_attitude(BodyRates.constant(0, 0, c), Quat(1.0), t)
    q = traj.states[-1, 0]
    assert np.abs(q - axis_angle_quat((0, 0, 1), c * t).as_array()).max() <= 1e-8
    assert np.allclose(q, exp_quat(K * (0.5 * c * t)).as_array(), atol=1e-8)


def test_zero_rates_constant_attitude():
    q0 = axis_angle_quat((0, 1, 0), 0.4)
    traj = propagate_attitude(BodyRates.constant(), q0, 1.0, 100)
    assert np.array_equal(traj.states[-1, 0], q0.as_array())


def _wobble():
    return BodyRates(lambda t: (0.3 * math.sin(2 * t), -0.7, 1.1 * math.cos(t)))


def test_unit_norm_preserved():
    traj = propagate_attitude(_wobble(), axis_angle_quat((1, 0, 0), 0.3), 1.0)
    assert np.abs(np.linalg.norm(traj.states[:, 0], axis=1) - 1).max() <= 1e-8
    ts, qs = propagate_attitude_wertz(_wobble(), axis_angle_quat((1, 0, 0), 0.3), 1.0)
    assert np.abs(np.linalg.norm(qs, axis=1) - 1).max() <= 1e-8


def test_two_attitude_forms_agree():
    q0 = axis_angle_quat((0, 0.6, 0.8), 0.9)
    traj = propagate_attitude(_wobble(), q0, 1.0)
    _, qs = propagate_attitude_wertz(_wobble(), q0, 1.0)
    v = np.array([0.2, -1.0, 0.5])
    for a, b in zip(traj.states[::500, 0], qs[::500]):
        assert np.allclose(rotate(Quat(*a), v), rotate(Quat(*b), v), atol=1e-8)
        assert np.allclose(a, b, atol=1e-10)


def test_attitude_composition():
    rates = BodyRates.constant(0, 0, 0.8)
    first = propagate_attitude(rates, Quat(1.0), 0.4).states[-1, 0]
    both = propagate_attitude(rates, Quat(*first), 1.0, t0=0.4).states[-1, 0]
    direct = propagate_attitude(rates, Quat(1.0), 1.0).states[-1, 0]
    assert np.abs(both - direct).max() <= 1e-8


def test_attitude_qde_is_conjugate_form():
    qde = attitude_qde(BodyRates.constant(1, 2, 3))
    assert qde(0.0)[0, 0] == Quat(0, -0.5, -1.0, -1.5)


def test_rates_validation():
    with pytest.raises(ValueError):
        BodyRates(lambda t: (1.0, float("nan"), 0.0))(0.0)


def test_frenet_flat_curve_constant():
    ss, qs = propagate_frenet(CurveGeometry.helix(0.0, 0.0), Quat(1.0), 1.0, 50)
    assert np.array_equal(qs[-1], [1, 0, 0, 0])


def test_frenet_helix_against_direct_frame_system():
    geom = CurveGeometry.helix(0.8, 0.3, speed=1.5)
    ss, qs = propagate_frenet(geom, Quat(1.0), 1.0)
    _, frames = frenet_reference(geom, np.eye(3), 1.0, steps=len(ss) - 1)
    err = max(np.abs(np.array(frame_from_quat(q)) - f).max() for q, f in zip(qs, frames))
    assert err <= 1e-6
    assert np.abs(np.linalg.norm(qs, axis=1) - 1).max() <= 1e-8
    for q in qs[::1000]:
        f = np.array(frame_from_quat(q))
        assert np.abs(f @ f.T - np.eye(3)).max() <= 1e-6


def test_frenet_K_is_right_product():
    kappa, tau = 0.7, -0.4
    q = np.array([0.3, -0.1, 0.8, 0.5])
    right = (Quat(*q) * Quat(0, tau, 0, kappa)).as_array()
    assert np.allclose(frenet_K(kappa, tau) @ q, right)
    assert np.array_equal(frenet_K(kappa, tau), -frenet_K(kappa, tau).T)


def test_frenet_varying_geometry():
    geom = CurveGeometry(lambda s: 1 + 0.2 * s, lambda s: math.cos(s), lambda s: 0.5 * s)
    ss, qs = propagate_frenet(geom, Quat(1.0), 1.0)
    _, frames = frenet_reference(geom, np.eye(3), 1.0, steps=len(ss) - 1)
    assert max(np.abs(np.array(frame_from_quat(q)) - f).max() for q, f in zip(qs, frames)) <= 1e-6


def test_rates_from_csv(tmp_path):
    text = "t,wx,wy,wz\n0,0,0,0\n1,0,0,2\n"
    rates = rates_from_csv(text)
    assert rates(0.5) == (0.0, 0.0, 1.0)
    p = tmp_path / "rates.csv"
    p.write_text(text)
    assert rates_from_csv(str(p))(0.25) == (0.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        rates_from_csv("t,wx\n0,1\n")


def test_csv_writers():
    out = attitude_csv([0.0, 1.0], [[1, 0, 0, 0], [0, 0, 0, -1]])
    assert out.splitlines() == ["t,q0,q1,q2,q3,norm", "0,1,0,0,0,1", "1,0,0,0,-1,1"]
    out = frame_csv([0.0], [[1, 0, 0, 0]])
    assert out.splitlines()[1] == "0,1,0,0,0,1,0,0,0,1"
