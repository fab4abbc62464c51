"""
Attitude kinematics and Frenet frames
=====================================

Both are 4-dimensional real systems that live on the unit quaternions.
"""

import numpy as np

from qde import (BodyRates, CurveGeometry, Quat, axis_angle_quat, frame_from_quat,
                 propagate_attitude, propagate_attitude_wertz, propagate_frenet)
from qde.applications import attitude_csv, frenet_reference

###############################################################################
# Spin about z at 1 rad/s for one second.
traj = propagate_attitude(BodyRates.constant(0, 0, 1.0), Quat(1.0), 1.0)
print("q(1) =", Quat(*traj.states[-1, 0]))
print("axis-angle:", axis_angle_quat((0, 0, 1), 1.0))

###############################################################################
# A tumbling body: the quaternion-product form and the Omega-matrix form agree.
rates = BodyRates(lambda t: (0.3 * np.sin(2 * t), -0.7, 1.1 * np.cos(t)))
traj = propagate_attitude(rates, Quat(1.0), 2.0)
ts, qs = propagate_attitude_wertz(rates, Quat(1.0), 2.0)
print("max component gap:", np.abs(traj.states[:, 0] - qs).max())
print(attitude_csv(traj.ts[::5000], traj.states[::5000, 0], digits=6))

###############################################################################
# A helix: transport the frame quaternion and compare with the 9-dim frame ODE.
geom = CurveGeometry.helix(0.8, 0.3)
ss, qs = propagate_frenet(geom, Quat(1.0), 2.0)
_, frames = frenet_reference(geom, np.eye(3), 2.0, steps=len(ss) - 1)
err = max(np.abs(np.array(frame_from_quat(q)) - f).max() for q, f in zip(qs, frames))
print("frame error vs direct integration:", err)
T, B, N = frame_from_quat(qs[-1])
print("T =", T, "\nB =", B, "\nN =", N)
