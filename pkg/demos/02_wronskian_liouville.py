"""
Wronskian, Liouville's formula and the right-module structure
=============================================================

The Wronskian of a 2x2 quaternion system is the real number ddet M(t).
It evolves by the exponential of the integrated real trace, so it either
vanishes everywhere or nowhere.
"""

import numpy as np

from qde import (LinearQDE, QMat, QVec, Quat, exp_quat, fundamental_numeric, left_dependent,
                 liouville_check, module_structure_check, right_dependent, wronskian)

i, j, k = Quat(0, 1), Quat(0, 0, 1), Quat(0, 0, 0, 1)


def coeff(t):
    return QMat([[Quat(np.sin(t), 1), Quat(0, 0, t)], [Quat(1), Quat(-0.3 * t, 0, 0, 1)]])


qde = LinearQDE(2, coeff, (0.0, 1.0), "demo")
fm = fundamental_numeric(qde)
report = liouville_check(qde, fm, 0.0, np.linspace(0, 1, 6))
print(report.to_csv(digits=10))
print("max relative error:", report.max_rel_err)

###############################################################################
# Right dependence is what makes the Wronskian vanish.  The pair below is
# right dependent, (j, k) = (1, i) j, yet no left combination works.
pair = [[1, i], [j, k]]
print("right dependent:", bool(right_dependent(pair)))
print("left dependent: ", bool(left_dependent(pair)))

x1 = fm.solution(QVec([1, 0]))
eta = Quat(0.5, -1, 2, 0.25)
cols = lambda t: QMat.from_columns([x1(t), x1(t) * eta])
print("W of a dependent pair:", [f"{wronskian(cols, t):.1e}" for t in (0.0, 0.5, 1.0)])

###############################################################################
# Solutions form a right module: x(t) q is a solution, q x(t) in general is not.
diag = LinearQDE.constant(QMat.parse("i,0;0,j"), (0.0, 1.0))
ts = np.linspace(0, 1, 11)
right, _ = module_structure_check(diag, lambda t: QVec([exp_quat(i * t), 0]), k, ts)
scalar = LinearQDE.constant(QMat([[i]]), (0.0, 1.0))
_, left = module_structure_check(scalar, lambda t: QVec([exp_quat(i * t)]), j, ts)
print(f"residual of x(t) k: {right:.2e}   residual of j x(t): {left:.6f}")
