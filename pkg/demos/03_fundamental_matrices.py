"""
Fundamental matrices four ways
==============================

Constant-coefficient systems have closed forms; the RK4 integrator is the
independent check.  All constructions agree once normalised to M(0) = I.
"""

import numpy as np

from qde import (ConditionViolated, DefectiveMatrix, LinearQDE, QMat, Quat, diagonal_timevarying,
                 fundamental_constant, fundamental_eigen, fundamental_numeric,
                 fundamental_split, right_eigenpairs)
from qde.presets import example1_closed_form

###############################################################################
# Diagonal part plus a commuting nilpotent part.
a = QMat.parse("k,1;0,k")
split = fundamental_split(a)
print("split at t=1:\n" + split(1.0).to_text(digits=8))
try:
    fundamental_eigen(a)
except DefectiveMatrix as exc:
    print("eigen method refused:", exc)

###############################################################################
# Right eigenpairs.  The eigenvalue i+j is reported as its complex
# representative sqrt(2) i.
b = QMat.parse("i,j;0,i+j")
for pair in right_eigenpairs(b):
    print("lambda =", pair.lam, " q =", [str(q) for q in pair.vector], f" res={pair.residual:.1e}")
eig = fundamental_eigen(b)

###############################################################################
# Cross-check every method against expm after normalising.
qde = LinearQDE.constant(b, (0.0, 1.0))
methods = {"expm": fundamental_constant(b), "eigen": eig, "numeric": fundamental_numeric(qde)}
ref = methods["expm"].normalized()
for name, fm in methods.items():
    diff = max(fm.normalized()(t).max_abs_diff(ref(t)) for t in np.linspace(0, 1, 5))
    print(f"{name:8s} residual={fm.residual(qde, np.linspace(0.05, 0.95, 16)):.1e}  vs expm={diff:.1e}")

###############################################################################
# In [[i,1],[0,j]] the off-diagonal 1 couples e^{it} and e^{jt}; the closed form
# carries an integral evaluated by adaptive Simpson.
ex1 = fundamental_numeric(LinearQDE.constant(QMat.parse("i,1;0,j"), (0.0, 2.0)))
print("[[i,1],[0,j]] max error on [0,2]:",
      max(ex1(t).max_abs_diff(example1_closed_form(t)) for t in np.linspace(0, 2, 21)))

###############################################################################
# Time-varying diagonal systems have a closed form only when each
# coefficient commutes with its own integral.
fm = diagonal_timevarying([lambda t: Quat(0, np.cos(t))], interval=(0.0, 1.0))
print("exp(i sin 1) =", fm(1.0)[0, 0])
try:
    diagonal_timevarying([lambda t: Quat(0, 1, t, 0)], interval=(0.0, 1.0))
except ConditionViolated as exc:
    print("rejected:", exc)
