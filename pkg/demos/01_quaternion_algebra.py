"""
Quaternion scalars and matrices
===============================

Products, the exponential, literals, and the complex adjoint that backs
every spectral computation.
"""

import numpy as np

from qde import QMat, Quat, ddet, exp_quat, expm, parse_quat, rank, to_adjoint
from qde.qmatrix import cdet2, left_scale, rdet2, right_scale

i, j, k = parse_quat("i"), parse_quat("j"), parse_quat("k")

# multiplication does not commute
print("ij =", i * j, "  ji =", j * i)
print("(1+i)(1+j) =", Quat(1, 1) * Quat(1, 0, 1))

# Euler form of the exponential; |exp q| = exp(Re q)
q = parse_quat("0.3+0.4i-0.2j+0.1k")
print("exp(q) =", exp_quat(q), " |exp q| =", exp_quat(q).norm(), " e^0.3 =", np.exp(0.3))
print("exp(pi i) =", exp_quat(i * np.pi))

###############################################################################
# Scaling a matrix from the left and from the right gives different answers.
a = QMat([[i]])
print("right_scale([[i]], j) =", right_scale(a, j)[0, 0])
print("left_scale(j, [[i]])  =", left_scale(j, a)[0, 0])

###############################################################################
# Two Cayley determinants of the same matrix disagree.  This matrix is
# singular (its second column is the first times -k), which ddet sees and
# neither Cayley expansion does.
m = QMat([[i, j], [k, 1]])
print("rdet =", rdet2(m), " cdet =", cdet2(m))
print("ddet =", ddet(m), " rank =", rank(m))

regular = QMat.parse("1,i;j,k")
print("ddet of [[1,i],[j,k]] =", ddet(regular), " rank =", rank(regular))

###############################################################################
# The complex adjoint is multiplicative.
rng = np.random.default_rng(0)
a, b = QMat(rng.standard_normal((3, 3, 4))), QMat(rng.standard_normal((3, 3, 4)))
gap = np.abs(to_adjoint(a @ b).matrix - to_adjoint(a).matrix @ to_adjoint(b).matrix).max()
print("max |chi(AB) - chi(A)chi(B)| =", gap)

# the matrix exponential of a Jordan-like block
print(expm(QMat.parse("k,1;0,k"), 1.0).to_text(digits=8))
