"""Quaternion algebra, quaternion matrices and linear quaternion ODEs."""
from .errors import *  # noqa: F401,F403
from .quat import (EPS_PURE, Quat, conj, exp_quat, format_quat, im, inv, mul, norm,
                   parse_quat, re)
from .qmatrix import (ComplexAdjoint, QMat, QVec, cdet2, conj_transpose, ddet, ddet_w2,
                      expm, expm_series, from_adjoint, inverse, rank, rdet2,
                      singular_threshold, to_adjoint)
from .quadrature import adaptive_simpson
from .engine import (IVP, FundamentalMatrix, LinearQDE, Method, Trajectory,
                     commuting_split, diagonal_timevarying, fundamental_constant,
                     fundamental_jordan, fundamental_numeric, fundamental_split,
                     jordan_exp, nilpotent_exp, second_order_reduce, solve_ivp)
from .eigen import RightEigenpair, fundamental_eigen, right_eigenpairs
from .analysis import (Dependence, WronskianReport, left_dependent, liouville_check,
                       module_structure_check, right_dependent, wronskian)
from .applications import (BodyRates, CurveGeometry, attitude_qde, axis_angle_quat,
                           frame_from_quat, frenet_qde, propagate_attitude,
                           propagate_attitude_wertz, propagate_frenet, rotate, wertz_qde)

__version__ = "0.1.0"
