import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from qde import QMat, Quat  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
quats = st.builds(Quat, finite, finite, finite, finite)


def qmats(n, m=None, bound=2.0):
    m = n if m is None else m
    comp = st.floats(min_value=-bound, max_value=bound, allow_nan=False)
    return st.lists(comp, min_size=n * m * 4, max_size=n * m * 4).map(
        lambda v: QMat(np.array(v).reshape(n, m, 4)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


def random_qmat(rng, n, m=None, scale=1.0):
    m = n if m is None else m
    return QMat(scale * rng.standard_normal((n, m, 4)))


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
