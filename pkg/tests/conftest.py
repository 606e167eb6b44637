import numpy as np
import pytest
from hypothesis import settings, strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

finite = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False, width=64)


def quats(*shape):
    return arrays(np.float64, tuple(shape) + (4,), elements=finite)


def nonzero_quats():
    return quats().filter(lambda x: np.sum(x**2) > 1e-6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Coefficients of the two reference processes used throughout.
AR_BETA = np.array([0.45, -0.01, 0.3, -0.35])
MA_BETA = np.array([-0.08, 0.21, -0.8, -0.79])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
