import numpy as np
import pytest

from shiftcorr.newform_coeffs import NewformSpec
from shiftcorr.zero_data import bundled_zeros

AC_RESULTS = {}


@pytest.fixture(scope="session")
def delta():
    return NewformSpec.delta()


@pytest.fixture(scope="session")
def ec11():
    return NewformSpec.elliptic_curve((0, -1, 1, -10, -20), 11, "11.a2")


@pytest.fixture(scope="session")
def zeros_ec(ec11):
    return bundled_zeros("11.a2", spec=ec11)


@pytest.fixture(scope="session")
def zeros_delta(delta):
    return bundled_zeros("delta", spec=delta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def symmetric(g):
    """Close a set of positive ordinates under negation, sorted."""
    g = np.sort(np.asarray(g, dtype=float))
    return np.concatenate([-g[::-1], g])


def pytest_terminal_summary(terminalreporter):
    if not AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(AC_RESULTS, key=lambda k: int(k.split("-")[1])):
        ok, detail = AC_RESULTS[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}  {detail}")
