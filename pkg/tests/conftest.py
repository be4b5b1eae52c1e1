"""Session fixtures and the acceptance summary printed after the run."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import helpers  # noqa: E402

from arclift import build_model  # noqa: E402

ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def cusp_q():
    return helpers.cusp_model()


@pytest.fixture(scope="session")
def cusp_f5():
    return helpers.cusp_model(field=helpers.F5)


@pytest.fixture(scope="session")
def node():
    return helpers.node_model()


@pytest.fixture(scope="session")
def shifted_node():
    return helpers.node_model(jet=("x^2", "x^4 + x^11"))


@pytest.fixture(scope="session")
def offjet():
    return helpers.cusp_model(jet=("x^3 + x^6", "x^2"))


@pytest.fixture(scope="session")
def tcurve():
    return build_model(helpers.tcurve_problem())


@pytest.fixture(scope="session")
def smooth():
    return build_model(helpers.smooth_problem())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        verdict, label = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"ACCEPTANCE {n}: {verdict} - {label}")
