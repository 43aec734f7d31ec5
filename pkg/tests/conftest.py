import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mixedquad.coordinates import build_symplectic  # noqa: E402
from mixedquad.inversive import build_circle_geometry  # noqa: E402
from mixedquad.reconstruction import reconstruct  # noqa: E402
from mixedquad.symmetry import find_polarity  # noqa: E402


@pytest.fixture(scope="session")
def W2():
    return build_symplectic(2)


@pytest.fixture(scope="session")
def W4():
    return build_symplectic(4)


@pytest.fixture(scope="session")
def W8():
    return build_symplectic(8)


@pytest.fixture(scope="session")
def rho2(W2):
    return find_polarity(W2)


@pytest.fixture(scope="session")
def rho8(W8):
    return find_polarity(W8)


@pytest.fixture(scope="session")
def G2(W2, rho2):
    return build_circle_geometry(W2, rho2)


@pytest.fixture(scope="session")
def G8(W8, rho8):
    return build_circle_geometry(W8, rho8)


@pytest.fixture(scope="session")
def R2(G2):
    return reconstruct(G2)


@pytest.fixture(scope="session")
def R8(G8):
    return reconstruct(G8)


_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when == "call" or report.failed:
        key = getattr(report, "criterion", None)
        if key is not None:
            ok = report.passed and _CRITERIA.get(key, True)
            _CRITERIA[key] = ok


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep.criterion = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), ok in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
