import numpy as np
import pytest

from triaxgeo import TriaxialEllipsoid
from triaxgeo.bodies import lookup

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def e321():
    return TriaxialEllipsoid(3.0, 2.0, 1.0)


@pytest.fixture
def earth():
    return lookup("Earth").ellipsoid


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion(request):
    """Record and print one PASS/FAIL line; repeated in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, title, ok, detail):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} | {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda item: item[0]):
            terminalreporter.write_line(line)
