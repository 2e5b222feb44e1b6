import sys
from pathlib import Path

import pytest
from hypothesis import settings

from frpkit.representation import theta_construction
from frpkit.zoo import cyclic_algebra, point_algebra

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session")
def pa():
    return point_algebra()


@pytest.fixture(scope="session")
def theta(pa):
    return theta_construction(pa)


@pytest.fixture(scope="session")
def z3():
    return cyclic_algebra(3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
