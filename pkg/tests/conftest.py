import numpy as np
import pytest

from spinopt import timeopt


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def su2():
    return timeopt.make_system("su2")


@pytest.fixture(scope="session")
def su4():
    return timeopt.make_system("su4")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
