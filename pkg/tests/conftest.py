import numpy as np
import pytest

from pickspace.pick import decompose
from pickspace.rkhs import make_kernel

DA_POINTS = [[0, 0], [0.3, 0.1], [0.2j, -0.4], [0.5, 0.5j], [-0.3, 0.2]]
SZEGO_POINTS = [0, 0.3, -0.4j, 0.5 + 0.2j, -0.3 + 0.5j]

# acceptance lines, printed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture
def szego_two():
    return make_kernel("szego", [0.0, 0.5])


@pytest.fixture
def szego_pick():
    return decompose(make_kernel("szego", SZEGO_POINTS))


@pytest.fixture
def da_pick():
    return decompose(make_kernel("drury_arveson", DA_POINTS))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
