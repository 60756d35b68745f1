import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import random_graph_matrices  # noqa: E402

from covassign import GaussianGraph  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture
def random_graph(rng):
    def make(n):
        return GaussianGraph(*random_graph_matrices(rng, n))
    return make


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
