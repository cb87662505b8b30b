import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cmrmatrix.potentials import PotentialKind  # noqa: E402

ALL_KINDS = [
    PotentialKind("rational"),
    PotentialKind("hyperbolic", 1.0),
    PotentialKind("trigonometric", 1.0),
]


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture(params=ALL_KINDS, ids=str)
def kind(request):
    return request.param


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
