import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Collects one line per acceptance criterion for the terminal summary."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_criterion_key):
            terminalreporter.write_line(line)


def _criterion_key(line):
    head = line.split()[0]
    num = "".join(ch for ch in head if ch.isdigit())
    return (int(num) if num else 99, head)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def unit_phase(theta):
    return complex(math.cos(theta), math.sin(theta))
