import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import gaussian_mixture  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def three_bump():
    return gaussian_mixture(256, (40, 128, 216), 8.0)


@pytest.fixture
def two_bump():
    return gaussian_mixture(64, (16, 48), 3.0)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(label, passed, detail)."""
    def record(label: str, passed: bool, detail: str = "", status: str | None = None):
        status = status or ("PASS" if passed else "FAIL")
        ACCEPTANCE_LINES.append(f"{status:<4}  {label}: {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
