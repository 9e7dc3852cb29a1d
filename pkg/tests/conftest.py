"""Shared fixtures plus the acceptance-summary hook.

Acceptance tests register one line per criterion through the
``acceptance_record`` fixture; the terminal summary prints them as a block
so a run's pass/fail status per criterion is visible at a glance.
"""

import random

import numpy as np
import pytest

_ACCEPTANCE_LINES: list[tuple[int, str, bool, str]] = []


@pytest.fixture
def acceptance_record():
    """Callable(criterion_number, name, passed, detail) -> records a summary line."""

    def record(number: int, name: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE_LINES.append((number, name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_ACCEPTANCE_LINES):
        status = "PASS" if passed else "FAIL"
        line = f"ACCEPTANCE {number}: {status} - {name}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20260822)


@pytest.fixture
def nprng():
    return np.random.default_rng(20260822)
