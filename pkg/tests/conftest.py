"""Shared test configuration.

Acceptance tests register one human-readable PASS/FAIL line each through
the `acceptance_log` fixture; the collected lines are printed as their own
section at the end of the run so the gate status is visible at a glance.
"""
import numpy as np
import pytest

_ACCEPTANCE_LINES = []


class _AcceptanceLog:
    def record(self, name: str, passed: bool, detail: str) -> None:
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE_LINES.append(f"[{status}] {name}: {detail}")


@pytest.fixture(scope="session")
def acceptance_log():
    return _AcceptanceLog()


@pytest.fixture()
def rng():
    return np.random.default_rng(20260817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
