"""Shared pytest wiring: collects acceptance lines for the end-of-run report.

The acceptance tests record one PASS/FAIL line each; the terminal summary
hook replays them after the test table so they appear in plain `pytest -v`
output without disabling capture.
"""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    def record(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
