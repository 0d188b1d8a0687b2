from __future__ import annotations

from pathlib import Path

import pytest

from pirebalance.fixtures import demo1_instance, table1_network

FIXTURES = Path(__file__).parent / "fixtures"

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def demo1():
    return demo1_instance()


@pytest.fixture
def table1():
    return table1_network()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
