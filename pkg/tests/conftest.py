from pathlib import Path

import pytest

from amrnorm import read_corpus

DATA = Path(__file__).parent / 'data'

# Filled by test_acceptance; printed once at the end of the session.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope='session')
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope='session')
def fixture_entries():
    return read_corpus(DATA / 'fixtures.txt')


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
