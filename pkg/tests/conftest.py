import pytest

from qbnet import Query, load_example

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fig1():
    return load_example("fig1")


@pytest.fixture
def d_given_l():
    return Query(("D", "d"), {"L": "l"})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
