import pytest

from fogbisim.repro import named_strategies, counterexample_grammar
from generators import ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def g():
    return counterexample_grammar()


@pytest.fixture(scope="session")
def strategies(g):
    return named_strategies(g)


@pytest.fixture(scope="session")
def S(strategies):
    return strategies["S"]


