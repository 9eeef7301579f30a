import pytest

from ac2var.core import build_named, direct_product
from ac2var.structure import rees_semigroup, sandwich_from_labels


def rees_c2(rows):
    return sandwich_from_labels(build_named("C2"), rows)


@pytest.fixture
def ac2():
    return build_named("AC2")


@pytest.fixture
def a2():
    return build_named("A2")


@pytest.fixture
def b21():
    return build_named("B21")


@pytest.fixture
def a2c2():
    return direct_product(build_named("A2"), build_named("C2"))


@pytest.fixture
def rees9():
    return rees_semigroup(rees_c2([["1", "1"], ["0", "1"]]))


@pytest.fixture
def rees_twisted():
    return rees_semigroup(rees_c2([["1", "1"], ["1", "c"]]))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
