from __future__ import annotations

import pytest

from badapprox.exactnum import NumberField, cm_structure

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def QQ():
    return NumberField.from_ints([0, 1])


@pytest.fixture(scope="session")
def R2():
    return NumberField.from_ints([-2, 0, 1])


@pytest.fixture(scope="session")
def R5():
    return NumberField.from_ints([-5, 0, 1])


@pytest.fixture(scope="session")
def GI():
    return NumberField.from_ints([1, 0, 1])


@pytest.fixture(scope="session")
def GI_cm(GI):
    return cm_structure(GI)


@pytest.fixture(scope="session")
def CYC10():
    return NumberField.from_ints([1, -1, 1, -1, 1])
