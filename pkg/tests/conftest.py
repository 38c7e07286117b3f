import pytest

from casimir_thermal import get_material

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def gold():
    return get_material("Au")


@pytest.fixture(scope="session")
def gold_plasma(gold):
    return gold.with_model("plasma")


@pytest.fixture(scope="session")
def ideal_proxy():
    return get_material("ideal_proxy")


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
