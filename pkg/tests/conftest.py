import pytest

from vacuum_rc.cosmology import CosmoParams
from vacuum_rc.units import CONSTANTS

ACCEPTANCE_LINES = []


@pytest.fixture
def params():
    return CosmoParams()


@pytest.fixture
def proton():
    return CONSTANTS.proton_mass


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
