import pytest

from jerkplan.optimizer import OptimizerConfig
from jerkplan.presets import EX_PAP, LAB, YAL

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def expap():
    return EX_PAP


@pytest.fixture(scope="session")
def lab():
    return LAB


@pytest.fixture(scope="session")
def yal():
    return YAL


@pytest.fixture(scope="session")
def cfg_timeopt():
    return OptimizerConfig(segment_method="timeopt")


@pytest.fixture(scope="session")
def cfg_zv():
    return OptimizerConfig(segment_method="zv")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
