import pytest

from ptwell.core import WellConfig
from ptwell.secular import find_roots_on_hyperbola
from ptwell.spectrum import t_window_for_levels

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cfg_g2():
    return WellConfig(1.0, 0.5, 2.0)


@pytest.fixture(scope="session")
def roots_g2(cfg_g2):
    return find_roots_on_hyperbola(cfg_g2, t_window_for_levels(cfg_g2, 6))[:6]
