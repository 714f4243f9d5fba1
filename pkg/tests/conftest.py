import pytest

from helpers import ACCEPTANCE_LINES, unit_frame


@pytest.fixture
def e1e2():
    return unit_frame([[1.0, 0.0], [0.0, 1.0]])


@pytest.fixture
def e1e2_minus_e1():
    return unit_frame([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
