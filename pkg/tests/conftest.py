import pytest

from qtm import ModelParams

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fig2():
    """Weak-coupling reference point."""
    return ModelParams(omega=1.0, g=0.01, gamma_left=0.01, gamma_right=0.02,
                       t_left=0.6, t_right=0.4)


@pytest.fixture
def fig5():
    """Strong-coupling reference point with a zero-temperature cold bath."""
    return ModelParams(omega=1.0, g=0.8, gamma_left=0.01, gamma_right=0.02,
                       t_left=1.0, t_right=0.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
