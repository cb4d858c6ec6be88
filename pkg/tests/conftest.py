import pytest

_LINES = []


@pytest.fixture
def acceptance_log():
    """Collects PASS/FAIL lines, echoed in the terminal summary even without ``-s``."""
    return _LINES


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
