import pytest

_LINES = []


@pytest.fixture
def report_criterion():
    """Record a one-line pass/fail verdict that is echoed in the terminal summary."""

    def record(label, passed, detail):
        line = f"{label}: {'PASS' if passed else 'FAIL'}  {detail}"
        _LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
