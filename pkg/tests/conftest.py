import pytest

_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record one acceptance line; all lines are echoed in the terminal summary."""

    def add(line: str) -> None:
        _LINES.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
