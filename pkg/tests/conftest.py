import pytest

CRITERIA: list[str] = []


@pytest.fixture
def record():
    """Append one "PASS/FAIL criterion N: ..." line for the terminal summary."""
    def _record(number, ok, text):
        CRITERIA.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}")
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
