import pytest

ACCEPTANCE = []


@pytest.fixture
def record_criterion():
    """Append ``(name, passed, detail)`` for the terminal summary."""

    def record(name, passed, detail=""):
        ACCEPTANCE.append((name, bool(passed), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
