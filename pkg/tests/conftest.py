import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record ``(number, title, passed, detail)`` for the acceptance summary."""

    def record(number, title, passed, detail=""):
        ok = bool(passed) and _CRITERIA.get(number, (None, True))[1]
        _CRITERIA[number] = (title, ok, detail)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        terminalreporter.write_line(
            f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} {detail}")
