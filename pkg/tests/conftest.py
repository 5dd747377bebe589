import pytest

_LINES = {}


@pytest.fixture
def report():
    """report(criterion, ok, detail) records one pass/fail line for the summary."""

    def _report(criterion: int, ok: bool, detail: str) -> bool:
        line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _LINES[(criterion, detail)] = line
        print(line, flush=True)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_LINES):
        terminalreporter.write_line(_LINES[key])
