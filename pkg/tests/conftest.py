import pytest

_RESULTS: list[str] = []


@pytest.fixture
def report():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _RESULTS.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_RESULTS, key=lambda l: int(l.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
