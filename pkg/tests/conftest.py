from __future__ import annotations

import pytest

_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record one PASS/FAIL line for the acceptance summary."""

    def record(number: int, ok: bool, text: str) -> None:
        _LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {text}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
        terminalreporter.write_line(line)
