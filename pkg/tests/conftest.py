from __future__ import annotations

import pytest

from punctel.css import builtin_registry

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture
def record():
    """Log one acceptance line; the lines are repeated in the terminal summary."""

    def _record(criterion: str, ok: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
