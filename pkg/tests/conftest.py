from __future__ import annotations

from pathlib import Path

import pytest

from forge.radix import BasePair
from forge.tm import parse_tm

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def b23() -> BasePair:
    return BasePair(2, 3)


@pytest.fixture(scope="session")
def halt_machine():
    return parse_tm((FIXTURES / "halt.tm").read_text())


@pytest.fixture(scope="session")
def loop_machine():
    return parse_tm((FIXTURES / "loop.tm").read_text())


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance outcome; the summary prints every recorded line."""

    def record(n: int, ok: bool, detail: str) -> None:
        _CRITERIA[n] = (ok, detail)
        print(_line(n, ok, detail))

    return record


def _line(n: int, ok: bool, detail: str) -> str:
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_line(n, *_CRITERIA[n]))
