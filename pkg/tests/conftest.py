from __future__ import annotations

from pathlib import Path

import pytest

from treegen import build_fig_1_2

DATA = Path(__file__).parent / "data"


@pytest.fixture
def fig12():
    return build_fig_1_2()


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
