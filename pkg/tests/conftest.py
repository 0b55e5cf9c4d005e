import sys

import pytest

from qcovlab import QContext

Q_GRID = (0.3, 0.5, 0.8)


@pytest.fixture(params=Q_GRID, ids=lambda q: f"q={q}")
def ctx(request) -> QContext:
    return QContext(request.param)


@pytest.fixture
def half() -> QContext:
    return QContext(0.5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
