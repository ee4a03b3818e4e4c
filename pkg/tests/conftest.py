import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from femtoalloc.config import SystemConfig  # noqa: E402


@pytest.fixture(scope="session")
def cfg():
    return SystemConfig()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
