import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from telescope.classifiers import clear_caches  # noqa: E402

_criteria = []


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion."""

    def record(name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        _criteria.append(line)
        print(line)
        return passed

    return record


@pytest.fixture(autouse=True)
def _fresh_kernel_cache():
    clear_caches()
    yield


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for line in _criteria:
            terminalreporter.write_line(line)
