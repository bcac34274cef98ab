import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lqn.geometry import atom_names  # noqa: E402

ACCEPTANCE_LINES = []


def to_names(m):
    """Label matrix as nested lists of atom names, for the oracles."""
    return np.array(atom_names(m.q, m.n), dtype=object)[m.labels].tolist()


@pytest.fixture
def record_acceptance():
    def record(criterion: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
