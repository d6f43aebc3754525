import json
from fractions import Fraction
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def published():
    raw = json.loads((DATA / "published_matrices.json").read_text(encoding="utf-8"))
    return {k: [[Fraction(x) for x in row] for row in v] for k, v in raw.items()}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
