import sys
from pathlib import Path

import pytest

from pseudocohom import catalog
from pseudocohom.scalars import QQ, ScalarField

F5 = ScalarField(5)
FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "pseudocohom" / "fixtures"

sys.path.insert(0, str(Path(__file__).resolve().parent))

# Filled by tests/test_acceptance.py, printed in the terminal summary.
CRITERIA: list = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)


@pytest.fixture
def fix_a():
    return catalog.heisenberg_data(QQ)


@pytest.fixture
def fix_a5():
    return catalog.heisenberg_data(F5)


@pytest.fixture
def fix_e():
    return catalog.aff1_semidirect_data(QQ)


@pytest.fixture
def sl2():
    return catalog.sl2(QQ)
