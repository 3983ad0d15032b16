import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from permlab.io import load
from permlab.kernel import Field
from permlab.perm_core import PermAlgebra

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures" / "paper"
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

Q, GF2, GF3, GF5 = Field(0), Field(2), Field(3), Field(5)


def fixture(name: str):
    return load(FIXTURES / name)


def class_i(F: Field) -> PermAlgebra:
    return PermAlgebra.from_table(F, 2, {(0, 0): {0: 1}, (1, 0): {1: 1}})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def census_gf3():
    from oracles import perm_tables
    return [PermAlgebra(GF3, np.array(t, dtype=np.int64).reshape(2, 2, 2)) for t in perm_tables(3, 2)]


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, whatever else ran."""
    lines = {}
    for status in ("passed", "failed", "xfailed", "xpassed"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion[" not in nodeid or rep.when != "call":
                continue
            number = int(nodeid.rsplit("_", 1)[-1].rstrip("]"))
            verdict = {"passed": "PASS", "failed": "FAIL", "xfailed": "FAIL (expected)",
                       "xpassed": "PASS (unexpected)"}[status]
            lines[number] = verdict
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(f"criterion {number:2d}: {lines[number]}")
