import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from specfilt.config import CALIBRATED_CUTOFF  # noqa: E402
from specfilt.filters import FilterDesign  # noqa: E402

FAMILY_ORDERS = {
    "bw": (1, 2, 3, 4, 5, 6),
    "lr": (2, 4, 6),
    "ci": (1, 2, 3, 4, 5, 6),
    "cii": (1, 2, 3, 4, 5, 6),
}


def all_designs(cutoff=1.0, kind="lowpass"):
    return [FilterDesign(f, n, 0.1, cutoff, kind) for f, orders in FAMILY_ORDERS.items() for n in orders]


@pytest.fixture
def calibrated():
    return CALIBRATED_CUTOFF


@pytest.fixture
def omega_signal():
    return 10 * math.pi


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
