import sys
from fractions import Fraction

import pytest

from supersle.catalog import STANDARD


@pytest.fixture
def std():
    return STANDARD


@pytest.fixture(params=[Fraction(2, 3), Fraction(3), Fraction(1, 2)], ids=lambda k: f"k={k}")
def k(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
