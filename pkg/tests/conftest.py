import math

import pytest

from realode import kernels

GRID = [-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0]
CONSTANTS = [-1.0, 0.0, 1.0, 2.0]
ICS = [(1.0, 0.0), (0.0, 1.0), (1.0, -1.0), (2.0, 3.0)]
COEFF_GRID = [(a, b) for a in GRID for b in GRID]


def ulps(x, y):
    """Distance in units of the last place of the larger magnitude."""
    if x == y:
        return 0.0
    return abs(x - y) / math.ulp(max(abs(x), abs(y)))


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
