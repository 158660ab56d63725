import pytest

from casimir_ge.dielectric import ge_model
from casimir_ge.quantities import Geometry
from casimir_ge.reflection import ReflectionPair

R_LENS = 0.151
T_ROOM = 300.0
TABLE_SEPARATIONS = (0.6e-6, 0.7e-6, 0.8e-6, 0.9e-6, 1.0e-6)


class Vacuum:
    """eps = 1 everywhere: nothing reflects."""

    name = "vacuum"

    def reflector(self, l, zeta, geom):
        return lambda y: ReflectionPair(0.0, 0.0)


class StaticIdealReflector:
    """Both polarizations perfectly reflecting at l=0, transparent for l>=1."""

    name = "ideal-static"

    def reflector(self, l, zeta, geom):
        if l == 0:
            return lambda y: ReflectionPair(1.0, 1.0)
        return lambda y: ReflectionPair(0.0, 0.0)


def ge_geometry(a):
    return Geometry(a, R_LENS, T_ROOM)


@pytest.fixture
def geom_1um():
    return ge_geometry(1.0e-6)


@pytest.fixture(params=["neglected", "drude", "plasma", "diffusion"])
def any_model(request):
    return ge_model(request.param)


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    """Register one acceptance line; printed in the terminal summary."""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
