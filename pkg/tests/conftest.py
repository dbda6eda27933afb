import sys
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import strategies as st

from maninspace.scenario import load_scenario
from maninspace.symcalc import Chart, DiffForm, MultiVec, Poly

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

R2 = Chart("X", ("x1", "x2"))
R3 = Chart("X", ("x1", "x2", "x3"))


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.scn"


def scenario(name: str):
    return load_scenario(fixture_path(name).read_text())


@pytest.fixture
def load():
    return scenario


coefficients = st.builds(Fraction, st.integers(-3, 3), st.sampled_from([1, 1, 2]))


def exponents(chart, degree=2):
    return st.lists(st.integers(0, degree), min_size=chart.dim, max_size=chart.dim).filter(
        lambda e: sum(e) <= degree).map(tuple)


def polys(chart, degree=2, terms=3):
    return st.dictionaries(exponents(chart, degree), coefficients, max_size=terms).map(
        lambda t: Poly(chart, t))


def exteriors(cls, chart, degree, poly_degree=2, density=3):
    keys = list(combinations(range(chart.dim), degree))
    return st.dictionaries(st.sampled_from(keys), polys(chart, poly_degree, 2),
                           max_size=min(density, len(keys))).map(lambda c: cls(chart, c))


def multivecs(chart, degree, **kw):
    return exteriors(MultiVec, chart, degree, **kw)


def forms(chart, degree, **kw):
    return exteriors(DiffForm, chart, degree, **kw)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
