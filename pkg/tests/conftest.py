from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from crsegre.algebra import GaussianRational, TruncSeries
from crsegre.fixtures import load_hypersurface, load_manifold

settings.register_profile("ci", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gaussian = st.builds(GaussianRational, small_fractions, small_fractions)


def exponents(nvars, jet):
    return st.lists(st.integers(0, jet), min_size=nvars, max_size=nvars).filter(
        lambda e: sum(e) <= jet).map(tuple)


@st.composite
def series(draw, variables=("x", "y", "z"), jet=6, max_terms=6, zero_constant=False):
    terms = draw(st.dictionaries(exponents(len(variables), jet), gaussian, max_size=max_terms))
    if zero_constant:
        terms.pop((0,) * len(variables), None)
    return TruncSeries(variables, jet, terms)


@pytest.fixture(scope="session")
def lewy():
    return load_manifold("lewy.cr")


@pytest.fixture(scope="session")
def flat():
    return load_manifold("flat.cr")


@pytest.fixture(scope="session")
def m1():
    return load_manifold("m_lambda_1.cr")


@pytest.fixture(scope="session")
def m2():
    return load_manifold("m_lambda_2.cr")


@pytest.fixture(scope="session")
def mhalf():
    return load_manifold("m_lambda_half.cr")


@pytest.fixture(scope="session")
def m355():
    return load_manifold("m_lambda_pi355.cr")


@pytest.fixture(scope="session")
def hyp():
    return load_hypersurface
