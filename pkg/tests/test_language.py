import numpy as np
import pytest
from hypothesis import given

from conftest import series
from crsegre.algebra import GaussianRational, TruncSeries
from crsegre.fixtures import HYPERSURFACES, MANIFOLDS, fixture_path, load_manifold
from crsegre.language import (
    ParseError,
    ValidationError,
    format_hypersurface,
    format_manifold,
    format_series,
    parse_expression,
    parse_hypersurface,
    parse_manifold,
    parse_point,
    parse_series,
    validate_normal,
)

LEWY = "n=1 d=1 jet=6; Q1 = omega1 + 2*i*z1*zeta1"
MLAMBDA = ("n=1 d=2 jet=8\nQ1 = exp(-i*z1*zeta1)*omega1\n"
           "Q2 = exp(-i*(355/113)*z1*zeta1)*omega2\n")


def test_lewy_parses_and_validates():
    M = parse_manifold(LEWY)
    assert (M.n, M.d, M.jet_order) == (1, 1, 6)
    (q,) = M.Q
    assert q.terms == {(0, 0, 1): GaussianRational(1), (1, 1, 0): GaussianRational(0, 2)}
    assert validate_normal(M).ok


def test_m_lambda_accepted_at_jet_8():
    M = parse_manifold(MLAMBDA)
    assert M.jet_order == 8 and not M.is_algebraic
    q2 = M.Q[1]
    # first-order coefficient of z zeta omega2 is -i*355/113
    assert q2.terms[(1, 1, 0, 1)] == GaussianRational(0, -355) / 113


def test_normality_failure_rejected():
    with pytest.raises(ValidationError) as err:
        parse_manifold("n=1 d=1 jet=6\nQ1 = omega1 + z1")
    rep = err.value.report
    assert not rep.checks[1].passed and "Q(z,0,omega)" in rep.checks[1].name


def test_missing_i_reports_reality_defect():
    M = parse_manifold("n=1 d=1 jet=6\nQ1 = omega1 + z1*zeta1", validate=False)
    rep = validate_normal(M)
    first, second, reality = rep.checks
    assert first.passed and second.passed and not reality.passed
    # Q(z, zeta, conj-Q) = w + 2 z zeta: offending monomial z1*zeta1
    assert reality.first_bad_exponent == (1, 1, 0)
    assert reality.first_bad_coefficient == GaussianRational(2)


@pytest.mark.parametrize("name", MANIFOLDS)
def test_fixtures_validate_exactly(name):
    M = load_manifold(name)
    assert validate_normal(M).ok


@pytest.mark.parametrize("name", MANIFOLDS)
def test_manifold_round_trip(name):
    M = load_manifold(name)
    again = parse_manifold(format_manifold(M))
    assert [s.terms for s in again.Q] == [s.terms for s in M.Q]


@pytest.mark.parametrize("name", HYPERSURFACES)
def test_hypersurface_round_trip(name):
    H = parse_hypersurface(fixture_path(name).read_text())
    again = parse_hypersurface(format_hypersurface(H))
    assert again.rho == H.rho


@given(series(variables=("w1", "eta1", "z1"), jet=6, max_terms=7))
def test_series_round_trip(f):
    assert parse_series(format_series(f), f.variables, f.jet_order) == f


def test_hypersurface_examples():
    H = parse_hypersurface("m=2; rho = (w1*eta2 - eta1*w2)/(2*i)")
    assert H.m == 2 and H.through_origin
    assert parse_hypersurface("rho = w1*eta1").m == 1
    with pytest.raises(ValidationError):
        parse_hypersurface("rho = w1")


def test_hypersurface_value_is_real_part():
    H = parse_hypersurface("m=2; rho = (w1*eta2 - eta1*w2)/(2*i)")
    w = np.array([[1 + 2j, 3 - 1j]])
    assert H.value(w)[0] == pytest.approx((w[0, 0] * np.conj(w[0, 1])).imag)


@pytest.mark.parametrize("text, fragment", [
    ("n=1 d=1 jet=1\nQ1 = omega1", "at least 2"),
    ("n=1 d=1 jet=4\nQ1 = omega1 + q1", "unknown variable"),
    ("n=1 d=1 jet=4\nQ1 = omega1 + $", "unexpected character"),
    ("n=1 d=1 jet=4\nQ1 = sin(z1)*omega1", "unknown function"),
    ("n=1 d=2 jet=4\nQ1 = omega1", "missing equation Q2"),
    ("n=1 d=1 jet=4\nQ1 = exp(1 + z1)*omega1", "constant term"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_manifold(text)
    assert fragment in str(err.value)


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_manifold("n=1 d=1 jet=4\nQ1 = omega1 + (z1")
    assert err.value.line == 2


def test_operators_and_powers():
    V = ("x", "y")
    a = parse_series("(x + y)^2 - x**2 - 2*x*y", V, 4)
    assert a == TruncSeries.variable(V, 4, "y") * TruncSeries.variable(V, 4, "y")
    assert str(parse_expression("-x/2", V))


def test_parse_point_literals():
    p = parse_point("1, 2+3i, -1/2-i, 0.25i, 1.5")
    assert p == [GaussianRational(1), GaussianRational(2, 3), GaussianRational(-0.5, -1),
                 GaussianRational(0, 0.25), GaussianRational(1.5)]
    with pytest.raises(ParseError):
        parse_point("1,,2")


def test_jet_override():
    M = parse_manifold(MLAMBDA, jet=4)
    assert M.jet_order == 4 and max(s.degree() for s in M.Q) <= 4
