import cmath
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussian, series
from crsegre.algebra import (
    GaussianRational,
    JetReachError,
    SeriesMap,
    TruncSeries,
    compose,
    conjugate,
    evaluate,
    exp_series,
    jacobian_rank,
    numerical_rank,
    partial_derivative,
)
from crsegre.language import parse_series

I = GaussianRational(0, 1)
ZW = ("z1", "zeta1", "w1", "eta1")


def ser(text, variables=ZW, jet=8):
    return parse_series(text, variables, jet)


# -- GaussianRational ---------------------------------------------------------


def test_gaussian_lowest_terms_and_arithmetic():
    a = GaussianRational(Fraction(2, 4), Fraction(-6, 8))
    assert a.re == Fraction(1, 2) and a.im == Fraction(-3, 4)
    b = GaussianRational(1, 2)
    assert (a * b) / b == a
    assert b * b.inverse() == 1
    assert I * I == -1
    assert complex(a + b) == pytest.approx(complex(a) + complex(b))


@given(gaussian)
def test_gaussian_conjugate_involution(x):
    assert x.conjugate().conjugate() == x


def test_gaussian_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


# -- conjugate ----------------------------------------------------------------


def test_conjugate_monomial_examples():
    V = ("z1", "zeta1")
    f = TruncSeries.variable(V, 4, "z1").scale(I)
    assert conjugate(f, {"z1": "zeta1", "zeta1": "z1"}) == TruncSeries.variable(V, 4, "zeta1").scale(-I)
    g = ser("1/2*z1*eta1")
    swap = {"z1": "zeta1", "zeta1": "z1", "w1": "eta1", "eta1": "w1"}
    assert conjugate(g, swap) == ser("1/2*zeta1*w1")


@given(series(jet=8, max_terms=8))
def test_conjugate_is_involution(f):
    swap = {"x": "y", "y": "x"}
    assert conjugate(conjugate(f, swap), swap) == f


def test_conjugate_rejects_bad_pairings():
    f = TruncSeries.variable(("x", "y"), 3, "x")
    with pytest.raises(KeyError):
        conjugate(f, {"x": "q", "q": "x"})
    with pytest.raises(ValueError):
        conjugate(TruncSeries.variable(("x", "y", "z"), 3, "x"), {"x": "y", "y": "z"})


# -- compose ------------------------------------------------------------------


def test_compose_identity_substitution():
    V = ("z1", "zeta1")
    w = TruncSeries.variable(("w1",) + V, 8, "w1")
    target = ser("2*i*z1*zeta1", V)
    out = compose(w, {"w1": target, "z1": TruncSeries.variable(V, 8, "z1"),
                      "zeta1": TruncSeries.variable(V, 8, "zeta1")})
    assert out == target


def test_compose_exp_of_square():
    x = TruncSeries.variable(("x",), 4, "x")
    e = exp_series(x)
    out = compose(e, {"x": x * x})
    assert out == TruncSeries(("x",), 4, {(0,): 1, (2,): 1, (4,): Fraction(1, 2)})


@given(series(zero_constant=False, jet=5, max_terms=4),
       series(zero_constant=True, jet=5, max_terms=3),
       series(zero_constant=True, jet=5, max_terms=3))
def test_compose_associative(f, g, h):
    # f(x, y, z) with x <- g, then x <- h, versus f with x <- g(h)
    V = f.variables
    ident = {v: TruncSeries.variable(V, 5, v) for v in V}
    fg = compose(f, {**ident, "x": g})
    left = compose(fg, {**ident, "x": h})
    gh = compose(g, {**ident, "x": h})
    right = compose(f, {**ident, "x": gh})
    assert left == right


def test_compose_rejects_unit_constant_without_safe_flag():
    V = ("x",)
    f = exp_series(TruncSeries.variable(V, 6, "x"))
    one_plus = TruncSeries(V, 6, {(0,): 1, (1,): 1})
    with pytest.raises(JetReachError):
        compose(f, {"x": one_plus})
    poly = TruncSeries(V, 6, {(2,): 1})
    assert compose(poly, {"x": one_plus}, safe=["x"]) == one_plus * one_plus


# -- derivatives --------------------------------------------------------------


def test_partial_derivative_examples():
    V = ("z1", "zeta1", "w1")
    z = TruncSeries.variable(V, 8, "z1")
    assert partial_derivative(z * z, "z1") == z.scale(2).truncate(7)
    assert partial_derivative(z * TruncSeries.variable(V, 8, "zeta1"), "w1").is_zero()
    e = exp_series(ser("i*z1*zeta1", V))
    d = partial_derivative(e, "z1")
    assert d.jet_order == 7
    expected = (TruncSeries.variable(V, 8, "zeta1").scale(I) * e).truncate(7)
    assert d == expected


@given(series(jet=7, max_terms=8))
def test_partial_derivatives_commute(f):
    assert partial_derivative(partial_derivative(f, "x"), "y") == \
        partial_derivative(partial_derivative(f, "y"), "x")


# -- evaluation ---------------------------------------------------------------


def test_evaluate_examples():
    V = ("z1", "zeta1")
    f = TruncSeries.variable(V, 4, "z1") * TruncSeries.variable(V, 4, "zeta1")
    assert evaluate(f, [2, GaussianRational(0, 3)]) == GaussianRational(0, 6)
    x = TruncSeries.variable(("x",), 8, "x")
    assert abs(evaluate(exp_series(x), [0.1]) - cmath.exp(0.1)) < 1e-9
    c = TruncSeries.constant(V, 4, GaussianRational(3, -1))
    assert evaluate(c, [5, 7]) == GaussianRational(3, -1)
    with pytest.raises(ValueError):
        evaluate(f, [1])


@given(series(jet=6, max_terms=5), series(zero_constant=True, jet=6, max_terms=4),
       st.lists(st.complex_numbers(max_magnitude=0.1, allow_nan=False, allow_infinity=False),
                min_size=3, max_size=3))
def test_evaluate_compose_residual(f, g, pt):
    V = f.variables
    sub = {v: TruncSeries.variable(V, 6, v) for v in V}
    sub["x"] = g
    fg = compose(f, sub)
    gp = evaluate(g, pt)
    direct = evaluate(fg, pt)
    via = evaluate(f, [gp, pt[1], pt[2]])
    # omitted terms have degree >= 7; bound them by the coefficient mass
    cf = sum(abs(complex(c)) for c in f.terms.values())
    cg = sum(abs(complex(c)) for c in g.terms.values())
    r = max(abs(p) for p in pt)
    C = 50 * (1 + cf) * (1 + cg) ** 6
    assert abs(direct - via) <= C * r ** 7 + 1e-12


def test_exp_series_matches_sympy():
    x, y = sp.symbols("x y")
    V = ("x", "y")
    arg = TruncSeries.variable(V, 8, "x") * TruncSeries.variable(V, 8, "y")
    arg = arg.scale(GaussianRational(0, -Fraction(355, 113)))
    ours = exp_series(arg)
    s = sp.symbols("s")
    ref = sp.series(sp.exp(-sp.I * sp.Rational(355, 113) * x * y * s**2), s, 0, 9).removeO()
    ref = sp.Poly(sp.expand(ref.subs(s, 1)), x, y)
    theirs = {m: complex(c) for m, c in zip(ref.monoms(), ref.coeffs())}
    assert set(theirs) == set(ours.terms)
    for e, c in ours.terms.items():
        assert GaussianRational(*[Fraction(str(v)) for v in sp.nsimplify(
            ref.coeff_monomial(x**e[0] * y**e[1])).as_real_imag()]) == c


def test_inverse_series():
    V = ("x", "y")
    f = TruncSeries(V, 6, {(0, 0): 2, (1, 0): 1, (0, 1): GaussianRational(0, 1)})
    assert (f * f.inverse()) == TruncSeries.constant(V, 6, 1)


# -- ranks --------------------------------------------------------------------


def test_jacobian_rank_examples():
    V = ("z", "zeta")
    m = SeriesMap([TruncSeries.variable(V, 4, "z"), ser("2*i*z*zeta", V, 4)])
    assert jacobian_rank(m, [1, 1]) == 2
    assert jacobian_rank(m, [0, 0]) == 1
    W = ("a", "b", "c")
    ident = SeriesMap([TruncSeries.variable(W, 3, v) for v in W])
    assert jacobian_rank(ident, [0.3, -1j, 2]) == 3
    assert numerical_rank(np.zeros((2, 2))) == 0
    with pytest.raises(ValueError):
        jacobian_rank(m, [1, 1], tol=2.0)
