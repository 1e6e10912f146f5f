from fractions import Fraction

import numpy as np
import pytest

from crsegre.algebra import GaussianRational, TruncSeries, conjugate, evaluate
from crsegre.fixtures import load_hypersurface, load_manifold
from crsegre.language import (
    Hypersurface,
    hypersurface_variables,
    parse_hypersurface,
    parse_manifold,
    parse_series,
    reality_swap,
)
from crsegre.leviflat import (
    SingularPointError,
    classify_singular_point,
    containment_test,
    fit_hypersurface,
    is_levi_flat,
    levi_form,
    nonsingular_points,
    project_and_fit,
    segre_variety_of_hypersurface,
    singular_locus_equations,
)

V2 = hypersurface_variables(2)


def real_series(text: str, m: int = 2) -> TruncSeries:
    return parse_series(text, hypersurface_variables(m))


def imaginary_part(h: TruncSeries, m: int) -> Hypersurface:
    """``rho = (h(w) - conj h(eta)) / 2i`` for a holomorphic ``h``."""
    hbar = conjugate(h, reality_swap(m))
    return Hypersurface(m, (h - hbar).scale(GaussianRational(0, Fraction(-1, 2))))


def random_holomorphic(rng, m: int, jet: int) -> TruncSeries:
    V = hypersurface_variables(m)
    terms = {}
    for _ in range(rng.integers(2, 7)):
        deg = rng.integers(1, jet + 1)
        cut = np.sort(rng.integers(0, deg + 1, size=m - 1))
        e = np.diff(np.concatenate([[0], cut, [deg]]))
        re, im = (Fraction(int(x), int(rng.integers(1, 5))) for x in rng.integers(-4, 5, 2))
        if re or im:
            terms[tuple(int(x) for x in e) + (0,) * m] = GaussianRational(re, im)
    terms.setdefault((1,) + (0,) * (2 * m - 1), GaussianRational(1))
    return TruncSeries(V, jet, terms)


# -- Levi forms ---------------------------------------------------------------


def test_levi_form_examples():
    imw1 = load_hypersurface("hyp_imw1.hyp")
    r = levi_form(imw1, (0, 1))
    assert r.flat and r.max_abs == 0
    prod = load_hypersurface("hyp_imw1w2bar.hyp")
    r = levi_form(prod, (1, 1))
    assert r.flat and r.max_abs < 1e-14
    sphere = load_hypersurface("sphere.hyp")
    r = levi_form(sphere, (1, 0))
    assert not r.flat
    assert r.matrix.shape == (1, 1)
    assert r.matrix[0, 0] == pytest.approx(1.0, abs=1e-12)


def test_levi_form_rejects_bad_points():
    sphere = load_hypersurface("sphere.hyp")
    with pytest.raises(ValueError):
        levi_form(sphere, (0.5, 0))
    sq = load_hypersurface("hyp_imw1sq.hyp")
    with pytest.raises(SingularPointError, match="classify_singular_point"):
        levi_form(sq, (0, 0.3))


@pytest.mark.parametrize("name", ["hyp_imw1.hyp", "hyp_imw1sq.hyp", "hyp_imw1w2bar.hyp",
                                  "hyp_product.hyp", "sphere.hyp"])
def test_levi_form_hermitian_at_sampled_points(name):
    H = load_hypersurface(name)
    for q in nonsingular_points(H, 5, seed=2):
        assert abs(H.value(q)[0]) < 1e-10
        assert levi_form(H, q).hermitian_defect < 1e-12


def test_flatness_verdicts():
    for name in ("hyp_imw1.hyp", "hyp_imw1sq.hyp", "hyp_imw1w2bar.hyp", "hyp_product.hyp"):
        assert is_levi_flat(load_hypersurface(name)).verdict == "levi-flat"
    v = is_levi_flat(load_hypersurface("sphere.hyp"))
    assert v.verdict == "not-levi-flat"
    assert v.worst.normalized_max == pytest.approx(1.0, rel=1e-6)
    assert "closure" in v.to_dict()["caveat"]


def test_flatness_inconclusive_without_points():
    H = parse_hypersurface("m=1\nrho = w1*eta1 + 1\n")
    assert is_levi_flat(H).verdict == "inconclusive"


@pytest.mark.parametrize("seed", range(20))
def test_imaginary_part_of_holomorphic_is_flat(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 4))
    H = imaginary_part(random_holomorphic(rng, m, int(rng.integers(1, 7))), m)
    pts = nonsingular_points(H, 10, radius=0.5, seed=seed)
    assert len(pts) == 10
    for q in pts:
        assert levi_form(H, q).normalized_max < 1e-8


def test_pluriharmonic_perturbation_is_detected():
    # Im w1 + |w2|^2 is strictly pseudoconvex in the w2 direction
    H = Hypersurface(2, real_series("(w1 - eta1)/(2*i) + w2*eta2"))
    assert is_levi_flat(H).verdict == "not-levi-flat"


# -- singular locus -----------------------------------------------------------


def test_singular_locus_examples():
    sq = singular_locus_equations(load_hypersurface("hyp_imw1sq.hyp"))
    assert len(sq.equations) == 5 and len(sq.solutions)
    assert np.max(np.abs(sq.solutions[:, 0])) < 1e-8
    prod = singular_locus_equations(load_hypersurface("hyp_product.hyp"))
    assert len(prod.solutions)
    assert np.max(np.abs(prod.solutions.imag)) < 1e-8
    assert np.max(np.abs(prod.solutions.real)) > 1e-3
    none = singular_locus_equations(load_hypersurface("hyp_imw1.hyp"))
    assert len(none.solutions) == 0


@pytest.mark.parametrize("seed", [0, 1, 7, 42])
def test_classification_of_standard_examples(seed):
    sq = load_hypersurface("hyp_imw1sq.hyp")
    locus = singular_locus_equations(sq, seed=seed)
    p = locus.solutions[0]
    w1_zero = [real_series("(w1 + eta1)/2"), real_series("(w1 - eta1)/(2*i)")]
    assert classify_singular_point(sq, w1_zero, p).kind == "complex"
    assert classify_singular_point(sq, w1_zero, (0, 0)).kind == "complex"

    prod = load_hypersurface("hyp_product.hyp")
    locus = singular_locus_equations(prod, seed=seed)
    both_real = [real_series("(w1 - eta1)/(2*i)"), real_series("(w2 - eta2)/(2*i)")]
    assert classify_singular_point(prod, both_real, locus.solutions[0]).kind == "leviflat"
    assert classify_singular_point(prod, both_real, (0, 0)).kind == "leviflat"


def test_classification_other():
    # (Im w1)^2 + |w2|^2: singular along {Im w1 = 0, w2 = 0}, a real line
    # through a totally real direction plus Re w1
    H = Hypersurface(2, real_series("((w1 - eta1)/(2*i))^2 + w2*eta2"))
    locus = [real_series("(w1 - eta1)/(2*i)"), real_series("(w2 + eta2)/2"),
             real_series("(w2 - eta2)/(2*i)")]
    c = classify_singular_point(H, locus, (0.25, 0))
    assert c.kind == "other" and c.real_dimension == 1


def test_classification_requires_singular_point():
    prod = load_hypersurface("hyp_product.hyp")
    with pytest.raises(ValueError):
        classify_singular_point(prod, [real_series("(w1 - eta1)/(2*i)")], (0, 1j))


# -- Segre varieties ----------------------------------------------------------


def test_segre_variety_examples():
    imw1 = load_hypersurface("hyp_imw1.hyp")
    s = segre_variety_of_hypersurface(imw1, "(2+3*i, 1)")
    # (w1 - conj a)/2i = 0, so w1 = 2 - 3i
    assert not s.degenerate
    assert evaluate(s.series, [2 - 3j, 7]) == pytest.approx(0)
    prod = load_hypersurface("hyp_imw1w2bar.hyp")
    assert segre_variety_of_hypersurface(prod, (0, 0)).degenerate
    s = segre_variety_of_hypersurface(prod, (1, 1))
    assert not s.degenerate
    assert set(s.series.terms) == {(1, 0), (0, 1)}
    assert evaluate(s.series, [0.3 + 1j, 0.3 + 1j]) == pytest.approx(0)


@pytest.mark.parametrize("name", ["hyp_imw1.hyp", "hyp_imw1sq.hyp", "hyp_imw1w2bar.hyp",
                                  "hyp_product.hyp", "sphere.hyp"])
def test_segre_variety_symmetry(name):
    H = load_hypersurface(name)
    rng = np.random.default_rng(3)
    for _ in range(10):
        p = rng.normal(size=2) + 1j * rng.normal(size=2)
        # pick q on Sigma_p by solving along a random complex line
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = rng.normal(size=2) + 1j * rng.normal(size=2)

        def sigma(point, q):
            return evaluate(H.rho, np.concatenate([q, np.conj(point)]))

        coeffs = np.polynomial.polynomial.polyfit(
            np.linspace(-1, 1, 9), [sigma(p, a + s * v) for s in np.linspace(-1, 1, 9)], 2)
        roots = np.roots(coeffs[::-1])
        roots = roots[np.isfinite(roots)]
        if not len(roots):
            continue
        q = a + roots[0] * v
        if abs(sigma(p, q)) > 1e-8:
            continue
        assert abs(sigma(q, p)) < 1e-8


def test_segre_variety_nonzero_point_needs_polynomial():
    H = parse_hypersurface("m=1 jet=4\nrho = (exp(w1) - exp(eta1))/(2*i)\n")
    assert segre_variety_of_hypersurface(H, (0,)).degenerate is False
    with pytest.raises(ValueError):
        segre_variety_of_hypersurface(H, (1,))


# -- fitting and containment --------------------------------------------------


def test_fit_m1_finds_imaginary_part_of_w1_w2bar(m1):
    fit = project_and_fit(m1, 2)
    assert fit is not None and fit.degree == 2
    assert fit.validation_residual < 1e-8
    terms = {e: complex(c) for e, c in fit.hypersurface.rho.terms.items()}
    assert set(terms) == {(1, 0, 0, 1), (0, 1, 1, 0)}
    assert terms[(1, 0, 0, 1)] == -terms[(0, 1, 1, 0)]
    assert terms[(1, 0, 0, 1)].real == 0


@pytest.mark.parametrize("name,lhs,rhs", [("m_lambda_2.cr", (2, 0, 0, 1), (0, 1, 2, 0)),
                                          ("m_lambda_half.cr", (1, 0, 0, 2), (0, 2, 1, 0))])
def test_fit_rational_lambda(name, lhs, rhs):
    fit = project_and_fit(load_manifold(name), 3)
    assert fit is not None and fit.degree == 3
    assert set(fit.hypersurface.rho.terms) == {lhs, rhs}


def test_fit_irrational_proxy_finds_nothing(m355):
    assert project_and_fit(m355, 4) is None


def test_fit_flat_degree_one(flat):
    fit = project_and_fit(flat, 1)
    assert fit is not None and fit.degree == 1
    H = fit.hypersurface
    pts = np.random.default_rng(0).normal(size=(20, 2))
    assert np.max(np.abs(H.value(pts))) < 1e-12


def test_fit_requires_codimension_two(lewy):
    with pytest.raises(ValueError):
        fit_hypersurface(lewy, 2)


def test_fit_result_round_trips(m1):
    fit = project_and_fit(m1, 2)
    again = parse_hypersurface(fit.hypersurface.text())
    assert again.rho == fit.hypersurface.rho
    assert "degree 2" in fit.to_dict()["note"]


def test_minimal_codimension_two_manifold_has_no_hull():
    M = parse_manifold("n=1 d=2 jet=6\nQ1 = omega1 + 2*i*z1*zeta1\n"
                       "Q2 = omega2 + 2*i*(z1^2*zeta1 + z1*zeta1^2)\n")
    assert project_and_fit(M, 3) is None


@pytest.mark.parametrize("name", ["flat.cr", "m_lambda_1.cr", "m_lambda_2.cr", "m_lambda_half.cr"])
def test_fit_then_verify_closure(name):
    M = load_manifold(name)
    fit = project_and_fit(M, 3, seed=0)
    assert fit is not None
    v = containment_test(M, fit.hypersurface, seed=12345)
    assert v.contained and v.verdict == "contained-in-levi-flat"


def test_containment_examples(m1):
    prod = load_hypersurface("hyp_imw1w2bar.hyp")
    assert containment_test(m1, prod).verdict == "contained-in-levi-flat"
    shifted = parse_hypersurface("m=2\nrho = (w1 - 2)*(eta1 - 2) + w2*eta2 - 1\n")
    v = containment_test(m1, shifted)
    assert v.verdict == "not-contained" and v.residual > 1e-3
    assert containment_test(m1, load_hypersurface("hyp_imw1.hyp")).verdict == "not-contained"


def test_containment_dimension_mismatch(m1):
    with pytest.raises(ValueError):
        containment_test(m1, parse_hypersurface("m=1\nrho = (w1 - eta1)/(2*i)\n"))
