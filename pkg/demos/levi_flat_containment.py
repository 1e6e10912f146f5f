"""Projecting a codimension two manifold to w-space and fitting a hypersurface.

For rational lam the projection of M_lam lies in a real algebraic Levi-flat
hypersurface; the fit finds it, the containment test checks it on fresh
points and the Levi form confirms flatness.  The near-irrational member of
the family admits nothing up to degree 4.
"""

from crsegre.fixtures import load_hypersurface, load_manifold
from crsegre.language import format_series
from crsegre.leviflat import (
    containment_test,
    is_levi_flat,
    project_and_fit,
    singular_locus_equations,
    classify_singular_point,
)
from crsegre.language import hypersurface_variables, parse_series


def fits():
    for name, degree in (("m_lambda_1.cr", 2), ("m_lambda_2.cr", 3), ("m_lambda_pi355.cr", 4)):
        M = load_manifold(name)
        fit = project_and_fit(M, degree)
        if fit is None:
            print(f"{name}: no real hypersurface up to degree {degree}")
            continue
        H = fit.hypersurface
        verdict = containment_test(M, H, seed=99)
        print(f"{name}: rho = {format_series(H.rho)}")
        print(f"    fresh residual {verdict.residual:.1e}, {verdict.verdict}")


def singular_sets():
    V = hypersurface_variables(2)
    cases = [("hyp_imw1sq.hyp", ["(w1 + eta1)/2", "(w1 - eta1)/(2*i)"]),
             ("hyp_product.hyp", ["(w1 - eta1)/(2*i)", "(w2 - eta2)/(2*i)"])]
    for name, locus in cases:
        H = load_hypersurface(name)
        sol = singular_locus_equations(H).solutions
        kind = classify_singular_point(H, [parse_series(e, V) for e in locus], sol[0]).kind
        print(f"{name}: {is_levi_flat(H).verdict}, {len(sol)} singular samples, "
              f"singular set is {kind}")


if __name__ == "__main__":
    fits()
    singular_sets()
