"""Segre sets of the exponential family w_j = exp(-i lam_j z zeta) omega_j.

Builds the chain of Segre sets at a point, prints the k=3 parametrisation
and watches the sampled dimension stabilise.  With lam = 355/113 the third
Segre set is already two dimensional but no low degree polynomial vanishes
on it, which is what almost minimality looks like at desk scale.
"""

import warnings

from crsegre.fixtures import load_manifold
from crsegre.language import format_series
from crsegre.segre import algebraic_hull, orbit_dim, segre_dim, segre_set_param

warnings.simplefilter("ignore")  # the base point (1,1,1) is off the manifold


def main():
    for name in ("m_lambda_1.cr", "m_lambda_2.cr", "m_lambda_pi355.cr"):
        M = load_manifold(name)
        print(f"== {name}")
        param = segre_set_param(M, (1, 1, 1), 3)
        for label, comp in zip(("z1", "w1", "w2"), param.map):
            text = format_series(comp.truncate(3))
            print(f"  {label} = {text} + ...")
        dims = [segre_dim(M, (1, 1, 1), k).dimension for k in range(1, 7)]
        print(f"  dim S_k for k=1..6: {dims}")
        print(f"  orbit dimension at 0: {orbit_dim(M, (0, 0, 0)).dimension}")
        hull = algebraic_hull(param, 4)
        if hull.found:
            low = min(q.degree() for q in hull.polynomials)
            shown = [format_series(q) for q in hull.polynomials if q.degree() == low]
            print(f"  {len(hull.polynomials)} hull relations up to degree 4; lowest: {shown}")
        else:
            print("  no polynomial of degree <= 4 vanishes on S_3")


if __name__ == "__main__":
    main()
