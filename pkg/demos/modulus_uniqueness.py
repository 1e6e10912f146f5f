"""When does |f| = |g| on M force f = c g?

For the product family the answer hinges on whether the powers of the
factors exp(-i lam_j z zeta) are linearly independent.  Rational lam gives
coincidences k1 + lam k2 = k1' + lam k2'; the checker finds them exactly.
"""

from crsegre.fixtures import load_manifold
from crsegre.language import parse_series
from crsegre.uniqueness import monomial_independence, quotient_variables, z_independence_check


def independence():
    for name, K in (("m_lambda_1.cr", 1), ("m_lambda_half.cr", 2), ("m_lambda_pi355.cr", 4)):
        r = monomial_independence(load_manifold(name), K)
        pairs = ", ".join(f"{a}~{b}" for a, b in r.coincident_pairs) or "none"
        print(f"{name}: {r.statement()}; coincident exponents: {pairs}")


def quotients():
    for name in ("m_lambda_1.cr", "m_lambda_pi355.cr"):
        M = load_manifold(name)
        V = quotient_variables(M)
        for f, g in (("w1", "w2"), ("z1*w1", "w2")):
            r = z_independence_check(parse_series(f, V), parse_series(g, V), M)
            print(f"{name}: f={f}, g={g}: reality {r.reality.verdict}, quotient {r.verdict}")


if __name__ == "__main__":
    independence()
    quotients()
