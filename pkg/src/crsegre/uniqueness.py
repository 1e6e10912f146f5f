"""Modulus uniqueness tests: monomial independence, z-independence of quotients.

For product-type manifolds ``w_j = q_j(z, zeta) omega_j`` the products
``q^k = q_1^k_1 ... q_d^k_d`` are compared through the exact rank of their
Taylor coefficients.  Independence of truncations certifies independence of
the functions; a dependence is only ever reported with an exact witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import GaussianRational, JetReachError, TruncSeries, partial_derivative
from .exact import exact_rank, nullspace
from .language import GenericManifold, format_series
from .segre import sample_points

__all__ = [
    "UnsupportedFormError",
    "IndependenceReport",
    "RealityReport",
    "ZIndependenceReport",
    "product_factors",
    "monomial_independence",
    "reality_check",
    "z_independence_check",
    "quotient_variables",
]

MAX_JET = 128
REALITY_TOL = 1e-8


class UnsupportedFormError(ValueError):
    pass


def product_factors(M: GenericManifold, jet: int) -> list[TruncSeries]:
    """The cofactors ``q_j(z, zeta)`` of a product-type manifold, expanded at ``jet``."""
    Q = M.Q
    d = M.d
    for j, s in enumerate(Q):
        want = tuple(int(k == j) for k in range(d))
        for e in s.terms:
            if tuple(e[2 * M.n:]) != want:
                raise UnsupportedFormError(
                    f"Q{j + 1} is not of product type q{j + 1}(z, zeta)*omega{j + 1}")
    names = M.z_vars + M.zeta_vars
    one = TruncSeries.constant(names, jet, 1)
    env = {v: one for v in M.omega_vars}
    factors = [e.series(names, jet, env) for e in M.exprs]
    for j, q in enumerate(factors):
        if q.constant_term() != 1:
            raise UnsupportedFormError(f"q{j + 1}(0, 0) must be 1")
    return factors


def _products(factors: list[TruncSeries], exps) -> list[TruncSeries]:
    out = []
    for k in exps:
        acc = TruncSeries.constant(factors[0].variables, factors[0].jet_order, 1)
        for q, kj in zip(factors, k):
            if kj:
                acc = acc * q ** kj
        out.append(acc)
    return out


def _coefficient_rows(series: list[TruncSeries]) -> list[list]:
    """Rows indexed by monomials, columns by the series."""
    monos = sorted({e for s in series for e in s.terms})
    zero = GaussianRational(0)
    return [[s.terms.get(e, zero) for s in series] for e in monos]


@dataclass(frozen=True)
class IndependenceReport:
    K: int
    jet_order: int
    exponents: tuple[tuple[int, ...], ...]
    rank: int
    independent: bool
    relations: tuple[dict, ...] = ()
    coincident_pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    verified_jet: int | None = None
    jets_tried: tuple[int, ...] = ()

    @property
    def verdict(self) -> str:
        return "independent" if self.independent else "dependent"

    def statement(self) -> str:
        if self.independent:
            return f"independent at jet {self.jet_order}, K <= {self.K}"
        return (f"dependent: relation exact through jet {self.verified_jet}, K <= {self.K}")

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "statement": self.statement(),
            "K": self.K,
            "jet_order": self.jet_order,
            "product_count": len(self.exponents),
            "rank": self.rank,
            "jets_tried": list(self.jets_tried),
            "verified_jet": self.verified_jet,
            "coincident_pairs": [[list(a), list(b)] for a, b in self.coincident_pairs],
            "relations": [
                {"terms": [{"k": list(k), "coefficient": str(c)} for k, c in rel["terms"]]}
                for rel in self.relations],
        }


def _relation_vanishes(factors_at, exps, relation) -> bool:
    prods = _products(factors_at, [k for k, _ in relation])
    total = TruncSeries.zero(prods[0].variables, prods[0].jet_order)
    for s, (_, c) in zip(prods, relation):
        total = total + s.scale(c)
    return total.is_zero()


def _analyse(M, K, jet):
    factors = product_factors(M, jet)
    exps = tuple(product(range(K + 1), repeat=M.d))
    prods = _products(factors, exps)
    rows = _coefficient_rows(prods)
    rank = exact_rank(rows) if rows else 0
    relations = []
    if rank < len(exps):
        for vec in nullspace(rows, len(exps)):
            relations.append([(exps[i], c) for i, c in enumerate(vec) if c])
    return exps, prods, rank, relations


def monomial_independence(M: GenericManifold, K: int, jet: int | None = None) -> IndependenceReport:
    """Exact linear (in)dependence of the products ``q^k``, ``0 <= k_j <= K``.

    With ``jet=None`` the jet is doubled until the coefficient matrix has
    full rank or every nullspace relation still vanishes at twice the jet.
    An explicit ``jet`` that cannot decide raises :class:`JetReachError`
    naming the jet that does.
    """
    if K < 0:
        raise ValueError("K must be non-negative")
    explicit = jet is not None
    J = jet if explicit else max(M.jet_order, 2)
    tried = []
    while True:
        tried.append(J)
        exps, prods, rank, relations = _analyse(M, K, J)
        if rank == len(exps):
            if explicit and len(tried) > 1:
                break
            return IndependenceReport(K, J, exps, rank, True, jets_tried=tuple(tried))
        check = product_factors(M, 2 * J)
        if all(_relation_vanishes(check, exps, rel) for rel in relations):
            if explicit and len(tried) > 1:
                break
            pairs = _coincident(prods, exps, check)
            return IndependenceReport(
                K, J, exps, rank, False,
                tuple({"terms": tuple(rel)} for rel in relations), pairs, 2 * J, tuple(tried))
        if 2 * J > MAX_JET:
            raise JetReachError(f"no decision for K={K} up to jet {MAX_JET}")
        J *= 2
    raise JetReachError(f"jet {jet} cannot decide independence for K={K}; jet {J} is required")


def _coincident(prods, exps, check):
    by_series: dict = {}
    long = _products(check, exps)
    for k, s in zip(exps, long):
        by_series.setdefault(s, []).append(k)
    pairs = []
    for ks in by_series.values():
        for other in ks[1:]:
            pairs.append((other, ks[0]) if other > ks[0] else (ks[0], other))
    return tuple(sorted(pairs, reverse=True))


# ---------------------------------------------------------------------------
# quotients f/g on M


def quotient_variables(M: GenericManifold) -> tuple[str, ...]:
    return M.z_vars + tuple(f"w{j}" for j in range(1, M.d + 1))


@dataclass(frozen=True)
class RealityReport:
    passed: bool | None
    imag_residual: float | None
    modulus_residual: float | None
    used_samples: int
    sample_count: int
    tol: float
    seed: int

    @property
    def verdict(self) -> str:
        if self.passed is None:
            return "inconclusive"
        return "passes" if self.passed else "fails"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "max_imag_ratio": self.imag_residual,
            "max_modulus_gap": self.modulus_residual,
            "used_samples": self.used_samples,
            "sample_count": self.sample_count,
            "tol": self.tol,
            "rng_seed": self.seed,
        }


def reality_check(f: TruncSeries, g: TruncSeries, M: GenericManifold, samples: int = 50,
                  radius: float = 0.1, tol: float = REALITY_TOL, seed: int = 0) -> RealityReport:
    """Is ``f/g`` real, or ``|f| = |g|``, at sampled points of ``M``?

    Either property passes; they are the two hypotheses under which the
    quotient is forced to be independent of ``z``.
    """
    names = quotient_variables(M)
    for s in (f, g):
        if s.variables != names:
            raise ValueError(f"f and g must be series in {names}")
    pts = sample_points(M, samples, radius, seed)
    fv = f.evaluate_many(pts)
    gv = g.evaluate_many(pts)
    mask = np.abs(gv) > 1e-8
    if not mask.any():
        return RealityReport(None, None, None, 0, len(pts), tol, seed)
    h = fv[mask] / gv[mask]
    imag = float(np.max(np.abs(h.imag) / np.maximum(1.0, np.abs(h))))
    modulus = float(np.max(np.abs(np.abs(fv[mask]) - np.abs(gv[mask]))))
    return RealityReport(min(imag, modulus) < tol, imag, modulus, int(mask.sum()), len(pts),
                         tol, seed)


@dataclass(frozen=True)
class ZIndependenceReport:
    z_independent: bool
    method: str
    common_factor: tuple[int, ...]
    quotient: TruncSeries | None
    reality: RealityReport
    offending: tuple[str, ...] = field(default=())

    @property
    def consistent(self) -> bool:
        """A passing reality check must come with a z-independent quotient."""
        return not self.reality.passed or self.z_independent

    @property
    def verdict(self) -> str:
        return "z-independent" if self.z_independent else "depends-on-z"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "common_monomial_factor": list(self.common_factor),
            "quotient": format_series(self.quotient) if self.quotient is not None else None,
            "quotient_jet": self.quotient.jet_order if self.quotient is not None else None,
            "offending_variables": list(self.offending),
            "reality_check": self.reality.to_dict(),
            "theorem_consistent": self.consistent,
        }


def _divide_monomial(s: TruncSeries, e: Sequence[int]) -> TruncSeries:
    terms = {tuple(a - b for a, b in zip(k, e)): c for k, c in s.terms.items()}
    return TruncSeries(s.variables, s.jet_order, terms)


def z_independence_check(f: TruncSeries, g: TruncSeries, M: GenericManifold,
                         samples: int = 50, radius: float = 0.1, tol: float = REALITY_TOL,
                         seed: int = 0) -> ZIndependenceReport:
    """Check ``d(f/g)/dz_j = 0`` symbolically and report the reality check alongside.

    The common monomial factor of ``f`` and ``g`` is divided out first.  When
    the reduced ``g`` is a unit the quotient series is formed and
    differentiated; otherwise the test is the cross derivative
    ``g df/dz - f dg/dz = 0``, which is the numerator of ``d(f/g)/dz``.
    """
    names = quotient_variables(M)
    if f.variables != names or g.variables != names:
        raise ValueError(f"f and g must be series in {names}")
    if g.is_zero():
        raise JetReachError("g vanishes identically at this jet")
    jet = min(f.jet_order, g.jet_order)
    f, g = f.truncate(jet), g.truncate(jet)
    allterms = list(f.terms) + list(g.terms)
    common = tuple(min(e[i] for e in allterms) for i in range(len(names)))
    if any(common):
        f, g = _divide_monomial(f, common), _divide_monomial(g, common)
    reality = reality_check(f, g, M, samples, radius, tol, seed)
    offending = []
    quotient = None
    if g.constant_term():
        quotient = f * g.inverse()
        method = "quotient-series"
        for z in M.z_vars:
            if not partial_derivative(quotient, z).is_zero():
                offending.append(z)
    else:
        method = "cross-derivative"
        for z in M.z_vars:
            w = g * partial_derivative(f, z) - f * partial_derivative(g, z)
            if not w.truncate(jet - 1).is_zero():
                offending.append(z)
    return ZIndependenceReport(not offending, method, common, quotient, reality, tuple(offending))
