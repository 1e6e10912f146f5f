"""Segre sets of a generic submanifold, minimality and algebraic hulls.

A Segre set ``S_k(p)`` is parametrised by alternating the defining map and
its conjugate along a chain of ``k`` free blocks of ``n`` parameters,
starting from ``p`` (``k`` even) or from ``conj p`` (``k`` odd).  The
parametrisation is kept both as an exact jet (a :class:`SeriesMap`, used for
coefficient work) and as an untruncated numeric map built from the parsed
expressions (used for point sampling and for Jacobians).

Generic dimensions are maxima of sampled Jacobian ranks.  For an analytic
parametrisation the generic rank is attained off a proper analytic subset,
so random samples find it with probability one; a finite sample is still
evidence, not proof, and reports say so.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_RANK_TOL,
    SeriesMap,
    TruncSeries,
    as_coefficient,
    compose,
    jacobian,
    numerical_rank,
)
from .language import Dual, GenericManifold

__all__ = [
    "SegreParam",
    "DimCertificate",
    "OrbitReport",
    "MinimalityVerdict",
    "HullResult",
    "ScanReport",
    "segre_set_param",
    "segre_dim",
    "orbit_dim",
    "minimality_test",
    "sample_points",
    "algebraic_hull",
    "almost_minimality_scan",
    "ball_samples",
]

DEFAULT_SAMPLES = 25
DEFAULT_RADIUS = 0.1
HULL_RADIUS = 1.5
MEMBERSHIP_TOL = 1e-10
EVIDENCE_NOTE = ("generic dimension = max sampled Jacobian rank of the Segre "
                 "parametrisation; sampling evidence, not proof")


def ball_samples(rng: np.random.Generator, count: int, dim: int, radius: float) -> np.ndarray:
    """``count`` points uniform in the ball of C^dim with the given radius."""
    g = rng.standard_normal((count, 2 * dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.random(count) ** (1.0 / (2 * dim))
    g *= r[:, None]
    return g[:, :dim] + 1j * g[:, dim:]


def _coerce_point(M: GenericManifold, p) -> tuple:
    p = tuple(as_coefficient(x) for x in p)
    if len(p) != M.N:
        raise ValueError(f"point has {len(p)} coordinates, manifold lives in C^{M.N}")
    return p


def max_chain_length(M: GenericManifold) -> int:
    return 2 * (M.d + 1) + 2


def parameter_names(n: int, k: int) -> tuple[str, ...]:
    if n == 1:
        return tuple(f"t{j}" for j in range(1, k + 1))
    return tuple(f"t{j}_{a}" for j in range(1, k + 1) for a in range(1, n + 1))


@dataclass(frozen=True, eq=False)
class SegreParam:
    """Parametrisation of ``S_k(p)`` by ``n*k`` complex parameters."""

    manifold: GenericManifold
    base_point: tuple
    k: int
    map: SeriesMap
    parameters: tuple[str, ...]
    membership_residual: float

    @property
    def jet_order(self) -> int:
        return self.map.jet_order

    @property
    def base_on_manifold(self) -> bool:
        return self.membership_residual < MEMBERSHIP_TOL

    def evaluate(self, t) -> np.ndarray:
        """The jet parametrisation at rows of ``t``."""
        return self.map.evaluate_many(np.atleast_2d(t))

    def evaluate_analytic(self, t) -> np.ndarray:
        """Untruncated chain evaluation at rows of ``t`` (exp taken exactly)."""
        M = self.manifold
        t = np.atleast_2d(np.asarray(t, dtype=complex))
        m, n = t.shape[0], M.n
        p = np.array([complex(x) for x in self.base_point])
        z0 = np.broadcast_to(p[:n], (m, n))
        w0 = np.broadcast_to(p[n:], (m, M.d))
        if self.k % 2:
            kind, a, b = "zeta", np.conj(z0), np.conj(w0)
        else:
            kind, a, b = "z", z0, w0
        for j in range(self.k):
            block = t[:, j * n:(j + 1) * n]
            if kind == "zeta":
                a, b, kind = block, M.q_numeric(block, a, b), "z"
            else:
                a, b, kind = block, M.qbar_numeric(block, a, b), "zeta"
        return np.hstack([a, b])

    def jacobian_analytic(self, t) -> np.ndarray:
        """Exact derivatives of the untruncated chain, shape ``(m, N, n*k)``."""
        M = self.manifold
        t = np.atleast_2d(np.asarray(t, dtype=complex))
        m, P, n = t.shape[0], t.shape[1], M.n

        def lift(x):
            if isinstance(x, Dual):
                return x
            return Dual(np.broadcast_to(np.asarray(x, dtype=complex), (m,)).copy(),
                        np.zeros((m, P), dtype=complex))

        p = [complex(x) for x in self.base_point]
        if self.k % 2:
            kind, a, b = "zeta", [np.conj(x) for x in p[:n]], [np.conj(x) for x in p[n:]]
        else:
            kind, a, b = "z", p[:n], p[n:]
        a = [lift(x) for x in a]
        b = [lift(x) for x in b]
        eye = np.eye(P, dtype=complex)
        for j in range(self.k):
            block = [Dual(t[:, j * n + i], np.broadcast_to(eye[j * n + i], (m, P)).copy())
                     for i in range(n)]
            conj = kind == "z"
            b = [lift(x) for x in M.q_dual(block, a, b, conjugate=conj)]
            a, kind = block, ("zeta" if conj else "z")
        return np.stack([c.grad for c in a + b], axis=1)

    def rank_at(self, t, tol: float = DEFAULT_RANK_TOL, method: str = "analytic") -> int:
        if method == "jet":
            return numerical_rank(jacobian(self.map, t), tol)
        jac = self.jacobian_analytic(t)[0]
        if not np.all(np.isfinite(jac)):
            raise FloatingPointError("non-finite Jacobian")
        return numerical_rank(jac, tol)


_PARAM_CACHE: dict = {}


def segre_set_param(M: GenericManifold, p: Sequence, k: int,
                    jet: int | None = None) -> SegreParam:
    """Compose the Segre chain of length ``k`` at ``p`` as a jet map.

    The base point need not lie on ``M`` (Segre sets are defined for every
    point of the neighbourhood); its membership residual is recorded and
    reported by the callers.
    """
    if not 1 <= k <= max_chain_length(M):
        raise ValueError(f"chain length k={k} outside 1..{max_chain_length(M)}")
    p = _coerce_point(M, p)
    jet = M.jet_order if jet is None else jet
    key = (id(M), p, k, jet)
    hit = _PARAM_CACHE.get(key)
    if hit is not None and hit.manifold is M:
        return hit
    residual = float(M.membership_residual([complex(x) for x in p])[0])
    names = parameter_names(M.n, k)
    n = M.n

    def const(c):
        return TruncSeries.constant(names, jet, c)

    z0, w0 = p[:n], p[n:]
    if k % 2:
        kind = "zeta"
        a = [const(x.conjugate()) for x in z0]
        b = [const(x.conjugate()) for x in w0]
    else:
        kind = "z"
        a = [const(x) for x in z0]
        b = [const(x) for x in w0]
    for j in range(k):
        block = [TruncSeries.variable(names, jet, v) for v in names[j * n:(j + 1) * n]]
        if kind == "zeta":
            # new point of the chain: z free, w = Q(z, zeta, omega)
            env = _env(M, block, a, b)
            a, b, kind = block, [e.series(names, jet, env) for e in M.exprs], "z"
        else:
            # conjugate step: zeta free, omega = conjQ(zeta, z, w)
            env = _env(M, block, a, b)
            a, b, kind = block, [e.series(names, jet, env) for e in M.conj_exprs], "zeta"
    param = SegreParam(M, p, k, SeriesMap(a + b), names, residual)
    _PARAM_CACHE[key] = param
    return param


def _env(M: GenericManifold, first, second, third) -> dict:
    env = dict(zip(M.z_vars, first))
    env.update(zip(M.zeta_vars, second))
    env.update(zip(M.omega_vars, third))
    return env


@dataclass(frozen=True)
class DimCertificate:
    k: int
    sample_count: int
    radius: float
    ranks: tuple[int, ...]
    tol: float
    rng_seed: int
    discarded: int = 0
    note: str = EVIDENCE_NOTE

    @property
    def max_rank(self) -> int:
        return max(self.ranks, default=0)

    @property
    def dimension(self) -> int:
        return self.max_rank

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "sample_count": self.sample_count,
            "radius": self.radius,
            "ranks": list(self.ranks),
            "max_rank": self.max_rank,
            "tol": self.tol,
            "rng_seed": self.rng_seed,
            "discarded": self.discarded,
            "note": self.note,
        }


def _check_sampling(samples: int, radius: float, tol: float):
    if samples < 10:
        raise ValueError("segre_dim needs at least 10 samples")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")


def segre_dim(M: GenericManifold, p: Sequence, k: int, samples: int = DEFAULT_SAMPLES,
              radius: float = DEFAULT_RADIUS, tol: float = DEFAULT_RANK_TOL,
              seed: int = 0, method: str = "analytic") -> DimCertificate:
    """Sampled generic dimension of ``S_k(p)``.

    ``method="analytic"`` differentiates the untruncated chain exactly
    (forward mode); ``method="jet"`` differentiates the jet map, whose
    truncation error can masquerade as extra rank for large exponents.
    """
    _check_sampling(samples, radius, tol)
    param = segre_set_param(M, p, k)
    rng = np.random.default_rng([seed, k])
    ts = ball_samples(rng, samples, len(param.parameters), radius)
    ranks, discarded = [], 0
    for t in ts:
        try:
            ranks.append(param.rank_at(t, tol, method))
        except (FloatingPointError, np.linalg.LinAlgError):
            discarded += 1
    if discarded:
        warnings.warn(f"segre_dim: {discarded} samples discarded (non-finite Jacobian)")
    return DimCertificate(k, samples, radius, tuple(ranks), tol, seed, discarded)


@dataclass(frozen=True)
class OrbitReport:
    dimension: int
    certificate: DimCertificate
    dims_by_k: tuple[int, ...]
    stabilized_at: int
    base_on_manifold: bool
    membership_residual: float

    def to_dict(self) -> dict:
        return {
            "orbit_dim": self.dimension,
            "dims_by_k": list(self.dims_by_k),
            "stabilized_at_k": self.stabilized_at,
            "base_on_manifold": self.base_on_manifold,
            "membership_residual": self.membership_residual,
            "certificate": self.certificate.to_dict(),
        }


def orbit_dim(M: GenericManifold, p: Sequence, samples: int = DEFAULT_SAMPLES,
              radius: float = DEFAULT_RADIUS, tol: float = DEFAULT_RANK_TOL,
              seed: int = 0) -> OrbitReport:
    """Dimension of the intrinsic complexification of the CR orbit at ``p``.

    Read off ``S_{2(d+1)}(p)``: the Segre number never exceeds ``d+1``.
    """
    top = 2 * (M.d + 1)
    certs = [segre_dim(M, p, k, samples, radius, tol, seed) for k in range(1, top + 1)]
    dims = tuple(c.dimension for c in certs)
    stab = top
    while stab > 1 and dims[stab - 2] == dims[-1]:
        stab -= 1
    param = segre_set_param(M, p, top)
    if not param.base_on_manifold:
        warnings.warn(f"base point is off the manifold (residual {param.membership_residual:.3g})")
    return OrbitReport(dims[-1], certs[-1], dims, stab, param.base_on_manifold,
                       param.membership_residual)


@dataclass(frozen=True)
class MinimalityVerdict:
    minimal: bool
    N: int
    orbit: OrbitReport

    @property
    def verdict(self) -> str:
        return "minimal" if self.minimal else "not-minimal"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "N": self.N, **self.orbit.to_dict()}


def minimality_test(M: GenericManifold, p: Sequence, samples: int = DEFAULT_SAMPLES,
                    radius: float = DEFAULT_RADIUS, tol: float = DEFAULT_RANK_TOL,
                    seed: int = 0) -> MinimalityVerdict:
    """Minimal at ``p`` iff the sampled orbit dimension equals ``N``."""
    orb = orbit_dim(M, p, samples, radius, tol, seed)
    return MinimalityVerdict(orb.dimension == M.N, M.N, orb)


def sample_points(M: GenericManifold, count: int, radius: float = DEFAULT_RADIUS,
                  seed: int = 0, max_iter: int = 60, tol: float = 1e-12) -> np.ndarray:
    """Points of ``M`` near the origin, shape ``(count, N)``.

    ``z`` is drawn uniformly from the ball of the given radius and the real
    parts of ``w`` uniformly from ``[-radius, radius]``.  The imaginary parts
    start from a few damped steps ``w <- Re w + i Im((w + Q(z, conj z,
    conj w)) / 2)`` and are finished by Gauss-Newton on ``w - Q = 0``.
    """
    rng = np.random.default_rng(seed)
    got: list[np.ndarray] = []
    attempts = failures = 0
    batch = max(count, 8)
    h = 1e-7
    while sum(len(g) for g in got) < count and attempts < 4 * count + batch:
        z = ball_samples(rng, batch, M.n, radius)
        s = rng.uniform(-radius, radius, (batch, M.d))
        w = s.astype(complex)
        zc = np.conj(z)
        with np.errstate(all="ignore"):
            for _ in range(5):
                q = M.q_numeric(z, zc, np.conj(w))
                w = s + 0.5j * (w.imag + q.imag)
            for _ in range(max_iter):
                R = w - M.q_numeric(z, zc, np.conj(w))
                scale = 1.0 + np.max(np.abs(w), axis=1)
                if (np.max(np.abs(R), axis=1) < tol * scale).all():
                    break
                J = np.empty((batch, M.d, M.d), dtype=complex)
                for k in range(M.d):
                    wk = w.copy()
                    wk[:, k] += 1j * h
                    J[:, :, k] = (wk - M.q_numeric(z, zc, np.conj(wk)) - R) / h
                A = np.concatenate([J.real, J.imag], axis=1)
                b = np.concatenate([R.real, R.imag], axis=1)[:, :, None]
                step = np.linalg.pinv(A) @ b
                w = w - 1j * np.nan_to_num(step[:, :, 0])
            res = np.max(np.abs(w - M.q_numeric(z, zc, np.conj(w))), axis=1)
            ok = res < tol * (1.0 + np.max(np.abs(w), axis=1))
        attempts += batch
        failures += int((~ok).sum())
        got.append(np.hstack([z, w])[ok])
    pts = np.vstack(got)[:count]
    if attempts and failures / attempts > 0.5:
        warnings.warn(f"sample_points: {failures}/{attempts} starts failed to converge")
    if len(pts) < count:
        warnings.warn(f"sample_points: only {len(pts)} of {count} points converged")
    return pts


# ---------------------------------------------------------------------------
# algebraic hulls


def monomial_exponents(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for j in combo:
                e[j] += 1
            out.append(tuple(e))
    return out


def _monomial_matrix(x: np.ndarray, exps: list[tuple[int, ...]]) -> np.ndarray:
    E = np.array(exps, dtype=np.int64)
    return np.prod(x[:, None, :] ** E[None, :, :], axis=2)


def _reduce_rows(rows: np.ndarray, order: list[int], rel: float = 1e-9) -> np.ndarray:
    """Reduced row echelon form with pivots taken in the column ``order``."""
    R = rows.astype(complex).copy()
    r = 0
    for c in order:
        if r == len(R):
            break
        col = np.abs(R[r:, c])
        if not col.size or col.max() <= rel * max(np.abs(R).max(), 1e-300):
            continue
        p = r + int(np.argmax(col))
        R[[r, p]] = R[[p, r]]
        R[r] /= R[r, c]
        for i in range(len(R)):
            if i != r:
                R[i] -= R[i, c] * R[r]
        r += 1
    R = R[:r]
    R[np.abs(R) < rel] = 0
    return R


def relative_residual(A: np.ndarray, v: np.ndarray) -> float:
    """max |A v| relative to the size of the summed terms (cancellation level)."""
    num = np.abs(A @ v)
    den = np.abs(A) @ np.abs(v)
    den = np.where(den > 0, den, 1.0)
    return float(np.max(num / den)) if len(num) else 0.0


@dataclass(frozen=True)
class HullResult:
    """Polynomial relations (up to a degree bound) on sampled Segre-set points."""

    variables: tuple[str, ...]
    degree_bound: int
    polynomials: tuple[TruncSeries, ...]
    sample_count: int
    validation_residuals: tuple[float, ...]
    condition_estimate: float
    smallest_singular_values: tuple[float, ...]
    tol: float
    rng_seed: int
    radius: float
    warnings: tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return bool(self.polynomials)

    def to_dict(self) -> dict:
        from .language import format_series
        return {
            "variables": list(self.variables),
            "degree_bound": self.degree_bound,
            "found": self.found,
            "polynomials": [format_series(p) for p in self.polynomials],
            "sample_count": self.sample_count,
            "validation_residuals": list(self.validation_residuals),
            "condition_estimate": self.condition_estimate,
            "smallest_singular_values": list(self.smallest_singular_values),
            "tol": self.tol,
            "rng_seed": self.rng_seed,
            "radius": self.radius,
            "note": ("empty means no proper algebraic hull up to the degree bound "
                     "(evidence, not proof)"),
            "warnings": list(self.warnings),
        }


def fit_polynomial_relations(train: np.ndarray, fresh: np.ndarray, degree: int,
                             tol: float, candidate_ratio: float = 1e-5):
    """Complex polynomial relations of degree <= ``degree`` vanishing on samples.

    Coordinates are centred on the first training point and scaled to unit
    spread before building the monomial matrix, so that the singular-value
    test compares like with like.  Returns coefficient vectors over the
    monomials in the *original* coordinates plus diagnostics.
    """
    nv = train.shape[1]
    exps = monomial_exponents(nv, degree)
    centre = train[0].copy()
    spread = np.max(np.abs(train - centre), axis=0)
    spread = np.where(spread > 1e-10 * max(spread.max(), 1e-300), spread, 1.0)

    def scaled(x):
        return (x - centre) / spread

    A = _monomial_matrix(scaled(train), exps)
    colnorm = np.linalg.norm(A, axis=0)
    colnorm = np.where(colnorm > 0, colnorm, 1.0)
    An = A / colnorm
    _, s, Vh = np.linalg.svd(An, full_matrices=True)
    svals = np.zeros(len(exps))
    svals[:len(s)] = s
    smax = svals[0] if svals[0] > 0 else 1.0
    null_idx = [j for j in range(len(exps)) if svals[j] <= candidate_ratio * smax]
    kept = [j for j in range(len(exps)) if j not in null_idx]
    cond = float(smax / svals[kept[-1]]) if kept and svals[kept[-1]] > 0 else float("inf")
    F = _monomial_matrix(scaled(fresh), exps) / colnorm
    vectors, residuals = [], []
    for j in null_idx:
        v = Vh[j].conj()
        res = relative_residual(F, v)
        if res < tol:
            vectors.append(v / colnorm)
            residuals.append(res)
    return exps, centre, spread, vectors, residuals, cond, tuple(float(x) for x in svals[-3:])


def _to_original(exps, centre, spread, vectors, names) -> list[np.ndarray]:
    """Re-express relations in scaled/centred monomials over plain monomials."""
    jet = max(sum(e) for e in exps)
    index = {e: j for j, e in enumerate(exps)}
    subs = {v: (TruncSeries.variable(names, jet, v) - complex(c)).scale(1.0 / s)
            for v, c, s in zip(names, centre, spread)}
    out = []
    for vec in vectors:
        poly = TruncSeries(names, jet, {e: complex(c) for e, c in zip(exps, vec) if c != 0})
        expanded = compose(poly, subs, safe=names)
        coeffs = np.zeros(len(exps), dtype=complex)
        for e, c in expanded.terms.items():
            coeffs[index[e]] = complex(c)
        out.append(coeffs)
    return out


def canonical_relations(exps, coeff_rows, names) -> list[TruncSeries]:
    """Reduced echelon basis, highest-degree monomials pivoted first."""
    if not coeff_rows:
        return []
    jet = max(sum(e) for e in exps)
    rows = np.array(coeff_rows)
    rows /= np.abs(rows).max(axis=1, keepdims=True)
    order = sorted(range(len(exps)), key=lambda j: (-sum(exps[j]), tuple(-x for x in exps[j])))
    R = _reduce_rows(rows, order)
    out = []
    for row in R:
        terms = {}
        for e, c in zip(exps, row):
            c = complex(round(c.real, 12), round(c.imag, 12))
            if abs(c) > 1e-9:
                terms[e] = c
        out.append(TruncSeries(names, jet, terms))
    return out


def algebraic_hull(param: SegreParam, degree_bound: int, samples: int | None = None,
                   tol: float = 1e-8, seed: int = 0, radius: float = HULL_RADIUS) -> HullResult:
    """Search for polynomials in (z, w) vanishing on the Segre set.

    Points come from the untruncated chain at parameters of norm up to
    ``radius``; a relation is kept only if it also vanishes (relative
    residual below ``tol``) on a fresh, independent sample.
    """
    if not 1 <= degree_bound <= 6:
        raise ValueError("degree_bound must lie in 1..6")
    M = param.manifold
    names = M.z_vars + tuple(f"w{j}" for j in range(1, M.d + 1))
    nmono = len(monomial_exponents(M.N, degree_bound))
    count = max(samples or 0, 2 * nmono + 10)
    rng = np.random.default_rng([seed, 7919])
    dim = len(param.parameters)
    train = param.evaluate_analytic(np.vstack([np.zeros((1, dim)),
                                               ball_samples(rng, count, dim, radius)]))
    fresh = param.evaluate_analytic(ball_samples(rng, count, dim, radius))
    notes = []
    finite = np.all(np.isfinite(train), axis=1)
    if not finite.all():
        notes.append(f"{int((~finite).sum())} non-finite samples dropped")
        train = train[finite]
    fresh = fresh[np.all(np.isfinite(fresh), axis=1)]
    exps, centre, spread, vecs, res, cond, small = fit_polynomial_relations(
        train, fresh, degree_bound, tol)
    if cond > 1e10:
        notes.append(f"ill-conditioned monomial matrix (condition estimate {cond:.3g})")
    polys = canonical_relations(exps, _to_original(exps, centre, spread, vecs, names), names)
    return HullResult(names, degree_bound, tuple(polys), count, tuple(res), cond, small,
                      tol, seed, radius, tuple(notes))


# ---------------------------------------------------------------------------
# almost minimality


@dataclass(frozen=True)
class ScanEntry:
    point: tuple[complex, ...]
    orbit_dim: int
    w_zero: bool
    hull_found: bool | None
    hull: tuple[str, ...]

    @property
    def evidence(self) -> bool:
        return not self.w_zero and self.hull_found is False

    def to_dict(self, N: int) -> dict:
        return {
            "point": [[x.real, x.imag] for x in self.point],
            "orbit_dim": self.orbit_dim,
            "w_zero_flag": self.w_zero,
            "hull_found": self.hull_found,
            "hull": list(self.hull),
            "hull_free_orbit": self.evidence or self.orbit_dim == N,
        }


@dataclass
class ScanReport:
    N: int
    degree_bound: int
    radii: tuple[float, ...]
    entries: dict = field(default_factory=dict)
    algebraic: bool = False
    minimal_somewhere: bool | None = None

    def radius_evidence(self, r: float) -> bool:
        return any(e.evidence or e.orbit_dim == self.N for e in self.entries[r])

    @property
    def evidence(self) -> bool:
        return all(self.radius_evidence(r) for r in self.radii)

    @property
    def verdict(self) -> str:
        if self.algebraic:
            return "almost-minimal" if self.minimal_somewhere else "not-almost-minimal"
        if self.evidence:
            return f"evidence of almost minimality up to degree {self.degree_bound}"
        return "no evidence of almost minimality"

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "degree_bound": self.degree_bound,
            "per_radius": [
                {"radius": r, "evidence": self.radius_evidence(r),
                 "points": [e.to_dict(self.N) for e in self.entries[r]]}
                for r in self.radii],
            "algebraic": self.algebraic,
        }
        if self.algebraic:
            out["minimal_somewhere"] = self.minimal_somewhere
            out["note"] = "algebraic M: almost minimal iff minimal at some point"
        return out


def almost_minimality_scan(M: GenericManifold, radii: Sequence[float] = (0.1, 0.05, 0.025),
                           per_radius: int = 3, degree_bound: int = 4, seed: int = 0,
                           samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_RANK_TOL,
                           hull_radius: float = HULL_RADIUS) -> ScanReport:
    """Look for base points whose Segre sets admit no low-degree hull."""
    radii = tuple(float(r) for r in radii)
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    report = ScanReport(M.N, degree_bound, radii, algebraic=M.is_algebraic)
    top = 2 * (M.d + 1)
    minimal_somewhere = False
    for idx, r in enumerate(radii):
        pts = sample_points(M, per_radius, r, seed=seed * 1000 + idx)
        entries = []
        for q in pts:
            orb = orbit_dim(M, tuple(complex(x) for x in q), samples, DEFAULT_RADIUS, tol, seed)
            minimal_somewhere |= orb.dimension == M.N
            w_zero = bool(np.max(np.abs(q[M.n:])) < 1e-12)
            hull_found, hull = None, ()
            if not w_zero:
                h = algebraic_hull(segre_set_param(M, tuple(complex(x) for x in q), top),
                                   degree_bound, tol=tol, seed=seed, radius=hull_radius)
                hull_found = h.found
                hull = tuple(h.to_dict()["polynomials"])
            entries.append(ScanEntry(tuple(complex(x) for x in q), orb.dimension, w_zero,
                                     hull_found, hull))
        report.entries[r] = entries
    if report.algebraic:
        origin = minimality_test(M, (0,) * M.N, samples, DEFAULT_RADIUS, tol, seed)
        report.minimal_somewhere = minimal_somewhere or origin.minimal
    return report
