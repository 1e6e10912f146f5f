"""Levi forms, singular loci and Levi-flat containment in w-space.

A real hypersurface is handled through its complexified defining series
``rho(w, eta)``; real points are evaluated at ``eta = conj(w)``.  The Levi
form at a nonsingular point is the complex Hessian ``d^2 rho / dw deta``
restricted to the complex tangent space ``ker d_w rho``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, least_squares

from .algebra import DEFAULT_JET, GaussianRational, JetReachError, TruncSeries, compose, partial_derivative
from .language import (
    GenericManifold,
    Hypersurface,
    hypersurface_variables,
    reality_defect,
)
from .segre import ball_samples, monomial_exponents, relative_residual, sample_points

__all__ = [
    "LeviReport",
    "FlatnessVerdict",
    "SingularLocus",
    "Classification",
    "SegreVariety",
    "FitResult",
    "ContainmentVerdict",
    "levi_form",
    "is_levi_flat",
    "nonsingular_points",
    "singular_locus_equations",
    "classify_singular_point",
    "segre_variety_of_hypersurface",
    "fit_hypersurface",
    "project_and_fit",
    "containment_test",
]

FLAT_TOL = 1e-8
FIT_RADIUS = 1.0


class SingularPointError(ValueError):
    pass


def _gradients(rho: TruncSeries, m: int):
    """Cached first derivatives in w and eta and mixed second derivatives."""
    cache = rho._cache
    if "levi" not in cache:
        V = rho.variables
        dw = [partial_derivative(rho, V[j]) for j in range(m)]
        deta = [partial_derivative(rho, V[m + j]) for j in range(m)]
        hess = [[partial_derivative(dw[j], V[m + k]) for k in range(m)] for j in range(m)]
        dww = [[partial_derivative(dw[j], V[k]) for k in range(m)] for j in range(m)]
        cache["levi"] = (dw, deta, hess, dww)
    return cache["levi"]


def _at(series_list, w: np.ndarray) -> np.ndarray:
    pt = np.concatenate([w, np.conj(w)])[None, :]
    return np.array([s.evaluate_many(pt)[0] for s in series_list])


def _real_value(rho: TruncSeries, w: np.ndarray) -> float:
    return float(rho.evaluate_many(np.concatenate([w, np.conj(w)])[None, :])[0].real)


def _complex_null(row_matrix: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis (columns) of the complex null space of ``row_matrix``."""
    m = row_matrix.shape[1]
    if row_matrix.size == 0:
        return np.eye(m, dtype=complex)
    _, s, vh = np.linalg.svd(row_matrix)
    rank = int(np.sum(s > tol * max(s[0], 1e-300))) if s.size else 0
    return vh[rank:].conj().T


def _levi_matrix(hess: np.ndarray, basis: np.ndarray) -> np.ndarray:
    # L_ab = sum_jk rho_{j kbar} B_ja conj(B_kb)
    return basis.T @ hess @ basis.conj()


@dataclass(frozen=True)
class LeviReport:
    point: tuple[complex, ...]
    tangent_basis: np.ndarray
    matrix: np.ndarray
    gradient_norm: float
    hermitian_defect: float
    tol: float

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0

    @property
    def normalized_max(self) -> float:
        return self.max_abs / self.gradient_norm

    @property
    def flat(self) -> bool:
        return self.normalized_max < self.tol

    @property
    def verdict(self) -> str:
        return "flat" if self.flat else "not-flat"

    def to_dict(self) -> dict:
        return {
            "point": [[float(x.real), float(x.imag)] for x in self.point],
            "levi_matrix": [[[float(x.real), float(x.imag)] for x in row] for row in self.matrix],
            "max_abs_entry": self.max_abs,
            "gradient_norm": self.gradient_norm,
            "normalized_max": self.normalized_max,
            "hermitian_defect": self.hermitian_defect,
            "verdict": self.verdict,
        }


def levi_form(H: Hypersurface, p: Sequence[complex], tol: float = FLAT_TOL) -> LeviReport:
    """Levi form of ``H`` at a nonsingular point ``p``."""
    w = np.asarray(p, dtype=complex)
    if w.shape != (H.m,):
        raise ValueError(f"point must have {H.m} coordinates")
    value = _real_value(H.rho, w)
    if abs(value) >= 1e-10:
        raise ValueError(f"point is not on H: rho = {value:.3g}")
    dw, _, hess, _ = _gradients(H.rho, H.m)
    g = _at(dw, w)
    gnorm = float(np.linalg.norm(g))
    if gnorm <= 1e-8:
        raise SingularPointError("singular point (vanishing gradient), use classify_singular_point")
    h = np.array([_at(row, w) for row in hess])
    basis = _complex_null(g[None, :])
    L = _levi_matrix(h, basis)
    herm = float(np.max(np.abs(L - L.conj().T))) if L.size else 0.0
    return LeviReport(tuple(complex(x) for x in w), basis, L, gnorm, herm, tol)


def nonsingular_points(H: Hypersurface, count: int, radius: float = 1.0, seed: int = 0,
                       max_lines: int | None = None) -> np.ndarray:
    """Points of ``{rho = 0}`` with nonvanishing gradient.

    Random real lines ``a + s v`` through anchors in the ball are scanned
    for sign changes of ``rho``; each bracket is solved by Brent's
    bisection hybrid and polished with Newton steps.
    """
    rng = np.random.default_rng(seed)
    dw, _, _, _ = _gradients(H.rho, H.m)
    found: list[np.ndarray] = []
    grid = np.linspace(-2 * radius, 2 * radius, 81)
    lines = max_lines or 40 * count
    for _ in range(lines):
        if len(found) >= count:
            break
        a = ball_samples(rng, 1, H.m, radius)[0]
        v = ball_samples(rng, 1, H.m, 1.0)[0]
        v /= np.linalg.norm(v)
        pts = a[None, :] + grid[:, None] * v[None, :]
        vals = H.value(pts)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if not len(idx):
            continue
        j = idx[rng.integers(len(idx))]

        def f(s):
            return _real_value(H.rho, a + s * v)

        s = brentq(f, grid[j], grid[j + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
        for _ in range(3):
            g = _at(dw, a + s * v)
            slope = 2 * np.real(g @ v)
            if slope == 0:
                break
            s -= f(s) / slope
        q = a + s * v
        if abs(f(s)) < 1e-12 and np.linalg.norm(_at(dw, q)) > 1e-8:
            found.append(q)
    return np.array(found, dtype=complex).reshape(-1, H.m)


@dataclass(frozen=True)
class FlatnessVerdict:
    flat: bool | None
    reports: tuple[LeviReport, ...]
    tol: float
    seed: int
    caveat: str = ("sampled nonsingular points only see the closure of the regular "
                   "part of H")

    @property
    def worst(self) -> LeviReport | None:
        return max(self.reports, key=lambda r: r.normalized_max, default=None)

    @property
    def verdict(self) -> str:
        if self.flat is None:
            return "inconclusive"
        return "levi-flat" if self.flat else "not-levi-flat"

    def to_dict(self) -> dict:
        worst = self.worst
        return {
            "verdict": self.verdict,
            "points_checked": len(self.reports),
            "max_normalized_levi_entry": worst.normalized_max if worst else None,
            "worst_point": worst.to_dict() if worst else None,
            "tol": self.tol,
            "rng_seed": self.seed,
            "caveat": self.caveat,
        }


def is_levi_flat(H: Hypersurface, samples: int = 10, radius: float = 1.0,
                 tol: float = FLAT_TOL, seed: int = 0) -> FlatnessVerdict:
    """Flat iff the Levi form vanishes at every sampled regular point.

    One regular point with a nonzero Levi form already decides "not flat"
    (flatness at one regular point propagates to all of them on a connected
    regular part), so the worst point is returned as a witness.
    """
    pts = nonsingular_points(H, samples, radius, seed)
    if not len(pts):
        return FlatnessVerdict(None, (), tol, seed)
    reports = tuple(levi_form(H, q, tol) for q in pts)
    return FlatnessVerdict(all(r.flat for r in reports), reports, tol, seed)


# ---------------------------------------------------------------------------
# singular locus


@dataclass(frozen=True)
class SingularLocus:
    equations: tuple[TruncSeries, ...]
    labels: tuple[str, ...]
    solutions: np.ndarray
    radius: float
    seed: int

    def to_dict(self) -> dict:
        from .language import format_series
        return {
            "equations": {lab: format_series(s) for lab, s in zip(self.labels, self.equations)},
            "solution_count": int(len(self.solutions)),
            "solutions": [[[float(x.real), float(x.imag)] for x in q] for q in self.solutions],
            "radius": self.radius,
            "rng_seed": self.seed,
        }


def _singular_residual(H: Hypersurface):
    m = H.m
    dw, deta, hess, dww = _gradients(H.rho, m)

    def split(x):
        return x[:m] + 1j * x[m:]

    def fun(x):
        w = split(x)
        g = _at(dw, w)
        return np.concatenate([[_real_value(H.rho, w)], g.real, g.imag])

    def jac(x):
        w = split(x)
        g = _at(dw, w)
        ge = _at(deta, w)
        # d/dRe w_k = d/dw_k + d/deta_k, d/dIm w_k = i (d/dw_k - d/deta_k)
        rows = []
        rows.append(np.concatenate([(g + ge).real, (1j * (g - ge)).real]))
        A = np.array([_at(row, w) for row in dww])          # d g_j / d w_k
        B = np.array([_at(row, w) for row in hess])         # d g_j / d eta_k
        dre = A + B
        dim = 1j * (A - B)
        full = np.hstack([dre, dim])
        return np.vstack([rows[0], full.real, full.imag])

    return fun, jac


def singular_locus_equations(H: Hypersurface, samples: int = 20, radius: float = 1.0,
                             seed: int = 0, tol: float = 1e-10) -> SingularLocus:
    """The system ``rho = d rho/dw_j = d rho/deta_j = 0`` and sampled real solutions."""
    m = H.m
    dw, deta, _, _ = _gradients(H.rho, m)
    eqs = (H.rho,) + tuple(dw) + tuple(deta)
    labels = ("rho",) + tuple(f"d rho/d w{j}" for j in range(1, m + 1)) \
        + tuple(f"d rho/d eta{j}" for j in range(1, m + 1))
    fun, jac = _singular_residual(H)
    rng = np.random.default_rng(seed)
    sols = []
    for start in ball_samples(rng, samples, m, radius):
        x0 = np.concatenate([start.real, start.imag])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = least_squares(fun, x0, jac=jac, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                max_nfev=200)
        if np.linalg.norm(res.fun) < tol and np.linalg.norm(res.x) <= 2 * radius:
            sols.append(res.x[:m] + 1j * res.x[m:])
    return SingularLocus(eqs, labels, np.array(sols, dtype=complex).reshape(-1, m), radius, seed)


@dataclass(frozen=True)
class Classification:
    kind: str
    real_dimension: int
    codimension: int
    i_invariance_defect: float
    generic: bool
    levi_max: float | None

    def to_dict(self) -> dict:
        return {
            "classification": self.kind,
            "real_dimension": self.real_dimension,
            "real_codimension": self.codimension,
            "i_invariance_defect": self.i_invariance_defect,
            "generic": bool(self.generic),
            "levi_max": self.levi_max,
        }


def classify_singular_point(H: Hypersurface, locus: Sequence[TruncSeries], p: Sequence[complex],
                            tol: float = 1e-9) -> Classification:
    """Classify the singular manifold ``{r_1 = ... = r_c = 0}`` of ``H`` at ``p``.

    ``locus`` holds real defining series of the candidate singular manifold.
    "complex" when its tangent space is invariant under multiplication by
    i; "leviflat" when it is generic of real codimension 2 with vanishing
    Levi form on its complex tangent; "other" otherwise.
    """
    m = H.m
    w = np.asarray(p, dtype=complex)
    fun, _ = _singular_residual(H)
    if np.max(np.abs(fun(np.concatenate([w.real, w.imag])))) > 1e-8:
        raise ValueError("p does not solve the singular system of H")
    V = hypersurface_variables(m)
    rows, grads, hessians = [], [], []
    for r in locus:
        if r.variables != V:
            raise ValueError("locus equations must be series in w, eta")
        if reality_defect(r, m) is not None:
            raise ValueError("locus equations must be real")
        if abs(_real_value(r, w)) > 1e-8:
            raise ValueError("p is not on the candidate singular manifold")
        dw, _, hess, _ = _gradients(r, m)
        c = _at(dw, w)
        grads.append(c)
        hessians.append(np.array([_at(row, w) for row in hess]))
        rows.append(np.concatenate([c.real, -c.imag]))
    R = np.array(rows).reshape(-1, 2 * m)
    s = np.linalg.svd(R, compute_uv=False) if R.size else np.zeros(0)
    if not s.size or s[0] < 1e-12:
        raise ValueError("tangent estimation failed: all locus gradients vanish at p")
    codim = int(np.sum(s > tol * s[0]))
    _, _, vh = np.linalg.svd(R)
    T = vh[codim:].T                                   # real tangent basis (2m x dim)
    J = np.block([[np.zeros((m, m)), -np.eye(m)], [np.eye(m), np.zeros((m, m))]])
    JT = J @ T
    defect = float(np.linalg.norm(JT - T @ (T.T @ JT))) if T.size else 0.0
    span = np.hstack([T, JT])
    generic = bool(span.size) and bool(np.linalg.matrix_rank(span, tol=1e-9) == 2 * m)
    dim = 2 * m - codim
    if defect < tol:
        return Classification("complex", dim, codim, defect, generic, None)
    levi_max = None
    if generic and codim == 2:
        G = np.array(grads)
        B = _complex_null(G)
        levi_max = 0.0
        for c, h in zip(grads, hessians):
            if B.shape[1]:
                L = _levi_matrix(h, B)
                levi_max = max(levi_max, float(np.max(np.abs(L))) / max(np.linalg.norm(c), 1e-300))
        if levi_max < tol:
            return Classification("leviflat", dim, codim, defect, generic, levi_max)
    return Classification("other", dim, codim, defect, generic, levi_max)


# ---------------------------------------------------------------------------
# Segre varieties of H


@dataclass(frozen=True)
class SegreVariety:
    point: tuple
    series: TruncSeries
    degenerate: bool

    def to_dict(self) -> dict:
        from .language import format_series
        return {"point": [str(x) for x in self.point], "equation": format_series(self.series),
                "degenerate": self.degenerate}


def segre_variety_of_hypersurface(H: Hypersurface, p: Sequence) -> SegreVariety:
    """``Sigma_p = {w : rho(w, conj p) = 0}``; degenerate when that vanishes identically."""
    from .language import as_exact, parse_point
    if isinstance(p, str):
        p = parse_point(p)
    if len(p) != H.m:
        raise ValueError(f"point must have {H.m} coordinates")
    try:
        pbar = [as_exact(x).conjugate() for x in p]
    except (TypeError, ValueError):
        pbar = [np.conj(complex(x)) for x in p]
    etas = H.variables[H.m:]
    polynomial = H.rho.degree() < H.rho.jet_order
    if not polynomial and any(pbar):
        raise JetReachError("rho may be truncated; substituting a nonzero point needs an exact "
                            "polynomial")
    sub = {e: TruncSeries.constant(H.variables, H.jet_order, c) for e, c in zip(etas, pbar)}
    s = compose(H.rho, sub, safe=etas)
    s = s.embed(H.variables[:H.m])
    return SegreVariety(tuple(p), s, s.is_zero())


# ---------------------------------------------------------------------------
# fitting a real hypersurface to the projection of M


def _real_basis(m: int, degree: int):
    """Monomials in (w, eta) grouped into reality-symmetric real unknowns."""
    exps = monomial_exponents(2 * m, degree)
    seen, unknowns = set(), []
    for e in exps:
        if e in seen:
            continue
        partner = e[m:] + e[:m]
        seen.update({e, partner})
        if partner == e:
            unknowns.append(("diag", e, None))
        else:
            unknowns.append(("re", e, partner))
            unknowns.append(("im", e, partner))
    return unknowns


def _real_design(points_w: np.ndarray, unknowns, m: int) -> np.ndarray:
    X = np.hstack([points_w, np.conj(points_w)])
    cols = []
    for kind, e, _ in unknowns:
        u = np.prod(X ** np.array(e)[None, :], axis=1)
        if kind == "diag":
            cols.append(u.real)
        elif kind == "re":
            cols.append(2 * u.real)
        else:
            cols.append(-2 * u.imag)
    return np.array(cols).T


def _complex_vector(vec, unknowns, exps) -> np.ndarray:
    index = {e: i for i, e in enumerate(exps)}
    out = np.zeros(len(exps), dtype=complex)
    for x, (kind, e, partner) in zip(vec, unknowns):
        if kind == "diag":
            out[index[e]] += x
        elif kind == "re":
            out[index[e]] += x
            out[index[partner]] += x
        else:
            out[index[e]] += 1j * x
            out[index[partner]] -= 1j * x
    return out


def _monomial_scales(points_w: np.ndarray, unknowns) -> np.ndarray:
    X = np.abs(np.hstack([points_w, points_w]))
    out = np.array([np.linalg.norm(np.prod(X ** np.array(e)[None, :], axis=1))
                    for _, e, _ in unknowns])
    return np.where(out > 0, out, 1.0)


def _series_from_unknowns(vec, unknowns, m: int, jet: int) -> TruncSeries:
    V = hypersurface_variables(m)
    terms: dict = {}
    for x, (kind, e, partner) in zip(vec, unknowns):
        if x == 0:
            continue
        if kind == "diag":
            terms[e] = terms.get(e, GaussianRational(0)) + GaussianRational(x)
        elif kind == "re":
            terms[e] = terms.get(e, GaussianRational(0)) + GaussianRational(x)
            terms[partner] = terms.get(partner, GaussianRational(0)) + GaussianRational(x)
        else:
            terms[e] = terms.get(e, GaussianRational(0)) + GaussianRational(0, x)
            terms[partner] = terms.get(partner, GaussianRational(0)) + GaussianRational(0, -x)
    return TruncSeries(V, jet, terms)


@dataclass(frozen=True)
class FitResult:
    degree: int
    hypersurface: Hypersurface | None
    training_residual: float
    validation_residual: float | None
    nullity: int
    sample_count: int
    seed: int
    radius: float
    tol: float

    @property
    def found(self) -> bool:
        return self.hypersurface is not None

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "found": self.found,
            "rho": self.hypersurface.text() if self.found else None,
            "training_residual": self.training_residual,
            "validation_residual": self.validation_residual,
            "nullity": self.nullity,
            "sample_count": self.sample_count,
            "rng_seed": self.seed,
            "radius": self.radius,
            "tol": self.tol,
            "note": f"absence of a fit is evidence up to degree {self.degree} only",
        }


def fit_hypersurface(M: GenericManifold, degree: int, samples: int | None = None,
                     radius: float = FIT_RADIUS, tol: float = 1e-8, seed: int = 0,
                     candidate_ratio: float = 1e-5) -> FitResult:
    """Fit a real polynomial ``rho(w, conj w)`` vanishing on the w-projection of M."""
    if M.d != 2:
        raise ValueError("the projection test needs codimension d = 2")
    if degree < 1:
        raise ValueError("degree must be positive")
    m = M.d
    unknowns = _real_basis(m, degree)
    count = max(samples or 0, 3 * len(unknowns) + 20)
    train = sample_points(M, count, radius, seed)[:, M.n:] / radius
    fresh = sample_points(M, count, radius, seed + 10007)[:, M.n:] / radius
    if len(train) < len(unknowns):
        warnings.warn("rank-deficient sampling: fewer points than unknowns")
    A = _real_design(train, unknowns, m)
    # scale each column by the size of its complex monomial, never by its own
    # norm: a real or imaginary part vanishing on M is itself a relation
    colnorm = _monomial_scales(train, unknowns)
    _, s, vh = np.linalg.svd(A / colnorm, full_matrices=True)
    sv = np.zeros(len(unknowns))
    sv[:len(s)] = s
    null = [j for j in range(len(unknowns)) if sv[j] <= candidate_ratio * sv[0]]
    # validate in the complex monomial basis so that cancellation inside a
    # single real column (u - conj u) is not mistaken for a residual
    exps = monomial_exponents(2 * m, degree)
    Xf = np.hstack([fresh, np.conj(fresh)])
    F = np.array([np.prod(Xf ** np.array(e)[None, :], axis=1) for e in exps]).T
    good = []
    for j in null:
        v = vh[j] / colnorm
        if relative_residual(F, _complex_vector(v, unknowns, exps)) < tol:
            good.append(v)
    training = float(sv[-1] / sv[0]) if sv[0] else 0.0
    if not good:
        return FitResult(degree, None, training, None, 0, count, seed, radius, tol)
    # canonical member: reduced echelon over the validated null space
    order = sorted(range(len(unknowns)), key=lambda j: (sum(unknowns[j][1]), j))
    R = np.array(good)
    r = 0
    for c in order:
        if r == len(R):
            break
        piv = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[piv, c]) < 1e-9 * np.abs(R).max():
            continue
        R[[r, piv]] = R[[piv, r]]
        R[r] /= R[r, c]
        for i in range(len(R)):
            if i != r:
                R[i] -= R[i, c] * R[r]
        r += 1
    vec = R[0]
    # undo the w/radius scaling (real positive factors keep reality)
    scale = np.array([radius ** -sum(e) for _, e, _ in unknowns])
    vec = vec * scale
    vec = vec / np.abs(vec).max()
    fresh_w = fresh * radius
    Xf = np.hstack([fresh_w, np.conj(fresh_w)])
    jet = max(DEFAULT_JET, degree + 1)
    best = None
    # prefer small-denominator snaps; each candidate is revalidated exactly
    for snap_tol, max_den in ((1e-6, 1000), (1e-12, 10 ** 9)):
        exact = [_snap(float(x), snap_tol, max_den) for x in vec]
        rho = _series_from_unknowns(exact, unknowns, m, jet)
        val = _series_residual(rho, Xf)
        if val < tol:
            best = (Hypersurface(m, rho), val)
            break
    if best is None:
        return FitResult(degree, None, training, val, len(good), count, seed, radius, tol)
    return FitResult(degree, best[0], training, best[1], len(good), count, seed, radius, tol)


def _snap(x: float, snap_tol: float, max_den: int) -> Fraction:
    if abs(x) < snap_tol:
        return Fraction(0)
    f = Fraction(x).limit_denominator(max_den)
    return f if abs(float(f) - x) < snap_tol else Fraction(x).limit_denominator(10 ** 9)


def _series_residual(rho: TruncSeries, X: np.ndarray) -> float:
    ev = rho.evaluate_many(X)
    mags = _term_magnitudes(rho, X)
    return float(np.max(np.abs(ev) / np.where(mags > 0, mags, 1.0))) if len(X) else float("inf")


def _term_magnitudes(rho: TruncSeries, X: np.ndarray) -> np.ndarray:
    exps, coef = rho.compiled()
    if not len(coef):
        return np.zeros(len(X))
    mono = np.prod(np.abs(X)[:, None, :] ** exps[None, :, :], axis=2)
    return mono @ np.abs(coef)


def project_and_fit(M: GenericManifold, degree: int, samples: int | None = None,
                    radius: float = FIT_RADIUS, tol: float = 1e-8, seed: int = 0) -> FitResult | None:
    """Lowest-degree hypersurface (up to ``degree``) containing the w-projection of ``M``.

    Degrees are tried in increasing order because above the minimal degree
    the relation is no longer unique (its multiples join the null space).
    """
    for D in range(1, degree + 1):
        fit = fit_hypersurface(M, D, samples, radius, tol, seed)
        if fit.found:
            return fit
    return None


@dataclass(frozen=True)
class ContainmentVerdict:
    residual: float
    tol: float
    flatness: FlatnessVerdict
    sample_count: int
    seed: int

    @property
    def contained(self) -> bool:
        return self.residual < self.tol

    @property
    def verdict(self) -> str:
        if not self.contained:
            return "not-contained"
        if self.flatness.flat:
            return "contained-in-levi-flat"
        if self.flatness.flat is None:
            return "contained-flatness-inconclusive"
        return "contained-not-levi-flat"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "contained": self.contained,
            "residual": self.residual,
            "tol": self.tol,
            "sample_count": self.sample_count,
            "rng_seed": self.seed,
            "levi_flatness": self.flatness.to_dict(),
        }


def containment_test(M: GenericManifold, H: Hypersurface, samples: int = 50,
                     radius: float = FIT_RADIUS, tol: float = 1e-8, seed: int = 1) -> ContainmentVerdict:
    """Does ``rho`` vanish on the w-projection of fresh points of ``M``?"""
    if H.m != M.d:
        raise ValueError(f"H lives in C^{H.m} but M has codimension {M.d}")
    pts = sample_points(M, samples, radius, seed)[:, M.n:]
    X = np.hstack([pts, np.conj(pts)])
    res = _series_residual(H.rho, X)
    flat = is_levi_flat(H, seed=seed)
    return ContainmentVerdict(res, tol, flat, len(pts), seed)
