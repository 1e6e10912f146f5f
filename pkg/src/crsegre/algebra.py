"""Truncated multivariate power series over the Gaussian rationals.

Everything symbolic in the package lives in :class:`TruncSeries`: an
immutable map from exponent vectors to coefficients, truncated at a total
degree ``jet_order``.  Coefficients are exact :class:`GaussianRational`
values by default; a series whose coefficients are Python ``complex``
numbers is a "floating" series and is only produced when a caller feeds
floating data in (sampled base points, fitted relations).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "GaussianRational",
    "TruncSeries",
    "SeriesMap",
    "JetReachError",
    "as_coefficient",
    "conjugate",
    "compose",
    "partial_derivative",
    "evaluate",
    "jacobian",
    "jacobian_rank",
    "exp_series",
]

DEFAULT_JET = 8
DEFAULT_RANK_TOL = 1e-8


class JetReachError(ValueError):
    """A composition needs information beyond the stored jet."""


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return not self.im and self.re == other
        if isinstance(other, (complex, float)):
            return complex(self) == other
        return NotImplemented

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, Rational):
            return GaussianRational._raw(self.re + other, self.im)
        if isinstance(other, (complex, float)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, Rational):
            return GaussianRational._raw(self.re - other, self.im)
        if isinstance(other, (complex, float)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b:
                return GaussianRational._raw(a * c, a * d)
            if not d:
                return GaussianRational._raw(a * c, b * c)
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, Rational):
            return GaussianRational._raw(self.re * other, self.im * other)
        if isinstance(other, (complex, float)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        if isinstance(other, Rational):
            return GaussianRational._raw(self.re / other, self.im / other)
        if isinstance(other, (complex, float)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        return as_coefficient(other) * self.inverse()

    def __pow__(self, k: int) -> "GaussianRational":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational._raw(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


ONE = GaussianRational(1)
ZERO = GaussianRational(0)
I = GaussianRational(0, 1)


def as_coefficient(x):
    """Coerce ``x`` to a series coefficient (exact when possible)."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return GaussianRational(Fraction(x))
    if isinstance(x, (complex, float, np.number)):
        return complex(x)
    raise TypeError(f"cannot use {type(x).__name__} as a series coefficient")


def _is_exact(c) -> bool:
    return isinstance(c, GaussianRational)


def _conj(c):
    return c.conjugate()


class TruncSeries:
    """Multivariate power series truncated at total degree ``jet_order``.

    ``terms`` maps exponent tuples (one entry per variable) to coefficients;
    zero coefficients and terms above the jet are never stored.
    """

    __slots__ = ("variables", "jet_order", "terms", "_cache")

    def __init__(self, variables: Sequence[str], jet_order: int,
                 terms: Mapping[tuple, object] | None = None):
        if jet_order < 0:
            raise ValueError("jet_order must be non-negative")
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variables in {self.variables}")
        self.jet_order = int(jet_order)
        nv = len(self.variables)
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nv or min(e, default=0) < 0:
                    raise ValueError(f"bad exponent {e} for variables {self.variables}")
                if sum(e) > self.jet_order:
                    continue
                c = as_coefficient(c)
                if c:
                    clean[e] = c
        self.terms = clean
        self._cache = {}

    @classmethod
    def _from_clean(cls, variables, jet_order, terms) -> "TruncSeries":
        obj = object.__new__(cls)
        obj.variables = variables
        obj.jet_order = jet_order
        obj.terms = terms
        obj._cache = {}
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, variables, jet_order, value) -> "TruncSeries":
        c = as_coefficient(value)
        nv = len(tuple(variables))
        return cls(variables, jet_order, {(0,) * nv: c} if c else {})

    @classmethod
    def variable(cls, variables, jet_order, name: str) -> "TruncSeries":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(f"unknown variable {name!r}")
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, jet_order, {tuple(e): ONE} if jet_order >= 1 else {})

    @classmethod
    def zero(cls, variables, jet_order) -> "TruncSeries":
        return cls(variables, jet_order)

    # -- inspection ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, ZERO)

    def order(self) -> int | None:
        """Lowest total degree present, ``None`` for the zero series."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient(self, exponent: Sequence[int]):
        return self.terms.get(tuple(exponent), ZERO)

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms ordered by total degree, then lexicographically descending."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))

    def depends_on(self, name: str) -> bool:
        j = self.variables.index(name)
        return any(e[j] for e in self.terms)

    def __repr__(self) -> str:
        return f"TruncSeries({self.variables}, jet={self.jet_order}, {len(self.terms)} terms)"

    def __str__(self) -> str:
        from .language import format_series
        return format_series(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncSeries):
            return (self.variables == other.variables
                    and self.jet_order == other.jet_order
                    and self.terms == other.terms)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, self.jet_order, frozenset(self.terms.items())))

    def equal_to_jet(self, other: "TruncSeries") -> bool:
        """Coefficient equality up to the smaller of the two jets."""
        jet = min(self.jet_order, other.jet_order)
        return self.truncate(jet).terms == other.truncate(jet).terms

    # -- structural -----------------------------------------------------------

    def truncate(self, jet: int) -> "TruncSeries":
        if jet >= self.jet_order:
            if jet == self.jet_order:
                return self
            return TruncSeries._from_clean(self.variables, jet, dict(self.terms))
        return TruncSeries._from_clean(
            self.variables, jet, {e: c for e, c in self.terms.items() if sum(e) <= jet})

    def with_jet(self, jet: int) -> "TruncSeries":
        """Relabel the jet order (padding an exact polynomial upward is safe)."""
        return self.truncate(jet) if jet <= self.jet_order else \
            TruncSeries._from_clean(self.variables, jet, dict(self.terms))

    def embed(self, variables: Sequence[str]) -> "TruncSeries":
        """Re-express over a superset variable list."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = [v for v in self.variables if v not in variables]
        if missing:
            # dropping variables is only allowed when they do not occur
            for v in missing:
                if self.depends_on(v):
                    raise ValueError(f"series depends on {v!r}, cannot drop it")
        idx = [self.variables.index(v) if v in self.variables else None for v in variables]
        terms = {tuple(e[j] if j is not None else 0 for j in idx): c for e, c in self.terms.items()}
        return TruncSeries._from_clean(variables, self.jet_order, terms)

    def map_coefficients(self, fn) -> "TruncSeries":
        return TruncSeries(self.variables, self.jet_order, {e: fn(c) for e, c in self.terms.items()})

    def to_floating(self) -> "TruncSeries":
        return TruncSeries._from_clean(
            self.variables, self.jet_order, {e: complex(c) for e, c in self.terms.items()})

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            if other.variables != self.variables:
                raise ValueError(
                    f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        return TruncSeries.constant(self.variables, self.jet_order, other)

    def __add__(self, other):
        other = self._coerce(other)
        jet = min(self.jet_order, other.jet_order)
        terms = {e: c for e, c in self.terms.items() if sum(e) <= jet}
        for e, c in other.terms.items():
            if sum(e) > jet:
                continue
            s = terms.get(e)
            s = c if s is None else s + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return TruncSeries._from_clean(self.variables, jet, terms)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._from_clean(self.variables, self.jet_order,
                                       {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "TruncSeries":
        c = as_coefficient(c)
        if not c:
            return TruncSeries.zero(self.variables, self.jet_order)
        return TruncSeries._from_clean(self.variables, self.jet_order,
                                       {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        other = self._coerce(other)
        jet = min(self.jet_order, other.jet_order)
        a = [(e, sum(e), c) for e, c in self.terms.items() if sum(e) <= jet]
        b = [(e, sum(e), c) for e, c in other.terms.items() if sum(e) <= jet]
        b.sort(key=lambda t: t[1])
        out: dict = {}
        get = out.get
        for ea, da, ca in a:
            room = jet - da
            for eb, db, cb in b:
                if db > room:
                    break
                e = tuple(x + y for x, y in zip(ea, eb))
                prev = get(e)
                out[e] = ca * cb if prev is None else prev + ca * cb
        out = {e: c for e, c in out.items() if c}
        return TruncSeries._from_clean(self.variables, jet, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncSeries":
        if not isinstance(k, int) or k < 0:
            raise ValueError("series powers must be non-negative integers")
        result = TruncSeries.constant(self.variables, self.jet_order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse via the geometric series (needs a unit constant)."""
        c0 = self.constant_term()
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = c0.inverse() if _is_exact(c0) else 1 / c0
        u = (self - c0).scale(inv0)  # self = c0 (1 + u)
        result = TruncSeries.constant(self.variables, self.jet_order, 1)
        power = result
        for _ in range(self.jet_order):
            power = -(power * u)
            if power.is_zero():
                break
            result = result + power
        return result.scale(inv0)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        c = as_coefficient(other)
        return self.scale(c.inverse() if _is_exact(c) else 1 / c)

    # -- numeric compilation --------------------------------------------------

    def compiled(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponent matrix (terms x vars) and complex coefficient vector."""
        hit = self._cache.get("compiled")
        if hit is None:
            items = list(self.terms.items())
            exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), self.nvars)
            coef = np.array([complex(c) for _, c in items], dtype=complex)
            hit = (exps, coef)
            self._cache["compiled"] = hit
        return hit

    def evaluate_many(self, points) -> np.ndarray:
        """Floating evaluation at each row of ``points`` (shape ``(m, nvars)``)."""
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[1] != self.nvars:
            raise ValueError(f"point dimension {pts.shape[1]} != {self.nvars} variables")
        exps, coef = self.compiled()
        if not len(coef):
            return np.zeros(pts.shape[0], dtype=complex)
        maxdeg = int(exps.max(initial=0))
        # powers[v][k] = pts[:, v] ** k, built once per call
        powers = np.ones((self.nvars, maxdeg + 1, pts.shape[0]), dtype=complex)
        for k in range(1, maxdeg + 1):
            powers[:, k, :] = powers[:, k - 1, :] * pts.T
        mono = np.ones((len(coef), pts.shape[0]), dtype=complex)
        for v in range(self.nvars):
            mono *= powers[v, exps[:, v], :]
        return coef @ mono


class SeriesMap:
    """A tuple of series over one variable list, read as a map into C^m."""

    __slots__ = ("components", "_cache")

    def __init__(self, components: Iterable[TruncSeries]):
        comps = tuple(components)
        if not comps:
            raise ValueError("SeriesMap needs at least one component")
        v, j = comps[0].variables, comps[0].jet_order
        for c in comps:
            if c.variables != v:
                raise ValueError("SeriesMap components must share variables")
        if any(c.jet_order != j for c in comps):
            jet = min(c.jet_order for c in comps)
            comps = tuple(c.truncate(jet) for c in comps)
        self.components = comps
        self._cache = {}

    @property
    def variables(self) -> tuple[str, ...]:
        return self.components[0].variables

    @property
    def jet_order(self) -> int:
        return self.components[0].jet_order

    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def coarity(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i) -> TruncSeries:
        return self.components[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, SeriesMap):
            return self.components == other.components
        return NotImplemented

    def __repr__(self) -> str:
        return f"SeriesMap({self.arity} -> {self.coarity}, jet={self.jet_order})"

    def evaluate_many(self, points) -> np.ndarray:
        return np.stack([c.evaluate_many(points) for c in self.components], axis=-1)

    def derivative_map(self) -> list[list[TruncSeries]]:
        hit = self._cache.get("jac")
        if hit is None:
            hit = [[partial_derivative(c, v) for v in self.variables] for c in self.components]
            self._cache["jac"] = hit
        return hit


# ---------------------------------------------------------------------------
# operations


def conjugate(f: TruncSeries, swap: Mapping[str, str] | None = None) -> TruncSeries:
    """Conjugate coefficients and rename variables by the involution ``swap``.

    Variables absent from ``swap`` are fixed.  ``swap`` must be an involution
    on ``f.variables``.
    """
    swap = dict(swap or {})
    for a, b in swap.items():
        if a not in f.variables or b not in f.variables:
            raise KeyError(f"unknown variable in pairing {a!r}<->{b!r}")
        if swap.get(b, b) != a:
            raise ValueError(f"pairing is not an involution at {a!r}")
    perm = [f.variables.index(swap.get(v, v)) for v in f.variables]
    # new exponent at position perm[j] takes the old exponent at j
    terms = {}
    for e, c in f.terms.items():
        ne = [0] * len(e)
        for j, x in enumerate(e):
            ne[perm[j]] = x
        terms[tuple(ne)] = _conj(c)
    return TruncSeries._from_clean(f.variables, f.jet_order, terms)


def compose(f: TruncSeries, substitution: Mapping[str, TruncSeries | object],
            safe: Iterable[str] = ()) -> TruncSeries:
    """Substitute series for variables of ``f`` and truncate.

    All substituted series must share one variable list, which becomes the
    variable list of the result; variables of ``f`` that are not substituted
    must appear in it and are kept as themselves.  A substituted series with
    a nonzero constant term is only accepted for variables listed in
    ``safe`` (the caller vouches that ``f`` is exact, i.e. a polynomial, in
    them); otherwise the truncated result would silently be wrong.
    """
    safe = set(safe)
    series = [s for s in substitution.values() if isinstance(s, TruncSeries)]
    if series:
        target_vars = series[0].variables
        jet = min([f.jet_order] + [s.jet_order for s in series])
    else:
        target_vars = tuple(v for v in f.variables if v not in substitution)
        jet = f.jet_order
    images = []
    for v in f.variables:
        if v in substitution:
            s = substitution[v]
            if not isinstance(s, TruncSeries):
                s = TruncSeries.constant(target_vars, jet, s)
            elif s.variables != target_vars:
                raise ValueError("substituted series must share one variable list")
            if s.constant_term() and v not in safe and f.depends_on(v):
                raise JetReachError(
                    f"substituting a series with constant term {s.constant_term()} for "
                    f"{v!r} needs coefficients beyond jet {f.jet_order}; declare {v!r} "
                    "evaluation-safe only if the series is a polynomial in it")
            images.append(s.truncate(jet))
        else:
            if v not in target_vars:
                if f.depends_on(v):
                    raise ValueError(f"variable {v!r} is neither substituted nor in the target")
                images.append(None)
                continue
            images.append(TruncSeries.variable(target_vars, jet, v))
    result = TruncSeries.zero(target_vars, jet)
    powers: list[dict[int, TruncSeries]] = [{} for _ in images]
    one = TruncSeries.constant(target_vars, jet, 1)

    def power(j: int, k: int) -> TruncSeries:
        cache = powers[j]
        if k == 0:
            return one
        if k not in cache:
            cache[k] = images[j] if k == 1 else power(j, k - 1) * images[j]
        return cache[k]

    for e, c in f.terms.items():
        term = None
        for j, k in enumerate(e):
            if k:
                p = power(j, k)
                term = p if term is None else term * p
                if term.is_zero():
                    break
        term = one if term is None else term
        result = result + term.scale(c)
    return result


def partial_derivative(f: TruncSeries, v: str) -> TruncSeries:
    """Formal derivative in ``v``; the jet order drops by one."""
    j = f.variables.index(v)
    terms = {}
    for e, c in f.terms.items():
        k = e[j]
        if k:
            ne = e[:j] + (k - 1,) + e[j + 1:]
            terms[ne] = c * k
    return TruncSeries._from_clean(f.variables, max(f.jet_order - 1, 0), terms)


def evaluate(f: TruncSeries, point: Sequence) -> object:
    """Evaluate at one point.

    Exact when both the coefficients and the point are exact, otherwise a
    Python ``complex``.
    """
    point = list(point)
    if len(point) != f.nvars:
        raise ValueError(f"point has {len(point)} entries, series has {f.nvars} variables")
    try:
        vals = [as_coefficient(x) for x in point]
    except TypeError:
        vals = [complex(x) for x in point]
    if f.is_exact and all(_is_exact(v) for v in vals):
        total = ZERO
        cache: dict[tuple[int, int], GaussianRational] = {}
        for e, c in f.terms.items():
            term = c
            for j, k in enumerate(e):
                if k:
                    key = (j, k)
                    if key not in cache:
                        cache[key] = vals[j] ** k
                    term = term * cache[key]
            total = total + term
        return total
    return complex(f.evaluate_many(np.array([complex(v) for v in vals]))[0])


def jacobian(m: SeriesMap, point) -> np.ndarray:
    """Complex Jacobian (coarity x arity) at ``point``, floating."""
    pt = np.asarray(point, dtype=complex).reshape(1, -1)
    rows = m.derivative_map()
    jac = np.array([[d.evaluate_many(pt)[0] for d in row] for row in rows], dtype=complex)
    if not np.all(np.isfinite(jac)):
        raise FloatingPointError(f"non-finite Jacobian at {point}")
    return jac


def numerical_rank(matrix: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    """Singular values above ``tol`` times the largest one; 0 for a zero matrix."""
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if not s.size or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def jacobian_rank(m: SeriesMap, point, tol: float = DEFAULT_RANK_TOL) -> int:
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    return numerical_rank(jacobian(m, point), tol)


def exp_series(arg: TruncSeries) -> TruncSeries:
    """exp of a series with zero constant term, truncated at its jet."""
    c0 = arg.constant_term()
    if c0:
        raise JetReachError(
            f"exp of a series with constant term {c0} is not representable over "
            "the Gaussian rationals")
    result = TruncSeries.constant(arg.variables, arg.jet_order, 1)
    term = result
    for k in range(1, arg.jet_order + 1):
        term = (term * arg).scale(Fraction(1, k))
        if term.is_zero():
            break
        result = result + term
    return result
