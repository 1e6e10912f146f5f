"""Text format for normal-coordinate manifolds and real hypersurfaces.

Manifold files::

    n=1 d=2 jet=8
    Q1 = exp(-i*z1*zeta1)*omega1
    Q2 = exp(-i*(355/113)*z1*zeta1)*omega2

Hypersurface files::

    m=2
    rho = (w1*eta2 - eta1*w2)/(2*i)

Statements are separated by newlines or ``;`` and ``#`` starts a comment.
Expressions use rational literals, ``i``, the declared variables,
``+ - * / ^`` (``**`` is accepted for ``^``), parentheses and ``exp(...)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .algebra import (
    DEFAULT_JET,
    GaussianRational,
    JetReachError,
    SeriesMap,
    TruncSeries,
    as_coefficient,
    compose,
    conjugate,
    exp_series,
)

__all__ = [
    "ParseError",
    "ValidationError",
    "Expr",
    "GenericManifold",
    "Hypersurface",
    "IdentityCheck",
    "ValidationReport",
    "parse_expression",
    "parse_manifold",
    "parse_hypersurface",
    "validate_normal",
    "format_series",
    "format_manifold",
    "format_hypersurface",
    "parse_point",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{message} (line {line}, column {col})" if line else message)


class ValidationError(ValueError):
    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


# ---------------------------------------------------------------------------
# expression trees


class Expr:
    """Node of a parsed expression."""

    def series(self, variables: Sequence[str], jet: int,
               env: Mapping[str, TruncSeries] | None = None) -> TruncSeries:
        raise NotImplementedError

    def numeric(self, env: Mapping[str, np.ndarray]) -> np.ndarray:
        raise NotImplementedError

    def conj(self) -> "Expr":
        raise NotImplementedError

    def names(self) -> set[str]:
        return set().union(*(c.names() for c in self.children()))

    def children(self) -> tuple["Expr", ...]:
        return ()

    def has_exp(self) -> bool:
        return isinstance(self, Exp) or any(c.has_exp() for c in self.children())

    def is_polynomial(self) -> bool:
        if isinstance(self, Exp):
            return False
        if isinstance(self, Div) and self.right.names():
            return False
        return all(c.is_polynomial() for c in self.children())


@dataclass(frozen=True)
class Num(Expr):
    value: GaussianRational

    def series(self, variables, jet, env=None):
        return TruncSeries.constant(variables, jet, self.value)

    def numeric(self, env):
        return complex(self.value)

    def conj(self):
        return Num(self.value.conjugate())

    def names(self):
        return set()

    def __str__(self):
        return _coef_body(self.value, standalone=True)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def series(self, variables, jet, env=None):
        if env and self.name in env:
            return env[self.name]
        return TruncSeries.variable(variables, jet, self.name)

    def numeric(self, env):
        return env[self.name]

    def conj(self):
        return self

    def names(self):
        return {self.name}

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def series(self, variables, jet, env=None):
        return -self.arg.series(variables, jet, env)

    def numeric(self, env):
        return -self.arg.numeric(env)

    def conj(self):
        return Neg(self.arg.conj())

    def __str__(self):
        return f"-({self.arg})"


@dataclass(frozen=True)
class BinOp(Expr):
    left: Expr
    right: Expr
    symbol = "?"

    def children(self):
        return (self.left, self.right)

    def conj(self):
        return type(self)(self.left.conj(), self.right.conj())

    def __str__(self):
        return f"({self.left} {self.symbol} {self.right})"


class Add(BinOp):
    symbol = "+"

    def series(self, variables, jet, env=None):
        return self.left.series(variables, jet, env) + self.right.series(variables, jet, env)

    def numeric(self, env):
        return self.left.numeric(env) + self.right.numeric(env)


class Sub(BinOp):
    symbol = "-"

    def series(self, variables, jet, env=None):
        return self.left.series(variables, jet, env) - self.right.series(variables, jet, env)

    def numeric(self, env):
        return self.left.numeric(env) - self.right.numeric(env)


class Mul(BinOp):
    symbol = "*"

    def series(self, variables, jet, env=None):
        return self.left.series(variables, jet, env) * self.right.series(variables, jet, env)

    def numeric(self, env):
        return self.left.numeric(env) * self.right.numeric(env)


class Div(BinOp):
    symbol = "/"

    def series(self, variables, jet, env=None):
        num = self.left.series(variables, jet, env)
        den = self.right.series(variables, jet, env)
        if len(den.terms) <= 1 and not den.order():
            c = den.constant_term()
            if not c:
                raise ZeroDivisionError("division by zero in expression")
            return num / c
        if not den.constant_term():
            raise JetReachError(f"cannot divide by {self.right}: zero constant term")
        return num * den.inverse()

    def numeric(self, env):
        return self.left.numeric(env) / self.right.numeric(env)


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def children(self):
        return (self.base,)

    def series(self, variables, jet, env=None):
        b = self.base.series(variables, jet, env)
        if self.exponent < 0:
            return b.inverse() ** (-self.exponent)
        return b ** self.exponent

    def numeric(self, env):
        return self.base.numeric(env) ** self.exponent

    def conj(self):
        return Pow(self.base.conj(), self.exponent)

    def __str__(self):
        return f"({self.base})^{self.exponent}"


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def series(self, variables, jet, env=None):
        return exp_series(self.arg.series(variables, jet, env))

    def numeric(self, env):
        x = self.arg.numeric(env)
        return x.exp() if isinstance(x, Dual) else np.exp(x)

    def conj(self):
        return Exp(self.arg.conj())

    def __str__(self):
        return f"exp({self.arg})"


class Dual:
    """Forward-mode holomorphic derivative: value ``(m,)`` and gradient ``(m, P)``."""

    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = val
        self.grad = grad

    @staticmethod
    def _split(other):
        if isinstance(other, Dual):
            return other.val, other.grad
        return other, None

    def __add__(self, other):
        v, g = self._split(other)
        return Dual(self.val + v, self.grad if g is None else self.grad + g)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.val, -self.grad)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        v, g = self._split(other)
        v = np.asarray(v)
        grad = self.grad * v[..., None]
        if g is not None:
            grad = grad + g * self.val[..., None]
        return Dual(self.val * v, grad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v, g = self._split(other)
        v = np.asarray(v)
        if g is None:
            return Dual(self.val / v, self.grad / v[..., None])
        return Dual(self.val / v, (self.grad * v[..., None] - g * self.val[..., None])
                    / (v * v)[..., None])

    def __rtruediv__(self, other):
        return Dual(np.broadcast_to(np.asarray(other, dtype=complex), self.val.shape),
                    np.zeros_like(self.grad)) / self

    def __pow__(self, k: int):
        if k == 0:
            return Dual(np.ones_like(self.val), np.zeros_like(self.grad))
        if k < 0:
            return 1 / (self ** (-k))
        return Dual(self.val ** k, k * (self.val ** (k - 1))[..., None] * self.grad)

    def exp(self):
        e = np.exp(self.val)
        return Dual(e, e[..., None] * self.grad)


# ---------------------------------------------------------------------------
# tokenizer and recursive-descent parser

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d*)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()=;,])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            tokens.append(Token("sep", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind == "op" and m.group() == ";":
            tokens.append(Token("sep", ";", line, col))
        elif kind not in ("ws", "comment"):
            text_ = "^" if m.group() == "**" else m.group()
            tokens.append(Token(kind, text_, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], allowed: set[str] | None):
        self.tokens = tokens
        self.pos = 0
        self.allowed = allowed

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.advance()

    def error(self, message: str):
        raise ParseError(message, self.tok.line, self.tok.col)

    def expression(self) -> Expr:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance().text
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Expr:
        if self.tok.text == "-":
            self.advance()
            inner = self.unary()
            if isinstance(inner, Num):
                return Num(-inner.value)
            return Neg(inner)
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.text == "^":
            t = self.advance()
            exponent = self.unary()
            value = _constant_value(exponent)
            if value is None or value.im or value.re.denominator != 1:
                raise ParseError("exponents must be integer constants", t.line, t.col)
            k = int(value.re)
            if isinstance(base, Num):
                return Num(base.value ** k)
            return Pow(base, k)
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(GaussianRational(Fraction(t.text)))
        if t.kind == "ident":
            self.advance()
            if t.text == "i":
                return Num(GaussianRational(0, 1))
            if t.text == "exp":
                self.expect("(")
                arg = self.expression()
                self.expect(")")
                return Exp(arg)
            if self.tok.text == "(":
                raise ParseError(f"unknown function {t.text!r}", t.line, t.col)
            if self.allowed is not None and t.text not in self.allowed:
                raise ParseError(f"unknown variable {t.text!r}", t.line, t.col)
            return Var(t.text)
        if t.text == "(":
            self.advance()
            node = self.expression()
            self.expect(")")
            return node
        self.error(f"unexpected {t.text or 'end of input'!r}")


def _constant_value(e: Expr) -> GaussianRational | None:
    if e.names():
        return None
    try:
        s = e.series((), 0)
    except (ZeroDivisionError, JetReachError):
        return None
    return s.constant_term()


def parse_expression(text: str, variables: Sequence[str] | None = None) -> Expr:
    """Parse a single expression; ``variables`` restricts the allowed names."""
    tokens = [t for t in tokenize(text) if t.kind != "sep" or t.text == ";"]
    p = _Parser(tokens, set(variables) if variables is not None else None)
    node = p.expression()
    if p.tok.kind != "eof":
        p.error(f"trailing input {p.tok.text!r}")
    return node


def parse_series(text: str, variables: Sequence[str], jet: int = DEFAULT_JET) -> TruncSeries:
    return parse_expression(text, variables).series(variables, jet)


def _statements(tokens: list[Token]) -> list[list[Token]]:
    out, cur = [], []
    for t in tokens:
        if t.kind in ("sep", "eof"):
            if cur:
                out.append(cur + [Token("eof", "", t.line, t.col)])
            cur = []
        else:
            cur.append(t)
    return out


_HEADER_KEYS = {"n", "d", "jet", "m"}


def _parse_document(text: str, header_keys: set[str], allowed: set[str] | None):
    header: dict[str, int] = {}
    equations: list[tuple[Token, Expr]] = []
    for stmt in _statements(tokenize(text)):
        first = stmt[0]
        if first.kind == "ident" and first.text in _HEADER_KEYS:
            i = 0
            while stmt[i].kind != "eof":
                key, eq, val = stmt[i], stmt[i + 1], stmt[i + 2]
                if key.text not in header_keys:
                    raise ParseError(f"unexpected header field {key.text!r}", key.line, key.col)
                if eq.text != "=" or val.kind != "num" or not val.text.isdigit():
                    raise ParseError(f"header field {key.text!r} needs an integer",
                                     key.line, key.col)
                if key.text in header:
                    raise ParseError(f"duplicate header field {key.text!r}", key.line, key.col)
                header[key.text] = int(val.text)
                i += 3
            continue
        if first.kind != "ident" or stmt[1].text != "=":
            raise ParseError("expected '<name> = <expression>'", first.line, first.col)
        p = _Parser(stmt[2:], allowed)
        node = p.expression()
        if p.tok.kind != "eof":
            p.error(f"trailing input {p.tok.text!r}")
        equations.append((first, node))
    return header, equations


# ---------------------------------------------------------------------------
# formatting


def _frac(x: Fraction) -> str:
    return str(x)


def _coef_body(c, standalone: bool = False) -> str:
    """String for a coefficient; parenthesised when it has two parts."""
    if isinstance(c, GaussianRational):
        re_, im = c.re, c.im
        if not im:
            s = _frac(re_)
            return f"({s})" if (standalone and re_ < 0) else s
        ims = "i" if im == 1 else ("-i" if im == -1 else f"{_frac(im)}*i")
        if not re_:
            return f"({ims})" if (standalone and im < 0) else ims
        sign = "+" if im > 0 else "-"
        ima = "i" if abs(im) == 1 else f"{_frac(abs(im))}*i"
        return f"({_frac(re_)} {sign} {ima})"
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    return f"({c.real!r} + {c.imag!r}*i)"


def format_series(s: TruncSeries) -> str:
    """Render a series in the input grammar (round-trips exactly)."""
    if s.is_zero():
        return "0"
    parts = []
    for e, c in s.sorted_terms():
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(s.variables, e) if k)
        negative = False
        if isinstance(c, GaussianRational):
            if not c.im and c.re < 0:
                negative, c = True, -c
            elif not c.re and c.im < 0:
                negative, c = True, -c
        elif complex(c).imag == 0 and complex(c).real < 0:
            negative, c = True, -complex(c)
        body = _coef_body(c)
        if mono:
            text = mono if body == "1" else f"{body}*{mono}"
        else:
            text = body
        parts.append(("-" if negative else "+", text))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def parse_point(text: str) -> list[GaussianRational]:
    """Parse ``a+bi`` entries separated by commas into exact numbers."""
    out = []
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    for raw in text.split(","):
        item = raw.strip().replace(" ", "")
        if not item:
            raise ParseError(f"empty coordinate in point {text!r}")
        m = re.fullmatch(
            r"([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?)?"
            r"(?:([+-])((?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?)?\*?i)?", item)
        m_im = re.fullmatch(r"([+-]?)((?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?)?\*?i", item)
        if m_im:
            mag = Fraction(m_im.group(2)) if m_im.group(2) else Fraction(1)
            out.append(GaussianRational(0, -mag if m_im.group(1) == "-" else mag))
            continue
        if not m or not m.group(1):
            raise ParseError(f"bad complex literal {item!r}")
        re_ = Fraction(m.group(1))
        im = Fraction(0)
        if m.group(2):
            mag = Fraction(m.group(3)) if m.group(3) else Fraction(1)
            im = -mag if m.group(2) == "-" else mag
        out.append(GaussianRational(re_, im))
    return out


# ---------------------------------------------------------------------------
# manifolds


def manifold_variables(n: int, d: int) -> tuple[str, ...]:
    return (tuple(f"z{j}" for j in range(1, n + 1))
            + tuple(f"zeta{j}" for j in range(1, n + 1))
            + tuple(f"omega{j}" for j in range(1, d + 1)))


@dataclass(frozen=True, eq=False)
class GenericManifold:
    """Generic submanifold ``w = Q(z, conj z, conj w)`` in normal coordinates."""

    n: int
    d: int
    jet_order: int
    exprs: tuple[Expr, ...]
    source_text: str = ""
    _series_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def N(self) -> int:
        return self.n + self.d

    @property
    def variables(self) -> tuple[str, ...]:
        return manifold_variables(self.n, self.d)

    @property
    def z_vars(self):
        return self.variables[:self.n]

    @property
    def zeta_vars(self):
        return self.variables[self.n:2 * self.n]

    @property
    def omega_vars(self):
        return self.variables[2 * self.n:]

    @property
    def Q(self) -> SeriesMap:
        return self.q_series(self.jet_order)

    @property
    def is_algebraic(self) -> bool:
        return all(e.is_polynomial() for e in self.exprs)

    def q_series(self, jet: int) -> SeriesMap:
        """Q expanded at an arbitrary jet (re-expanded from the expressions)."""
        if jet not in self._series_cache:
            self._series_cache[jet] = SeriesMap(e.series(self.variables, jet) for e in self.exprs)
        return self._series_cache[jet]

    @cached_property
    def conj_exprs(self) -> tuple[Expr, ...]:
        return tuple(e.conj() for e in self.exprs)

    def _env(self, z, zeta, omega) -> dict:
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        zeta = np.atleast_2d(np.asarray(zeta, dtype=complex))
        omega = np.atleast_2d(np.asarray(omega, dtype=complex))
        env = {}
        for j, v in enumerate(self.z_vars):
            env[v] = z[:, j]
        for j, v in enumerate(self.zeta_vars):
            env[v] = zeta[:, j]
        for j, v in enumerate(self.omega_vars):
            env[v] = omega[:, j]
        return env

    def q_numeric(self, z, zeta, omega) -> np.ndarray:
        """Untruncated Q (exp evaluated exactly) at rows of the inputs."""
        env = self._env(z, zeta, omega)
        m = next(iter(env.values())).shape[0]
        return np.stack([np.broadcast_to(e.numeric(env), (m,)) for e in self.exprs], axis=-1)

    def qbar_numeric(self, z, zeta, omega) -> np.ndarray:
        env = self._env(z, zeta, omega)
        m = next(iter(env.values())).shape[0]
        return np.stack([np.broadcast_to(e.numeric(env), (m,)) for e in self.conj_exprs], axis=-1)

    def q_dual(self, z: list, zeta: list, omega: list, conjugate: bool = False) -> list:
        """Q (or conj-Q) on per-variable :class:`Dual` or array arguments."""
        env = dict(zip(self.z_vars, z))
        env.update(zip(self.zeta_vars, zeta))
        env.update(zip(self.omega_vars, omega))
        return [e.numeric(env) for e in (self.conj_exprs if conjugate else self.exprs)]

    def membership_residual(self, points) -> np.ndarray:
        """``|w - Q(z, conj z, conj w)|`` (max over components) per point."""
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        z, w = pts[:, :self.n], pts[:, self.n:]
        q = self.q_numeric(z, np.conj(z), np.conj(w))
        return np.max(np.abs(w - q), axis=1)

    def text(self) -> str:
        return format_manifold(self)


def format_manifold(M: GenericManifold) -> str:
    lines = [f"n={M.n} d={M.d} jet={M.jet_order}"]
    for j, s in enumerate(M.Q, start=1):
        lines.append(f"Q{j} = {format_series(s)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    variables: tuple[str, ...]
    component: int | None = None
    first_bad_exponent: tuple[int, ...] | None = None
    first_bad_coefficient: GaussianRational | None = None
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "identity": self.name,
            "passed": self.passed,
            "component": self.component,
            "variables": list(self.variables),
            "first_bad_exponent": list(self.first_bad_exponent) if self.first_bad_exponent else None,
            "first_bad_coefficient": (str(self.first_bad_coefficient)
                                      if self.first_bad_coefficient is not None else None),
            "message": self.message,
        }


@dataclass(frozen=True)
class ValidationReport:
    jet_order: int
    checks: tuple[IdentityCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"jet_order": self.jet_order, "ok": self.ok,
                "checks": [c.to_dict() for c in self.checks]}


def _first_bad(diffs: list[TruncSeries]):
    for j, diff in enumerate(diffs, start=1):
        if not diff.is_zero():
            e, c = diff.sorted_terms()[0]
            return j, e, c
    return None


def validate_normal(M: GenericManifold) -> ValidationReport:
    """Check Q(0,ζ,ω) = ω, Q(z,0,ω) = ω and the reality identity exactly."""
    V, jet = M.variables, M.jet_order
    Q = M.Q
    zero = TruncSeries.zero(V, jet)
    omegas = [TruncSeries.variable(V, jet, v) for v in M.omega_vars]
    checks = []
    for name, block in (("Q(0,zeta,omega) = omega", M.z_vars),
                        ("Q(z,0,omega) = omega", M.zeta_vars)):
        diffs = [compose(q, {v: zero for v in block}) - om for q, om in zip(Q, omegas)]
        bad = _first_bad(diffs)
        checks.append(IdentityCheck(name, bad is None, V, *(bad or (None, None, None))))
    swap = {}
    for a, b in zip(M.z_vars, M.zeta_vars):
        swap[a], swap[b] = b, a
    # conj-Q with z and zeta exchanged: Qbar(zeta, z, omega)
    qbar_swapped = {v: conjugate(q, swap) for v, q in zip(M.omega_vars, Q)}
    name = "Q(z,zeta,conjQ(zeta,z,w)) = w"
    try:
        diffs = [compose(q, qbar_swapped) - om for q, om in zip(Q, omegas)]
        bad = _first_bad(diffs)
        checks.append(IdentityCheck(name, bad is None, V, *(bad or (None, None, None))))
    except JetReachError as exc:
        checks.append(IdentityCheck(name, False, V, message=str(exc)))
    return ValidationReport(jet, tuple(checks))


def parse_manifold(text: str, validate: bool = True, jet: int | None = None) -> GenericManifold:
    """Parse a manifold file; raises ParseError or ValidationError."""
    header, equations = _parse_document(text, {"n", "d", "jet"}, None)
    for key in ("n", "d"):
        if key not in header:
            raise ParseError(f"missing header field {key!r}", 1, 1)
    n, d = header["n"], header["d"]
    jet_order = jet if jet is not None else header.get("jet", DEFAULT_JET)
    if n < 1 or d < 1:
        raise ParseError("n and d must be positive", 1, 1)
    if jet_order < 2:
        raise ParseError(f"jet order must be at least 2, got {jet_order}", 1, 1)
    allowed = set(manifold_variables(n, d))
    exprs: dict[int, Expr] = {}
    for tok, node in equations:
        m = re.fullmatch(r"Q(\d+)", tok.text)
        if not m or not 1 <= int(m.group(1)) <= d:
            raise ParseError(f"expected Q1..Q{d}, found {tok.text!r}", tok.line, tok.col)
        j = int(m.group(1))
        if j in exprs:
            raise ParseError(f"duplicate equation {tok.text}", tok.line, tok.col)
        unknown = node.names() - allowed
        if unknown:
            raise ParseError(f"unknown variable {sorted(unknown)[0]!r} in {tok.text}",
                             tok.line, tok.col)
        exprs[j] = node
    missing = [j for j in range(1, d + 1) if j not in exprs]
    if missing:
        raise ParseError(f"missing equation Q{missing[0]}", 1, 1)
    M = GenericManifold(n, d, jet_order, tuple(exprs[j] for j in range(1, d + 1)), text)
    try:
        M.Q
    except JetReachError as exc:
        raise ParseError(str(exc)) from exc
    if validate:
        report = validate_normal(M)
        if not report.ok:
            bad = next(c for c in report.checks if not c.passed)
            raise ValidationError(
                f"not in normal coordinates: {bad.name} fails"
                + (f" at exponent {bad.first_bad_exponent} (component {bad.component}, "
                   f"coefficient {bad.first_bad_coefficient})" if bad.first_bad_exponent else
                   f": {bad.message}"),
                report)
    return M


# ---------------------------------------------------------------------------
# hypersurfaces


def hypersurface_variables(m: int) -> tuple[str, ...]:
    return tuple(f"w{j}" for j in range(1, m + 1)) + tuple(f"eta{j}" for j in range(1, m + 1))


def reality_swap(m: int) -> dict[str, str]:
    swap = {}
    for j in range(1, m + 1):
        swap[f"w{j}"], swap[f"eta{j}"] = f"eta{j}", f"w{j}"
    return swap


@dataclass(frozen=True, eq=False)
class Hypersurface:
    """Real hypersurface ``rho(w, conj w) = 0`` with complexified ``rho``."""

    m: int
    rho: TruncSeries
    source_text: str = ""

    def __post_init__(self):
        if self.rho.variables != hypersurface_variables(self.m):
            raise ValueError("rho must be a series in w1..wm, eta1..etam")
        bad = reality_defect(self.rho, self.m)
        if bad is not None:
            e, c = bad
            raise ValidationError(
                f"rho is not real: conjugation changes the coefficient at exponent {e} by {c}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.rho.variables

    @property
    def through_origin(self) -> bool:
        return not self.rho.constant_term()

    @property
    def jet_order(self) -> int:
        return self.rho.jet_order

    def value(self, w) -> np.ndarray:
        """Real value of rho at rows of ``w`` (imaginary round-off dropped)."""
        w = np.atleast_2d(np.asarray(w, dtype=complex))
        return self.rho.evaluate_many(np.hstack([w, np.conj(w)])).real

    def text(self) -> str:
        return format_hypersurface(self)


def reality_defect(rho: TruncSeries, m: int):
    diff = conjugate(rho, reality_swap(m)) - rho
    if diff.is_zero():
        return None
    return diff.sorted_terms()[0]


def format_hypersurface(H: Hypersurface) -> str:
    return f"m={H.m} jet={H.jet_order}\nrho = {format_series(H.rho)}\n"


def parse_hypersurface(text: str, jet: int | None = None) -> Hypersurface:
    header, equations = _parse_document(text, {"m", "jet"}, None)
    rho_eqs = [(t, e) for t, e in equations if t.text == "rho"]
    for t, _ in equations:
        if t.text != "rho":
            raise ParseError(f"expected 'rho = ...', found {t.text!r}", t.line, t.col)
    if len(rho_eqs) != 1:
        raise ParseError("exactly one 'rho = ...' equation is required", 1, 1)
    tok, node = rho_eqs[0]
    names = node.names()
    if "m" in header:
        m = header["m"]
    else:
        idx = [int(x[1:]) for x in names if re.fullmatch(r"w\d+", x)]
        idx += [int(x[3:]) for x in names if re.fullmatch(r"eta\d+", x)]
        m = max(idx, default=1)
    if m < 1:
        raise ParseError("m must be positive", 1, 1)
    V = hypersurface_variables(m)
    unknown = names - set(V)
    if unknown:
        raise ParseError(f"unknown variable {sorted(unknown)[0]!r}", tok.line, tok.col)
    jet_order = jet if jet is not None else header.get("jet", DEFAULT_JET)
    rho = node.series(V, jet_order)
    return Hypersurface(m, rho, text)


def hypersurface_from_series(rho: TruncSeries) -> Hypersurface:
    m = len(rho.variables) // 2
    return Hypersurface(m, rho)


def as_exact(x) -> GaussianRational:
    c = as_coefficient(x)
    if isinstance(c, GaussianRational):
        return c
    return GaussianRational(Fraction(c.real), Fraction(c.imag))
