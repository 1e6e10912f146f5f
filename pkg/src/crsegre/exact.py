"""Fraction-free elimination over the Gaussian integers.

Rows of Gaussian rationals are scaled to Gaussian integers, reduced with
Bareiss' one-step fraction-free scheme, and only the final back
substitution touches rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .algebra import GaussianRational, as_coefficient

__all__ = ["echelon", "exact_rank", "nullspace"]

GInt = tuple  # (re, im) pair of Python ints


def _mul(a: GInt, b: GInt) -> GInt:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _sub(a: GInt, b: GInt) -> GInt:
    return (a[0] - b[0], a[1] - b[1])


def _divexact(a: GInt, b: GInt) -> GInt:
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    q_re, r_re = divmod(re, n)
    q_im, r_im = divmod(im, n)
    if r_re or r_im:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return (q_re, q_im)


def _integer_rows(rows: Sequence[Sequence]) -> list[list[GInt]]:
    out = []
    for row in rows:
        vals = [as_coefficient(x) for x in row]
        if any(not isinstance(v, GaussianRational) for v in vals):
            raise TypeError("exact elimination needs Gaussian rational entries")
        den = 1
        for v in vals:
            den = lcm(den, v.re.denominator, v.im.denominator)
        out.append([(int(v.re * den), int(v.im * den)) for v in vals])
    return out


def echelon(rows: Sequence[Sequence]) -> tuple[list[list[GInt]], list[int]]:
    """Fraction-free row echelon form and the pivot columns."""
    m = _integer_rows(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    prev: GInt = (1, 0)
    r = 0
    pivots = []
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != (0, 0)), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, len(m)):
            lead = m[i][c]
            row = m[i]
            for j in range(c + 1, ncols):
                row[j] = _divexact(_sub(_mul(piv, row[j]), _mul(lead, m[r][j])), prev)
            row[c] = (0, 0)
        prev = piv
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def exact_rank(rows: Sequence[Sequence]) -> int:
    return len(echelon(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[GaussianRational]]:
    """Basis of the right nullspace, one vector per free column.

    Each basis vector has a 1 in its free column and 0 in the other free
    columns (reduced echelon normalisation).
    """
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[GaussianRational(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, pivots = echelon(rows)
    ncols = len(m[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [GaussianRational(0)] * ncols
        x[f] = GaussianRational(1)
        for r in reversed(range(len(pivots))):
            c = pivots[r]
            acc = GaussianRational(0)
            for j in range(c + 1, ncols):
                a = m[r][j]
                if a != (0, 0) and x[j]:
                    acc = acc + GaussianRational(a[0], a[1]) * x[j]
            piv = m[r][c]
            x[c] = -acc / GaussianRational(Fraction(piv[0]), Fraction(piv[1]))
        basis.append(x)
    return basis
