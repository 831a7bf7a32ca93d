"""Sparse polynomials over Q in the four variables a, b, c, d."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Mapping, Sequence

from .scalar import Domain, coerce, join, domain_of, scalar_format
from .errors import WrongDomain

VARS = ("a", "b", "c", "d")
Exponent = tuple  # (deg_a, deg_b, deg_c, deg_d)


class MultiPoly:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponent, object] | None = None):
        clean = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != 4 or min(exp) < 0:
                raise ValueError(f"bad exponent {exp}")
            coef = Fraction(coef)
            if coef:
                clean[exp] = clean.get(exp, 0) + coef
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean

    @classmethod
    def const(cls, c) -> "MultiPoly":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        exp = [0, 0, 0, 0]
        exp[VARS.index(name)] = 1
        return cls({tuple(exp): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    @staticmethod
    def _lift(x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        return MultiPoly.const(x)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return reduce(lambda x, y: x * y, [self] * n, MultiPoly.const(1))

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp in sorted(self._terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            coef = self._terms[exp]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(VARS, exp) if k)
            if not mono:
                body = scalar_format(abs(coef))
            elif abs(coef) == 1:
                body = mono
            else:
                body = f"{scalar_format(abs(coef))}*{mono}"
            parts.append(("- " if coef < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_json(self) -> list:
        return [[scalar_format(c), list(e)] for e, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Sequence) -> "MultiPoly":
        from .scalar import scalar_parse
        return cls({tuple(e): scalar_parse(c, Domain.RAT) for c, e in data})


A, B, C, D = (MultiPoly.var(v) for v in VARS)


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_eval(p: MultiPoly, point: Sequence, domain: Domain = None):
    """Evaluate ``p`` exactly at ``point = (a, b, c, d)``."""
    if len(point) != 4:
        raise ValueError("point must have four coordinates")
    needed = join(*(domain_of(x) for x in point))
    if domain is None:
        domain = needed
    elif needed is Domain.QUAD and domain is Domain.RAT:
        raise WrongDomain("irrational evaluation point under rat domain")
    xs = [coerce(x, domain) for x in point]
    total = coerce(0, domain)
    powers = [{0: coerce(1, domain)} for _ in range(4)]

    def pw(k, n):
        cache = powers[k]
        if n not in cache:
            cache[n] = pw(k, n - 1) * xs[k]
        return cache[n]

    for exp, coef in p._terms.items():
        term = coerce(coef, domain)
        for k, n in enumerate(exp):
            if n:
                term = term * pw(k, n)
        total = total + term
    return total


def det_symbolic(grid: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by Laplace expansion along the first row, memoized on column sets."""
    n = len(grid)
    if any(len(r) != n for r in grid):
        raise ValueError("det_symbolic needs a square grid")
    grid = [[MultiPoly._lift(x) for x in r] for r in grid]
    memo: dict = {}

    def det(row: int, cols: tuple) -> MultiPoly:
        if row == n:
            return MultiPoly.const(1)
        if cols in memo:
            return memo[cols]
        total = MultiPoly()
        for k, j in enumerate(cols):
            entry = grid[row][j]
            if entry.is_zero():
                continue
            rest = det(row + 1, cols[:k] + cols[k + 1:])
            term = entry * rest
            total = total - term if k % 2 else total + term
        memo[cols] = total
        return total

    return det(0, tuple(range(n)))
