"""Exact scalars: the rationals (``fractions.Fraction``) and Q(sqrt 2).

Rationals are plain :class:`~fractions.Fraction` values, already canonical.
Elements of Q(sqrt 2) are :class:`QuadScalar` ``p + q*sqrt(2)``.  No floating
point is used anywhere here except in :func:`to_float`.
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import MalformedScalar, WrongDomain


class Domain(enum.Enum):
    RAT = "rat"
    QUAD = "quad"

    @classmethod
    def parse(cls, tag: str) -> "Domain":
        try:
            return cls(tag)
        except ValueError:
            raise MalformedScalar(f"unknown domain tag {tag!r}") from None


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class QuadScalar:
    """Immutable element ``p + q*sqrt(2)`` of Q(sqrt 2) with rational p, q."""

    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        object.__setattr__(self, "p", _frac(p))
        object.__setattr__(self, "q", _frac(q))

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    def __reduce__(self):
        return (QuadScalar, (self.p, self.q))

    @staticmethod
    def _coerce(other):
        if isinstance(other, QuadScalar):
            return other
        if isinstance(other, (int, Fraction, _RationalABC)):
            return QuadScalar(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.p * o.p + 2 * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        norm = self.p * self.p - 2 * self.q * self.q
        if norm == 0:
            # p^2 = 2 q^2 has only the trivial rational solution
            raise ZeroDivisionError("inverse of zero in Q(sqrt 2)")
        return QuadScalar(self.p / norm, -self.q / norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QuadScalar(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self):
        return QuadScalar(-self.p, -self.q)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if quad_sign(self) < 0 else self

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q))

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return quad_sign(self - o)

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __float__(self):
        return to_float(self)

    def __repr__(self):
        return f"QuadScalar({self.p}, {self.q})"

    def __str__(self):
        return scalar_format(self)


SQRT2 = QuadScalar(0, 1)


def _sgn(n) -> int:
    return (n > 0) - (n < 0)


def quad_sign(x: QuadScalar) -> int:
    """Exact sign of ``p + q*sqrt(2)``, using integer comparisons only."""
    sp, sq = _sgn(x.p.numerator), _sgn(x.q.numerator)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with 2 q^2, i.e. n1^2 d2^2 vs 2 n2^2 d1^2
    lhs = x.p.numerator ** 2 * x.q.denominator ** 2
    rhs = 2 * x.q.numerator ** 2 * x.p.denominator ** 2
    return sp * _sgn(lhs - rhs)


def sign(x) -> int:
    """Exact sign of any supported scalar."""
    if isinstance(x, QuadScalar):
        return quad_sign(x)
    return _sgn(x)


def domain_of(x) -> Domain:
    if isinstance(x, QuadScalar):
        return Domain.QUAD if x.q != 0 else Domain.RAT
    return Domain.RAT


def coerce(x, domain: Domain):
    """Convert ``x`` into the canonical representative type of ``domain``.

    Rational to Q(sqrt 2) is the lossless embedding; the reverse direction only
    succeeds when the sqrt(2) part is zero.
    """
    if domain is Domain.QUAD:
        if isinstance(x, QuadScalar):
            return x
        return QuadScalar(_frac(x), 0)
    if isinstance(x, QuadScalar):
        if x.q != 0:
            raise WrongDomain(f"{scalar_format(x)} is not rational")
        return x.p
    return _frac(x)


def join(*domains: Domain) -> Domain:
    return Domain.QUAD if Domain.QUAD in domains else Domain.RAT


_RAT = r"-?\d+(?:/[1-9]\d*)?"
_RAT_RE = re.compile(rf"^({_RAT})$")
_QUAD_RE = re.compile(rf"^({_RAT})([+-])(\d+(?:/[1-9]\d*)?)r2$")


def _parse_rat(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def scalar_parse(text: str, domain: Domain):
    """Parse a scalar token such as ``3/4``, ``-2`` or ``1+1/2r2``."""
    m = _RAT_RE.match(text)
    if m:
        return coerce(_parse_rat(text), domain)
    m = _QUAD_RE.match(text)
    if not m:
        raise MalformedScalar(f"bad scalar token {text!r}")
    if domain is not Domain.QUAD:
        raise WrongDomain(f"sqrt(2) component in {text!r} under rat domain")
    q = _parse_rat(m.group(3))
    if m.group(2) == "-":
        q = -q
    return QuadScalar(_parse_rat(m.group(1)), q)


def _format_rat(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def scalar_format(x) -> str:
    if isinstance(x, QuadScalar):
        if x.q == 0:
            return _format_rat(x.p)
        op = "-" if x.q < 0 else "+"
        return f"{_format_rat(x.p)}{op}{_format_rat(abs(x.q))}r2"
    return _format_rat(_frac(x))


_SQRT2_DOUBLE = Fraction(math.sqrt(2))


def to_float(x) -> float:
    """Round ``x`` to a double; sqrt(2) is taken at its nearest double first."""
    if isinstance(x, QuadScalar):
        return float(x.p + x.q * _SQRT2_DOUBLE)
    return float(x)
