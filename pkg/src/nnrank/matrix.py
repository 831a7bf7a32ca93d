"""Dense exact matrices over Q or Q(sqrt 2), and nonnegative factorizations.

Rank and minors are computed by fraction-free (Bareiss) elimination with full
pivoting: the pivot is the first nonzero entry of the trailing block in
row-major scan order.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import BadPermutation, DimMismatch
from .scalar import Domain, QuadScalar, coerce, domain_of, join, sign, to_float


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    domain: Domain
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimMismatch(f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], domain: Optional[Domain] = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimMismatch("ragged rows")
        flat = [x for r in rows for x in r]
        if domain is None:
            domain = join(*(domain_of(x) for x in flat)) if flat else Domain.RAT
        return cls(len(rows), ncols, domain, tuple(coerce(x, domain) for x in flat))

    @classmethod
    def zeros(cls, rows: int, cols: int, domain: Domain = Domain.RAT) -> "ExactMatrix":
        z = coerce(0, domain)
        return cls(rows, cols, domain, (z,) * (rows * cols))

    @classmethod
    def identity(cls, n: int, domain: Domain = Domain.RAT) -> "ExactMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], domain)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, self.domain,
                           tuple(x for j in range(self.cols) for x in self.col(j)))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(len(row_idx), len(col_idx), self.domain,
                           tuple(self[i, j] for i in row_idx for j in col_idx))

    def to_domain(self, domain: Domain) -> "ExactMatrix":
        if domain is self.domain:
            return self
        return ExactMatrix(self.rows, self.cols, domain, tuple(coerce(x, domain) for x in self.entries))

    def is_nonnegative(self) -> bool:
        return all(sign(x) >= 0 for x in self.entries)

    def to_float(self) -> np.ndarray:
        return np.array([to_float(x) for x in self.entries], dtype=float).reshape(self.rows, self.cols)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimMismatch("shape mismatch in addition")
        d = join(self.domain, other.domain)
        a, b = self.to_domain(d), other.to_domain(d)
        return ExactMatrix(self.rows, self.cols, d, tuple(x + y for x, y in zip(a.entries, b.entries)))

    def __repr__(self):
        from .scalar import scalar_format
        body = "; ".join(" ".join(scalar_format(x) for x in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix<{self.rows}x{self.cols} {self.domain.value}>[{body}]"


@dataclass(frozen=True)
class RankOneTerm:
    """The rank-one matrix ``u v^T``; u has one entry per row, v one per column."""

    u: tuple
    v: tuple

    def support(self):
        return ([i for i, x in enumerate(self.u) if x != 0],
                [j for j, x in enumerate(self.v) if x != 0])


@dataclass(frozen=True)
class NNFactorization:
    rows: int
    cols: int
    domain: Domain
    terms: tuple = ()

    def __post_init__(self):
        for t in self.terms:
            if len(t.u) != self.rows or len(t.v) != self.cols:
                raise DimMismatch("term dimensions disagree with factorization")

    @classmethod
    def from_pairs(cls, rows: int, cols: int, pairs: Iterable, domain: Optional[Domain] = None):
        pairs = [(list(u), list(v)) for u, v in pairs]
        if domain is None:
            domain = join(*(domain_of(x) for u, v in pairs for x in (*u, *v))) if pairs else Domain.RAT
        terms = tuple(RankOneTerm(tuple(coerce(x, domain) for x in u), tuple(coerce(x, domain) for x in v))
                      for u, v in pairs)
        return cls(rows, cols, domain, terms)

    def __len__(self):
        return len(self.terms)

    def to_domain(self, domain: Domain) -> "NNFactorization":
        if domain is self.domain:
            return self
        return NNFactorization(self.rows, self.cols, domain, tuple(
            RankOneTerm(tuple(coerce(x, domain) for x in t.u), tuple(coerce(x, domain) for x in t.v))
            for t in self.terms))

    def padded(self, rows: int, cols: int) -> "NNFactorization":
        """Append zero rows/columns at the end of every term."""
        z = coerce(0, self.domain)
        return NNFactorization(rows, cols, self.domain, tuple(
            RankOneTerm(t.u + (z,) * (rows - self.rows), t.v + (z,) * (cols - self.cols))
            for t in self.terms))

    def product(self) -> ExactMatrix:
        """Sum of all terms, computed sparsely."""
        z = coerce(0, self.domain)
        acc = [z] * (self.rows * self.cols)
        for t in self.terms:
            ri, ci = t.support()
            for i in ri:
                ui = t.u[i]
                base = i * self.cols
                for j in ci:
                    acc[base + j] = acc[base + j] + ui * t.v[j]
        return ExactMatrix(self.rows, self.cols, self.domain, tuple(acc))


# --- elimination -----------------------------------------------------------

def _integer_rows(m: ExactMatrix) -> tuple[list[list], Fraction]:
    """Scale each row of a rational matrix to integers; return rows and the scale product."""
    out, scale = [], Fraction(1)
    for i in range(m.rows):
        row = m.row(i)
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([x.numerator * (den // x.denominator) for x in row])
        scale *= den
    return out, scale


def _bareiss(a: list[list], exact_div) -> tuple[int, object, int]:
    """Fraction-free elimination in place.

    Returns (rank, last nonzero pivot, permutation parity).  When the matrix is
    square and nonsingular the last pivot is its determinant up to the parity.
    """
    nr = len(a)
    nc = len(a[0]) if nr else 0
    prev = 1
    parity = 1
    rank = 0
    for k in range(min(nr, nc)):
        piv = None
        for i in range(k, nr):
            row = a[i]
            for j in range(k, nc):
                if row[j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        if i != k:
            a[i], a[k] = a[k], a[i]
            parity = -parity
        if j != k:
            for row in a:
                row[j], row[k] = row[k], row[j]
            parity = -parity
        pk = a[k][k]
        for i in range(k + 1, nr):
            ri, rk = a[i], a[k]
            aik = ri[k]
            for j in range(k + 1, nc):
                ri[j] = exact_div(pk * ri[j] - aik * rk[j], prev)
            ri[k] = 0
        prev = pk
        rank += 1
    return rank, prev, parity


def _int_div(x, y):
    q, r = divmod(x, y)
    assert r == 0, "Bareiss division must be exact"
    return q


def _field_div(x, y):
    return x / y


def _prepare(m: ExactMatrix):
    if m.domain is Domain.RAT:
        rows, scale = _integer_rows(m)
        return rows, scale, _int_div
    return m.to_rows(), 1, _field_div


def rank_exact(m: ExactMatrix) -> int:
    """Conventional rank over the fraction field, exactly."""
    if m.rows == 0 or m.cols == 0:
        return 0
    rows, _, div = _prepare(m)
    return _bareiss(rows, div)[0]


def det_exact(m: ExactMatrix):
    if m.rows != m.cols:
        raise DimMismatch("determinant of a non-square matrix")
    if m.rows == 0:
        return coerce(1, m.domain)
    rows, scale, div = _prepare(m)
    rank, last, parity = _bareiss(rows, div)
    if rank < m.rows:
        return coerce(0, m.domain)
    if m.domain is Domain.RAT:
        return Fraction(parity * last) / scale
    return last * parity


def minor_det(m: ExactMatrix, row_idx: Sequence[int], col_idx: Sequence[int]):
    """Determinant of the square submatrix picked out by ``row_idx`` x ``col_idx``."""
    if len(row_idx) != len(col_idx):
        raise DimMismatch(f"{len(row_idx)} rows vs {len(col_idx)} columns in minor")
    if any(not 0 <= i < m.rows for i in row_idx) or any(not 0 <= j < m.cols for j in col_idx):
        raise DimMismatch("minor index out of range")
    return det_exact(m.submatrix(row_idx, col_idx))


# --- permutations ----------------------------------------------------------

def _check_perm(p: Sequence[int], n: int) -> None:
    if sorted(p) != list(range(n)):
        raise BadPermutation(f"{list(p)} is not a permutation of range({n})")


def permute(m: ExactMatrix, row_perm: Sequence[int], col_perm: Sequence[int]) -> ExactMatrix:
    """Entry (i, j) of the result is entry (row_perm[i], col_perm[j]) of ``m``."""
    _check_perm(row_perm, m.rows)
    _check_perm(col_perm, m.cols)
    return m.submatrix(row_perm, col_perm)


def permutation_equivalent(m1: ExactMatrix, m2: ExactMatrix):
    """Find (row_perm, col_perm) with ``permute(m1, row_perm, col_perm) == m2``.

    Rows of ``m2`` are matched one at a time against unused rows of ``m1`` with
    the same entry multiset.  Each column carries the history of values seen in
    the matched rows so far; a partial assignment survives only while the
    multisets of histories agree.  Returns None when no pair exists.
    """
    if (m1.rows, m1.cols) != (m2.rows, m2.cols):
        raise DimMismatch("permutation_equivalent needs equal shapes")
    if m1.domain is not m2.domain:
        d = join(m1.domain, m2.domain)
        m1, m2 = m1.to_domain(d), m2.to_domain(d)
    R, K = m1.rows, m1.cols
    sig1 = [Counter(m1.row(i)) for i in range(R)]
    sig2 = [Counter(m2.row(i)) for i in range(R)]
    if Counter(m1.entries) != Counter(m2.entries):
        return None
    csig1 = Counter(frozenset(Counter(m1.col(j)).items()) for j in range(K))
    csig2 = Counter(frozenset(Counter(m2.col(j)).items()) for j in range(K))
    if csig1 != csig2:
        return None

    used = [False] * R
    assign = [0] * R
    hist1 = [() for _ in range(K)]
    hist2 = [() for _ in range(K)]

    def histories_agree(h1, h2):
        return Counter(h1) == Counter(h2)

    def search(i):
        if i == R:
            return True
        row2 = m2.row(i)
        new2 = [hist2[j] + (row2[j],) for j in range(K)]
        for p in range(R):
            if used[p] or sig1[p] != sig2[i]:
                continue
            row1 = m1.row(p)
            new1 = [hist1[j] + (row1[j],) for j in range(K)]
            if not histories_agree(new1, new2):
                continue
            old1, old2 = hist1[:], hist2[:]
            hist1[:], hist2[:] = new1, new2
            used[p] = True
            assign[i] = p
            if search(i + 1):
                return True
            used[p] = False
            hist1[:], hist2[:] = old1, old2
        return False

    if not search(0):
        return None
    pool: dict = {}
    for j in range(K):
        pool.setdefault(hist1[j], []).append(j)
    col_perm = [pool[hist2[j]].pop(0) for j in range(K)]
    return list(assign), col_perm


# --- validation ------------------------------------------------------------

@dataclass
class ValidationReport:
    passed: bool
    nonnegative: bool
    equal: bool
    term_count: int
    first_negative: Optional[tuple] = None  # (term, "u"|"v", index)
    first_mismatch: Optional[tuple] = None  # (row, col)
    details: list = field(default_factory=list)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{status}: {self.term_count} terms"]
        if not self.nonnegative:
            t, side, idx = self.first_negative
            parts.append(f"negative entry in term {t} {side}[{idx}]")
        if not self.equal and self.first_mismatch is not None:
            parts.append("first mismatch at (%d,%d)" % self.first_mismatch)
        return ", ".join(parts)


def validate_factorization(m: ExactMatrix, f: NNFactorization) -> ValidationReport:
    """Check exact nonnegativity of every factor and that the terms sum to ``m``."""
    if (m.rows, m.cols) != (f.rows, f.cols):
        raise DimMismatch(f"matrix is {m.rows}x{m.cols}, factorization {f.rows}x{f.cols}")
    d = join(m.domain, f.domain)
    m, f = m.to_domain(d), f.to_domain(d)
    first_neg = None
    for t_idx, t in enumerate(f.terms):
        for side, vec in (("u", t.u), ("v", t.v)):
            for k, x in enumerate(vec):
                if sign(x) < 0:
                    first_neg = (t_idx, side, k)
                    break
            if first_neg:
                break
        if first_neg:
            break
    total = f.product()
    first_mis = None
    for idx, (x, y) in enumerate(zip(total.entries, m.entries)):
        if x != y:
            first_mis = divmod(idx, m.cols)
            break
    nonneg = first_neg is None
    equal = first_mis is None
    return ValidationReport(nonneg and equal, nonneg, equal, len(f.terms), first_neg, first_mis)


def row_factorization(m: ExactMatrix) -> NNFactorization:
    """Trivial factorization with one term e_i (x) row_i per nonzero row."""
    pairs = []
    for i in range(m.rows):
        row = m.row(i)
        if any(x != 0 for x in row):
            pairs.append(([1 if k == i else 0 for k in range(m.rows)], list(row)))
    return NNFactorization.from_pairs(m.rows, m.cols, pairs, m.domain)


__all__ = [
    "ExactMatrix", "RankOneTerm", "NNFactorization", "ValidationReport", "QuadScalar",
    "rank_exact", "det_exact", "minor_det", "permute", "permutation_equivalent",
    "validate_factorization", "row_factorization",
]
