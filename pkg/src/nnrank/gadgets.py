"""The B0 / B(alpha) gadgets and variable elimination on partial matrices.

A variable ``x`` whose occurrences all lie in one row ("pivot row") with
interval ``[s-1, s]`` is eliminated by appending four rows and four columns:

    pivot row:   ... s at the x positions ...   1 1 1 1
    new row 1:   1 at the x positions           1 1 0 0
    new rows 2-4:                               rows 2-4 of B0

The old pivot row and x columns keep their positions, so repeated
elimination builds the gadget blocks along the diagonal in order.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

from .errors import (
    AlphaOutOfRange, DimMismatch, NegativeInput, PreconditionNotCertified,
    ReconstructionMismatch, UnknownVar, UnresolvedVariables, ValidationFailure,
    VarSpansMultipleRows, XiOutOfRange,
)
from .matrix import ExactMatrix, NNFactorization, RankOneTerm, rank_exact, validate_factorization
from .scalar import Domain, coerce, domain_of, join, scalar_format, sign

B0_ROWS = ((1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1))


def build_b0() -> ExactMatrix:
    return ExactMatrix.from_rows(B0_ROWS, Domain.RAT)


def build_b(alphas: Sequence) -> ExactMatrix:
    """The 5 x (n+4) matrix B(alpha_1, ..., alpha_n)."""
    if any(sign(a) < 0 for a in alphas):
        raise NegativeInput("alphas must be nonnegative")
    n = len(alphas)
    rows = [list(alphas) + [1, 1, 1, 1], [1] * n + list(B0_ROWS[0])]
    rows += [[0] * n + list(r) for r in B0_ROWS[1:]]
    return ExactMatrix.from_rows(rows, join(*(domain_of(a) for a in alphas)))


def factor_b_equal(alpha, n: int) -> NNFactorization:
    """Four-term factorization of B(alpha, ..., alpha) for alpha in [0, 1].

    Row 1 of B is alpha*(row2 + row4) + (1 - alpha)*(row3 + row5).
    """
    if sign(alpha) < 0 or sign(1 - alpha) < 0:
        raise AlphaOutOfRange(f"alpha = {scalar_format(alpha)} is outside [0, 1]")
    b = build_b([alpha] * n)
    one_minus = 1 - alpha
    pairs = []
    for k, weight in enumerate((alpha, one_minus, alpha, one_minus)):
        u = [weight, 0, 0, 0, 0]
        u[k + 1] = 1
        pairs.append((u, b.row(k + 1)))
    return NNFactorization.from_pairs(5, n + 4, pairs, b.domain)


def _require_nonnegative(*mats: ExactMatrix) -> None:
    for m in mats:
        if not m.is_nonnegative():
            raise NegativeInput("input matrices must be nonnegative")


def wrap_gadget(A: ExactMatrix, B: ExactMatrix, c: ExactMatrix, s, r: Optional[int] = None) -> ExactMatrix:
    """Build the (m+5) x (n+k+4) wrapper around the completion instance (A | B ; c | x...x).

    For k > 1 the lower bound rank_+(A) >= r is certified through the
    conventional rank of A.
    """
    m, n, k = A.rows, A.cols, B.cols
    if B.rows != m or c.rows != 1 or c.cols != n:
        raise DimMismatch(f"A is {m}x{n}, B is {B.rows}x{k}, c is {c.rows}x{c.cols}")
    if k < 1:
        raise DimMismatch("B needs at least one column")
    _require_nonnegative(A, B, c)
    if sign(s - 1) < 0:
        raise NegativeInput("s must be at least 1")
    if k > 1 and (r is None or rank_exact(A) < r):
        raise PreconditionNotCertified(f"rank(A) = {rank_exact(A)} does not certify r = {r}")
    d = join(A.domain, B.domain, c.domain, domain_of(s))
    rows = [list(A.row(i)) + list(B.row(i)) + [0] * 4 for i in range(m)]
    rows.append(list(c.row(0)) + [s] * k + [1, 1, 1, 1])
    rows.append([0] * n + [1] * k + list(B0_ROWS[0]))
    rows += [[0] * (n + k) + list(b) for b in B0_ROWS[1:]]
    return ExactMatrix.from_rows(rows, d)


# --- partial matrices ------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return "?" + self.name


@dataclass(frozen=True)
class PartialMatrix:
    """Matrix whose entries are exact constants or :class:`Var` placeholders.

    ``intervals`` maps each variable name to ``s``; the variable ranges over [s-1, s].
    """

    rows: int
    cols: int
    domain: Domain
    entries: tuple
    intervals: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimMismatch("entry count does not match shape")
        for x in self.entries:
            if isinstance(x, Var):
                if x.name not in self.intervals:
                    raise UnknownVar(f"no interval for variable {x.name}")
            elif sign(x) < 0:
                raise NegativeInput("constant entries must be nonnegative")

    @classmethod
    def from_rows(cls, rows, intervals: Mapping = None, domain: Domain = None) -> "PartialMatrix":
        intervals = dict(intervals or {})
        flat = [x for r in rows for x in r]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimMismatch("ragged rows")
        if domain is None:
            domain = join(*(domain_of(x) for x in flat if not isinstance(x, Var)),
                          *(domain_of(s) for s in intervals.values()))
        entries = tuple(x if isinstance(x, Var) else coerce(x, domain) for x in flat)
        intervals = {k: coerce(v, domain) for k, v in intervals.items()}
        return cls(len(rows), ncols, domain, entries, intervals)

    @classmethod
    def from_matrix(cls, m: ExactMatrix, variables: Mapping = None, intervals: Mapping = None) -> "PartialMatrix":
        """Replace the listed positions of ``m`` by variables.

        ``variables`` maps a name to a list of (row, col) positions.
        """
        rows = m.to_rows()
        for name, positions in (variables or {}).items():
            for i, j in positions:
                rows[i][j] = Var(name)
        return cls.from_rows(rows, intervals or {}, join(m.domain, *(domain_of(s) for s in (intervals or {}).values())))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def variables(self) -> list:
        return sorted({x.name for x in self.entries if isinstance(x, Var)})

    def var_positions(self, name: str) -> list:
        return [divmod(idx, self.cols) for idx, x in enumerate(self.entries)
                if isinstance(x, Var) and x.name == name]

    def is_constant(self) -> bool:
        return not any(isinstance(x, Var) for x in self.entries)

    def complete(self, assignment: Mapping) -> ExactMatrix:
        """Substitute values for all variables."""
        missing = set(self.variables()) - set(assignment)
        if missing:
            raise UnresolvedVariables(f"no value for {sorted(missing)}")
        d = join(self.domain, *(domain_of(v) for v in assignment.values()))
        vals = [assignment[x.name] if isinstance(x, Var) else x for x in self.entries]
        return ExactMatrix(self.rows, self.cols, d, tuple(coerce(v, d) for v in vals))

    def to_matrix(self) -> ExactMatrix:
        if not self.is_constant():
            raise UnresolvedVariables(f"unresolved variables {self.variables()}")
        return ExactMatrix(self.rows, self.cols, self.domain, self.entries)

    def constant_rank_lb(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> int:
        """Rank lower bound valid for every completion of the given block.

        Uses the larger of the ranks of the variable-free rows and of the
        variable-free columns of the block; a submatrix rank never exceeds the
        rank of any completion.
        """
        def free(i, j):
            return not isinstance(self[i, j], Var)

        rows_ok = [i for i in row_idx if all(free(i, j) for j in col_idx)]
        cols_ok = [j for j in col_idx if all(free(i, j) for i in row_idx)]
        best = 0
        for ri, ci in ((rows_ok, list(col_idx)), (list(row_idx), cols_ok)):
            if ri and ci:
                sub = ExactMatrix(len(ri), len(ci), self.domain, tuple(self[i, j] for i in ri for j in ci))
                best = max(best, rank_exact(sub))
        return best


@dataclass(frozen=True)
class GadgetStep:
    var: str
    s: object
    pivot_row: int
    var_cols: tuple
    new_rows: tuple
    new_cols: tuple
    r_checked: Optional[int] = None

    @property
    def k(self) -> int:
        return len(self.var_cols)


@dataclass(frozen=True)
class GadgetTrace:
    rows0: int
    cols0: int
    steps: tuple = ()

    def __len__(self):
        return len(self.steps)

    def final_shape(self) -> tuple:
        return self.rows0 + 4 * len(self.steps), self.cols0 + 4 * len(self.steps)


def eliminate_variable(pm: PartialMatrix, var: str, r: Optional[int] = None) -> tuple:
    """Eliminate ``var`` in place; returns the enlarged partial matrix and the step.

    With more than one occurrence, ``r`` must be supplied and the block of
    ``pm`` outside the pivot row and the variable's columns must have
    conventional rank at least ``r`` for every value of the other variables.
    """
    positions = pm.var_positions(var)
    if not positions:
        raise UnknownVar(f"variable {var!r} does not occur")
    pivot_rows = {i for i, _ in positions}
    if len(pivot_rows) > 1:
        raise VarSpansMultipleRows(f"{var!r} occurs in rows {sorted(pivot_rows)}")
    pivot = pivot_rows.pop()
    var_cols = tuple(sorted(j for _, j in positions))
    k = len(var_cols)
    s = pm.intervals[var]
    if sign(s - 1) < 0:
        raise NegativeInput(f"s = {scalar_format(s)} < 1 gives an interval with negative values")
    r_checked = None
    if k > 1:
        if r is None:
            raise PreconditionNotCertified(f"{var!r} occurs {k} times; a rank target r is required")
        a_rows = [i for i in range(pm.rows) if i != pivot]
        a_cols = [j for j in range(pm.cols) if j not in var_cols]
        lb = pm.constant_rank_lb(a_rows, a_cols)
        if lb < r:
            raise PreconditionNotCertified(f"rank lower bound {lb} on the A block does not certify r = {r}")
        r_checked = r

    R, K = pm.rows, pm.cols
    d = pm.domain
    one, zero = coerce(1, d), coerce(0, d)
    grid = [list(pm.row(i)) + [zero] * 4 for i in range(R)]
    grid += [[zero] * (K + 4) for _ in range(4)]
    for j in var_cols:
        grid[pivot][j] = s
        grid[R][j] = one
    for t in range(4):
        grid[pivot][K + t] = one
        for q in range(4):
            grid[R + q][K + t] = coerce(B0_ROWS[q][t], d)
    intervals = {n: v for n, v in pm.intervals.items() if n != var}
    out = PartialMatrix(R + 4, K + 4, d, tuple(x for row in grid for x in row), intervals)
    step = GadgetStep(var, s, pivot, var_cols, tuple(range(R, R + 4)), tuple(range(K, K + 4)), r_checked)
    return out, step


def eliminate_all(pm: PartialMatrix, order: Sequence[str], ranks: Mapping = None) -> tuple:
    """Eliminate variables in ``order``; ``ranks`` supplies r per variable where needed."""
    ranks = ranks or {}
    steps = []
    cur = pm
    for name in order:
        cur, step = eliminate_variable(cur, name, ranks.get(name))
        steps.append(step)
    return cur, GadgetTrace(pm.rows, pm.cols, tuple(steps))


def lift_factorization(inner: NNFactorization, step: GadgetStep, xi, target: ExactMatrix = None) -> NNFactorization:
    """Extend a factorization of the matrix with ``step.var := xi`` through ``step``.

    The B(s - xi, ..., s - xi) gadget contributes four terms placed on the
    pivot row, the variable's columns and the four appended rows/columns.
    If ``target`` (the completed pre-elimination matrix) is given, ``inner`` is
    validated against it first.
    """
    s = step.s
    if sign(xi - (s - 1)) < 0 or sign(s - xi) < 0:
        raise XiOutOfRange(f"xi = {scalar_format(xi)} not in [{scalar_format(s - 1)}, {scalar_format(s)}]")
    if (inner.rows, inner.cols) != (step.new_rows[0], step.new_cols[0]):
        raise DimMismatch(f"inner factorization is {inner.rows}x{inner.cols}, "
                          f"step expects {step.new_rows[0]}x{step.new_cols[0]}")
    if target is not None:
        report = validate_factorization(target, inner)
        if not report.passed:
            raise ValidationFailure("inner factorization does not validate: " + report.summary())
    gadget = factor_b_equal(s - xi, step.k)
    d = join(inner.domain, gadget.domain, domain_of(xi))
    R, K = inner.rows + 4, inner.cols + 4
    row_map = (step.pivot_row,) + step.new_rows
    col_map = step.var_cols + step.new_cols
    zero = coerce(0, d)
    terms = list(inner.to_domain(d).padded(R, K).terms)
    for t in gadget.to_domain(d).terms:
        u, v = [zero] * R, [zero] * K
        for src, dst in enumerate(row_map):
            u[dst] = t.u[src]
        for src, dst in enumerate(col_map):
            v[dst] = t.v[src]
        terms.append(RankOneTerm(tuple(u), tuple(v)))
    return NNFactorization(R, K, d, tuple(terms))


def lift_through_trace(inner: NNFactorization, trace: GadgetTrace, xis: Mapping) -> NNFactorization:
    f = inner
    for step in trace.steps:
        f = lift_factorization(f, step, xis[step.var])
    return f


def replay_trace(pm0: PartialMatrix, trace: GadgetTrace) -> ExactMatrix:
    """Re-run every step of ``trace`` on ``pm0`` and return the constant result."""
    cur = pm0
    for recorded in trace.steps:
        cur, step = eliminate_variable(cur, recorded.var, recorded.r_checked)
        if replace(step, r_checked=recorded.r_checked) != recorded:
            raise ReconstructionMismatch(f"step for {recorded.var!r} does not replay: {step} != {recorded}")
    return cur.to_matrix()
