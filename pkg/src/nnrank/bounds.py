"""Bounds on nonnegative rank.

Two exact lower bounds (conventional rank, rectangle covering number of the
support) and a floating-point search for upper-bound witnesses.  A failed
search is evidence only, never a certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import TooLarge
from .matrix import ExactMatrix, NNFactorization, rank_exact, validate_factorization
from .scalar import Domain, sign

SEMI_DECISION_NOTE = ("heuristic search is a semi-decision: failure at rank r is evidence, "
                      "not a certificate")


@dataclass(frozen=True)
class SupportPattern:
    rows: int
    cols: int
    masks: tuple  # one int bitmask per row, bit j set iff entry (i, j) is nonzero

    @classmethod
    def of(cls, m: ExactMatrix) -> "SupportPattern":
        masks = tuple(sum(1 << j for j, x in enumerate(m.row(i)) if sign(x) != 0) for i in range(m.rows))
        return cls(m.rows, m.cols, masks)

    def __contains__(self, ij) -> bool:
        i, j = ij
        return bool(self.masks[i] >> j & 1)

    def cells(self) -> list:
        return [(i, j) for i in range(self.rows) for j in range(self.cols) if (i, j) in self]

    def transpose(self) -> "SupportPattern":
        masks = tuple(sum(1 << i for i in range(self.rows) if self.masks[i] >> j & 1) for j in range(self.cols))
        return SupportPattern(self.cols, self.rows, masks)


def maximal_rectangles(p: SupportPattern) -> list:
    """All maximal all-ones rectangles as (row mask, col mask).

    Closed column sets are exactly the intersections of nonempty families of
    row supports; each determines its full row set.
    """
    closed: set = set()
    for m in p.masks:
        if not m:
            continue
        closed |= {m & c for c in closed} | {m}
    closed.discard(0)
    rects = []
    for cmask in sorted(closed):
        rmask = sum(1 << i for i, m in enumerate(p.masks) if m & cmask == cmask)
        rects.append((rmask, cmask))
    return rects


def _cell_mask(rmask: int, cmask: int, cols: int) -> int:
    out, i = 0, 0
    while rmask:
        if rmask & 1:
            out |= cmask << (i * cols)
        rmask >>= 1
        i += 1
    return out


def rectangle_cover_lb(p: SupportPattern, limit: int = 600) -> int:
    """Exact minimum number of all-ones rectangles covering the support.

    Branch and bound over maximal rectangles: branch on the uncovered cell with
    the fewest covering rectangles; prune with a greedy fooling set (cells no
    two of which fit in a common rectangle) on the uncovered cells.
    """
    if p.rows * p.cols > limit:
        raise TooLarge(f"{p.rows}x{p.cols} support exceeds the {limit}-cell limit")
    cells = p.cells()
    if not cells:
        return 0
    cols = p.cols
    rects = [_cell_mask(r, c, cols) for r, c in maximal_rectangles(p)]
    cell_bit = {ij: 1 << (ij[0] * cols + ij[1]) for ij in cells}
    covering = {ij: [k for k, rm in enumerate(rects) if rm & cell_bit[ij]] for ij in cells}

    def compatible(a, b):
        return (a[0], b[1]) in p and (b[0], a[1]) in p

    def fooling_lb(uncovered: list) -> int:
        chosen: list = []
        for c in sorted(uncovered, key=lambda ij: (len(covering[ij]), ij)):
            if all(not compatible(c, d) for d in chosen):
                chosen.append(c)
        return len(chosen)

    full = sum(cell_bit.values())

    def greedy() -> int:
        left, n = full, 0
        while left:
            left &= ~max(rects, key=lambda rm: (bin(rm & left).count("1"), -rects.index(rm)))
            n += 1
        return n

    best = greedy()

    def search(covered: int, used: int) -> None:
        nonlocal best
        if covered == full:
            best = min(best, used)
            return
        uncovered = [ij for ij in cells if not covered & cell_bit[ij]]
        if used + fooling_lb(uncovered) >= best:
            return
        pick = min(uncovered, key=lambda ij: (len(covering[ij]), ij))
        for k in covering[pick]:
            search(covered | rects[k], used + 1)

    search(0, 0)
    return best


# --- heuristic upper bound -------------------------------------------------

@dataclass
class FloatFactorization:
    W: np.ndarray
    H: np.ndarray
    residual: float  # relative Frobenius residual
    restart: int = -1

    @property
    def rank(self) -> int:
        return self.W.shape[1]


def _relres(X, W, H, normX):
    return np.linalg.norm(X[None] - W @ H, axis=(1, 2)) / normX


def _hals(X, W, H, iters, tol, normX, check_every=25):
    """Batched HALS; W is (R, m, r) and H is (R, r, n), updated in place."""
    r = W.shape[2]
    tiny = 1e-300
    for it in range(iters):
        WtX = np.swapaxes(W, 1, 2) @ X
        WtW = np.swapaxes(W, 1, 2) @ W
        for k in range(r):
            num = WtX[:, k, :] - np.einsum("bj,bjn->bn", WtW[:, k, :], H)
            H[:, k, :] = np.maximum(0.0, H[:, k, :] + num / np.maximum(WtW[:, k, k], tiny)[:, None])
        XHt = X @ np.swapaxes(H, 1, 2)
        HHt = H @ np.swapaxes(H, 1, 2)
        for k in range(r):
            num = XHt[:, :, k] - np.einsum("bmj,bj->bm", W, HHt[:, :, k])
            W[:, :, k] = np.maximum(0.0, W[:, :, k] + num / np.maximum(HHt[:, k, k], tiny)[:, None])
        if (it + 1) % check_every == 0 and _relres(X, W, H, normX).min() <= tol:
            break
    return _relres(X, W, H, normX)


def heuristic_nnr_ub(m, r: int, restarts: int = 64, iters: int = 2000, tol: float = 1e-9,
                     seed: int = 0) -> Optional[FloatFactorization]:
    """Look for a rank-``r`` nonnegative factorization of ``m`` (floats).

    All restarts run as one batch from seeded uniform starts.  The winner is
    the smallest residual, ties to the lowest restart index.  When the search
    fails and ``r`` covers a side of the matrix the trivial factorization by
    rows or by columns is returned instead.
    """
    X = m.to_float() if isinstance(m, ExactMatrix) else np.asarray(m, dtype=float)
    if (X < 0).any():
        raise ValueError("heuristic_nnr_ub needs a nonnegative matrix")
    if r < 1:
        raise ValueError("r must be positive")
    nr, nc = X.shape
    normX = float(np.linalg.norm(X))
    if normX == 0.0:
        return FloatFactorization(np.zeros((nr, r)), np.zeros((r, nc)), 0.0)
    rng = np.random.default_rng(seed)
    scale = np.sqrt(X.mean() / r)
    W = rng.random((restarts, nr, r)) * scale
    H = rng.random((restarts, r, nc)) * scale
    res = _hals(X, W, H, iters, tol, normX)
    best = int(np.lexsort((np.arange(restarts), res))[0])
    if res[best] <= tol:
        return FloatFactorization(W[best].copy(), H[best].copy(), float(res[best]), best)
    if r >= nr:
        W0 = np.zeros((nr, r))
        W0[:, :nr] = np.eye(nr)
        H0 = np.zeros((r, nc))
        H0[:nr] = X
        return FloatFactorization(W0, H0, 0.0)
    if r >= nc:
        H0 = np.zeros((r, nc))
        H0[:nc] = np.eye(nc)
        W0 = np.zeros((nr, r))
        W0[:, :nc] = X
        return FloatFactorization(W0, H0, 0.0)
    return None


def exactify_factorization(f: FloatFactorization, m: ExactMatrix, denom_bound: int) -> Optional[NNFactorization]:
    """Round every factor entry to the nearest fraction with denominator <= denom_bound.

    The rounded factorization is returned only if it reproduces ``m`` exactly.
    """
    def rat(x: float) -> Fraction:
        return max(Fraction(0), Fraction(x).limit_denominator(denom_bound))

    pairs = []
    for k in range(f.rank):
        u = [rat(x) for x in f.W[:, k]]
        v = [rat(x) for x in f.H[k, :]]
        if any(u) and any(v):
            pairs.append((u, v))
    cand = NNFactorization.from_pairs(m.rows, m.cols, pairs, Domain.RAT)
    if validate_factorization(m, cand).passed:
        return cand
    return None


# --- combined report -------------------------------------------------------

@dataclass
class BoundsOptions:
    max_rank: Optional[int] = None
    restarts: int = 64
    iters: int = 2000
    tol: float = 1e-9
    seed: int = 0
    denom_bound: Optional[int] = None
    rect_limit: int = 600


@dataclass
class BoundsReport:
    rows: int
    cols: int
    rank_lb: int
    rect_lb: int
    heur_ub: Optional[int]
    heur_residual: float
    pinned: Optional[int]
    exact_witness: Optional[NNFactorization] = None
    tried: list = field(default_factory=list)  # (r, residual or None)

    @property
    def lower(self) -> int:
        return max(self.rank_lb, self.rect_lb)

    def text(self) -> str:
        lines = [
            f"matrix          {self.rows}x{self.cols}",
            f"rank lower      {self.rank_lb}",
            f"rectangle lower {self.rect_lb}",
            f"heuristic upper {self.heur_ub if self.heur_ub is not None else 'none'}"
            + (f"  (residual {self.heur_residual:.3e})" if self.heur_ub is not None else ""),
        ]
        for r, res in self.tried:
            lines.append(f"  search r={r:<3d} " + ("found" if res is not None else "not found"))
        lines.append(f"nonnegative rank {'= %d (pinned)' % self.pinned if self.pinned is not None else 'unpinned'}")
        if self.exact_witness is not None:
            lines.append(f"exact rational witness with {len(self.exact_witness)} terms")
        lines.append("note: " + SEMI_DECISION_NOTE)
        return "\n".join(lines)

    def machine(self) -> str:
        kv = {
            "rank_lb": self.rank_lb,
            "rect_lb": self.rect_lb,
            "heur_ub": "none" if self.heur_ub is None else self.heur_ub,
            "heur_residual": "none" if self.heur_ub is None else f"{self.heur_residual:.3e}",
            "pinned": "none" if self.pinned is None else self.pinned,
        }
        if self.exact_witness is not None:
            kv["exact_witness_terms"] = len(self.exact_witness)
        return "\n".join(f"{k}={v}" for k, v in kv.items())


def bounds_report(m: ExactMatrix, opts: BoundsOptions = None) -> BoundsReport:
    opts = opts or BoundsOptions()
    rank_lb = rank_exact(m)
    rect_lb = rectangle_cover_lb(SupportPattern.of(m), opts.rect_limit)
    lower = max(rank_lb, rect_lb)
    top = min(m.rows, m.cols)
    if opts.max_rank is not None:
        top = min(top, opts.max_rank)
    heur_ub, heur_res, found, tried = None, float("nan"), None, []
    for r in range(max(lower, 1), top + 1):
        f = heuristic_nnr_ub(m, r, opts.restarts, opts.iters, opts.tol, opts.seed)
        tried.append((r, None if f is None else f.residual))
        if f is not None:
            heur_ub, heur_res, found = r, f.residual, f
            break
    if lower == 0:
        heur_ub, heur_res = 0, 0.0
    pinned = lower if heur_ub is not None and heur_ub == lower else None
    witness = None
    if found is not None and opts.denom_bound:
        witness = exactify_factorization(found, m, opts.denom_bound)
    return BoundsReport(m.rows, m.cols, rank_lb, rect_lb, heur_ub, heur_res, pinned, witness, tried)
