"""Clique cover to nonnegative rank.

X(G) has ones on the diagonal, a variable with interval [0, 1] at every
position (u, v) with u ~ v, and zeros elsewhere.  Its smallest completion
nonnegative rank is the clique covering number cc(G); eliminating every
variable with the single-entry gadget gives a constant matrix whose
nonnegative rank is cc(G) + 4t for t eliminated variables.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .errors import (
    InvalidCover, LoopEdge, MalformedGraph, NotAClique, NotACover, TooLarge, ValidationFailure,
)
from .gadgets import PartialMatrix, Var, eliminate_all, lift_through_trace
from .matrix import ExactMatrix, NNFactorization, validate_factorization
from .scalar import Domain, sign

DEFAULT_LIMIT = 16


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset  # of (u, v) with u < v

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        seen = set()
        for u, v in edges:
            if u == v:
                raise LoopEdge(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedGraph(f"edge ({u}, {v}) outside 0..{n - 1}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise MalformedGraph(f"duplicate edge {e}")
            seen.add(e)
        return cls(n, frozenset(seen))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def is_clique(self, vs: Iterable[int]) -> bool:
        return all(self.adjacent(u, v) for u, v in combinations(sorted(vs), 2))

    def sorted_edges(self) -> list:
        return sorted(self.edges)


@dataclass(frozen=True)
class CliqueCover:
    cliques: tuple  # of frozenset

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]]) -> "CliqueCover":
        return cls(tuple(frozenset(s) for s in sets))

    def __len__(self):
        return len(self.cliques)

    def disjoint(self) -> "CliqueCover":
        """Each vertex stays only in the first clique containing it; empty sets are dropped."""
        seen: set = set()
        out = []
        for c in self.cliques:
            kept = frozenset(c - seen)
            seen |= c
            if kept:
                out.append(kept)
        return CliqueCover(tuple(out))

    def as_lists(self) -> list:
        return [sorted(c) for c in self.cliques]


def parse_graph(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedGraph("empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "graph" or not head[1].isdigit():
        raise MalformedGraph(f"bad header {lines[0]!r}")
    n = int(head[1])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise MalformedGraph(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    return "".join([f"graph {g.n}\n"] + [f"{u} {v}\n" for u, v in g.sorted_edges()])


def var_name(u: int, v: int) -> str:
    return f"x_{u}_{v}"


def build_partial_01(g: Graph, identify: bool = False) -> PartialMatrix:
    """X(G) as a partial matrix, each variable ranging over [0, 1].

    By default x_uv and x_vu are independent; ``identify=True`` uses one
    variable per edge (which then occupies two rows and cannot be eliminated
    by the single-row gadget).
    """
    rows = [[1 if i == j else 0 for j in range(g.n)] for i in range(g.n)]
    intervals = {}
    for u, v in g.sorted_edges():
        if identify:
            name = var_name(u, v)
            rows[u][v] = rows[v][u] = Var(name)
            intervals[name] = 1
        else:
            for a, b in ((u, v), (v, u)):
                rows[a][b] = Var(var_name(a, b))
                intervals[var_name(a, b)] = 1
    return PartialMatrix.from_rows(rows, intervals, Domain.RAT)


# --- clique cover ----------------------------------------------------------

def _greedy_cover(g: Graph) -> list:
    classes: list = []
    for v in range(g.n):
        for cls in classes:
            if all(g.adjacent(v, w) for w in cls):
                cls.append(v)
                break
        else:
            classes.append([v])
    return classes


def _independent_lb(g: Graph) -> int:
    """Size of a greedy independent set; pairwise non-adjacent vertices need separate cliques."""
    chosen: list = []
    for v in sorted(range(g.n), key=lambda v: (sum(g.adjacent(v, w) for w in range(g.n) if w != v), v)):
        if not any(g.adjacent(v, w) for w in chosen):
            chosen.append(v)
    return len(chosen)


def clique_cover_number(g: Graph, limit: int = DEFAULT_LIMIT) -> tuple:
    """Minimum clique cover by branch and bound (coloring of the complement).

    Vertices are placed in index order, each into an existing compatible
    class (lowest index first) or a new one.
    """
    if g.n > limit:
        raise TooLarge(f"{g.n} vertices exceeds the limit {limit}")
    if g.n == 0:
        return 0, CliqueCover(())
    best = _greedy_cover(g)
    lower = _independent_lb(g)
    classes: list = []

    def search(v: int) -> bool:
        nonlocal best
        if v == g.n:
            best = [list(c) for c in classes]
            return len(best) <= lower
        for cls in classes:
            if all(g.adjacent(v, w) for w in cls):
                cls.append(v)
                if search(v + 1):
                    return True
                cls.pop()
        if len(classes) + 1 < len(best):
            classes.append([v])
            if search(v + 1):
                return True
            classes.pop()
        return False

    if len(best) > lower:
        search(0)
    cover = CliqueCover.of(best)
    return len(cover), cover


def check_cover(g: Graph, cover: CliqueCover) -> None:
    for c in cover.cliques:
        if any(not 0 <= v < g.n for v in c):
            raise InvalidCover(f"{sorted(c)} has vertices outside the graph")
        if not g.is_clique(c):
            raise InvalidCover(f"{sorted(c)} is not a clique")
    covered = frozenset().union(*cover.cliques) if cover.cliques else frozenset()
    if covered != frozenset(range(g.n)):
        raise InvalidCover(f"vertices {sorted(set(range(g.n)) - covered)} are not covered")


def cover_to_completion(g: Graph, cover: CliqueCover) -> tuple:
    """The 0/1 completion sum_i 1_{U_i} 1_{U_i}^T of X(G) and its factorization."""
    check_cover(g, cover)
    parts = cover.disjoint()
    pairs = []
    for c in parts.cliques:
        ind = [1 if v in c else 0 for v in range(g.n)]
        pairs.append((ind, ind))
    f = NNFactorization.from_pairs(g.n, g.n, pairs, Domain.RAT)
    return f.product(), f


def completion_assignment(g: Graph, completion: ExactMatrix, identify: bool = False) -> dict:
    """Values the completion gives to the variables of X(G)."""
    out = {}
    for u, v in g.sorted_edges():
        out[var_name(u, v)] = completion[u, v]
        if not identify:
            out[var_name(v, u)] = completion[v, u]
    return out


def extract_cliques(f: NNFactorization, g: Graph) -> CliqueCover:
    """Read the cliques V^l = {v : (u_l v_l^T)_vv > 0} off a completion factorization."""
    if (f.rows, f.cols) != (g.n, g.n):
        raise InvalidCover("factorization shape does not match the graph")
    out = []
    for t in f.terms:
        vl = [v for v in range(g.n) if sign(t.u[v]) > 0 and sign(t.v[v]) > 0]
        for a, b in combinations(vl, 2):
            if not g.adjacent(a, b):
                raise NotAClique(f"vertices {a} and {b} share a term but are not adjacent", (a, b))
        if vl:
            out.append(frozenset(vl))
    covered = frozenset().union(*out) if out else frozenset()
    if covered != frozenset(range(g.n)):
        raise NotACover(f"vertices {sorted(set(range(g.n)) - covered)} are not covered")
    return CliqueCover(tuple(out))


def reduction_order(pm: PartialMatrix) -> list:
    return sorted(pm.variables())


def reduce_graph(g: Graph, limit: int = DEFAULT_LIMIT) -> tuple:
    """Constant matrix, trace and predicted nonnegative rank cc(G) + 4t."""
    if g.n > limit:
        raise TooLarge(f"{g.n} vertices exceeds the limit {limit}")
    pm = build_partial_01(g)
    final, trace = eliminate_all(pm, reduction_order(pm))
    cc, _ = clique_cover_number(g, limit)
    return final.to_matrix(), trace, cc + 4 * len(trace)


def certify_reduction_ub(g: Graph, limit: int = DEFAULT_LIMIT, reduced: Optional[tuple] = None) -> NNFactorization:
    """Exact cc(G) + 4t term factorization of the reduced matrix."""
    matrix, trace, predicted = reduced or reduce_graph(g, limit)
    _, cover = clique_cover_number(g, limit)
    completion, f = cover_to_completion(g, cover)
    lifted = lift_through_trace(f, trace, completion_assignment(g, completion))
    report = validate_factorization(matrix, lifted)
    if not report.passed or len(lifted) != predicted:
        raise ValidationFailure(f"reduction certificate failed: {report.summary()}, predicted {predicted}")
    return lifted


def all_graphs(n: int):
    """Every labelled simple graph on n vertices."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, frozenset(p for k, p in enumerate(pairs) if mask >> k & 1))
