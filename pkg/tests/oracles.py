"""Independent reference implementations used only by the tests.

Each is deliberately naive and shares no code with the library path it checks.
"""
from fractions import Fraction
from itertools import combinations, permutations


def det_cofactor(rows):
    """Laplace expansion along the first row."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * det_cofactor(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_leibniz(rows):
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod = prod * rows[i][perm[i]]
        total = total + (prod if inv % 2 == 0 else -prod)
    return total


def rank_gauss(rows):
    """Textbook Gauss-Jordan with field division, partial pivoting by row only."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    rank = 0
    for col in range(nc):
        piv = next((i for i in range(rank, nr) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(nr):
            if i != rank and a[i][col] != 0:
                f = a[i][col] / a[rank][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def row_in_span(target, basis):
    """Is ``target`` a linear combination of ``basis`` rows?"""
    return rank_gauss(basis) == rank_gauss(basis + [target])


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def clique_cover_brute(n, adjacent):
    best = None
    for part in set_partitions(range(n)):
        if all(adjacent(u, v) for block in part for u, v in combinations(block, 2)):
            if best is None or len(part) < best:
                best = len(part)
    return best or 0


def rectangle_cover_brute(support):
    """Minimum number of all-ones rectangles covering ``support`` (set of cells), by enumeration."""
    if not support:
        return 0
    rows = sorted({i for i, _ in support})
    cols = sorted({j for _, j in support})
    rects = []
    for rk in range(1, len(rows) + 1):
        for rs in combinations(rows, rk):
            for ck in range(1, len(cols) + 1):
                for cs in combinations(cols, ck):
                    cells = frozenset((i, j) for i in rs for j in cs)
                    if cells <= support:
                        rects.append(cells)
    for k in range(1, len(support) + 1):
        for combo in combinations(rects, k):
            if frozenset().union(*combo) == support:
                return k
    raise AssertionError("unreachable")


def qf(x):
    """Shorthand Fraction constructor accepting 'p/q' strings."""
    return Fraction(x)


def clique_cover_dp(n, adjacent):
    """Minimum clique cover by dynamic programming over vertex subsets."""
    full = (1 << n) - 1
    nbr = [sum(1 << w for w in range(n) if w != v and adjacent(v, w)) for v in range(n)]
    is_clique = [True] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        is_clique[mask] = is_clique[rest] and (rest & ~nbr[low]) == 0
    best = [0] + [n + 1] * full
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            part = sub | low
            if is_clique[part] and best[mask ^ part] + 1 < best[mask]:
                best[mask] = best[mask ^ part] + 1
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return best[full]
