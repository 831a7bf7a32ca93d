from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rectangle_cover_brute
from nnrank.bounds import (
    BoundsOptions, FloatFactorization, SupportPattern, bounds_report, exactify_factorization,
    heuristic_nnr_ub, maximal_rectangles, rectangle_cover_lb,
)
from nnrank.errors import TooLarge
from nnrank.gadgets import build_b, build_b0, factor_b_equal
from nnrank.graphred import Graph, clique_cover_number, cover_to_completion
from nnrank.matrix import ExactMatrix, permute, rank_exact, row_factorization, validate_factorization

B0 = build_b0()
B_HALF = build_b([Fraction(1, 2)])


def zero_one(max_r=4, max_c=4):
    return st.integers(1, max_r).flatmap(lambda r: st.integers(1, max_c).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rect_examples():
    assert rectangle_cover_lb(SupportPattern.of(B0)) == 4
    assert rectangle_cover_lb(SupportPattern.of(ExactMatrix.from_rows([[1] * 3] * 3))) == 1
    assert rectangle_cover_lb(SupportPattern.of(ExactMatrix.identity(3))) == 3
    assert rectangle_cover_lb(SupportPattern.of(ExactMatrix.zeros(2, 2))) == 0


def test_rect_limit():
    with pytest.raises(TooLarge):
        rectangle_cover_lb(SupportPattern.of(ExactMatrix.identity(25)))
    assert rectangle_cover_lb(SupportPattern.of(ExactMatrix.identity(25)), limit=700) == 25


def test_maximal_rectangles_b0():
    rects = maximal_rectangles(SupportPattern.of(B0))
    # 4 row-pairs sharing one column and 4 single rows, all of area 2
    assert len(rects) == 8
    for rmask, cmask in rects:
        assert bin(rmask).count("1") * bin(cmask).count("1") == 2


@given(zero_one(3, 3))
def test_rect_matches_brute_force(rows):
    m = ExactMatrix.from_rows(rows)
    support = frozenset((i, j) for i, r in enumerate(rows) for j, x in enumerate(r) if x)
    assert rectangle_cover_lb(SupportPattern.of(m)) == rectangle_cover_brute(support)


@given(zero_one(5, 5), st.randoms(use_true_random=False))
def test_rect_permutation_and_transpose_invariant(rows, rnd):
    m = ExactMatrix.from_rows(rows)
    base = rectangle_cover_lb(SupportPattern.of(m))
    rp, cp = list(range(m.rows)), list(range(m.cols))
    rnd.shuffle(rp)
    rnd.shuffle(cp)
    assert rectangle_cover_lb(SupportPattern.of(permute(m, rp, cp))) == base
    assert rectangle_cover_lb(SupportPattern.of(m.transpose())) == base
    assert rectangle_cover_lb(SupportPattern.of(m).transpose()) == base


@given(st.lists(st.lists(st.integers(0, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_lower_bounds_sound_for_row_factorizations(rows):
    m = ExactMatrix.from_rows(rows)
    f = row_factorization(m)
    assert validate_factorization(m, f).passed
    assert rank_exact(m) <= len(f)
    assert rectangle_cover_lb(SupportPattern.of(m)) <= len(f)


@given(st.fractions(0, 1, max_denominator=12), st.integers(1, 4))
def test_lower_bounds_sound_for_gadgets(alpha, n):
    m = build_b([alpha] * n)
    f = factor_b_equal(alpha, n)
    assert validate_factorization(m, f).passed
    assert max(rank_exact(m), rectangle_cover_lb(SupportPattern.of(m))) <= len(f)


def test_lower_bounds_sound_for_cover_completions():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4), (2, 3)])
    cc, cover = clique_cover_number(g)
    m, f = cover_to_completion(g, cover)
    assert rectangle_cover_lb(SupportPattern.of(m)) <= len(f) == cc


# heuristic

def test_heuristic_b0():
    f = heuristic_nnr_ub(B0, 4)
    assert f is not None and f.residual <= 1e-9
    assert (f.W >= 0).all() and (f.H >= 0).all()
    assert heuristic_nnr_ub(B0, 3, restarts=16, iters=500) is None


def test_heuristic_b_half():
    f = heuristic_nnr_ub(B_HALF, 4)
    assert f is not None and f.residual <= 1e-9


@given(st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=1, max_size=4))
@settings(max_examples=25)
def test_heuristic_full_rank_always_succeeds(rows):
    m = ExactMatrix.from_rows(rows)
    f = heuristic_nnr_ub(m, m.rows, restarts=4, iters=200)
    assert f is not None and f.residual <= 1e-9
    assert np.linalg.norm(f.W @ f.H - m.to_float()) <= 1e-9 * max(1.0, np.linalg.norm(m.to_float()))


def test_heuristic_deterministic():
    x = ExactMatrix.from_rows([[1, 2, 0], [0, 1, 3], [2, 0, 1], [1, 1, 1]])
    f1 = heuristic_nnr_ub(x, 2, restarts=8, iters=300, seed=4)
    f2 = heuristic_nnr_ub(x, 2, restarts=8, iters=300, seed=4)
    assert (f1 is None) == (f2 is None)
    if f1 is not None:
        assert np.array_equal(f1.W, f2.W) and np.array_equal(f1.H, f2.H) and f1.residual == f2.residual
    a = heuristic_nnr_ub(B0, 4, restarts=8, seed=11)
    b = heuristic_nnr_ub(B0, 4, restarts=8, seed=11)
    assert np.array_equal(a.W, b.W) and np.array_equal(a.H, b.H)


def test_heuristic_rejects_negative():
    with pytest.raises(ValueError):
        heuristic_nnr_ub(np.array([[-1.0]]), 1)


# exactification

def float_version(f):
    W = np.array([[float(x) for x in t.u] for t in f.terms]).T
    H = np.array([[float(x) for x in t.v] for t in f.terms])
    return FloatFactorization(W, H, 0.0)


def test_exactify_examples():
    ex = exactify_factorization(float_version(factor_b_equal(Fraction(1, 2), 1)), B_HALF, 2)
    assert ex is not None and validate_factorization(B_HALF, ex).passed
    ex = exactify_factorization(float_version(row_factorization(B0)), B0, 1)
    assert ex is not None and len(ex) == 4
    # small noise rounds away; a generic factorization does not
    noisy = float_version(row_factorization(B0))
    noisy.W = noisy.W + 1e-3 * np.random.default_rng(0).random(noisy.W.shape)
    assert exactify_factorization(noisy, B0, 1) is not None
    rng = np.random.default_rng(1)
    generic = FloatFactorization(rng.random((4, 4)), rng.random((4, 4)), 0.5)
    assert exactify_factorization(generic, B0, 10) is None


# reports

def test_report_b0():
    rep = bounds_report(B0)
    assert (rep.rank_lb, rep.rect_lb, rep.heur_ub, rep.pinned) == (3, 4, 4, 4)
    assert rep.heur_residual <= 1e-9
    assert "pinned" in rep.text() and "semi-decision" in rep.text()
    assert "pinned=4" in rep.machine()


def test_report_b_half_and_identity():
    rep = bounds_report(B_HALF)
    assert rep.pinned == 4 and rep.rank_lb == 4
    rep = bounds_report(ExactMatrix.identity(5))
    assert rep.pinned == 5


def test_report_unpinned_b_above_one():
    rep = bounds_report(build_b([Fraction(3, 2)] * 2), BoundsOptions(restarts=32, iters=1000))
    assert rep.rank_lb == 4 and rep.rect_lb <= 4
    assert rep.tried[0] == (4, None)
    assert rep.pinned is None
    assert "unpinned" in rep.text()


def test_report_invariant_and_witness():
    rep = bounds_report(B_HALF, BoundsOptions(denom_bound=8))
    assert rep.rank_lb <= rep.lower <= rep.heur_ub
    if rep.exact_witness is not None:
        assert validate_factorization(B_HALF, rep.exact_witness).passed
    rep = bounds_report(ExactMatrix.zeros(2, 3))
    assert rep.pinned == 0
