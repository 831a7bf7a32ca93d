import copy
import random
from fractions import Fraction

import pytest

from oracles import det_cofactor, rank_gauss
from nnrank.cohen_rothblum import (
    ALPHA, ALPHA_CONJ, A_STAR, MINOR_INDEX, QUADRATIC, STAR_POINT, CPoint, branch_point, build_c,
    build_m, build_m_factorization_19, c_partial, certify_no_rational_point, explicit_c_factorization,
    load_certificate, m1_partial, numeric_minors_c, random_rational_point, rational_probe,
    rebuild_m_from_gadgets, separation_report, symbolic_c, symbolic_minors_c,
)
from nnrank.errors import CertificateFailure
from nnrank.formats import parse_matrix
from nnrank.gadgets import build_b0, eliminate_variable
from nnrank.matrix import rank_exact, validate_factorization
from nnrank.poly import A, B, C, D, MultiPoly, det_symbolic, poly_eval
from nnrank.scalar import SQRT2, quad_sign

MINORS = symbolic_minors_c()


def test_alpha_constants():
    assert 2 * ALPHA * ALPHA - 4 * ALPHA + 1 == 0
    assert A_STAR == 2 - 1 / ALPHA == SQRT2
    assert branch_point(ALPHA) == STAR_POINT


def test_build_c_examples():
    assert build_c(CPoint(1, 1, 1, 1)).to_rows()[4] == [0, 1, 1, 1, 1]
    assert rank_exact(build_c(CPoint(1, 1, 1, 1))) == 4
    assert rank_exact(build_c(STAR_POINT)) == 3
    assert rank_exact(build_c(CPoint(2, 2, 2, 2))) == 4
    star = build_c(STAR_POINT)
    assert rank_exact(star.submatrix([1, 2, 3], [0, 1, 2])) == 3
    assert rank_exact(star) == rank_gauss(star.to_rows())


def test_generic_rational_rank_is_five():
    # C has full rank off the hypersurface det C = 0; e.g. b = c = d puts a point on it
    a, b, c, d = A, B, C, D
    det = a*b*c + a*b*d - a*b - 2*a*c*d + a*d - 2*b*d + 2*c*d - c + d
    assert det_symbolic(symbolic_c()) == det
    pt = CPoint(Fraction(3, 2), Fraction(3, 2), Fraction(5, 4), Fraction(7, 4))
    assert poly_eval(det, tuple(pt)) != 0
    assert rank_exact(build_c(pt)) == 5


@pytest.mark.parametrize("beta", [ALPHA, ALPHA_CONJ])
def test_minors_vanish_on_both_branches(beta):
    pt = branch_point(beta)
    assert all(poly_eval(p, tuple(pt)) == 0 for p in MINORS)
    assert all(x == 0 for x in numeric_minors_c(pt))


def test_minors_nonzero_at_random_rational_points():
    rng = random.Random(40)
    for _ in range(40):
        pt = random_rational_point(rng)
        assert any(poly_eval(p, tuple(pt)) != 0 for p in MINORS)


def test_symbolic_vs_numeric_100_points():
    rng = random.Random(100)
    for _ in range(100):
        pt = random_rational_point(rng)
        assert [poly_eval(p, tuple(pt)) for p in MINORS] == numeric_minors_c(pt)


def test_symbolic_minor_against_cofactor_oracle():
    pt = CPoint(Fraction(3, 2), Fraction(4, 3), Fraction(7, 5), Fraction(9, 7))
    rows = build_c(pt).to_rows()
    for (i, j), p in zip(MINOR_INDEX, MINORS):
        sub = [[x for k, x in enumerate(r) if k != j] for q, r in enumerate(rows) if q != i]
        assert poly_eval(p, tuple(pt)) == det_cofactor(sub)


# certificate

def test_certificate_passes():
    rep = certify_no_rational_point()
    assert rep.passed
    assert [n for n, ok in rep.identities if ok] == [n for n, _ in rep.identities]
    assert len(rep.identities) == 4
    assert rep.irrational_roots_vanish
    vals = rep.root_candidates
    assert vals[Fraction(1)] == -1 and vals[Fraction(-1)] == 7
    assert vals[Fraction(1, 2)] == Fraction(-1, 2) and vals[Fraction(-1, 2)] == Fraction(7, 2)
    assert "no rational point" in rep.text()


def test_certificate_tampered_coefficient():
    cert = copy.deepcopy(load_certificate())
    part = cert["identities"][0]["combination"][0]
    coef, exps = part["multiplier"][0]
    part["multiplier"][0] = [str(Fraction(coef) + 1), exps]
    with pytest.raises(CertificateFailure):
        certify_no_rational_point(cert)


def test_certificate_missing_identity():
    cert = copy.deepcopy(load_certificate())
    cert["identities"] = cert["identities"][1:]
    with pytest.raises(CertificateFailure):
        certify_no_rational_point(cert)


def test_quadratic_has_irrational_roots_only():
    assert poly_eval(QUADRATIC, (0, 0, 0, ALPHA)) == 0
    assert poly_eval(QUADRATIC, (0, 0, 0, ALPHA_CONJ)) == 0
    assert QUADRATIC == MultiPoly({(0, 0, 0, 2): 2, (0, 0, 0, 1): -4, (0, 0, 0, 0): 1})


# probe

def test_probe_small():
    res = rational_probe(500, 7)
    assert res.passed and sum(res.ranks.values()) == 500
    assert min(res.ranks) >= 4
    assert rational_probe(200, 7).ranks == rational_probe(200, 7).ranks


def test_random_points_in_box():
    rng = random.Random(0)
    for _ in range(200):
        assert all(1 <= x <= 2 for x in random_rational_point(rng))


# explicit factorization

def test_explicit_c_factorization():
    f = explicit_c_factorization()
    assert f.product()[0, 0] == SQRT2
    t1 = f.terms[0]
    assert t1.u[1] * t1.v[4] == 1
    rep = validate_factorization(build_c(STAR_POINT), f)
    assert rep.passed and rep.term_count == 3
    assert all(quad_sign(x) >= 0 for t in f.terms for x in t.u + t.v)


def test_explicit_c_factorization_wrong_alpha_fails():
    f = explicit_c_factorization(Fraction(3, 2))
    assert not validate_factorization(build_c(STAR_POINT), f).passed


# M

def test_build_m():
    m = build_m()
    assert (m.rows, m.cols) == (21, 21)
    assert m[0, 0] == 2 and m.row(0)[17:] == (1, 1, 1, 1)
    assert m.row(4) == (0, 1, 1, 2, 2, 1, 1, 1, 1) + (0,) * 12
    assert rank_exact(m.submatrix([1, 2, 3], [0, 1, 2])) == 3
    assert m.submatrix(range(5, 9), range(5, 9)) == build_b0()


def test_golden_file_matches():
    from importlib import resources
    text = resources.files("nnrank").joinpath("data/m21.mat").read_text()
    assert parse_matrix(text) == build_m()


def test_rebuild_m():
    m, trace = rebuild_m_from_gadgets()
    assert m == build_m()
    assert [s.var for s in trace.steps] == ["d", "c", "b", "a"]
    sizes = [s.new_rows[0] for s in trace.steps] + [trace.final_shape()[0]]
    assert sizes == [5, 9, 13, 17, 21]
    assert trace.steps[0].k == 2 and trace.steps[0].r_checked == 3


def test_first_step_gives_m1_pattern():
    pm, _ = eliminate_variable(c_partial(), "d", 3)
    m1 = m1_partial()
    assert pm.variables() == m1.variables()
    assert [str(x) for x in pm.entries] == [str(x) for x in m1.entries]


def test_factorization_19():
    f = build_m_factorization_19()
    rep = validate_factorization(build_m(), f)
    assert rep.passed and rep.term_count == 19
    assert all(quad_sign(x) >= 0 for t in f.terms for x in t.u + t.v)


# report

def test_separation_report_default():
    rep = separation_report(samples=200)
    assert rep.passed and rep.real_ub and rep.rational_lb
    assert "result=PASS" in rep.machine()
    blocks = dict((k, d) for k, _, d in rep.checks)["gadget_alphas_in_unit_interval"]
    assert "2-1r2" in blocks and "1-1/2r2" in blocks


def test_separation_report_negative_control():
    rep = separation_report(samples=50, factor_alpha=Fraction(3, 2))
    assert not rep.real_ub and not rep.passed
    assert "real_nnr_ub_19=FAIL" in rep.machine()
