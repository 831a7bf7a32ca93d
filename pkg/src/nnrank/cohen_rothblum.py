"""A 21x21 integer matrix whose real and rational nonnegative ranks differ.

M is obtained from the 5x5 matrix C(a, b, c, d) (with a, b, c, d free in
[1, 2]) by eliminating d (two entries, rank target 3), then c, b and a with
the gadget.  Over Q(sqrt 2), C(sqrt 2, alpha, alpha, alpha) with
alpha = 1 + sqrt(1/2) is a sum of three nonnegative rank-one matrices, which
lifts to 19 terms for M.  Over Q every 4x4 minor of C vanishing forces
2d^2 - 4d + 1 = 0, which has no rational root, so C keeps rank 4 and M needs
at least 20 rational terms.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

from .errors import CertificateFailure, ReconstructionMismatch, ValidationFailure, VerificationFailure
from .gadgets import GadgetTrace, PartialMatrix, eliminate_all, lift_through_trace, replay_trace
from .matrix import ExactMatrix, NNFactorization, minor_det, rank_exact, validate_factorization
from .poly import A, B, C, D, MultiPoly, det_symbolic, poly_eval
from .scalar import SQRT2, Domain, QuadScalar, quad_sign, scalar_format

ALPHA = QuadScalar(1, Fraction(1, 2))        # 1 + sqrt(0.5)
ALPHA_CONJ = QuadScalar(1, Fraction(-1, 2))  # 1 - sqrt(0.5)
A_STAR = SQRT2                               # 2 - 1/alpha

ELIMINATION_ORDER = ("d", "c", "b", "a")
ELIMINATION_RANKS = {"d": 3}
LIFT_XI = {"d": ALPHA, "c": ALPHA, "b": ALPHA, "a": A_STAR}
S_VALUE = 2

# rows exactly as printed; every entry is a single digit
_M_ROWS = (
    "222100000000000001111",
    "121010000000000000000",
    "001200000000011110000",
    "010020000111100000000",
    "011221111000000000000",
    "000111100000000000000",
    "000000110000000000000",
    "000000011000000000000",
    "000001001000000000000",
    "000010000110000000000",
    "000000000011000000000",
    "000000000001100000000",
    "000000000100100000000",
    "000100000000011000000",
    "000000000000001100000",
    "000000000000000110000",
    "000000000000010010000",
    "100000000000000001100",
    "000000000000000000110",
    "000000000000000000011",
    "000000000000000001001",
)


@dataclass(frozen=True)
class CPoint:
    a: object
    b: object
    c: object
    d: object

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))


STAR_POINT = CPoint(A_STAR, ALPHA, ALPHA, ALPHA)


def branch_point(beta) -> CPoint:
    """The point (2 - 1/beta, beta, beta, beta) on the rank-3 locus."""
    return CPoint(2 - 1 / beta, beta, beta, beta)


def _c_rows(a, b, c, d) -> list:
    return [[a, 2, 2, 1, 0],
            [1, 2, 1, 0, 1],
            [0, 0, 1, b, 0],
            [0, 1, 0, 0, c],
            [0, 1, 1, d, d]]


def build_c(pt: CPoint) -> ExactMatrix:
    return ExactMatrix.from_rows(_c_rows(*pt))


def symbolic_c() -> list:
    return [[x if isinstance(x, MultiPoly) else MultiPoly.const(x) for x in row] for row in _c_rows(A, B, C, D)]


MINOR_INDEX = tuple((i, j) for i in range(5) for j in range(5))


def symbolic_minors_c() -> list:
    """The 25 4x4 minors of C, ordered by (deleted row, deleted column)."""
    grid = symbolic_c()
    out = []
    for i, j in MINOR_INDEX:
        sub = [[grid[r][k] for k in range(5) if k != j] for r in range(5) if r != i]
        out.append(det_symbolic(sub))
    return out


def numeric_minors_c(pt: CPoint) -> list:
    m = build_c(pt)
    return [minor_det(m, [r for r in range(5) if r != i], [k for k in range(5) if k != j]) for i, j in MINOR_INDEX]


# --- rational obstruction --------------------------------------------------

# constraint polynomials cutting out the rank <= 3 locus
REQUIRED_TARGETS = {
    "b = d": B - D,
    "c = d": C - D,
    "2d^2 - 4d + 1 = 0": 2 * D * D - 4 * D + 1,
    "a*b = 2b - 1": A * B - 2 * B + 1,
}
QUADRATIC = REQUIRED_TARGETS["2d^2 - 4d + 1 = 0"]


def load_certificate() -> dict:
    text = resources.files("nnrank").joinpath("data/c_minor_certificate.json").read_text()
    return json.loads(text)


@dataclass
class CertificateReport:
    passed: bool
    identities: list        # (name, verified)
    root_candidates: dict   # candidate -> value of 2d^2 - 4d + 1
    irrational_roots_vanish: bool
    oracle: str = ""

    def text(self) -> str:
        lines = [f"certificate oracle: {self.oracle}"]
        for name, ok in self.identities:
            lines.append(f"  identity {name:<20s} {'verified' if ok else 'FAILED'}")
        vals = ", ".join(f"{scalar_format(k)} -> {scalar_format(v)}" for k, v in self.root_candidates.items())
        lines.append(f"  rational root candidates of 2d^2-4d+1: {vals}")
        lines.append(f"  roots 1+-sqrt(0.5) annihilate 2d^2-4d+1: {'yes' if self.irrational_roots_vanish else 'NO'}")
        lines.append("  conclusion: no rational point makes every 4x4 minor of C vanish" if self.passed
                     else "  conclusion: certificate FAILED")
        return "\n".join(lines)


def _rational_root_candidates(p: MultiPoly) -> list:
    """Candidates +-(divisor of constant)/(divisor of leading coefficient) for a univariate poly in d."""
    terms = p.terms
    if any(e[:3] != (0, 0, 0) for e in terms):
        raise ValueError("expected a polynomial in d alone")
    deg = max(e[3] for e in terms)
    coeffs = {e[3]: c for e, c in terms.items()}
    scale = math.lcm(*(c.denominator for c in coeffs.values()))
    lead = abs(int(coeffs[deg] * scale))
    low = min(coeffs)
    const = abs(int(coeffs[low] * scale))

    def divisors(n):
        return [k for k in range(1, n + 1) if n % k == 0]

    cands = sorted({sgn * Fraction(pn, qn) for pn in divisors(const) for qn in divisors(lead) for sgn in (1, -1)},
                   key=lambda x: (abs(x), x < 0))
    return cands


def certify_no_rational_point(certificate: Optional[dict] = None) -> CertificateReport:
    """Check the stored polynomial certificate exactly.

    Each identity states target = sum multiplier * minor.  Together the
    targets force b = c = d, a*b = 2b - 1 and 2d^2 - 4d + 1 = 0 whenever all
    minors vanish; the last has no rational root.
    """
    cert = certificate if certificate is not None else load_certificate()
    minors = dict(zip(MINOR_INDEX, symbolic_minors_c()))
    results = []
    seen = {}
    for ident in cert["identities"]:
        target = MultiPoly.from_json(ident["target"])
        combo = MultiPoly()
        for part in ident["combination"]:
            combo = combo + MultiPoly.from_json(part["multiplier"]) * minors[tuple(part["minor"])]
        ok = combo == target
        results.append((ident["name"], ok))
        if ok:
            seen[ident["name"]] = target
    missing = [n for n, p in REQUIRED_TARGETS.items() if seen.get(n) != p]
    failed = [n for n, ok in results if not ok]
    if failed or missing:
        raise CertificateFailure(f"certificate identities failed: {failed}; required targets not certified: {missing}")

    cands = {x: poly_eval(QUADRATIC, (0, 0, 0, x)) for x in _rational_root_candidates(QUADRATIC)}
    if any(v == 0 for v in cands.values()):
        raise CertificateFailure("2d^2 - 4d + 1 has a rational root")
    roots_ok = all(poly_eval(QUADRATIC, (0, 0, 0, r)) == 0 for r in (ALPHA, ALPHA_CONJ))
    return CertificateReport(roots_ok, results, cands, roots_ok, cert.get("oracle", ""))


@dataclass
class ProbeResult:
    samples: int
    seed: int
    ranks: dict = field(default_factory=dict)
    first_failure: Optional[CPoint] = None

    @property
    def passed(self) -> bool:
        """No sampled point has rank <= 3."""
        return self.first_failure is None

    @property
    def all_rank_four(self) -> bool:
        return set(self.ranks) == {4}


def random_rational_point(rng: random.Random, max_den: int = 1000) -> CPoint:
    coords = []
    for _ in range(4):
        den = rng.randint(1, max_den)
        coords.append(1 + Fraction(rng.randint(0, den), den))
    return CPoint(*coords)


def rational_probe(samples: int = 10_000, seed: int = 0) -> ProbeResult:
    """Tally rank C(pt) over seeded random rational points of [1, 2]^4.

    A failure is a point of rank <= 3.  Generic points have rank 5; rank 4
    occurs e.g. when b = c = d (row 5 = row 3 + row 4).
    """
    rng = random.Random(seed)
    out = ProbeResult(samples, seed)
    for _ in range(samples):
        pt = random_rational_point(rng)
        r = rank_exact(build_c(pt))
        out.ranks[r] = out.ranks.get(r, 0) + 1
        if r <= 3 and out.first_failure is None:
            out.first_failure = pt
    return out


# --- real witness ----------------------------------------------------------

def explicit_c_factorization(alpha=ALPHA) -> NNFactorization:
    """The three rank-one terms of C(sqrt 2, alpha, alpha, alpha)."""
    inv = 1 / alpha
    pairs = [
        ((0, inv, 0, 1, 1), (0, 1, 0, 0, alpha)),
        ((inv, 0, 1, 0, 1), (0, 0, 1, alpha, 0)),
        ((SQRT2, 1, 0, 0, 0), (1, SQRT2, 1, 0, 0)),
    ]
    return NNFactorization.from_pairs(5, 5, pairs, Domain.QUAD)


def build_m() -> ExactMatrix:
    return ExactMatrix.from_rows([[int(ch) for ch in row] for row in _M_ROWS], Domain.RAT)


def c_partial() -> PartialMatrix:
    """C with a, b, c, d as variables, each ranging over [1, 2]."""
    base = build_c(CPoint(0, 0, 0, 0))
    variables = {"a": [(0, 0)], "b": [(2, 3)], "c": [(3, 4)], "d": [(4, 3), (4, 4)]}
    return PartialMatrix.from_matrix(base, variables, {v: S_VALUE for v in variables})


def m1_partial() -> PartialMatrix:
    """Top-left 9x9 block of M with entries (1,1), (3,4), (4,5) made variables."""
    m = build_m()
    top = m.submatrix(range(9), range(9))
    return PartialMatrix.from_matrix(top, {"a": [(0, 0)], "b": [(2, 3)], "c": [(3, 4)]},
                                     {v: S_VALUE for v in "abc"})


def _first_difference(x: ExactMatrix, y: ExactMatrix):
    if (x.rows, x.cols) != (y.rows, y.cols):
        return "shape"
    for idx, (p, q) in enumerate(zip(x.entries, y.entries)):
        if p != q:
            return divmod(idx, x.cols)
    return None


def rebuild_m_from_gadgets() -> tuple:
    """Eliminate d, c, b, a from C; the result must equal the printed M."""
    pm = c_partial()
    final, trace = eliminate_all(pm, ELIMINATION_ORDER, ELIMINATION_RANKS)
    rebuilt = replay_trace(pm, trace)
    diff = _first_difference(rebuilt, build_m())
    if diff is not None:
        raise ReconstructionMismatch(f"rebuilt matrix differs from M at {diff}", diff)
    return rebuilt, trace


def build_m_factorization_19(alpha=ALPHA, trace: Optional[GadgetTrace] = None) -> NNFactorization:
    """Lift the three C terms through the four eliminations: 3 + 4*4 = 19 terms."""
    if trace is None:
        _, trace = rebuild_m_from_gadgets()
    f = lift_through_trace(explicit_c_factorization(alpha), trace, LIFT_XI)
    report = validate_factorization(build_m(), f)
    if not report.passed:
        raise ValidationFailure("19-term factorization of M: " + report.summary())
    return f


# --- report ----------------------------------------------------------------

@dataclass
class SeparationReport:
    checks: list = field(default_factory=list)  # (key, passed, detail)
    real_ub: bool = False
    rational_lb: bool = False

    @property
    def passed(self) -> bool:
        return self.real_ub and self.rational_lb and all(ok for _, ok, _ in self.checks)

    def add(self, key: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((key, ok, detail))
        return ok

    def text(self) -> str:
        lines = []
        for key, ok, detail in self.checks:
            lines.append(f"[{'PASS' if ok else 'FAIL'}] {key}" + (f": {detail}" if detail else ""))
        lines.append("")
        lines.append(f"rank_R+(M) <= 19 (exact witness over Q(sqrt 2)) ........ {'PASS' if self.real_ub else 'FAIL'}")
        lines.append(f"rank_Q+(M) >= 20 (no rational rank-3 point of C, via the"
                     f" gadget equivalences) ... {'PASS' if self.rational_lb else 'FAIL'}")
        return "\n".join(lines)

    def machine(self) -> str:
        kv = [(key, "PASS" if ok else "FAIL") for key, ok, _ in self.checks]
        kv += [("real_nnr_ub_19", "PASS" if self.real_ub else "FAIL"),
               ("rational_nnr_lb_20", "PASS" if self.rational_lb else "FAIL"),
               ("result", "PASS" if self.passed else "FAIL")]
        return "\n".join(f"{k}={v}" for k, v in kv)


def separation_report(samples: int = 1000, seed: int = 0, factor_alpha=None) -> SeparationReport:
    """Run the whole verification chain.

    ``factor_alpha`` replaces alpha in the three C terms (target unchanged);
    anything other than 1 + sqrt(0.5) must make the witness checks fail.
    """
    rep = SeparationReport()
    alpha = ALPHA if factor_alpha is None else factor_alpha

    trace = None
    try:
        _, trace = rebuild_m_from_gadgets()
        rebuild_ok = rep.add("rebuild_m", True, "gadget reconstruction equals printed 21x21 M")
    except ReconstructionMismatch as exc:
        rebuild_ok = rep.add("rebuild_m", False, str(exc))

    c_report = validate_factorization(build_c(STAR_POINT), explicit_c_factorization(alpha))
    c_ok = rep.add("c_factorization", c_report.passed, "C(sqrt2, a, a, a) " + c_report.summary())

    m_ok = False
    if trace is not None:
        try:
            f19 = build_m_factorization_19(alpha, trace)
            m_ok = rep.add("m_factorization_19", len(f19) == 19, f"{len(f19)} terms validate exactly against M")
        except VerificationFailure as exc:
            rep.add("m_factorization_19", False, str(exc))
        blocks = [S_VALUE - LIFT_XI[v] for v in ELIMINATION_ORDER]
        rep.add("gadget_alphas_in_unit_interval",
                all(quad_sign(x) >= 0 and quad_sign(1 - x) >= 0 for x in blocks),
                ", ".join(scalar_format(x) for x in blocks))
    else:
        rep.add("m_factorization_19", False, "no trace")

    precond = rank_exact(build_m().submatrix([1, 2, 3], [0, 1, 2]))
    pre_ok = rep.add("precondition_rank3", precond == 3, f"rank of rows 2-4 x cols 1-3 of M is {precond}")

    try:
        cert = certify_no_rational_point()
        cert_ok = rep.add("minor_certificate", cert.passed,
                          "; ".join(n for n, _ in cert.identities) + "; 2d^2-4d+1 has no rational root")
    except CertificateFailure as exc:
        cert_ok = rep.add("minor_certificate", False, str(exc))

    zero_ok = all(all(p == 0 for p in numeric_minors_c(branch_point(beta))) for beta in (ALPHA, ALPHA_CONJ))
    rep.add("vanishing_locus", zero_ok, "all 25 minors vanish at beta = 1 +- sqrt(0.5)")

    probe = rational_probe(samples, seed)
    hist = ", ".join(f"rank {k}: {v}" for k, v in sorted(probe.ranks.items()))
    rep.add("rational_probe", probe.passed, f"{samples} seeded rational points (seed {seed}), none of rank <= 3; {hist}"
            if probe.passed else f"rank <= 3 at {probe.first_failure}")

    rep.real_ub = rebuild_ok and c_ok and m_ok
    rep.rational_lb = rebuild_ok and pre_ok and cert_ok
    return rep
