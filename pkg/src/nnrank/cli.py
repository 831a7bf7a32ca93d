"""Command-line front end.

Exit codes: 0 success / PASS, 1 verification FAIL, 2 usage or format error,
3 size limit exceeded.  Reports end with a block of ``key=value`` lines.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import cohen_rothblum as cr
from .bounds import BoundsOptions, bounds_report
from .errors import NNRankError, TooLarge, VerificationFailure
from .formats import (
    format_factorization, format_matrix, format_partial, format_trace, parse_factorization,
    parse_matrix, parse_partial,
)
from .gadgets import build_b, build_b0, eliminate_variable, factor_b_equal, wrap_gadget, GadgetTrace
from .graphred import (
    DEFAULT_LIMIT, build_partial_01, certify_reduction_ub, parse_graph, reduce_graph,
)
from .matrix import validate_factorization
from .scalar import Domain, scalar_parse

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TOO_LARGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _scalar(text: str):
    return scalar_parse(text, Domain.QUAD)


def _scalar_list(text: str) -> list:
    return [_scalar(t) for t in text.split(",") if t]


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise NNRankError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, path, out) -> None:
    if path:
        Path(path).write_text(text)
    else:
        out.write(text)


def _machine(out, **kv) -> None:
    for k, v in kv.items():
        out.write(f"{k}={v}\n")


# --- gadget ----------------------------------------------------------------

def cmd_gadget_b0(args, out):
    _emit(format_matrix(build_b0()), args.output, out)
    return EXIT_OK


def cmd_gadget_b(args, out):
    alphas = _scalar_list(args.alphas)
    m = build_b(alphas)
    _emit(format_matrix(m), args.output, out)
    if args.factor_out:
        if len(set(alphas)) != 1:
            raise NNRankError("--factor-out needs all alphas equal")
        f = factor_b_equal(alphas[0], len(alphas))
        Path(args.factor_out).write_text(format_factorization(f))
    return EXIT_OK


def cmd_gadget_wrap(args, out):
    A, B, c = (parse_matrix(_read(p)) for p in (args.A, args.B, args.c))
    g = wrap_gadget(A, B, c, _scalar(args.s), args.r)
    _emit(format_matrix(g), args.output, out)
    return EXIT_OK


def _rank_map(items) -> dict:
    out = {}
    for item in items or []:
        name, _, r = item.partition("=")
        if not r.isdigit():
            raise NNRankError(f"bad --r value {item!r}, expected NAME=R")
        out[name] = int(r)
    return out


def cmd_gadget_eliminate(args, out):
    pm = parse_partial(_read(args.input))
    ranks = _rank_map(args.r)
    order = args.var or pm.variables()
    steps = []
    cur = pm
    for name in order:
        cur, step = eliminate_variable(cur, name, ranks.get(name))
        steps.append(step)
    trace = GadgetTrace(pm.rows, pm.cols, tuple(steps))
    body = format_matrix(cur.to_matrix()) if cur.is_constant() else format_partial(cur)
    _emit(body, args.output, out)
    if args.trace_out:
        Path(args.trace_out).write_text(format_trace(trace))
    return EXIT_OK


# --- reduce ----------------------------------------------------------------

def cmd_reduce_partial(args, out):
    g = parse_graph(_read(args.input))
    _emit(format_partial(build_partial_01(g, identify=args.identify)), args.output, out)
    return EXIT_OK


def cmd_reduce_graph(args, out):
    g = parse_graph(_read(args.input))
    if args.identify:
        pm = build_partial_01(g, identify=True)
        for name in pm.variables():
            # an identified x_uv sits in rows u and v; the gadget refuses it
            eliminate_variable(pm, name)
    matrix, trace, predicted = reduce_graph(g, args.limit)
    cc = predicted - 4 * len(trace)
    _emit(format_matrix(matrix), args.output, out)
    if args.trace_out:
        Path(args.trace_out).write_text(format_trace(trace))
    elif not args.output:
        out.write(format_trace(trace))
    _machine(out, vertices=g.n, edges=len(g.edges), variables=len(trace),
             size=f"{matrix.rows}x{matrix.cols}", clique_cover=cc, predicted_nnr=predicted)
    return EXIT_OK


def cmd_reduce_certify(args, out):
    g = parse_graph(_read(args.input))
    reduced = reduce_graph(g, args.limit)
    matrix, _, predicted = reduced
    f = certify_reduction_ub(g, args.limit, reduced)
    report = validate_factorization(matrix, f)
    if args.output:
        Path(args.output).write_text(format_factorization(f))
    if args.matrix_out:
        Path(args.matrix_out).write_text(format_matrix(matrix))
    out.write(f"{report.summary()} on the {matrix.rows}x{matrix.cols} reduced matrix\n")
    _machine(out, terms=len(f), predicted_nnr=predicted, result="PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_FAIL


# --- bounds / check --------------------------------------------------------

def cmd_bounds(args, out):
    m = parse_matrix(_read(args.matrix))
    opts = BoundsOptions(args.max_rank, args.restarts, args.iters, args.tol, args.seed, args.denom_bound)
    rep = bounds_report(m, opts)
    out.write(rep.text() + "\n")
    out.write(rep.machine() + "\n")
    if rep.exact_witness is not None and args.witness_out:
        Path(args.witness_out).write_text(format_factorization(rep.exact_witness))
    return EXIT_OK


def cmd_check(args, out):
    m = parse_matrix(_read(args.matrix))
    f = parse_factorization(_read(args.factorization))
    rep = validate_factorization(m, f)
    out.write(rep.summary() + "\n")
    coord = "none" if rep.first_mismatch is None else "%d,%d" % rep.first_mismatch
    _machine(out, terms=rep.term_count, nonnegative=rep.nonnegative, equal=rep.equal,
             first_mismatch=coord, result="PASS" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_FAIL


# --- cohen-rothblum --------------------------------------------------------

def cmd_cr_rebuild(args, out):
    m, trace = cr.rebuild_m_from_gadgets()
    _emit(format_matrix(m), args.output, out)
    if args.trace_out:
        Path(args.trace_out).write_text(format_trace(trace))
    if args.output:
        out.write("rebuilt matrix equals the printed M\n")
        _machine(out, size=f"{m.rows}x{m.cols}", steps=len(trace), result="PASS")
    return EXIT_OK


def cmd_cr_verify19(args, out):
    f = cr.build_m_factorization_19()
    rep = validate_factorization(cr.build_m(), f)
    if args.output:
        Path(args.output).write_text(format_factorization(f))
    out.write(rep.summary() + " against M over Q(sqrt 2)\n")
    _machine(out, terms=len(f), result="PASS" if rep.passed and len(f) == 19 else "FAIL")
    return EXIT_OK if rep.passed and len(f) == 19 else EXIT_FAIL


def cmd_cr_minors(args, out):
    minors = cr.symbolic_minors_c()
    for (i, j), p in zip(cr.MINOR_INDEX, minors):
        out.write(f"minor(del row {i + 1}, del col {j + 1}) = {p}\n")
    zero = all(all(v == 0 for v in cr.numeric_minors_c(cr.branch_point(b))) for b in (cr.ALPHA, cr.ALPHA_CONJ))
    out.write(f"all minors vanish at b=c=d=1+-sqrt(0.5), a=2-1/b: {'yes' if zero else 'no'}\n")
    _machine(out, minors=len(minors), vanishing_locus="PASS" if zero else "FAIL")
    return EXIT_OK if zero else EXIT_FAIL


def cmd_cr_certify(args, out):
    rep = cr.certify_no_rational_point()
    out.write(rep.text() + "\n")
    _machine(out, identities=len(rep.identities), result="PASS" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_cr_probe(args, out):
    probe = cr.rational_probe(args.samples, args.seed)
    for r, n in sorted(probe.ranks.items()):
        out.write(f"rank {r}: {n} points\n")
    _machine(out, samples=probe.samples, seed=probe.seed, min_rank=min(probe.ranks) if probe.ranks else "none",
             result="PASS" if probe.passed else "FAIL")
    return EXIT_OK if probe.passed else EXIT_FAIL


def cmd_cr_report(args, out):
    alpha = _scalar(args.factor_alpha) if args.factor_alpha else None
    rep = cr.separation_report(args.samples, args.seed, alpha)
    out.write(rep.text() + "\n")
    out.write(rep.machine() + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nnrank", description="Exact nonnegative-rank gadgets and verification")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gadget", help="build B0, B(alpha), the wrapper, or eliminate variables")
    gs = g.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    x = gs.add_parser("b0")
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_gadget_b0)
    x = gs.add_parser("b")
    x.add_argument("--alphas", required=True, help="comma separated scalars, e.g. 1/2,1/2")
    x.add_argument("--factor-out", help="write the 4-term factorization (equal alphas in [0,1])")
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_gadget_b)
    x = gs.add_parser("wrap")
    x.add_argument("--A", required=True)
    x.add_argument("--B", required=True)
    x.add_argument("--c", required=True)
    x.add_argument("--s", required=True)
    x.add_argument("--r", type=int)
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_gadget_wrap)
    x = gs.add_parser("eliminate")
    x.add_argument("--input", required=True, help="partial matrix file")
    x.add_argument("--var", action="append", help="variable to eliminate (repeatable, in order); default all")
    x.add_argument("--r", action="append", help="rank target NAME=R for multi-entry variables")
    x.add_argument("--trace-out")
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_gadget_eliminate)

    r = sub.add_parser("reduce", help="clique cover to nonnegative rank")
    rs = r.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name, func in (("graph", cmd_reduce_graph), ("certify", cmd_reduce_certify), ("partial", cmd_reduce_partial)):
        x = rs.add_parser(name)
        x.add_argument("--input", required=True, help="graph file")
        x.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
        x.add_argument("-o", "--output")
        x.set_defaults(func=func)
        if name in ("graph", "partial"):
            x.add_argument("--identify", action="store_true", help="use one variable per edge (x_uv = x_vu)")
        if name == "graph":
            x.add_argument("--trace-out")
        if name == "certify":
            x.add_argument("--matrix-out")

    b = sub.add_parser("bounds", help="nonnegative rank bounds report")
    b.add_argument("--matrix", required=True)
    b.add_argument("--max-rank", type=int)
    b.add_argument("--restarts", type=int, default=64)
    b.add_argument("--iters", type=int, default=2000)
    b.add_argument("--tol", type=float, default=1e-9)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--denom-bound", type=int)
    b.add_argument("--witness-out")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("cr", help="rational vs real nonnegative rank of the 21x21 matrix")
    cs = c.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    x = cs.add_parser("rebuild-m")
    x.add_argument("-o", "--output")
    x.add_argument("--trace-out")
    x.set_defaults(func=cmd_cr_rebuild)
    x = cs.add_parser("verify-19")
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_cr_verify19)
    cs.add_parser("minors").set_defaults(func=cmd_cr_minors)
    cs.add_parser("certify-rational").set_defaults(func=cmd_cr_certify)
    x = cs.add_parser("probe")
    x.add_argument("--samples", type=int, default=10_000)
    x.add_argument("--seed", type=int, default=0)
    x.set_defaults(func=cmd_cr_probe)
    x = cs.add_parser("report")
    x.add_argument("--samples", type=int, default=1000)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--factor-alpha", help="negative control: alpha used in the three C terms")
    x.set_defaults(func=cmd_cr_report)

    k = sub.add_parser("check", help="validate a factorization against a matrix")
    k.add_argument("--matrix", required=True)
    k.add_argument("--factorization", required=True)
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        err.write(str(exc) + "\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except TooLarge as exc:
        err.write(f"too large: {exc}\n")
        return EXIT_TOO_LARGE
    except VerificationFailure as exc:
        err.write(f"FAIL: {exc}\n")
        out.write("result=FAIL\n")
        return EXIT_FAIL
    except NNRankError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
