"""Plain-text formats for matrices, factorizations, partial matrices and traces.

    matrix <rows> <cols> <rat|quad>
    <rows*cols scalar tokens, row-major>

    factorization <rows> <cols> <rat|quad> <terms>
    <u: rows tokens>
    <v: cols tokens>          (repeated per term)

    partial <rows> <cols> <rat|quad>
    <rows*cols tokens, each a scalar or ?name>
    var <name> s=<scalar>     (one per variable)

    trace <rows0> <cols0>
    step var=<name> s=<scalar> pivot=<row> cols=<c1,...> r=<r|none>

Graph files are handled in :mod:`nnrank.graphred`.
"""
from __future__ import annotations

import re

from .errors import FormatError
from .gadgets import GadgetStep, GadgetTrace, PartialMatrix, Var
from .matrix import ExactMatrix, NNFactorization, RankOneTerm
from .scalar import Domain, scalar_format, scalar_parse


def _header(text: str, keyword: str, nfields: int) -> tuple:
    lines = text.splitlines()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise FormatError(f"empty {keyword} file")
    head = lines[0].split()
    if len(head) != nfields + 1 or head[0] != keyword:
        raise FormatError(f"expected '{keyword}' header with {nfields} fields, got {lines[0]!r}")
    return head[1:], lines[1:]


def _count(tok: str) -> int:
    if not tok.isdigit():
        raise FormatError(f"bad count {tok!r}")
    return int(tok)


def format_matrix(m: ExactMatrix) -> str:
    out = [f"matrix {m.rows} {m.cols} {m.domain.value}"]
    out += [" ".join(scalar_format(x) for x in m.row(i)) for i in range(m.rows)]
    return "\n".join(out) + "\n"


def parse_matrix(text: str) -> ExactMatrix:
    (r, c, d), body = _header(text, "matrix", 3)
    rows, cols, domain = _count(r), _count(c), Domain.parse(d)
    toks = " ".join(body).split()
    if len(toks) != rows * cols:
        raise FormatError(f"expected {rows * cols} entries, found {len(toks)}")
    return ExactMatrix(rows, cols, domain, tuple(scalar_parse(t, domain) for t in toks))


def format_factorization(f: NNFactorization) -> str:
    out = [f"factorization {f.rows} {f.cols} {f.domain.value} {len(f.terms)}"]
    for t in f.terms:
        out.append(" ".join(scalar_format(x) for x in t.u))
        out.append(" ".join(scalar_format(x) for x in t.v))
    return "\n".join(out) + "\n"


def parse_factorization(text: str) -> NNFactorization:
    (r, c, d, k), body = _header(text, "factorization", 4)
    rows, cols, domain, nterms = _count(r), _count(c), Domain.parse(d), _count(k)
    toks = " ".join(body).split()
    if len(toks) != nterms * (rows + cols):
        raise FormatError(f"expected {nterms * (rows + cols)} factor entries, found {len(toks)}")
    vals = [scalar_parse(t, domain) for t in toks]
    terms = []
    step = rows + cols
    for n in range(nterms):
        chunk = vals[n * step:(n + 1) * step]
        terms.append(RankOneTerm(tuple(chunk[:rows]), tuple(chunk[rows:])))
    return NNFactorization(rows, cols, domain, tuple(terms))


_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def format_partial(pm: PartialMatrix) -> str:
    out = [f"partial {pm.rows} {pm.cols} {pm.domain.value}"]
    for i in range(pm.rows):
        out.append(" ".join(str(x) if isinstance(x, Var) else scalar_format(x) for x in pm.row(i)))
    for name in sorted(pm.intervals):
        out.append(f"var {name} s={scalar_format(pm.intervals[name])}")
    return "\n".join(out) + "\n"


def parse_partial(text: str) -> PartialMatrix:
    (r, c, d), body = _header(text, "partial", 3)
    rows, cols, domain = _count(r), _count(c), Domain.parse(d)
    entry_lines, intervals = [], {}
    for ln in body:
        if ln.startswith("var "):
            m = re.match(r"^var (\S+) s=(\S+)$", ln.strip())
            if not m or not _NAME.match(m.group(1)):
                raise FormatError(f"bad variable line {ln!r}")
            intervals[m.group(1)] = scalar_parse(m.group(2), domain)
        else:
            entry_lines.append(ln)
    toks = " ".join(entry_lines).split()
    if len(toks) != rows * cols:
        raise FormatError(f"expected {rows * cols} entries, found {len(toks)}")
    entries = []
    for t in toks:
        if t.startswith("?"):
            if not _NAME.match(t[1:]):
                raise FormatError(f"bad variable token {t!r}")
            entries.append(Var(t[1:]))
        else:
            entries.append(scalar_parse(t, domain))
    try:
        return PartialMatrix(rows, cols, domain, tuple(entries), intervals)
    except KeyError as exc:
        raise FormatError(str(exc)) from None


def format_trace(trace: GadgetTrace) -> str:
    out = [f"trace {trace.rows0} {trace.cols0}"]
    for st in trace.steps:
        r = "none" if st.r_checked is None else str(st.r_checked)
        cols = ",".join(str(j) for j in st.var_cols)
        out.append(f"step var={st.var} s={scalar_format(st.s)} pivot={st.pivot_row} cols={cols} r={r}")
    return "\n".join(out) + "\n"


_STEP = re.compile(r"^step var=(\S+) s=(\S+) pivot=(\d+) cols=(\d+(?:,\d+)*) r=(\d+|none)$")


def parse_trace(text: str, domain: Domain = Domain.QUAD) -> GadgetTrace:
    (r0, c0), body = _header(text, "trace", 2)
    rows, cols = _count(r0), _count(c0)
    steps = []
    for ln in body:
        if not ln.strip():
            continue
        m = _STEP.match(ln.strip())
        if not m:
            raise FormatError(f"bad step line {ln!r}")
        name, s, pivot, cs, r = m.groups()
        var_cols = tuple(int(x) for x in cs.split(","))
        steps.append(GadgetStep(name, scalar_parse(s, domain), int(pivot), var_cols,
                                tuple(range(rows, rows + 4)), tuple(range(cols, cols + 4)),
                                None if r == "none" else int(r)))
        rows, cols = rows + 4, cols + 4
    return GadgetTrace(_count(r0), _count(c0), tuple(steps))
