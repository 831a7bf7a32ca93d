"""Derive the polynomial certificate for the 4x4 minors of C(a, b, c, d).

Run once offline; writes src/nnrank/data/c_minor_certificate.json.  Uses sympy
as an independent computer-algebra oracle (sympy is not a runtime dependency
of the package).  For each target polynomial we search for the smallest set of
minors, with multipliers of degree <= 1, whose combination equals the target.

    python scripts/derive_certificate.py
"""
import itertools
import json
from pathlib import Path

import sympy as sp

a, b, c, d = sp.symbols("a b c d")
GENS = (a, b, c, d)
C = sp.Matrix([[a, 2, 2, 1, 0], [1, 2, 1, 0, 1], [0, 0, 1, b, 0], [0, 1, 0, 0, c], [0, 1, 1, d, d]])
INDEX = [(i, j) for i in range(5) for j in range(5)]
MINORS = [sp.expand(C.minor_submatrix(i, j).det()) for i, j in INDEX]
TARGETS = [
    ("b = d", b - d),
    ("c = d", c - d),
    ("2d^2 - 4d + 1 = 0", 2 * d**2 - 4 * d + 1),
    ("a*b = 2b - 1", a * b - 2 * b + 1),
]
BASIS = [sp.Integer(1), a, b, c, d]


def solve_with(subset, target):
    coeffs = sp.symbols(f"k0:{len(subset) * len(BASIS)}")
    mults = [sum(coeffs[n * len(BASIS) + t] * BASIS[t] for t in range(len(BASIS))) for n in range(len(subset))]
    expr = sp.expand(sum(mu * MINORS[k] for mu, k in zip(mults, subset)) - target)
    eqs = sp.Poly(expr, *GENS).coeffs()
    sol = sp.solve(eqs, coeffs, dict=True)
    if not sol:
        return None
    sol = {k: v.subs({f: 0 for f in coeffs}) for k, v in sol[0].items()}
    out = [sp.expand(mu.subs(sol).subs({f: 0 for f in coeffs})) for mu in mults]
    assert sp.expand(sum(mu * MINORS[k] for mu, k in zip(out, subset)) - target) == 0
    return out


def poly_json(p):
    p = sp.Poly(p, *GENS)
    return [[str(sp.Rational(coef)), list(mon)] for mon, coef in sorted(zip(p.monoms(), p.coeffs()))]


def main():
    identities = []
    for name, target in TARGETS:
        found = None
        for size in (1, 2, 3):
            for subset in itertools.combinations(range(len(MINORS)), size):
                mults = solve_with(subset, target)
                if mults is not None and all(m != 0 for m in mults):
                    found = (subset, mults)
                    break
            if found:
                break
        subset, mults = found
        identities.append({
            "name": name,
            "target": poly_json(target),
            "combination": [{"minor": list(INDEX[k]), "multiplier": poly_json(mu)} for k, mu in zip(subset, mults)],
        })
        print(name, "=", " + ".join(f"({mu})*m{INDEX[k]}" for k, mu in zip(subset, mults)))
    data = {
        "oracle": "sympy exact linear solve over degree<=1 multipliers (scripts/derive_certificate.py)",
        "minor_index": "(deleted row, deleted column), 0-based; minor = det of the remaining 4x4 block",
        "identities": identities,
    }
    out = Path(__file__).resolve().parents[1] / "src" / "nnrank" / "data" / "c_minor_certificate.json"
    ids = ",\n  ".join(json.dumps(i) for i in identities)
    header = json.dumps({k: v for k, v in data.items() if k != "identities"})[:-1]
    out.write_text(header + ',\n "identities": [\n  ' + ids + "\n ]\n}\n")
    print("wrote", out)


if __name__ == "__main__":
    main()
