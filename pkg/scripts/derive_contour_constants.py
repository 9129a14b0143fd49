"""Exact values of the four-fold contour constant by iterated residues.

The integral is

    (2 pi i)^-4 int e^{w1+w2+w3+w4} / ((w1+w3)(w1+w4)(w2+w3)(w2+w4))
                    prod dw_k / w_k^{1+j_k}

over the vertical lines Re w = (1, 2, 3, 4).  Each variable is integrated in
turn: terms whose exponent contains +w are closed to the left, terms without
w (or with -w) are closed to the right.  Prints a Python dict literal.

Usage: python3 scripts/derive_contour_constants.py [max_total]
"""
import itertools
import sys

import sympy as sp

W = sp.symbols("w1:5")
LINE = dict(zip(W, (1, 2, 3, 4)))


def _integrate(terms, v):
    out = []
    for coef, expo in terms:
        a = sp.diff(expo, v)
        num, den = sp.fraction(sp.together(coef))
        poles = set()
        for fac, _ in sp.factor_list(den)[1]:
            if fac.has(v):
                poles.add(sp.solve(fac, v)[0])
        for p in poles:
            left = p.subs(LINE) < LINE[v]
            if a == 1 and left:
                sign = 1
            elif a != 1 and not left:
                sign = -1
            else:
                continue
            r = sp.residue(coef * sp.exp(a * v), v, p)
            new_expo = sp.expand(expo - a * v + a * p)
            out.append((sp.simplify(sign * r * sp.exp(-a * p)), new_expo))
    return out


def contour_constant(j):
    coef = 1 / ((W[0] + W[2]) * (W[0] + W[3]) * (W[1] + W[2]) * (W[1] + W[3]))
    for wk, jk in zip(W, j):
        coef /= wk ** (1 + jk)
    terms = [(coef, sum(W))]
    for v in reversed(W):
        terms = _integrate(terms, v)
    total = sum(c * sp.exp(e) for c, e in terms)
    return sp.nsimplify(sp.simplify(total))


if __name__ == "__main__":
    max_total = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    print("{")
    for j in itertools.product(range(3), repeat=4):
        if sum(j) <= max_total:
            print(f"    {j}: Fraction({str(contour_constant(j)).replace('/', ', ')}),", flush=True)
    print("}")
