#!/usr/bin/env python3
"""Emit classical modular polynomial tables in the `[i,j] c` line format.

Prime levels come from PARI's polmodular.  Prime-square levels l^2 are
obtained from Res_Z(Phi_l(X,Z), Phi_l(Z,Y)) = +-(X-Y)^(l+1) Phi_{l^2}(X,Y).
With --modulus M the coefficients are written reduced into [0, M).
"""
import argparse
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(10**9)
pari.default("parisizemax", 4 * 10**9)


def phi_prime(l):
    return pari.polmodular(l, 0, "X", "Y")


def phi_square(l):
    X, Y, Z = pari("X"), pari("Y"), pari("Z")
    base = pari.polmodular(l, 0, "X", "Z")
    other = pari.substvec(base, [X, Z], [Z, Y])
    res = pari.polresultant(base, other, Z)
    q = res / (X - Y) ** (l + 1)
    if str(pari.type(q)) != "t_POL":
        raise SystemExit("resultant is not divisible by (X-Y)^(l+1)")
    if pari.polcoef(pari.polcoef(q, l * (l + 1), X), 0, Y) < 0:
        q = -q
    return q


def coefficients(poly):
    X, Y = pari("X"), pari("Y")
    deg = int(pari.poldegree(poly, X))
    out = []
    for i in range(deg + 1):
        ci = pari.polcoef(poly, i, X)
        for j in range(i + 1):
            c = int(pari.polcoef(ci, j, Y))
            if c != 0:
                out.append((i, j, c))
    return deg, out


def check_symmetric(poly):
    X, Y = pari("X"), pari("Y")
    swapped = pari.substvec(poly, [X, Y], [Y, X])
    if poly != swapped:
        raise SystemExit("table is not symmetric")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("level", type=int)
    ap.add_argument("--square-of", type=int, default=0,
                    help="build level l^2 from Phi_l (level must equal l^2)")
    ap.add_argument("--modulus", type=int, default=0)
    ap.add_argument("-o", "--output", required=True)
    args = ap.parse_args()

    if args.square_of:
        l = args.square_of
        if l * l != args.level:
            raise SystemExit("level must be the square of --square-of")
        poly = phi_square(l)
        expected = l * (l + 1)
    else:
        if not pari.isprime(args.level):
            raise SystemExit("prime level required without --square-of")
        poly = phi_prime(args.level)
        expected = args.level + 1
    check_symmetric(poly)
    deg, coeffs = coefficients(poly)
    if deg != expected:
        raise SystemExit(f"degree {deg} != expected {expected}")

    with open(args.output, "w", newline="\n") as fh:
        fh.write(f"# classical modular polynomial, level {args.level}\n")
        fh.write("# [i,j] c : coefficient of X^i Y^j (i >= j, symmetric)\n")
        if args.modulus:
            fh.write(f"# modulus {args.modulus}\n")
        for i, j, c in coeffs:
            if args.modulus:
                c %= args.modulus
                if c == 0:
                    continue
            fh.write(f"[{i},{j}] {c}\n")
    print(f"level {args.level}: {len(coeffs)} coefficients", file=sys.stderr)


if __name__ == "__main__":
    main()
