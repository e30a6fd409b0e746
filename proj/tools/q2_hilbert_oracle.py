#!/usr/bin/env python3
"""Mod-2 cohomology product table of Q_2 from 2-adic Hilbert symbols.

H^1(Q_2) has basis (-1), (2), (5) and H^2(Q_2) = F_2; the cup product of
(a) and (b) is the Hilbert symbol (a, b)_2 written additively.  Every symbol
is computed twice: by searching for a primitive solution of
z^2 = a x^2 + b y^2 modulo 2^k, and by the closed formula in terms of the
unit parts.  The script prints the table as JSON, or with --check compares
it against a committed table file.
"""

import argparse
import itertools
import json
import sys

BASIS = [-1, 2, 5]
MODULUS_BITS = 6


def split(a):
    v = 0
    while a % 2 == 0:
        a //= 2
        v += 1
    return v, a


def symbol_by_search(a, b, bits=MODULUS_BITS):
    m = 1 << bits
    for x, y, z in itertools.product(range(m), repeat=3):
        if x % 2 == 0 and y % 2 == 0 and z % 2 == 0:
            continue
        if (z * z - a * x * x - b * y * y) % m == 0:
            return 1
    return -1


def symbol_by_formula(a, b):
    alpha, u = split(a)
    beta, w = split(b)
    eps = lambda t: ((t - 1) // 2) % 2
    omega = lambda t: ((t * t - 1) // 8) % 2
    e = (eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)) % 2
    return -1 if e else 1


def table():
    products = []
    for i, a in enumerate(BASIS):
        for j, b in enumerate(BASIS):
            s1 = symbol_by_search(a, b)
            s2 = symbol_by_formula(a, b)
            if s1 != s2:
                raise SystemExit(f"oracles disagree on ({a},{b}): search {s1}, formula {s2}")
            if s1 == -1:
                products.append({"left": [1, i], "right": [1, j], "value": [1]})
    return {"name": "q2", "dims": [1, 3, 1], "products": products}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", metavar="FILE", help="compare against a committed table file")
    args = ap.parse_args()
    t = table()
    if args.check:
        with open(args.check, encoding="utf-8") as fh:
            committed = json.load(fh)
        if committed != t:
            print("committed table differs from the oracle", file=sys.stderr)
            print(json.dumps(t, indent=2), file=sys.stderr)
            return 1
        print("q2 table matches the Hilbert-symbol oracle")
        return 0
    print(json.dumps(t, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
