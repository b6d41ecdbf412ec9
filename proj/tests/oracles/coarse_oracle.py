"""Coarse counts N_{rho,n}(alpha) for the tetrahedron measure from multinomial
classes, and the resulting F(alpha) = log2 N / n, evaluated exactly.

A level-n cube with a zeros, b ones, c twos, d threes has mass
0.599^a 0.3^b 0.001^c 0.1^d; it is alpha-good when
log2(mass) - n rho >= -alpha n.
"""
from fractions import Fraction
from math import comb, log2

P = [Fraction(599, 1000), Fraction(3, 10), Fraction(1, 1000), Fraction(1, 10)]


def count(n, rho, alpha):
    total = 0
    for a in range(n + 1):
        for b in range(n + 1 - a):
            for c in range(n + 1 - a - b):
                d = n - a - b - c
                lm = a * log2(P[0]) + b * log2(P[1]) + c * log2(P[2]) + d * log2(P[3])
                if lm - n * rho >= -alpha * n - 1e-12 * max(1.0, alpha * n):
                    total += comb(n, a) * comb(n - a, b) * comb(n - a - b, c)
    return total


if __name__ == "__main__":
    for n, alpha in ((6, 3.0), (8, 3.5), (10, 4.0), (12, 3.0)):
        c = count(n, 2.0, alpha)
        print("n=%d alpha=%.2f count=%d F=%.12f" % (n, alpha, c, log2(c) / n if c else float("-inf")))
