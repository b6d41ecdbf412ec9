"""Brute-force stopping-time partitions for the reference models.

A cube Q of positive mass belongs to P_t when J(Q) = nu(Q) 2^(-n rho) < t and
every ancestor has J >= t. Masses are exact fractions; the tree is searched
breadth first from the root.
"""
from fractions import Fraction
import math


def lebesgue_children(level, idx, mass):
    return [(level + 1, 2 * idx, mass / 2), (level + 1, 2 * idx + 1, mass / 2)]


def partition(children, rho, t):
    cells = []
    frontier = [(0, 0, Fraction(1))]
    while frontier:
        nxt = []
        for level, idx, mass in frontier:
            j = float(mass) * 2.0 ** (-level * rho)
            if j < t * (1 - 1e-12):
                cells.append((level, idx, mass))
            else:
                nxt.extend(children(level, idx, mass))
        frontier = nxt
    return cells


def cantor_partition(rho, t):
    # walk level by level including the odd levels
    cells = []
    frontier = [(0, 0, Fraction(1))]
    while frontier:
        nxt = []
        for level, idx, mass in frontier:
            j = float(mass) * 2.0 ** (-level * rho)
            if j < t * (1 - 1e-12):
                cells.append((level, idx, mass))
                continue
            for child in (2 * idx, 2 * idx + 1):
                # mass of the child: count Cantor intervals inside it
                cm = cantor_mass(level + 1, child)
                if cm > 0:
                    nxt.append((level + 1, child, cm))
        frontier = nxt
    return cells


def cantor_mass(level, idx):
    # digits of idx in base 4 (pairs of bits); an odd level is the sum of its
    # two children
    if level % 2 == 1:
        return cantor_mass(level + 1, 2 * idx) + cantor_mass(level + 1, 2 * idx + 1)
    mass = Fraction(1)
    bits = [(idx >> (level - 1 - i)) & 1 for i in range(level)]
    for i in range(0, level, 2):
        pair = 2 * bits[i] + bits[i + 1]
        if pair not in (0, 3):
            return Fraction(0)
        mass /= 2
    return mass


if __name__ == "__main__":
    for k in (2, 4, 6, 8):
        t = 2.0 ** -k
        print("cantor rho=1 t=2^-%d card=%d levels=%s" % (
            k, len(cantor_partition(1, t)), sorted({c[0] for c in cantor_partition(1, t)})))
    for k in (2, 4, 6):
        t = 2.0 ** -k
        print("lebesgue rho=1 t=2^-%d card=%d" % (k, len(partition(lebesgue_children, 1, t))))
    xs, ys = [], []
    for k in range(2, 17):
        t = 2.0 ** -k
        xs.append(-math.log(t))
        ys.append(math.log(len(cantor_partition(1, t))))
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    print("cantor entropy slope (t = 2^-2 .. 2^-16) = %.6f" % slope)
