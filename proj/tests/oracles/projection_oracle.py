"""Closed forms for the projection tests.

* L2 projection of x^2 onto degree <= 1 on (0,1]: x - 1/6.
* Error of the piecewise-constant projection of f(x) = x on the two halves of
  (0,1] in L2(Lebesgue): sqrt(2 * int_0^(1/2) (x - 1/4)^2 dx) = 1/sqrt(48).
"""
from fractions import Fraction
import math

# normal equations for a + b x against x^2: <1,x^2> = 1/3, <x,x^2> = 1/4
g = [[Fraction(1), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 3)]]
rhs = [Fraction(1, 3), Fraction(1, 4)]
det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
a = (rhs[0] * g[1][1] - g[0][1] * rhs[1]) / det
b = (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det
print("x^2 projection: %s + %s x" % (a, b))

err2 = 2 * Fraction(1, 2) ** 3 / 12
print("two-cell error^2 = %s, error = %.15f (1/sqrt(48) = %.15f)" % (err2, math.sqrt(err2), 1 / math.sqrt(48)))
