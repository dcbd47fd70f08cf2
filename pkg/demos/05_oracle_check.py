"""The closed-sum engine agrees with brute-force quadrature.

The quadrature samples the basis function, applies the operator by direct
differentiation of each monomial, and integrates on a Gauss-Legendre by
trapezoid grid.  It uses neither Beta functions nor the angular selection
rule, so agreement checks both.
"""

import itertools

from rsharmonics.quadrature import matrix_element_quadrature
from rsharmonics.semiclassical import MonomialSymbol, matrix_element

worst = 0.0
count = 0
for N in (1, 4, 9):
    for exps in itertools.product(range(2), range(-1, 2), range(-1, 2), range(2), range(2), range(2)):
        s = MonomialSymbol(*exps)
        c = matrix_element(N, N // 2, s).value
        q = matrix_element_quadrature(N, N // 2, s)
        worst = max(worst, abs(c - q) / (1 + abs(c)))
        count += 1
print(f"{count} symbol/degree pairs, largest relative disagreement {worst:.2e}")

s = MonomialSymbol(0, 1, -1, 0, 0, 0)
print("N=1 pinned value (pi/8 = 0.39269908...):", matrix_element(1, 0, s).value.real, matrix_element_quadrature(1, 0, s).real)
