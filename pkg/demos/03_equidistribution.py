"""Multiplication by rho^gamma has the same average for every basis function.

|P_{N,k}|^2 averages to 1 over each torus {rho = const}, so the matrix
element of rho^gamma is exactly int_0^1 rho^gamma d rho = 1/(gamma+1) for
every N and k.  We check this with the closed sum at large N and with brute
force quadrature at small N.
"""

from rsharmonics.quadrature import matrix_element_quadrature
from rsharmonics.semiclassical import MonomialSymbol, matrix_element

for gamma in range(5):
    s = MonomialSymbol(gamma=gamma)
    closed = matrix_element(2048, 1000, s).value
    quad = matrix_element_quadrature(12, 5, s)
    print(
        f"gamma={gamma}: target {1 / (gamma + 1):.15f}  closed sum N=2048 {closed.real:.15f}"
        f"  quadrature N=12 {quad.real:.15f}"
    )
