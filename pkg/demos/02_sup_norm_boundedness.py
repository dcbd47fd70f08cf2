"""The Rudin-Shapiro harmonics stay uniformly bounded.

Each basis function has unit L^2 norm on S^3 (volume 1).  A single monomial
z^j w^(N-j) of the same degree concentrates on one torus and its sup-norm
ratio grows like N^(1/4).  The signed Rudin-Shapiro combination spreads the
mass evenly and its sup-norm stays close to 1.8 as N grows.
"""

import time

from rsharmonics.harmonics import HarmonicSpec, monomial_supnorm_ratio, sup_norm

print(f"{'N':>6} {'sup |P_N,0|':>12} {'argmax rho':>11} {'single monomial':>16} {'seconds':>8}")
for m in range(3, 12):
    N = 2**m - 1
    t0 = time.perf_counter()
    value, where = sup_norm(HarmonicSpec(N, 0))
    dt = time.perf_counter() - t0
    print(f"{N:>6} {value:>12.4f} {where.rho:>11.4f} {monomial_supnorm_ratio(N, N // 2):>16.4f} {dt:>8.2f}")
