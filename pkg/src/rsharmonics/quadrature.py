"""Brute-force quadrature on S^3, used to certify the closed-sum matrix elements.

The rule is Gauss-Legendre in ``psi`` (``rho = sin^2 psi``, so half-integer
powers of ``rho`` and ``1 - rho`` become polynomials in ``sin psi, cos psi``)
times the trapezoid rule in each angle.  Nothing here uses Beta functions or
the angular selection rule: both emerge from the numerics.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .harmonics import HarmonicSpec, coefficients, evaluate_array, monomial_norm_sq
from .hopf import TWO_PI, GridSpec, volume_integral
from .semiclassical import MonomialSymbol, admissible

QuadratureGrid = GridSpec
ORACLE_N_MAX = 64


def integrate_s3(g: Callable, grid: QuadratureGrid) -> complex:
    """``int_{S^3} g dVol`` (total volume 1) on the tensor-product grid."""
    return volume_integral(g, grid)


def minimal_grid(N: int, s: MonomialSymbol) -> QuadratureGrid:
    """Smallest grid meeting the accuracy preconditions for ``(N, s)``."""
    return QuadratureGrid(
        n_psi=2 * N + 2 * s.gamma + 2 * s.a + 8,
        n_theta=2 * (2 * N + abs(s.beta1) + abs(s.beta2)) + 4,
    )


def _check_grid(N: int, s: MonomialSymbol, grid: QuadratureGrid) -> None:
    need = minimal_grid(N, s)
    if grid.n_psi < need.n_psi or grid.n_theta < need.n_theta:
        raise ValueError(
            f"grid {grid.n_psi}x{grid.n_theta} too small for N={N}, {s.format()}; "
            f"need at least {need.n_psi}x{need.n_theta}"
        )


def _psi_nodes(n_psi: int):
    x, w = np.polynomial.legendre.leggauss(n_psi)
    psi = (x + 1.0) * (math.pi / 4.0)
    # d rho = sin(2 psi) d psi
    return np.sin(psi), np.cos(psi), w * (math.pi / 4.0) * np.sin(2.0 * psi)


def _unit_coefficients(spec: HarmonicSpec) -> np.ndarray:
    # sigma_j e^{2 pi i jk/(N+1)} / (sqrt(N+1) ||z^j w^{N-j}||), norms from exact rationals
    N = spec.N
    inv = np.array([1.0 / math.sqrt((N + 1) * float(monomial_norm_sq(N, j))) for j in range(N + 1)])
    return coefficients(spec) * inv


def _derived_amplitudes(N: int, s: MonomialSymbol, sn, cs) -> np.ndarray:
    """Rows ``j``: ``j^b1 (N-j)^b2 / (i^a N^(a+b1+b2)) (d/drho)^a [rho^(j/2) (1-rho)^((N-j)/2)]`` on the psi nodes."""
    out = np.zeros((N + 1, sn.size), dtype=complex)
    keep = admissible(np.arange(N + 1), N, s.gamma, s.beta1, s.a)
    for j in range(N + 1):
        if not keep[j]:
            continue
        d = np.zeros(sn.size)
        for a1 in range(s.a + 1):
            a2 = s.a - a1
            c = math.comb(s.a, a1) * (-1) ** a2
            for i in range(a1):
                c *= j / 2.0 - i
            for i in range(a2):
                c *= (N - j) / 2.0 - i
            if c == 0.0:
                continue
            d += c * sn ** (j - 2 * a1) * cs ** (N - j - 2 * a2)
        out[j] = d * (float(j) ** s.b1 * float(N - j) ** s.b2) / ((1j) ** s.a * float(N) ** (s.a + s.b1 + s.b2))
    return out


def matrix_element_quadrature(
    N: int,
    k: int,
    s: MonomialSymbol,
    grid: QuadratureGrid | None = None,
    branch: str = "P",
    *,
    separable: bool = True,
) -> complex:
    """``int f1 * Op_N(f2) P * conj(P) dVol`` with ``f = f1 f2`` split into position and momentum parts.

    ``separable=True`` evaluates the tensor-product rule factor by factor
    (angle sums per frequency, psi sum per pair of monomials);
    ``separable=False`` samples the full integrand on the 3-d grid.  Both
    apply the same quadrature rule.
    """
    if N < 1 or N > ORACLE_N_MAX:
        raise ValueError(f"the quadrature oracle covers 1 <= N <= {ORACLE_N_MAX}, got {N}")
    spec = HarmonicSpec(N, k, branch)
    grid = grid or minimal_grid(N, s)
    _check_grid(N, s, grid)
    sn, cs, w = _psi_nodes(grid.n_psi)
    c = _unit_coefficients(spec)
    A = _derived_amplitudes(N, s, sn, cs) * c[:, None]
    l = np.arange(N + 1)
    # conj(P) * rho^gamma, radial parts
    B = np.conj(c)[:, None] * sn[None, :] ** (l[:, None] + 2 * s.gamma) * cs[None, :] ** (N - l[:, None])
    theta = np.arange(grid.n_theta) * (TWO_PI / grid.n_theta)

    if separable:
        radial = (A * w) @ B.T  # [j, l]
        m1 = l[:, None] - l[None, :] + s.beta1  # theta1 frequency: j - l + beta1
        m2 = l[None, :] - l[:, None] + s.beta2  # theta2 frequency: l - j + beta2
        freqs = np.arange(-(2 * N + abs(s.beta1) + abs(s.beta2)), 2 * N + abs(s.beta1) + abs(s.beta2) + 1)
        trap = np.exp(1j * np.outer(freqs, theta)).mean(axis=1)
        off = freqs[0]
        total = np.sum(radial * trap[m1 - off] * trap[m2 - off])
    else:
        e1 = np.exp(1j * np.outer(l, theta))  # e^{i j theta}
        e2 = np.exp(1j * np.outer(N - l, theta))
        opP = np.einsum("jp,ja,jb->pab", A, e1, e2)
        Pc = np.einsum("lp,la,lb->pab", B, e1.conj(), e2.conj())
        f1 = np.exp(1j * s.beta1 * theta)[None, :, None] * np.exp(1j * s.beta2 * theta)[None, None, :]
        per_psi = (opP * Pc * f1).mean(axis=(1, 2))
        total = np.dot(w, per_psi)
    return complex(s.coeff) * complex(total)


def inner_product_quadrature(spec_a: HarmonicSpec, spec_b: HarmonicSpec, grid: QuadratureGrid | None = None) -> complex:
    """``<P_a, P_b>`` by direct sampling of both functions."""
    N = max(spec_a.N, spec_b.N)
    grid = grid or QuadratureGrid(n_psi=2 * N + 8, n_theta=2 * N + 4)

    def g(rho, t1, t2):
        return evaluate_array(spec_a, rho, t1, t2) * np.conj(evaluate_array(spec_b, rho, t1, t2))

    return integrate_s3(g, grid)


def orthonormality_defect_quadrature(N: int, branch: str = "P") -> float:
    worst = 0.0
    for k in range(N + 1):
        for m in range(k, N + 1):
            ip = inner_product_quadrature(HarmonicSpec(N, k, branch), HarmonicSpec(N, m, branch))
            worst = max(worst, abs(ip - (1.0 if k == m else 0.0)))
    return worst
