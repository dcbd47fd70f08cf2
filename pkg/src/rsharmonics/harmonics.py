"""The Rudin-Shapiro basis ``P_{N,k}`` of holomorphic degree-N harmonics.

``P_{N,k}`` is the unit-normalised combination

    (N+1)^{-1/2} sum_j sigma_j e^{2 pi i jk/(N+1)} z^j w^{N-j} / ||z^j w^{N-j}||

and since ``(N+1) ||z^j w^{N-j}||^2 = 1 / C(N, j)`` each term has modulus
``sqrt(C(N,j) rho^j (1-rho)^(N-j))``: the square root of a binomial weight.
With ``phi = theta1 - theta2`` one has ``P(rho, theta1, theta2) = e^{iN theta2} H_k(rho, phi)``
where ``H_k`` is a trigonometric polynomial in ``phi``; sup-norms only need ``H_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .hopf import TWO_PI, HopfPoint
from .rudin_shapiro import BRANCHES, generate

EXACT_N_MAX = 64
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class HarmonicSpec:
    N: int
    k: int = 0
    branch: str = "P"

    def __post_init__(self):
        if self.N < 0:
            raise ValueError(f"degree N must be >= 0, got {self.N}")
        if not 0 <= self.k <= self.N:
            raise ValueError(f"k must lie in [0, N={self.N}], got {self.k}")
        if self.branch not in BRANCHES:
            raise ValueError(f"unknown branch {self.branch!r}")


def _check_j(N: int, j: int) -> None:
    if not 0 <= j <= N:
        raise ValueError(f"need 0 <= j <= N, got j={j}, N={N}")


def monomial_norm_sq(N: int, j: int) -> Fraction:
    """Exact ``||z^j w^{N-j}||^2 = j! (N-j)! / (N+1)!`` for ``N <= 64``."""
    _check_j(N, j)
    if N > EXACT_N_MAX:
        raise ValueError(f"exact norms are kept for N <= {EXACT_N_MAX}; use log_monomial_norm_sq")
    return Fraction(math.factorial(j) * math.factorial(N - j), math.factorial(N + 1))


def log_monomial_norm_sq(N: int, j) -> np.ndarray | float:
    """``log ||z^j w^{N-j}||^2`` for any ``N``."""
    ja = np.asarray(j)
    if np.any(ja < 0) or np.any(ja > N):
        raise ValueError(f"need 0 <= j <= N={N}")
    out = gammaln(ja + 1.0) + gammaln(N - ja + 1.0) - gammaln(N + 2.0)
    return out if np.ndim(out) else float(out)


def _log_binom(N: int) -> np.ndarray:
    j = np.arange(N + 1)
    return gammaln(N + 1.0) - gammaln(j + 1.0) - gammaln(N - j + 1.0)


def amplitudes(N: int, rho) -> np.ndarray:
    """``sqrt(C(N,j) rho^j (1-rho)^(N-j))`` for ``j = 0..N``; trailing axis is ``j``.

    Evaluated in the log domain with ``0^0 = 1``.
    """
    rho = np.asarray(rho, dtype=float)[..., None]
    j = np.arange(N + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        lr = np.where(j == 0, 0.0, j * np.log(rho))
        l1 = np.where(j == N, 0.0, (N - j) * np.log1p(-rho))
    return np.exp(0.5 * (_log_binom(N) + lr + l1))


def coefficients(spec: HarmonicSpec) -> np.ndarray:
    """``sigma_j e^{2 pi i jk/(N+1)}`` for ``j = 0..N``."""
    N = spec.N
    sigma = generate(N + 1, spec.branch).values.astype(float)
    j = np.arange(N + 1)
    # reduce jk mod N+1 before scaling to keep the phase exact-ish for large N
    return sigma * np.exp(1j * TWO_PI * ((j * spec.k) % (N + 1)) / (N + 1))


def evaluate(spec: HarmonicSpec, p: HopfPoint) -> complex:
    """``P_{N,k}`` at a Hopf point."""
    return complex(evaluate_array(spec, p.rho, p.theta1, p.theta2))


def evaluate_array(spec: HarmonicSpec, rho, theta1, theta2) -> np.ndarray:
    """Vectorised :func:`evaluate` over broadcastable coordinate arrays."""
    rho, theta1, theta2 = np.broadcast_arrays(
        np.asarray(rho, float), np.asarray(theta1, float), np.asarray(theta2, float)
    )
    N = spec.N
    terms = amplitudes(N, rho) * coefficients(spec)
    j = np.arange(N + 1)
    phase = np.exp(1j * (j * theta1[..., None] + (N - j) * theta2[..., None]))
    return np.sum(terms * phase, axis=-1)


def _relative_profile(spec: HarmonicSpec, rho: float, phi) -> np.ndarray:
    # H_k(rho, phi) by direct summation
    phi = np.asarray(phi, dtype=float)
    c = amplitudes(spec.N, rho) * coefficients(spec)
    j = np.arange(spec.N + 1)
    return np.exp(1j * np.multiply.outer(phi, j)) @ c


def evaluate_profile(spec: HarmonicSpec, rho: float, phi_grid_size: int) -> np.ndarray:
    """``H_k(rho, 2 pi m / M)`` for ``m = 0..M-1`` via one FFT.

    ``P(rho, theta1, theta2) = e^{i N theta2} H_k(rho, theta1 - theta2)``.
    """
    M = int(phi_grid_size)
    if M < 4 * (spec.N + 1):
        raise ValueError(f"phi grid of {M} points is below 4(N+1) = {4 * (spec.N + 1)}")
    c = amplitudes(spec.N, rho) * coefficients(spec)
    return np.fft.ifft(c, M) * M


@dataclass(frozen=True)
class SupNormParams:
    psi_points_per_degree: int = 4
    phi_points_per_degree: int = 4
    golden_iterations: int = 20
    sweeps: int = 3
    candidates: int = 4
    batch: int = 256


def sup_norm(spec: HarmonicSpec, params: SupNormParams = SupNormParams()) -> tuple[float, HopfPoint]:
    """Maximum of ``|P_{N,k}|`` over S^3 and a point attaining it.

    A ``(psi, phi)`` grid scan (``rho = sin^2 psi``; one FFT per psi row) is
    followed by alternating golden-section refinement around the best cells.
    """
    N = spec.N
    if N == 0:
        return 1.0, HopfPoint(0.5, 0.0, 0.0)
    n_psi = params.psi_points_per_degree * N
    M = params.phi_points_per_degree * (N + 1)
    dpsi = (math.pi / 2.0) / n_psi
    psi = (np.arange(n_psi) + 0.5) * dpsi
    c = coefficients(spec)

    # best |H|^2 per psi row, keeping the argmax in phi
    row_best = np.empty(n_psi)
    row_arg = np.empty(n_psi, dtype=np.int64)
    for s in range(0, n_psi, params.batch):
        rows = amplitudes(N, np.sin(psi[s : s + params.batch]) ** 2) * c
        vals = np.abs(np.fft.ifft(rows, M, axis=-1) * M) ** 2
        row_arg[s : s + rows.shape[0]] = np.argmax(vals, axis=-1)
        row_best[s : s + rows.shape[0]] = vals[np.arange(rows.shape[0]), row_arg[s : s + rows.shape[0]]]

    dphi = TWO_PI / M
    order = np.argsort(row_best)[::-1][: params.candidates]
    best_val, best_psi, best_phi = -1.0, 0.0, 0.0
    for i in order:
        val, ps, ph = _refine(spec, c, psi[i], row_arg[i] * dphi, dpsi, dphi, params)
        if val > best_val:
            best_val, best_psi, best_phi = val, ps, ph
    rho = math.sin(best_psi) ** 2
    return math.sqrt(best_val), HopfPoint(rho, best_phi, 0.0)


def _refine(spec, c, psi0, phi0, dpsi, dphi, params):
    N = spec.N
    j = np.arange(N + 1)

    def h2(psi, phi):
        a = amplitudes(N, math.sin(psi) ** 2) * c
        return abs(np.dot(a, np.exp(1j * j * phi))) ** 2

    psi, phi = psi0, phi0
    for _ in range(params.sweeps):
        lo, hi = max(0.0, psi - dpsi), min(math.pi / 2.0, psi + dpsi)
        psi = _golden_max(lambda x: h2(x, phi), lo, hi, params.golden_iterations, psi)
        phi = _golden_max(lambda x: h2(psi, x), phi - dphi, phi + dphi, params.golden_iterations, phi)
    return h2(psi, phi), psi, phi


def _golden_max(f, lo, hi, iterations, start):
    # golden-section search; never returns worse than ``start``
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iterations):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    best = x1 if f1 >= f2 else x2
    return best if max(f1, f2) >= f(start) else start


def monomial_supnorm_ratio(N: int, j: int) -> float:
    """``sup |z^j w^{N-j}| / ||z^j w^{N-j}||_{L^2}``, attained on the torus ``rho = j/N``."""
    _check_j(N, j)
    if j in (0, N):
        return math.sqrt(N + 1.0)
    t = j / N
    log_peak = 0.5 * (j * math.log(t) + (N - j) * math.log1p(-t))
    return math.exp(log_peak - 0.5 * log_monomial_norm_sq(N, j))


def gram_matrix(N: int, branch: str = "P") -> np.ndarray:
    """``<P_{N,k}, P_{N,l}>`` from coefficients, using orthogonality of the monomials."""
    sigma = generate(N + 1, branch).values.astype(float)
    j = np.arange(N + 1)
    k = np.arange(N + 1)
    C = sigma[:, None] * np.exp(1j * TWO_PI * ((np.outer(j, k)) % (N + 1)) / (N + 1)) / math.sqrt(N + 1)
    return C.T @ C.conj()


def orthonormality_defect(N: int, branch: str = "P") -> float:
    """``max_{k,l} |<P_{N,k}, P_{N,l}> - delta_{kl}|``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    G = gram_matrix(N, branch)
    return float(np.max(np.abs(G - np.eye(N + 1))))


def holomorphic_monomial(N: int, j: int, x) -> complex:
    """``z^j w^{N-j}`` at ``x = (x1, y1, x2, y2)`` in R^4."""
    x1, y1, x2, y2 = x
    return complex(x1, y1) ** j * complex(x2, y2) ** (N - j)


def ambient_harmonicity_residual(N: int, j: int, x, h: float = 1e-3) -> float:
    """Central-difference R^4 Laplacian of ``z^j w^{N-j}``; max of |Re|, |Im| parts.

    A harmonic homogeneous polynomial restricts to a sphere eigenfunction with
    eigenvalue ``-N(N+2)``, so a residual at finite-difference noise level
    confirms the eigenfunction relation for every ``P_{N,k}``.
    """
    _check_j(N, j)
    if h <= 0:
        raise ValueError("step h must be positive")
    x = np.asarray(x, dtype=float)
    f0 = holomorphic_monomial(N, j, x)
    lap = 0j
    for axis in range(4):
        e = np.zeros(4)
        e[axis] = h
        lap += holomorphic_monomial(N, j, x + e) - 2.0 * f0 + holomorphic_monomial(N, j, x - e)
    lap /= h * h
    return max(abs(lap.real), abs(lap.imag))
