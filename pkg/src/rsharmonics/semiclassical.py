"""Matrix elements ``<Op_N(f) P_{N,k}, P_{N,k}>`` for monomial phase-space symbols.

A monomial symbol is

    f = coeff * rho^gamma e^{i beta1 theta1} e^{i beta2 theta2} eta^a xi1^b1 xi2^b2 .

The position part acts by multiplication and ``eta^a xi1^b1 xi2^b2`` acts as
``(N^-1 D_rho / i)^a (N^-1 D_theta1 / i)^b1 (N^-1 D_theta2 / i)^b2`` term by term on the
monomial expansion of ``P_{N,k}``.  Angular integration leaves a single sum
over ``j`` that pairs ``z^j w^{N-j}`` with ``z^{j+beta} w^{N-j-beta}``
(``beta = beta1 = -beta2``; anything else vanishes), and the ``rho``-integral of
each pair is a sum of Beta functions, one per Leibniz split ``a1 + a2 = a``
of the ``rho``-derivative.

Every Gamma function is normalised against its neighbours before any
exponentiation: each pair contributes

    T(j) = sum_{a1+a2=a} C(a,a1) (-1)^a2 (j/2)_a1 ((N-j)/2)_a2
           * Gamma(j+1+gamma+beta/2-a1) / sqrt(j! (j+beta)!)
           * Gamma(N-j+1-beta/2-a2) / sqrt((N-j)! (N-j-beta)!)

(falling factorials) and the matrix element is

    coeff e^{-2 pi i k beta/(N+1)} (-i)^a N! / ((N+gamma-a+1)! N^a)
      * sum_j sigma_j sigma_{j+beta} (j/N)^b1 (1-j/N)^b2 T(j).

For ``a >= 1`` the splits cancel to relative order ``1/N`` inside ``T(j)``;
the splits are accumulated in double-double and the ``j``-sum with
``math.fsum``.
"""

from __future__ import annotations

import cmath
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from ._fit import loglog_fit
from ._special import dd_sum, log_gamma_ratio
from .rudin_shapiro import generate

CANCELLATION_FLOOR = 1e-12
FIT_MIN_N = 64


class GammaDomainError(ValueError):
    """A Beta-function argument is non-positive: the rho-integral diverges."""


@dataclass(frozen=True)
class MonomialSymbol:
    gamma: int = 0
    beta1: int = 0
    beta2: int = 0
    a: int = 0
    b1: int = 0
    b2: int = 0
    coeff: complex = 1.0

    def __post_init__(self):
        for name in ("gamma", "a", "b1", "b2"):
            if int(getattr(self, name)) < 0:
                raise ValueError(f"symbol exponent {name} must be >= 0")

    @property
    def exponents(self) -> tuple[int, int, int, int, int, int]:
        return (self.gamma, self.beta1, self.beta2, self.a, self.b1, self.b2)

    @property
    def selected(self) -> bool:
        """True when the angular frequencies can pair two basis monomials."""
        return self.beta1 == -self.beta2

    @property
    def case(self) -> str:
        if not self.selected:
            return "zero_selection"
        if self.a >= 1:
            return "case3"
        return "case1" if self.beta1 == 0 else "case2"

    def conjugate(self) -> "MonomialSymbol":
        return MonomialSymbol(self.gamma, -self.beta1, -self.beta2, self.a, self.b1, self.b2, complex(self.coeff).conjugate())

    @classmethod
    def parse(cls, text: str) -> "MonomialSymbol":
        """Parse ``g=<gamma>,b1=<beta1>,b2=<beta2>,a=<a>,x1=<b1>,x2=<b2>[,c=<coeff>]``.

        Omitted keys default to 0 (coefficient to 1).
        """
        keys = {"g": "gamma", "b1": "beta1", "b2": "beta2", "a": "a", "x1": "b1", "x2": "b2"}
        values: dict = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            m = re.fullmatch(r"(\w+)\s*=\s*(\S+)", part)
            if not m:
                raise ValueError(f"malformed symbol component {part!r}")
            key, raw = m.groups()
            if key == "c":
                values["coeff"] = complex(raw.replace("i", "j"))
            elif key in keys:
                values[keys[key]] = int(raw)
            else:
                raise ValueError(f"unknown symbol key {key!r}")
        return cls(**values)

    def format(self) -> str:
        return f"g={self.gamma},b1={self.beta1},b2={self.beta2},a={self.a},x1={self.b1},x2={self.b2}"


@dataclass(frozen=True)
class SymbolPolynomial:
    terms: tuple[MonomialSymbol, ...] = ()

    def __init__(self, terms: Iterable[MonomialSymbol] = ()):
        object.__setattr__(self, "terms", tuple(terms))

    def __add__(self, other):
        if isinstance(other, MonomialSymbol):
            return SymbolPolynomial(self.terms + (other,))
        return SymbolPolynomial(self.terms + other.terms)


@dataclass
class MatrixElementReport:
    value: complex
    case: str
    N: int
    k: int
    max_term_magnitude: float
    cancellation_ratio: float
    method: str = "closed_sum"
    precision_flag: bool = False

    def to_json(self) -> dict:
        d = asdict(self)
        d["value"] = [self.value.real, self.value.imag]
        return d


def clifford_limit(s: MonomialSymbol) -> complex:
    """Average of ``f(q, xi_rho)`` over the Clifford tori family: the limiting matrix element.

    ``xi_rho = (0, rho, 1 - rho)`` kills ``eta^a`` for ``a >= 1`` and the torus
    average kills nonzero angular frequencies, leaving
    ``int_0^1 rho^(gamma+b1) (1-rho)^b2 d rho``.
    """
    if s.a != 0 or s.beta1 != 0 or s.beta2 != 0:
        return 0j
    p, q = s.gamma + s.b1, s.b2
    beta = math.factorial(p) * math.factorial(q) / math.factorial(p + q + 1)
    return complex(s.coeff) * beta


# --- rho integrals -----------------------------------------------------------


def _splits(a: int):
    for a1 in range(a + 1):
        yield a1, a - a1


def _split_coefficients(j, N: int, a: int):
    """``C(a,a1) (-1)^a2 (j/2)_a1 ((N-j)/2)_a2`` per split (rows) and j (columns)."""
    j = np.asarray(j, dtype=float)
    rows = []
    for a1, a2 in _splits(a):
        f1 = np.ones_like(j)
        f2 = np.ones_like(j)
        for i in range(a1):
            f1 = f1 * (j / 2.0 - i)
        for i in range(a2):
            f2 = f2 * ((N - j) / 2.0 - i)
        rows.append(math.comb(a, a1) * (-1) ** a2 * f1 * f2)
    return np.array(rows).reshape(a + 1, *j.shape)


def _gamma_args(j, N: int, gamma: int, beta: int, a: int):
    j = np.asarray(j, dtype=float)
    args1 = np.array([j + gamma + beta / 2.0 - a1 + 1.0 for a1, _ in _splits(a)])
    args2 = np.array([N - j - beta / 2.0 - a2 + 1.0 for _, a2 in _splits(a)])
    return args1.reshape(a + 1, *j.shape), args2.reshape(a + 1, *j.shape)


def admissible(j, N: int, gamma: int, beta: int, a: int) -> np.ndarray:
    """Mask of ``j`` whose pair ``(j, j + beta)`` lies in range and has a convergent rho-integral.

    A split whose falling-factorial coefficient vanishes contributes nothing
    and does not count against convergence.
    """
    j = np.asarray(j)
    in_range = (j >= 0) & (j <= N) & (j + beta >= 0) & (j + beta <= N)
    coef = _split_coefficients(j, N, a)
    g1, g2 = _gamma_args(j, N, gamma, beta, a)
    bad = (coef != 0) & ((g1 <= 0) | (g2 <= 0))
    return in_range & ~np.any(bad, axis=0)


def admissible_indices(N: int, gamma: int, beta: int, a: int) -> np.ndarray:
    j = np.arange(N + 1)
    return j[admissible(j, N, gamma, beta, a)]


def rho_integral(j: int, N: int, gamma: int, beta: int, a: int) -> tuple[float, float]:
    """``int_0^1 (d/drho)^a[rho^(j/2) (1-rho)^((N-j)/2)] rho^(j/2+gamma+beta/2) (1-rho)^((N-j)/2-beta/2) drho``.

    Returned as ``(sign, log|value|)``; ``(0.0, -inf)`` if it vanishes.
    Raises :class:`GammaDomainError` when the integral diverges.
    """
    coef = _split_coefficients(j, N, a)
    g1, g2 = _gamma_args(j, N, gamma, beta, a)
    live = coef != 0
    if np.any(live & ((g1 <= 0) | (g2 <= 0))):
        raise GammaDomainError(f"divergent rho-integral at j={j}, N={N}, gamma={gamma}, beta={beta}, a={a}")
    if not np.any(live):
        return 0.0, -math.inf
    logs = np.full(coef.shape, -np.inf)
    logs[live] = (
        np.log(np.abs(coef[live])) + gammaln(g1[live]) + gammaln(g2[live]) - gammaln(N + gamma - a + 2.0)
    )
    top = float(np.max(logs))
    total = math.fsum(float(v) for v in (np.sign(coef[live]) * np.exp(logs[live] - top)))
    if total == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, total), top + math.log(abs(total))


def normalized_pair_terms(j, N: int, gamma: int, beta: int, a: int) -> np.ndarray:
    """Per-split ``T`` terms (rows) for admissible ``j`` (columns).

    ``sum(rows) = (N+gamma-a+1)! rho_integral / sqrt(j! (N-j)! (j+beta)! (N-j-beta)!)``.
    """
    j = np.asarray(j, dtype=float)
    coef = _split_coefficients(j, N, a)
    g1, g2 = _gamma_args(j, N, gamma, beta, a)
    out = np.zeros_like(coef)
    half_1 = 0.5 * log_gamma_ratio(j + 1.0, float(beta))
    half_2 = 0.5 * log_gamma_ratio(N - j + 1.0, float(-beta))
    for r, (a1, a2) in enumerate(_splits(a)):
        live = coef[r] != 0
        if not np.any(live):
            continue
        jl = j[live]
        log_r1 = log_gamma_ratio(jl + 1.0, gamma + beta / 2.0 - a1) - half_1[live]
        log_r2 = log_gamma_ratio(N - jl + 1.0, -beta / 2.0 - a2) - half_2[live]
        out[r, live] = coef[r, live] * np.exp(log_r1 + log_r2)
    return out


# --- matrix elements ---------------------------------------------------------


def _check_nk(N: int, k: int) -> None:
    if N < 1:
        raise ValueError(f"matrix elements need N >= 1, got {N}")
    if not 0 <= k <= N:
        raise ValueError(f"k must lie in [0, N={N}], got {k}")


def _log_prefactor(N: int, gamma: int, a: int) -> float:
    # log( N! / ((N+gamma-a+1)! N^a) )
    return -log_gamma_ratio(N + 1.0, gamma - a + 1.0) - a * math.log(N)


@lru_cache(maxsize=8192)
def _reduced_sum(N: int, gamma: int, beta: int, a: int, b1: int, b2: int, branch: str):
    # k- and coeff-independent part: (sum_j, scale, max |split term|, sum |split terms|)
    j = admissible_indices(N, gamma, beta, a)
    if j.size == 0:
        return 0.0, 0.0, 0.0, 0.0
    sigma = generate(N + 1, branch).values.astype(float)
    jf = j.astype(float)
    weight = sigma[j] * sigma[j + beta] * (jf / N) ** b1 * (1.0 - jf / N) ** b2
    split_terms = normalized_pair_terms(j, N, gamma, beta, a) * weight
    total = math.fsum(dd_sum(split_terms).tolist())
    mag = np.abs(split_terms)
    scale = math.exp(_log_prefactor(N, gamma, a))
    return total, scale, float(mag.max()), math.fsum(mag.ravel().tolist())


def matrix_element(N: int, k: int, s: MonomialSymbol, branch: str = "P") -> MatrixElementReport:
    """Closed-sum value of ``<Op_N(f) P_{N,k}, P_{N,k}>`` with diagnostics."""
    _check_nk(N, k)
    case = s.case
    if case == "zero_selection":
        return MatrixElementReport(0j, case, N, k, 0.0, 1.0)
    beta = s.beta1
    total, scale, max_mag, denom = _reduced_sum(N, s.gamma, beta, s.a, s.b1, s.b2, branch)
    phase = cmath.exp(-2j * math.pi * ((k * beta) % (N + 1)) / (N + 1)) * (-1j) ** s.a
    coeff = complex(s.coeff)
    ratio = min(1.0, abs(total) / denom) if denom > 0 else 1.0
    return MatrixElementReport(
        value=coeff * phase * scale * total,
        case=case,
        N=N,
        k=k,
        max_term_magnitude=abs(coeff) * scale * max_mag,
        cancellation_ratio=ratio,
        precision_flag=(case == "case3" and ratio < CANCELLATION_FLOOR),
    )


def matrix_element_poly(N: int, k: int, p: SymbolPolynomial, branch: str = "P") -> complex:
    total = 0j
    for term in p.terms:
        total += matrix_element(N, k, term, branch).value
    return total


# --- convergence studies -----------------------------------------------------

K_POLICIES: dict[str, Callable[[int], int]] = {
    "zero": lambda N: 0,
    "middle": lambda N: N // 2,
    "last": lambda N: N,
}


@dataclass
class ConvergenceRow:
    N: int
    k: int
    value: complex
    deviation: float
    precision_flag: bool = False


@dataclass
class ConvergenceStudy:
    symbol: MonomialSymbol
    limit: complex
    rows: list[ConvergenceRow] = field(default_factory=list)
    slope: float | None = None
    intercept: float | None = None
    exact: bool = False

    def fit_json(self) -> dict:
        return {
            "symbol": self.symbol.format(),
            "limit": [self.limit.real, self.limit.imag],
            "slope": self.slope,
            "intercept": self.intercept,
            "exact": self.exact,
            "fit_min_N": FIT_MIN_N,
            "precision_flags": sum(r.precision_flag for r in self.rows),
        }


def _study_row(args) -> ConvergenceRow:
    N, k, s, branch, limit = args
    rep = matrix_element(N, k, s, branch)
    return ConvergenceRow(N, k, rep.value, abs(rep.value - limit), rep.precision_flag)


def convergence_study(
    s: MonomialSymbol,
    N_list: Sequence[int],
    k_policy: str | Callable[[int], int] = "zero",
    branch: str = "P",
    *,
    jobs: int = 1,
) -> ConvergenceStudy:
    """Deviations ``|matrix_element - clifford_limit|`` over ``N_list`` and their log-log slope.

    Points with ``N < 64`` are excluded from the fit.  Symbols of the form
    ``rho^gamma`` whose deviations are all below 1e-12 are reported as exact
    and left unfitted.
    """
    Ns = sorted(set(int(n) for n in N_list))
    if len(Ns) < 3:
        raise ValueError("convergence study needs at least 3 values of N")
    pick = K_POLICIES[k_policy] if isinstance(k_policy, str) else k_policy
    limit = clifford_limit(s)
    tasks = [(N, pick(N), s, branch, limit) for N in Ns]
    if jobs == 1:
        rows = [_study_row(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_study_row, tasks))
    study = ConvergenceStudy(s, limit, sorted(rows, key=lambda r: r.N))

    if s.case == "case1" and s.b1 == 0 and s.b2 == 0 and all(r.deviation < 1e-12 for r in rows):
        study.exact = True
        return study
    fit_rows = [r for r in study.rows if r.N >= FIT_MIN_N]
    if len(fit_rows) >= 3 and all(r.deviation > 0 for r in fit_rows):
        study.slope, study.intercept = loglog_fit([r.N for r in fit_rows], [r.deviation for r in fit_rows])
    return study


def case3_term_bound_check(N: int, s: MonomialSymbol, bound: str = "uniform") -> float:
    """Measured constant in a per-pair bound on the normalised term ``T(j)``.

    ``bound="uniform"``: largest ``|T(j)| N / max(j,1)^gamma``, the constant
    in ``|pair term| <= C j^gamma / ((N+gamma-a+1)! N)``.  Near ``j = 0`` and
    ``j = N`` the split cancellation only reaches ``O(1/j + 1/(N-j))``, so this
    constant grows like ``N/2``.

    ``bound="edge"``: largest ``|T(j)| / (J^gamma (1/J + 1/(N-j)'))`` with
    ``J = max(j,1)``, ``(N-j)' = max(N-j,1)``; this one stays bounded in ``N``.
    """
    if s.a < 1:
        raise ValueError("the term-bound check applies to symbols with a >= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    if bound not in ("uniform", "edge"):
        raise ValueError(f"unknown bound form {bound!r}")
    beta = s.beta1
    j = admissible_indices(N, s.gamma, beta, s.a)
    if j.size == 0:
        return 0.0
    pair = np.abs(dd_sum(normalized_pair_terms(j, N, s.gamma, beta, s.a)))
    jj = np.maximum(j, 1).astype(float)
    if bound == "uniform":
        ratio = pair * N / jj**s.gamma
    else:
        ratio = pair / (jj**s.gamma * (1.0 / jj + 1.0 / np.maximum(N - j, 1)))
    return float(ratio.max())
