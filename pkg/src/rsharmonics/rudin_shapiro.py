"""Rudin-Shapiro sign sequences and their aperiodic autocorrelations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from ._fit import loglog_fit

BRANCHES = ("P", "Q")


class PrecisionError(ArithmeticError):
    """A floating-point result could not be certified to its stated accuracy."""


@dataclass(frozen=True, eq=False)
class RSSequence:
    """A +-1 Rudin-Shapiro sequence of one branch."""

    branch: str
    values: np.ndarray

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"branch must be 'P' or 'Q', got {self.branch!r}")
        vals = np.asarray(self.values, dtype=np.int8)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def length(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other):
        if not isinstance(other, RSSequence):
            return NotImplemented
        return self.branch == other.branch and np.array_equal(self.values, other.values)

    def tolist(self) -> list[int]:
        return [int(v) for v in self.values]


def _check_branch(branch: str) -> None:
    if branch not in BRANCHES:
        raise ValueError(f"branch must be 'P' or 'Q', got {branch!r}")


def generate(n: int, branch: str = "P") -> RSSequence:
    """First ``n`` coefficients of the Rudin-Shapiro polynomial of the given branch.

    The pair recursion ``P' = P + x^(2^m) Q``, ``Q' = P - x^(2^m) Q`` on
    coefficient blocks is unrolled until at least ``n`` entries exist.
    """
    _check_branch(branch)
    if n < 1:
        raise ValueError(f"sequence length must be >= 1, got {n}")
    block = _block(max(0, (n - 1).bit_length()), branch)
    return RSSequence(branch, block[:n].copy())


@lru_cache(maxsize=64)
def _block(m: int, branch: str) -> np.ndarray:
    # coefficients of the 2^m-term polynomial; prefixes are shared across m
    p = np.ones(1, dtype=np.int8)
    q = np.ones(1, dtype=np.int8)
    for _ in range(m):
        p, q = np.concatenate([p, q]), np.concatenate([p, -q])
    out = p if branch == "P" else q
    out.setflags(write=False)
    return out


def pairs_11_sign(j) -> np.ndarray:
    """(-1) ** (number of possibly overlapping '11' blocks in binary j).

    Closed form of the P branch, used as an independent cross-check.
    """
    j = np.asarray(j, dtype=np.int64)
    return np.where(_popcount(j & (j >> 1)) % 2 == 0, 1, -1).astype(np.int8)


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x >>= 1
    return count


def _values(seq) -> np.ndarray:
    return seq.values if isinstance(seq, RSSequence) else np.asarray(seq)


def autocorrelation(seq, beta: int) -> int:
    """Truncated aperiodic autocorrelation ``sum_j s_j s_{j+beta}``.

    Only indices with both ``j`` and ``j + beta`` inside ``[0, n-1]`` count.
    """
    v = _values(seq).astype(np.int64)
    n = v.size
    if abs(beta) >= n:
        raise ValueError(f"|beta| must be < length {n}, got {beta}")
    b = abs(beta)
    return int(np.dot(v[: n - b], v[b:]))


def autocorr_spectrum(seq) -> np.ndarray:
    """Autocorrelations for all lags ``0..n-1`` by FFT, rounded to integers.

    Raises :class:`PrecisionError` if any pre-rounding value is more than
    0.25 away from an integer.
    """
    v = _values(seq).astype(float)
    n = v.size
    if n < 1:
        raise ValueError("empty sequence")
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(v, size)
    raw = np.fft.irfft(f * np.conj(f), size)[:n]
    out = np.rint(raw)
    drift = float(np.max(np.abs(raw - out)))
    if drift > 0.25:
        raise PrecisionError(f"FFT autocorrelation drift {drift:.3g} exceeds 0.25")
    return out.astype(np.int64)


def max_offpeak(seq) -> int:
    """``max_{0 < beta < n} |autocorrelation(seq, beta)|`` (0 for n = 1)."""
    spec = autocorr_spectrum(seq)
    return int(np.max(np.abs(spec[1:]))) if spec.size > 1 else 0


def autocorr_growth_exponent(
    lengths: Sequence[int],
    branch: str = "P",
    *,
    sequence_factory: Callable[[int, str], object] = generate,
) -> tuple[float, float]:
    """Fit ``log max|autocorrelation|`` against ``log n``; returns (slope, intercept).

    ``sequence_factory`` is a test seam for injecting non-RS sequences.
    """
    lengths = sorted(set(int(n) for n in lengths))
    if len(lengths) < 3:
        raise ValueError("need at least 3 distinct lengths to fit a growth exponent")
    peaks = [max_offpeak(sequence_factory(n, branch)) for n in lengths]
    return loglog_fit(lengths, peaks)
