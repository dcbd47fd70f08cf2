import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rsharmonics.harmonics import (
    HarmonicSpec,
    ambient_harmonicity_residual,
    amplitudes,
    evaluate,
    evaluate_array,
    evaluate_profile,
    monomial_norm_sq,
    monomial_supnorm_ratio,
    orthonormality_defect,
    sup_norm,
)
from rsharmonics.hopf import GridSpec, HopfPoint, torus_average, volume_integral
from rsharmonics.quadrature import orthonormality_defect_quadrature


@pytest.mark.parametrize("N, j, expected", [(2, 1, Fraction(1, 6)), (0, 0, Fraction(1)), (4, 2, Fraction(1, 30))])
def test_monomial_norm_examples(N, j, expected):
    assert monomial_norm_sq(N, j) == expected


def test_monomial_norm_matches_quadrature():
    for N in range(7):
        for j in range(N + 1):
            val = volume_integral(lambda r, a, b: r**j * (1 - r) ** (N - j), GridSpec(16, 4))
            assert val.real == pytest.approx(float(monomial_norm_sq(N, j)), rel=1e-13)


def test_monomial_norm_limits():
    with pytest.raises(ValueError):
        monomial_norm_sq(65, 3)
    with pytest.raises(ValueError):
        monomial_norm_sq(4, 5)


def test_spec_validation():
    with pytest.raises(ValueError):
        HarmonicSpec(-1)
    with pytest.raises(ValueError):
        HarmonicSpec(3, 4)
    with pytest.raises(ValueError):
        HarmonicSpec(3, 0, "X")


def test_evaluate_examples():
    assert evaluate(HarmonicSpec(0), HopfPoint(0.3, 1.0, 2.0)) == pytest.approx(1.0)
    # N = 1, k = 0: sqrt(1 - rho) e^{i theta2} + sqrt(rho) e^{i theta1}
    assert evaluate(HarmonicSpec(1), HopfPoint(0.5)) == pytest.approx(math.sqrt(2.0))
    assert evaluate(HarmonicSpec(1, 1), HopfPoint(0.5)) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("rho, j", [(0.0, 0), (1.0, -1)])
def test_poles_single_term(rho, j):
    N = 9
    spec = HarmonicSpec(N, 4)
    val = evaluate(spec, HopfPoint(rho, 0.7, 1.3))
    assert abs(val) == pytest.approx(1.0, rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 40), st.floats(0.0, 1.0))
def test_amplitudes_sum_to_one(N, rho):
    assert np.sum(amplitudes(N, rho) ** 2) == pytest.approx(1.0, rel=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 30), st.data())
def test_unit_mean_on_each_torus(N, data):
    k = data.draw(st.integers(0, N))
    rho = data.draw(st.floats(0.0, 1.0))
    spec = HarmonicSpec(N, k)
    avg = torus_average(lambda a, b: np.abs(evaluate_array(spec, rho, a, b)) ** 2, rho, 2 * N + 4)
    assert avg.real == pytest.approx(1.0, rel=1e-12)


def test_profile_matches_direct_evaluation():
    spec = HarmonicSpec(17, 5, "Q")
    M = 4 * 18
    prof = evaluate_profile(spec, 0.37, M)
    phi = 2 * np.pi * np.arange(M) / M
    direct = evaluate_array(spec, 0.37, phi, 0.0)
    assert np.allclose(prof, direct, atol=1e-13)


def test_profile_grid_floor():
    with pytest.raises(ValueError):
        evaluate_profile(HarmonicSpec(10), 0.5, 43)


def test_sup_norm_small_cases():
    value, p = sup_norm(HarmonicSpec(0))
    assert value == 1.0
    value, p = sup_norm(HarmonicSpec(1))
    assert value == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert p.rho == pytest.approx(0.5, abs=1e-6)


def test_sup_norm_is_attained():
    spec = HarmonicSpec(63, 10)
    value, p = sup_norm(spec)
    assert abs(evaluate(spec, p)) == pytest.approx(value, rel=1e-12)
    # no sampled point exceeds the reported maximum
    rng = np.random.default_rng(3)
    sample = evaluate_array(spec, rng.random(20000), rng.random(20000) * 2 * np.pi, 0.0)
    assert np.max(np.abs(sample)) <= value * (1 + 1e-12)


def test_sup_norm_independent_of_k():
    N = 127
    vals = [sup_norm(HarmonicSpec(N, k))[0] for k in (0, 1, 64, 127)]
    assert max(vals) - min(vals) <= 1e-10 * max(vals)


@pytest.mark.parametrize("N, j, expected", [(2, 1, math.sqrt(6) / 2), (4, 2, math.sqrt(30) / 4)])
def test_monomial_supnorm_ratio(N, j, expected):
    assert monomial_supnorm_ratio(N, j) == pytest.approx(expected, rel=1e-14)


def test_monomial_supnorm_ratio_grows():
    # a single monomial concentrates: ratio ~ (pi N / 2)^(1/4) ... sqrt(N+1) at the ends
    r = monomial_supnorm_ratio(100, 50)
    assert (math.pi * 100 / 2) ** 0.25 / 4 < r < 4 * (math.pi * 100 / 2) ** 0.25
    assert monomial_supnorm_ratio(100, 0) == pytest.approx(math.sqrt(101))


@pytest.mark.parametrize("branch", ["P", "Q"])
def test_orthonormality(branch):
    assert max(orthonormality_defect(N, branch) for N in range(0, 200, 7)) < 1e-12


def test_orthonormality_by_quadrature():
    assert max(orthonormality_defect_quadrature(N) for N in range(6)) < 1e-12


@pytest.mark.parametrize("N", [1, 2, 5, 8])
def test_harmonicity(N):
    rng = np.random.default_rng(N)
    for j in range(N + 1):
        x = rng.normal(size=4)
        x /= np.linalg.norm(x)
        coarse = ambient_harmonicity_residual(N, j, x, h=1e-2)
        fine = ambient_harmonicity_residual(N, j, x, h=5e-3)
        # pure O(h^2) truncation: bounded by the fourth-derivative scale and
        # quartered when h halves, so the Laplacian itself vanishes
        assert coarse <= N**4 * 1e-4
        if coarse > 1e-8:
            assert 3.5 < coarse / fine < 4.5


def test_harmonicity_step():
    with pytest.raises(ValueError):
        ambient_harmonicity_residual(3, 1, [1, 0, 0, 0], h=0.0)
