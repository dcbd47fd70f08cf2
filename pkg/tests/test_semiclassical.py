import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rsharmonics.quadrature import matrix_element_quadrature
from rsharmonics.semiclassical import (
    GammaDomainError,
    MonomialSymbol,
    SymbolPolynomial,
    case3_term_bound_check,
    clifford_limit,
    convergence_study,
    matrix_element,
    matrix_element_poly,
    normalized_pair_terms,
    rho_integral,
)

S = MonomialSymbol
CASE2 = S(0, 1, -1, 0, 0, 0)


def case1_oracle(N, s):
    # each pair integrates C(N,j) rho^(j+gamma) (1-rho)^(N-j), an exact Beta value
    f = math.factorial
    total = Fraction(0)
    for j in range(N + 1):
        weight = Fraction(j, N) ** s.b1 * Fraction(N - j, N) ** s.b2
        total += weight * math.comb(N, j) * Fraction(f(j + s.gamma) * f(N - j), f(N + s.gamma + 1))
    return float(total)


# --- symbols -----------------------------------------------------------------


def test_parse_and_format():
    s = S.parse("g=2,b1=1,b2=-1,a=0,x1=1,x2=0,c=2+1i")
    assert s.exponents == (2, 1, -1, 0, 1, 0) and s.coeff == 2 + 1j
    assert S.parse(s.format()).exponents == s.exponents
    assert S.parse("g=3") == S(3)


@pytest.mark.parametrize("text", ["g=1,zz=2", "g", "g=x"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        S.parse(text)


def test_negative_exponent():
    with pytest.raises(ValueError):
        S(gamma=-1)


@pytest.mark.parametrize(
    "s, case",
    [(S(2), "case1"), (S(0, 2, -2), "case2"), (S(0, 0, 0, 1), "case3"), (S(0, 1, 1), "zero_selection")],
)
def test_case_labels(s, case):
    assert s.case == case


# --- limits and rho-integrals -----------------------------------------------------


@pytest.mark.parametrize(
    "s, expected",
    [(S(), 1.0), (S(1), 0.5), (S(2), 1 / 3), (S(0, 0, 0, 0, 1, 1), 1 / 6), (S(0, 1, -1), 0.0), (S(0, 0, 0, 1), 0.0)],
)
def test_clifford_limit(s, expected):
    assert clifford_limit(s) == pytest.approx(expected)


def test_rho_integral_beta_case():
    # a = 0: a plain Beta integral
    for N, j, g in [(4, 2, 0), (7, 3, 2), (30, 11, 5)]:
        sign, logv = rho_integral(j, N, g, 0, 0)
        expected = math.lgamma(j + g + 1) + math.lgamma(N - j + 1) - math.lgamma(N + g + 2)
        assert sign == 1.0 and logv == pytest.approx(expected, rel=1e-13)


def test_rho_integral_pi_over_8():
    sign, logv = rho_integral(0, 1, 0, 1, 0)
    assert sign * math.exp(logv) == pytest.approx(math.pi / 8, rel=1e-15)


def test_rho_integral_vanishing_derivative():
    sign, logv = rho_integral(0, 0, 1, 0, 1)
    assert sign == 0.0 and logv == -math.inf


def test_rho_integral_divergent():
    with pytest.raises(GammaDomainError):
        rho_integral(1, 2, 0, 0, 2)


def test_pair_terms_finite_on_admissible_set():
    terms = normalized_pair_terms(np.arange(1, 63), 64, 1, 0, 2)
    assert np.all(np.isfinite(terms))


# --- matrix elements ---------------------------------------------------------


@pytest.mark.parametrize(
    "N, k, s, expected",
    [(5, 0, S(), 1.0), (7, 3, S(2), 1 / 3), (1, 0, CASE2, math.pi / 8), (10, 0, S(0, 0, 0, 0, 1, 1), 0.15)],
)
def test_matrix_element_examples(N, k, s, expected):
    assert matrix_element(N, k, s).value == pytest.approx(expected, abs=1e-13)


def test_product_weights_closed_form():
    # (j/N)((N-j)/N) averaged uniformly over j: (N-1)/(6N)
    for N in (2, 10, 33, 500):
        assert matrix_element(N, 0, S(0, 0, 0, 0, 1, 1)).value == pytest.approx((N - 1) / (6 * N), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.integers(0, 6), st.integers(0, 3), st.integers(0, 3), st.data())
def test_case1_against_exact_rationals(N, g, b1, b2, data):
    k = data.draw(st.integers(0, N))
    s = S(g, 0, 0, 0, b1, b2)
    assert matrix_element(N, k, s).value == pytest.approx(case1_oracle(N, s), rel=1e-13, abs=1e-15)


def test_case1_exact_identity():
    for N in list(range(1, 40)) + [100, 1000, 4096]:
        for g in range(9):
            assert abs(matrix_element(N, N // 3, S(g)).value - 1 / (g + 1)) < 1e-12


def test_riemann_sum_bound():
    for N in (16, 64, 256, 1024):
        for g, b1, b2 in [(0, 1, 0), (1, 2, 1), (3, 0, 2), (2, 3, 3)]:
            s = S(g, 0, 0, 0, b1, b2)
            dev = abs(matrix_element(N, 0, s).value - clifford_limit(s))
            assert dev <= 10 * (g + b1 + b2 + 1) / N


def test_case3_eta_xi1_closed_form():
    # sum_j (j/N) C(N,j) rho^j (1-rho)^(N-j) = rho, so integration by parts gives -i / (2N(gamma+1))
    for N in (1, 8, 64, 1000):
        for g in (0, 1, 3):
            v = matrix_element(N, 0, S(g, 0, 0, 1, 1, 0)).value
            assert v == pytest.approx(-0.5j / (N * (g + 1)), abs=1e-14)


def test_eta_alone_vanishes_identically():
    # sum_j C(N,j) rho^j (1-rho)^(N-j) = 1 has zero derivative
    for N in (4, 128, 1024):
        rep = matrix_element(N, 0, S(0, 0, 0, 1, 0, 0))
        assert abs(rep.value) < 1e-15
        assert rep.precision_flag and rep.cancellation_ratio < 1e-12


@settings(max_examples=100, deadline=None)
@given(
    st.integers(0, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)
)
def test_selection_rule(g, be1, be2, a, b1, b2):
    if be1 == -be2:
        return
    rep = matrix_element(9, 4, S(g, be1, be2, a, b1, b2))
    assert rep.value == 0 and rep.case == "zero_selection"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 60), st.integers(0, 3), st.integers(-3, 3), st.integers(0, 2), st.data())
def test_magnitude_independent_of_k(N, g, beta, a, data):
    s = S(g, beta, -beta, a, 1, 0)
    k1, k2 = data.draw(st.integers(0, N)), data.draw(st.integers(0, N))
    v1, v2 = matrix_element(N, k1, s).value, matrix_element(N, k2, s).value
    assert abs(v1) == pytest.approx(abs(v2), rel=1e-12, abs=1e-15)
    # the k-dependence is the phase e^{-2 pi i k beta/(N+1)}
    shift = np.exp(-2j * np.pi * (k2 - k1) * beta / (N + 1))
    assert v2 == pytest.approx(v1 * shift, rel=1e-12, abs=1e-15)


def test_conjugate_symbol():
    # multiplication operators only: with momentum weights Op(conj f) is not the adjoint of Op(f)
    for s in [S(0, 1, -1, 0, 0, 0, 2j), S(2, -2, 2, 0, 0, 0, 1 - 1j)]:
        for N, k in [(5, 2), (40, 17)]:
            v = matrix_element(N, k, s).value
            assert matrix_element(N, k, s.conjugate()).value == pytest.approx(v.conjugate(), abs=1e-14)


@pytest.mark.parametrize(
    "terms, expected",
    [([S(), S(1)], 1.5), ([S(0, 1, 0), S(0, 0, -1)], 0.0), ([CASE2, CASE2.conjugate()], math.pi / 4)],
)
def test_poly_examples(terms, expected):
    assert matrix_element_poly(1, 0, SymbolPolynomial(terms)) == pytest.approx(expected, abs=1e-14)


def test_poly_addition():
    p = SymbolPolynomial([S()]) + S(1)
    assert len(p.terms) == 2 and len((p + p).terms) == 4


@pytest.mark.parametrize(
    "N, k, s",
    [(3, 1, S(1, 2, -2, 1, 1, 0)), (12, 6, S(2, -1, 1, 2, 0, 2)), (7, 7, S(0, 0, 0, 2, 2, 2)), (10, 0, CASE2)],
)
def test_against_quadrature(N, k, s):
    c = matrix_element(N, k, s).value
    assert matrix_element_quadrature(N, k, s) == pytest.approx(c, abs=1e-12 * (1 + abs(c)))


def test_invalid_degree():
    with pytest.raises(ValueError):
        matrix_element(0, 0, S())
    with pytest.raises(ValueError):
        matrix_element(4, 5, S())


def test_report_json():
    d = matrix_element(1, 0, CASE2).to_json()
    assert d["value"] == pytest.approx([math.pi / 8, 0.0]) and d["case"] == "case2"


# --- convergence studies -----------------------------------------------------------


def test_case1_study_is_exact():
    study = convergence_study(S(1), [16, 32, 64, 128])
    assert study.exact and study.slope is None
    assert study.fit_json()["exact"] is True


def test_case2_study_decays():
    study = convergence_study(CASE2, [64, 128, 256, 512, 1024])
    assert study.slope <= -0.25


def test_case3_study_first_order():
    study = convergence_study(S(0, 0, 0, 1, 1, 0), [64, 128, 256, 512, 1024], "middle")
    assert study.slope == pytest.approx(-1.0, abs=0.01)


def test_case3_study_pure_eta_has_no_rate():
    # the deviations are exactly zero, so no power law can be fitted and every row is flagged
    study = convergence_study(S(0, 0, 0, 1, 0, 0), [64, 128, 256, 512])
    assert study.slope is None
    assert study.fit_json()["precision_flags"] == 4


def test_study_needs_three_points():
    with pytest.raises(ValueError):
        convergence_study(S(1), [64, 128])


def test_case3_term_bound_finite():
    assert math.isfinite(case3_term_bound_check(64, S(1, 0, 0, 1)))


def test_uniform_term_bound_grows_like_n():
    # the split cancellation only reaches O(1/j) near the ends, so N |T(j)| is not uniformly bounded
    vals = [case3_term_bound_check(N, S(0, 0, 0, 1)) for N in (64, 128, 256, 512, 1024)]
    ratios = np.array(vals[1:]) / np.array(vals[:-1])
    assert np.allclose(ratios, 2.0, rtol=0.05)


def test_edge_term_bound_is_stable():
    for s in [S(0, 0, 0, 1), S(1, 0, 0, 1), S(2, 1, -1, 1), S(1, 0, 0, 2)]:
        vals = [case3_term_bound_check(N, s, "edge") for N in (64, 128, 256, 512, 1024)]
        assert max(vals) <= 2 * min(vals)


def test_term_bound_errors():
    with pytest.raises(ValueError):
        case3_term_bound_check(64, S(1))
    with pytest.raises(ValueError):
        case3_term_bound_check(64, S(0, 0, 0, 1), "sharp")
