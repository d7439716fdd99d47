"""Both evaluation routes for S(a, c), the exact identities, and the oracles.

The brute-force double series used here sums chi1(l) conj(chi2)(k) / l * e(klz)
directly over kl <= K; it is an independent check on the closed-form f.
"""
import cmath
import math
import random
from fractions import Fraction

import pytest

from newform_dedekind.characters import character_from_index, legendre_character
from newform_dedekind.dedekind import (
    DedekindSumResult,
    GammaMatrix,
    b1,
    beta_constant,
    bound_ratio,
    complete_matrix,
    dw_exact,
    f_eval,
    korobov_sum_1,
    korobov_sum_2,
    phi_eval,
    s_analytic,
    s_double_sum,
    s_double_sum_exact,
)
from newform_dedekind.characters import l2_principal, l2_value, character_product
from newform_dedekind.errors import (
    CoprimalityError,
    DivisibilityError,
    ParityError,
    PrimitivityError,
)

LEG5 = legendre_character(5)
LEG3 = legendre_character(3)
QUARTIC = character_from_index(5, 1)
ODD4 = character_from_index(4, 1)


def brute_f(chi1, chi2, z, K):
    total = 0j
    for l in range(1, K + 1):
        if chi1(l) == 0:
            continue
        for k in range(1, K // l + 1):
            total += (
                chi1(l)
                * chi2(k).conjugate()
                / l
                * cmath.exp(2j * math.pi * k * l * z)
            )
    return total


def test_b1_values():
    assert b1(0) == 0.0
    assert b1(7) == 0.0
    assert b1(0.25) == -0.25
    assert b1(-0.25) == 0.25
    assert b1(3 + 1e-13) == 0.0
    rng = random.Random(1)
    for _ in range(200):
        x = rng.uniform(0.01, 0.99)
        assert abs(b1(-x) + b1(x)) < 1e-12
        assert abs(b1(x + 5) - b1(x)) < 1e-12


def test_gamma_matrix_determinant_enforced():
    GammaMatrix(2, 1, 1, 1)
    with pytest.raises(ValueError):
        GammaMatrix(2, 1, 1, 2)


def test_complete_matrix_examples():
    g = complete_matrix(6, 25, 5, 5)
    assert (g.a, g.b, g.c, g.d) == (6, 5, 25, 21)
    g = complete_matrix(1, 25, 5, 5)
    assert (g.b, g.d) == (0, 1)
    g = complete_matrix(4, 9, 3, 3)
    assert (g.b, g.d) == (3, 7)


def test_complete_matrix_normalization_and_errors():
    rng = random.Random(2)
    for _ in range(100):
        c = rng.randint(2, 500)
        a = rng.randint(1, c - 1)
        if math.gcd(a, c) != 1:
            continue
        g = complete_matrix(a, c, 1, 1)
        assert 0 < g.d < c and g.a * g.d - g.b * g.c == 1
    with pytest.raises(CoprimalityError):
        complete_matrix(5, 25, 5, 5)
    with pytest.raises(DivisibilityError):
        complete_matrix(2, 15, 5, 5)


def test_pair_validation_errors_are_distinct():
    with pytest.raises(ParityError):
        s_double_sum(character_from_index(3, 1), LEG5, 1, 15)
    with pytest.raises(PrimitivityError):
        s_double_sum(character_from_index(5, 0), LEG5, 1, 25)
    with pytest.raises(PrimitivityError):
        s_double_sum(character_from_index(6, 1), character_from_index(6, 1), 1, 36)
    with pytest.raises(CoprimalityError):
        s_double_sum(LEG5, LEG5, 5, 25)
    with pytest.raises(DivisibilityError):
        s_double_sum(LEG5, LEG5, 2, 35)


def test_double_sum_vanishes_at_one():
    for c in (25, 50, 225):
        assert abs(s_double_sum(LEG5, LEG5, 1, c).value) < 1e-10


def test_double_sum_known_values():
    assert abs(s_double_sum(LEG5, LEG5, 6, 25).value - 2) < 1e-12
    assert abs(s_double_sum(LEG5, LEG5, 11, 50).value - 4) < 1e-12


def test_double_sum_periodicity_exact():
    for a, c in ((6, 25), (7, 100), (11, 50)):
        assert s_double_sum(LEG5, LEG5, a, c).value == s_double_sum(LEG5, LEG5, a + c, c).value


def test_double_sum_result_fields():
    res = s_double_sum(LEG5, LEG5, 6, 25)
    assert res.method == "double_sum"
    assert res.truncation_bound == 0.0
    assert res.d_used == 21
    assert res.max_partial_quotient == 5  # D(6 mod 5, 5) = D(1, 5)


def test_conjugation_symmetry():
    pairs = [(QUARTIC, QUARTIC), (QUARTIC, QUARTIC.conjugate())]
    for chi1, chi2 in pairs:
        for a, c in ((2, 25), (7, 50), (13, 75)):
            s = s_double_sum(chi1, chi2, a, c).value
            sbar = s_double_sum(chi1.conjugate(), chi2.conjugate(), a, c).value
            assert abs(sbar - s.conjugate()) < 1e-10


def test_trivial_bound():
    rng = random.Random(3)
    for _ in range(30):
        c = 25 * rng.randint(1, 12)
        a = rng.randint(1, c - 1)
        if math.gcd(a, c) != 1:
            continue
        res = s_double_sum(LEG5, LEG5, a, c)
        assert abs(res.value) <= 5 * c


def test_exact_mode_matches_closed_form():
    assert s_double_sum_exact(LEG5, LEG5, 6, 25) == Fraction(2)
    assert s_double_sum_exact(LEG5, LEG5, 11, 50) == Fraction(4)
    assert s_double_sum_exact(LEG5, LEG5, 1, 25) == 0


def test_exact_mode_matches_float():
    rng = random.Random(4)
    for _ in range(20):
        c = 25 * rng.randint(1, 8)
        a = rng.randint(1, c - 1)
        if math.gcd(a, c) != 1:
            continue
        exact = s_double_sum_exact(LEG5, LEG5, a, c)
        approx = s_double_sum(LEG5, LEG5, a, c).value
        assert abs(approx - float(exact)) < 1e-10


def test_exact_mode_rejects_complex_characters():
    with pytest.raises(ValueError):
        s_double_sum_exact(QUARTIC, QUARTIC, 2, 25)


def test_dw_exact_values():
    assert dw_exact(5, 1, 1) == Fraction(2)
    assert dw_exact(5, 1, 5) == 0
    assert dw_exact(7, 3, 2) == -12
    assert isinstance(dw_exact(3, 2, 1), Fraction)
    with pytest.raises(ValueError):
        dw_exact(5, 0, 1)


def test_f_eval_periodic_in_numerator():
    eps = 1e-7
    v1, b1_ = f_eval(LEG5, LEG5, 2, 45, eps)
    v2, b2_ = f_eval(LEG5, LEG5, 2 + 45, 45, eps)
    assert abs(v1 - v2) <= b1_ + b2_ + 1e-12


def test_f_eval_tail_bound_is_honoured():
    coarse, bc = f_eval(LEG5, LEG5, 7, 100, 1e-4)
    fine, bf = f_eval(LEG5, LEG5, 7, 100, 1e-12)
    assert abs(coarse - fine) <= bc + bf


def test_f_eval_against_brute_double_series():
    # c = 45 with the Legendre-5 pair; direct summation over kl <= 10^4
    z = (2 + 1j) / 45
    brute = brute_f(LEG5, LEG5, z, 10**4)
    closed, bound = f_eval(LEG5, LEG5, 2, 45, 1e-9)
    assert abs(brute - closed) < 1e-5


def test_f_eval_errors():
    with pytest.raises(DivisibilityError):
        f_eval(LEG5, LEG5, 1, 12, 1e-8)
    with pytest.raises(CoprimalityError):
        f_eval(LEG5, LEG5, 5, 25, 1e-8)
    with pytest.raises(ValueError):
        f_eval(LEG5, LEG5, 1, 25, 0.0)


def test_phi_eval_independent_of_d_representative():
    eps = 1e-9
    gamma = complete_matrix(6, 25, 5, 5)
    shifted = GammaMatrix(gamma.a, gamma.b + gamma.a, gamma.c, gamma.d + gamma.c)
    v1, b1_ = phi_eval(LEG5, LEG5, gamma, eps)
    v2, b2_ = phi_eval(LEG5, LEG5, shifted, eps)
    assert abs(v1 - v2) <= b1_ + b2_ + 1e-12


def test_phi_eval_vanishes_at_identity_orbit():
    gamma = complete_matrix(1, 25, 5, 5)
    val, bound = phi_eval(LEG5, LEG5, gamma, 1e-9)
    assert abs(val) <= bound + 1e-10


def test_phi_eval_z_independence_spot_check():
    # recompute phi from the raw double series at a z crafted so that both
    # Im(z) and Im(gz) stay large enough for direct summation to converge
    gamma = complete_matrix(2, 9, 3, 3)
    z0 = (-gamma.d + 0.4 + 1.3j) / gamma.c
    gz = (gamma.a * z0 + gamma.b) / (gamma.c * z0 + gamma.d)
    psi = LEG3(gamma.d) * LEG3(gamma.d).conjugate()
    brute = brute_f(LEG3, LEG3, gz, 250) - psi * brute_f(LEG3, LEG3, z0, 250)
    val, _ = phi_eval(LEG3, LEG3, gamma, 1e-10)
    assert abs(brute - val) < 1e-8


def test_analytic_matches_closed_form_value():
    res = s_analytic(LEG5, LEG5, 6, 25)
    assert abs(res.value - 2) < 1e-6
    assert res.method == "analytic"
    assert 0 < res.truncation_bound < 1e-7
    assert res.d_used == 21 and res.max_partial_quotient == 5


def test_analytic_vanishes_at_one():
    for c in (25, 150, 600):
        assert abs(s_analytic(LEG5, LEG5, 1, c).value) < 1e-8


def test_methods_agree_on_random_pairs():
    rng = random.Random(5)
    pairs = [(LEG5, LEG5, 25), (QUARTIC, QUARTIC, 25), (LEG3, ODD4, 12),
             (QUARTIC, QUARTIC.conjugate(), 25)]
    for chi1, chi2, q1q2 in pairs:
        for _ in range(12):
            c = q1q2 * rng.randint(1, 400 // q1q2 + 1)
            while True:
                a = rng.randint(1, c - 1)
                if math.gcd(a, c) == 1:
                    break
            ref = s_double_sum(chi1, chi2, a, c)
            fast = s_analytic(chi1, chi2, a, c, 1e-8)
            assert abs(ref.value - fast.value) <= 1e-6 + fast.truncation_bound


def test_beta_zero_at_origin():
    assert abs(beta_constant(LEG5, LEG5, 0, 0, 1)) < 1e-15


def test_beta_legendre_5_value():
    # tau^2/(4 pi^2 i) * L(2, principal mod 5) * 2i = 2/5
    val = beta_constant(LEG5, LEG5, 1, 1, 1)
    assert abs(val - 0.4) < 1e-10


def test_beta_self_dual_closed_form():
    # chi1 = conj(chi2): beta(conj chi2, chi2, n, n) with chi2(d) = 1
    chi2 = QUARTIC
    chi1 = QUARTIC.conjugate()
    q = 5
    for n in (1, 2, 3):
        want = chi2(-n) * q / 12 * (1 - q**-2)
        got = beta_constant(chi1, chi2, n, n, 1)
        assert abs(got - want) < 1e-9


def test_beta_uses_l2_of_the_product():
    # non-principal product: (3, 4) pair
    prod = character_product(LEG3, ODD4)
    assert not prod.is_principal
    lv = l2_value(prod)
    t1 = abs(beta_constant(LEG3, ODD4, 1, 1, 1))
    assert t1 > 0 and abs(lv) > 0


def test_korobov_hand_values():
    assert abs(korobov_sum_1(1, 2) - 2) < 1e-12
    assert korobov_sum_1(1, 2) <= 2 * 2 * math.log(2) + 1e-9
    assert abs(korobov_sum_1(1, 3) - 6) < 1e-12
    assert abs(korobov_sum_2(1, 3) - 4.5) < 1e-12


def test_korobov_bounds_small_moduli():
    from newform_dedekind.contfrac import max_partial_quotient

    for q in range(2, 121):
        logq = math.log(q)
        for a in range(1, q):
            if math.gcd(a, q) != 1:
                continue
            assert korobov_sum_1(a, q) <= 2 * q * logq + 1e-9
            D = max_partial_quotient(a, q)
            assert korobov_sum_2(a, q) <= 18 * D * logq**2 + 1e-9


def test_korobov_validation():
    with pytest.raises(CoprimalityError):
        korobov_sum_1(2, 4)
    with pytest.raises(ValueError):
        korobov_sum_1(0, 5)
    with pytest.raises(ValueError):
        korobov_sum_2(5, 5)


def test_bound_ratio_values():
    assert bound_ratio(LEG5, LEG5, 1, 25) < 1e-9
    val = bound_ratio(LEG5, LEG5, 6, 25)
    assert abs(val - 2 / (5 * math.log(5) ** 2)) < 1e-3
    assert bound_ratio(LEG5, LEG5, 7, 50, method="double_sum") >= 0


def test_elementary_inequalities():
    # |1 - e(x)|^{-1} <= (4 ||x||)^{-1} and |1 - e^{i phi}| <= 2 |1 - r e^{i phi}|
    rng = random.Random(6)
    for _ in range(2000):
        x = rng.uniform(-3, 3)
        dist = abs(x - round(x))
        if dist < 1e-9:
            continue
        gap = abs(1 - cmath.exp(2j * math.pi * x))
        assert 1 / gap <= 1 / (4 * dist) + 1e-12
    for _ in range(2000):
        r = rng.uniform(0, 1)
        phi = rng.uniform(0, 2 * math.pi)
        lhs = abs(1 - cmath.exp(1j * phi))
        rhs = 2 * abs(1 - r * cmath.exp(1j * phi))
        assert lhs <= rhs + 1e-12
