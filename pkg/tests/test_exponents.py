from fractions import Fraction

import pytest

from schrodlab.exponents import (
    INF,
    ExponentTriple,
    alpha_critical,
    as_exponent,
    gamma_normalization,
    inv,
    predicted_exponents_1d,
    q_star,
    square_function_alpha,
    tao_exponent,
)


class TestExponentType:
    def test_parsing(self):
        assert as_exponent("56/17") == Fraction(56, 17)
        assert as_exponent("inf") is INF
        assert as_exponent(4) == Fraction(4)
        assert as_exponent(Fraction(3, 2)) == Fraction(3, 2)

    def test_inf_reciprocal_is_exact_zero(self):
        assert inv(INF) == Fraction(0)
        assert isinstance(inv(INF), Fraction)

    def test_inf_ordering(self):
        assert INF > 100
        assert not (INF < 100)
        assert INF >= INF

    def test_triple_validation(self):
        with pytest.raises(ValueError):
            ExponentTriple(1, 2, 2, 1)
        with pytest.raises(ValueError):
            ExponentTriple(2, 2, 2, 3)


class TestAlphaCritical:
    def test_values_are_exact(self):
        assert alpha_critical(ExponentTriple(2, 2, 2, 1)) == Fraction(-1)
        assert alpha_critical(ExponentTriple(4, 4, 4, 2)) == Fraction(1, 2)
        assert alpha_critical(ExponentTriple(4, 4, 4, 1)) == Fraction(1, 4)

    def test_cross_check_with_square_function_form_d2(self):
        # at d = 2, p = q the critical index equals 2(1 - 2/p) - 2/r
        for p in (Fraction(4), Fraction(16, 5), Fraction(7, 2)):
            for r in (Fraction(2), Fraction(4), INF):
                t = ExponentTriple(p, p, r, 2)
                assert alpha_critical(t) == square_function_alpha(p, r)

    def test_gamma_normalization_shifts_by_two_beta(self):
        t = ExponentTriple(4, 4, 4, 1)
        assert gamma_normalization(t, 1) - gamma_normalization(t, 0) == Fraction(2)


class TestQStar:
    def test_known_value_exact(self):
        assert q_star(2, Fraction(56, 17)) == Fraction(13, 4)

    def test_gamma_vanishes_at_tao_exponent_limit(self):
        # q0 -> 2(d+3)/(d+1) makes the numerator vanish; slightly inside the
        # open interval the output approaches the same endpoint
        gap = Fraction(10, 3) - q_star(2, Fraction(10, 3) - Fraction(1, 10**9))
        assert 0 <= gap < Fraction(1, 10**6)

    def test_interpolation_system_oracle_d3(self):
        # independent oracle: solve the two-parameter interpolation system
        #   (1-th)/2 + th/q0 = 1 - (d+2)/(d q*)
        #   (1-th)(d+1)/(2(d+3)) + 2 th / q0 = 2/q*
        # for (th, 1/q*) in exact rational arithmetic and compare
        d, q0 = 3, Fraction(3)
        target = q_star(d, q0)
        # eliminate th: from the second equation th = (2/q* - A)/(B - A) with
        # A = (d+1)/(2(d+3)), B = 2/q0; substitute into the first
        A = Fraction(d + 1, 2 * (d + 3))
        B = 2 / q0
        # first equation: 1/2 + th (1/q0 - 1/2) = 1 - (d+2)/(d q*)
        # let x = 1/q*: th = (2x - A)/(B - A)
        # 1/2 + (2x - A)/(B - A) (1/q0 - 1/2) + (d+2)/d x - 1 = 0
        c = Fraction(1, q0) - Fraction(1, 2)
        # coefficient of x and constant term:
        coef_x = 2 * c / (B - A) + Fraction(d + 2, d)
        const = Fraction(1, 2) - A * c / (B - A) - 1
        x = -const / coef_x
        assert Fraction(1) / x == target

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            q_star(2, 2)
        with pytest.raises(ValueError):
            q_star(2, tao_exponent(2))


class TestPredicted1d:
    @pytest.mark.parametrize(
        "p,q,r,a,b",
        [
            (2, 2, 2, Fraction(0), Fraction(0)),
            (2, INF, 2, Fraction(-1, 2), Fraction(0)),
            (4, 4, 4, Fraction(0), Fraction(1, 4)),
            (4, 4, 2, Fraction(0), Fraction(0)),
            (2, 4, 4, Fraction(0), Fraction(0)),
            (INF, INF, 2, Fraction(0), Fraction(0)),
        ],
    )
    def test_values(self, p, q, r, a, b):
        got = predicted_exponents_1d(ExponentTriple(p, q, r, 1))
        assert got == (a, b)

    def test_non_log_regime(self):
        # r <= p <= q with 1/q + 1/r < 1/2: power 1 - 1/p - 1/q - 2/r
        a, b = predicted_exponents_1d(ExponentTriple(8, 8, 8, 1))
        assert (a, b) == (Fraction(1) - Fraction(3, 8) - Fraction(2, 8), 0)

    def test_second_regime_inclusive_boundary(self):
        # p < r <= q with 2/q + 1/r = 1 - 1/p exactly: first line applies
        a, b = predicted_exponents_1d(ExponentTriple(2, 8, Fraction(4), 1))
        assert (a, b) == (Fraction(1, 8) - Fraction(1, 4), 0)

    def test_rejects_unordered_triples(self):
        with pytest.raises(ValueError):
            predicted_exponents_1d(ExponentTriple(4, 2, 3, 1))
        with pytest.raises(ValueError):
            predicted_exponents_1d(ExponentTriple(2, 3, 4, 2))  # wrong dimension
