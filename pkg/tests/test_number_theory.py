from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetareg.kernel import Cyclotomic
from zetareg.number_theory import (bernoulli, bernoulli_poly, enumerate_characters, gauss_sum,
                                   gen_bernoulli, gen_bernoulli_oracle, hurwitz_half,
                                   hurwitz_half_from_generating, l_value_neg,
                                   partial_fraction_sides, primitive_characters,
                                   regularized_power_sum, trivial_character, verify_gauss_twist,
                                   verify_partial_fraction, zeta_neg, zeta_nonpositive)

z3 = Cyclotomic.root(3)


def test_bernoulli_numbers():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert all(bernoulli(n) == 0 for n in range(3, 30, 2))


def test_zeta_negative_integers():
    assert zeta_neg(1) == Fraction(-1, 12)
    assert zeta_neg(2) == 0
    assert zeta_neg(3) == Fraction(1, 120)
    assert zeta_nonpositive(0) == Fraction(-1, 2)
    with pytest.raises(ValueError):
        zeta_neg(0)


def test_hurwitz_half_values():
    assert hurwitz_half(2) == Fraction(1, 24)
    assert hurwitz_half(3) == 0
    assert hurwitz_half(4) == Fraction(-7, 960)


@given(st.integers(min_value=1, max_value=24))
def test_hurwitz_generating_matches_polynomial(n):
    assert hurwitz_half_from_generating(n) == -bernoulli_poly(n, Fraction(1, 2)) / n


def test_regularized_power_sum_periodic():
    # sum over odd k of k: w = (1, 0) mod 2 gives zeta(-1, 1/2)*2 = 1/12
    assert regularized_power_sum(1, period_values=(1, 0)) == Fraction(1, 12)
    assert regularized_power_sum(1) == Fraction(-1, 12)


class TestCharacters:
    def test_counts(self):
        assert len(enumerate_characters(4)) == 2
        assert len(primitive_characters(4)) == 1
        assert primitive_characters(4)[0].parity == -1
        assert len(enumerate_characters(1)) == 1
        assert len(enumerate_characters(8)) == 4
        assert len(primitive_characters(8)) == 2

    @pytest.mark.parametrize("N", [3, 5, 7, 8, 12])
    def test_group_law(self, N):
        chars = enumerate_characters(N)
        for a in chars:
            for b in chars:
                assert (a * b) in chars
            assert (a * a.conj()).is_trivial

    def test_mod_5_orders(self):
        assert sorted(c.order for c in primitive_characters(5)) == [2, 4, 4]


class TestGaussSums:
    def test_trivial_mod_1(self):
        assert gauss_sum(trivial_character(1)) == 1

    def test_mod_3(self):
        (chi,) = primitive_characters(3)
        g = gauss_sum(chi)
        assert g in (z3 - z3 ** 2, z3 ** 2 - z3)
        assert g * g == -3

    def test_twist_lemma_examples(self):
        (chi,) = primitive_characters(3)
        assert verify_gauss_twist(chi, 1)
        assert verify_gauss_twist(chi, 3)
        quartic = next(c for c in primitive_characters(5) if c.order == 4)
        assert verify_gauss_twist(quartic, 2)

    @pytest.mark.parametrize("N", [3, 4, 5, 7, 8, 12])
    def test_norm(self, N):
        for chi in primitive_characters(N):
            assert gauss_sum(chi) * gauss_sum(chi.conj()) == chi.parity * N


class TestGeneralizedBernoulli:
    def test_examples(self):
        (chi4,) = primitive_characters(4)
        assert gen_bernoulli(chi4, 0) == 0
        assert gen_bernoulli(chi4, 1) == Fraction(-1, 2)
        assert gen_bernoulli(trivial_character(1), 2) == Fraction(1, 6)

    @pytest.mark.parametrize("N", [3, 4, 5, 7, 8])
    def test_two_routes(self, N):
        for chi in enumerate_characters(N):
            if chi.is_trivial:
                continue
            for n in range(1, 6):
                assert gen_bernoulli(chi, n) == gen_bernoulli_oracle(chi, n)

    def test_l_values(self):
        (chi4,) = primitive_characters(4)
        assert l_value_neg(chi4, 1) == Fraction(1, 2)
        assert l_value_neg(trivial_character(1), 2) == Fraction(-1, 12)
        even = next(c for c in primitive_characters(5) if c.parity == 1)
        assert l_value_neg(even, 1) == 0

    def test_zero_values_stay_exact(self):
        (chi4,) = primitive_characters(4)
        v = l_value_neg(chi4, 2)
        assert isinstance(v, Cyclotomic) and v == 0


class TestPartialFractions:
    @pytest.mark.parametrize("N", [3, 4])
    def test_order_8(self, N):
        for chi in primitive_characters(N):
            assert verify_partial_fraction(chi, 8)

    def test_lhs_has_no_pole(self):
        (chi,) = primitive_characters(3)
        lhs, _ = partial_fraction_sides(chi, 4)
        assert lhs.coefficient(-1) == 0

    def test_gate(self):
        with pytest.raises(ValueError):
            verify_partial_fraction(trivial_character(3), 4)
