from fractions import Fraction

import pytest

from zetareg.q_characters import (canonical_sector, eisenstein, eta_quotient_check, form4_check,
                                  form6_span, generalized_character, level_two, ns_character,
                                  prefactor_exponents, quasimod_form3_check, quasimod_form6_check,
                                  trace_vs_product)

HALF = Fraction(1, 2)


class TestEisenstein:
    def test_g2(self):
        g2 = eisenstein(2, 4)
        assert [g2.coefficient(n) for n in range(5)] == [Fraction(-1, 24), 1, 3, 4, 7]

    @pytest.mark.parametrize("k", [2, 4, 6, 8])
    def test_linear_coefficient(self, k):
        assert eisenstein(k, 2).coefficient(1) == 1

    def test_g4_constant(self):
        assert eisenstein(4, 1).coefficient(0) == Fraction(1, 240)

    def test_weight_gate(self):
        with pytest.raises(ValueError):
            eisenstein(3, 4)


class TestLevelTwo:
    def test_f2(self):
        f = level_two(1, 2)
        assert f.coefficient(0) == Fraction(1, 24)
        assert f.coefficient(HALF) == 1

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_half_coefficient(self, j):
        assert level_two(j, 2).coefficient(HALF) == 1

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_odd_divisor_identity(self, j):
        assert form4_check(j, 12)


class TestNSCharacter:
    def test_prefactor_and_coefficients(self):
        m0 = ns_character(3)
        assert m0.coefficient(Fraction(-1, 48)) == 1
        assert m0.coefficient(HALF - Fraction(1, 48)) == 1
        # strict half-odd partitions of 2: only {3/2, 1/2}
        assert m0.coefficient(2 - Fraction(1, 48)) == 1

    def test_eta_quotient(self):
        assert eta_quotient_check(6)


class TestGeneralizedCharacters:
    def test_sector_names(self):
        assert canonical_sector("NS") == "NS-fermion"
        with pytest.raises(ValueError):
            canonical_sector("twisted")

    def test_boson_monomial(self):
        ch = generalized_character("boson", 2, 3)
        assert ch.series.coefficient((3, 9)) == 1
        assert ch.prefactor[0] == Fraction(-1, 24)

    def test_ns_monomial(self):
        ch = generalized_character("NS-fermion", 2, 1)
        assert ch.series.coefficient((HALF, Fraction(1, 8))) == 1
        assert ch.prefactor[0] == Fraction(-1, 48)

    def test_vacuum(self):
        assert generalized_character("full-W", 2, 1).series.coefficient((0, 0)) == 1

    def test_ramond_prefactor_options(self):
        assert prefactor_exponents("Ramond-fermion", 1, "printed") == (Fraction(-1, 48),)
        assert prefactor_exponents("Ramond-fermion", 1, "standard") == (Fraction(1, 24),)
        with pytest.raises(ValueError):
            prefactor_exponents("Ramond-fermion", 1, "bogus")

    @pytest.mark.parametrize("sector,K,w", [("boson", 2, 4), ("NS-fermion", 2, Fraction(7, 2)),
                                            ("full-W", 2, 2)])
    def test_trace_matches_product(self, sector, K, w):
        assert trace_vs_product(sector, K, w)

    def test_ramond_standard_trace(self):
        assert trace_vs_product("Ramond-fermion", 2, 3, "standard")


class TestQuasimodularity:
    @pytest.mark.parametrize("j", [1, 2])
    def test_form3(self, j):
        assert quasimod_form3_check(j, 6)

    def test_form6(self):
        assert quasimod_form6_check([2, 2], 2, 8)

    def test_form6_weight(self):
        rep = form6_span([2, 3], 8)
        assert rep.weight == 4 and rep.passed
