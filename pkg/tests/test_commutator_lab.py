from fractions import Fraction

import pytest

from zetareg.commutator_lab import (Normalization, check_central_monomial,
                                    check_twisted_trivial_center, closed_form_monomial,
                                    fit_monomial, measured_normalization, ns_corrected_form,
                                    ns_relations, operator_matrix, projective_defect,
                                    super_commutator, twisted_image_matches_operator,
                                    virasoro_relation)
from zetareg.fock_rep import OperatorSpec, PaddingError, build_operator, twisted_pole_coefficient
from zetareg.kernel import Cyclotomic
from zetareg.number_theory import primitive_characters
from zetareg.symbolic_diffops import odd_generator, super_boson, super_fermion

HALF = Fraction(1, 2)
QUARTIC_5 = [c for c in primitive_characters(5) if c.order == 4]
(CHI_3,) = primitive_characters(3)


def op(family, m, r=0, corrected=False):
    return build_operator(OperatorSpec(family, r, Fraction(m), corrected=corrected))


class TestCommutators:
    def test_l1_lm1(self):
        M = super_commutator(op("vir", 1), op("vir", -1), (0, 4))
        assert M == operator_matrix(op("vir", 0) * 2, (0, 4), (True, False))

    def test_heisenberg(self):
        from zetareg.fock_rep import ModeOperator
        M = super_commutator(ModeOperator("h", 1), ModeOperator("h", -1), (0, 3))
        assert all(col == {s: 1} for s, col in M.items())

    def test_odd_anticommutator(self):
        rep = [r for r in ns_relations((0, 3), HALF) if r.pair == ("G(-1/2)", "G(1/2)")]
        assert rep and rep[0].passed and rep[0].defect == 0

    def test_padding_is_enforced(self):
        with pytest.raises(PaddingError):
            super_commutator(op("vir", 2), op("vir", -2), (0, 3), pad=0)


class TestCentralTerms:
    def test_virasoro(self):
        assert virasoro_relation(1, (0, 4)).defect == 0
        rep = virasoro_relation(2, (0, 4), corrected=True)
        assert rep.passed and rep.defect == Fraction(2, 3)

    def test_ns_relations_small(self):
        assert all(r.passed for r in ns_relations((0, 3), Fraction(3, 2)))

    def test_ns_corrected_form_measures_c_over_3(self):
        for m in (HALF, Fraction(3, 2)):
            rep = ns_corrected_form(m, (0, 3))
            assert rep.scalar and rep.defect == m ** 2 * Fraction(3, 2) / 3
            assert rep.defect == 4 * rep.expected

    def test_ss0(self):
        rep = check_central_monomial("ss0", 1, 1, 1)
        assert rep.passed and rep.defect == Fraction(1, 280)

    def test_ss2_vanishes_at_zero(self):
        assert check_central_monomial("ss2", 0, 0, 0).defect == 0

    @pytest.mark.parametrize("r,s", [(0, 0), (0, 1), (1, 1)])
    def test_ss2_ratio(self, r, s):
        rep = check_central_monomial("ss2", r, s, 1)
        assert rep.scalar and rep.defect == -rep.expected / 4

    @pytest.mark.parametrize("r,s", [(0, 0), (1, 0), (0, 1), (1, 1)])
    def test_ss4_sign(self, r, s):
        rep = check_central_monomial("ss4", r, s, HALF)
        assert rep.defect == (-1) ** (r + s) * rep.expected

    def test_closed_form_gate(self):
        with pytest.raises(ValueError):
            closed_form_monomial("bogus", 0, 0, 1)


class TestFit:
    def test_cubic(self):
        assert fit_monomial({1: Fraction(1, 12), 2: Fraction(2, 3), 3: Fraction(9, 4)}) == \
            {3: Fraction(1, 12)}

    def test_zero(self):
        assert fit_monomial({1: 0, 2: 0}) == {}

    def test_virasoro_uncorrected_needs_two_powers(self):
        vals = {m: (Fraction(m) ** 3 - m) / 12 for m in (1, 2, 3, 4)}
        assert fit_monomial(vals) == {1: Fraction(-1, 12), 3: Fraction(1, 12)}


class TestPsi:
    def test_normalization(self):
        norm = measured_normalization()
        assert norm == Normalization(Fraction(-1, 2), 1, Cyclotomic.root(4))

    def test_defect_is_minus_half_cocycle(self):
        rep = projective_defect(super_boson(0, 2), super_boson(0, -2), (0, 3))
        assert rep.scalar and rep.defect == -rep.details["cocycle"] / 2

    def test_noncentral_pair_has_zero_defect(self):
        rep = projective_defect(super_fermion(1, 1), super_fermion(0, 1), (0, 3))
        assert rep.scalar and rep.defect == 0

    def test_odd_pair(self):
        rep = projective_defect(odd_generator(0, HALF), odd_generator(1, -HALF), (0, 3))
        assert rep.scalar


class TestTwisted:
    def test_gates_refuse_trivial_products(self):
        with pytest.raises(ValueError):
            check_twisted_trivial_center(0, 0, 1, CHI_3, CHI_3, CHI_3, CHI_3)
        q = QUARTIC_5[0]
        with pytest.raises(ValueError):
            check_twisted_trivial_center(0, 0, 1, q, q, q, q)

    def test_pole_coefficient(self):
        a = QUARTIC_5[0]
        assert twisted_pole_coefficient(a, a) == 0

    def test_image_matches_operator(self):
        a = QUARTIC_5[0]
        assert twisted_image_matches_operator(0, 1, a, a, (0, 3))
