import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetareg.kernel import Cyclotomic, Poly
from zetareg.symbolic_diffops import (DiffOp, SuperDiffOp, bracket, cocycle, diffop_mul,
                                      dminus_basis, dplus_basis, extract_gf_coeff,
                                      fixed_subalgebra_check, gamma, involution, involution_suite,
                                      jacobi_suite, psi, random_diffop, random_super,
                                      super_bracket, theta1, theta2, verify_symbolic_bracket)

HALF = Fraction(1, 2)
D = DiffOp.D()
t = DiffOp.t


def tD(k, power=1):
    return diffop_mul(t(k), DiffOp.D(power))


class TestProducts:
    def test_product_rule(self):
        assert diffop_mul(D, t()) == DiffOp.monomial(1, Poly([1, 1]))

    def test_witt_bracket(self):
        assert bracket(tD(1), tD(-1)) == D.scale(-2)

    def test_twist_commutes_past_t(self):
        N = 4
        z = DiffOp.twist(1, N)
        lhs = diffop_mul(z, t())
        rhs = diffop_mul(t(), z)
        assert lhs != rhs
        assert lhs == rhs.scale(Cyclotomic.root(N))

    @settings(max_examples=100)
    @given(st.integers(0, 2 ** 32))
    def test_antisymmetry(self, seed):
        rng = random.Random(seed)
        a, b = random_diffop(rng), random_diffop(rng)
        assert bracket(a, b) == -bracket(b, a)


class TestInvolutions:
    def test_witt_generators_are_theta1_fixed(self):
        assert theta1(tD(2)) == tD(2)

    def test_theta2_of_D(self):
        assert theta2(D) == D

    def test_theta1_needs_right_D(self):
        with pytest.raises(ValueError):
            theta1(t(2))

    def test_gamma_squares_to_identity_on_components(self):
        comps = {"E": tD(1), "F": tD(2, 2), "T": tD(1, 2), "P": tD(-1)}
        for lab, op in comps.items():
            x = SuperDiffOp.embed(op, lab)
            assert gamma(gamma(x)) == x

    def test_dispatch(self):
        assert involution("θ1", tD(3)) == theta1(tD(3))
        with pytest.raises(ValueError):
            involution("omega", D)

    def test_membership(self):
        assert fixed_subalgebra_check("D+", dplus_basis(1, 3))
        assert not fixed_subalgebra_check("D+", tD(2, 2))
        assert fixed_subalgebra_check("D+", tD(5))
        assert fixed_subalgebra_check("D-", dminus_basis(3, 2))

    def test_property_suite_small(self):
        assert involution_suite(cases=20, seed=3).passed


class TestCocycles:
    def test_examples(self):
        assert psi(tD(2), tD(-2)) == -1
        assert psi(tD(1), tD(2, 2)) == 0
        assert psi(D, D) == 0
        assert cocycle("Ψ", tD(2), tD(-2)) == -1

    def test_antisymmetric(self):
        a, b = tD(3, 2), tD(-3, 1)
        assert psi(a, b) == -psi(b, a)

    def test_super_cocycle_restricts_on_boson_part(self):
        a = SuperDiffOp.embed(tD(2), "E")
        b = SuperDiffOp.embed(tD(-2), "E")
        assert cocycle("Ψs", a, b) == psi(tD(2), tD(-2))

    def test_jacobi_suite_small(self):
        assert jacobi_suite(cases=20, seed=5).passed

    @settings(max_examples=50)
    @given(st.integers(0, 2 ** 32))
    def test_super_antisymmetry(self, seed):
        rng = random.Random(seed)
        x, y = random_super(rng, parity=1), random_super(rng, parity=1)
        assert super_bracket(x, y) == super_bracket(y, x)


class TestGeneratingFunctions:
    def test_D_at_origin(self):
        assert extract_gf_coeff("D", (0, 0), 0) == D

    @pytest.mark.parametrize("l", [-2, 0, 3])
    def test_dbar_matches_basis(self, l):
        assert extract_gf_coeff("Dbar", (1, 0), -l) == -dminus_basis(1, l)

    def test_odd_lowest(self):
        n = Fraction(3, 2)
        got = extract_gf_coeff("G", (0, 0), -n)
        assert got.comp("T") == tD(n) and got.comp("P") == t(n)
        with pytest.raises(ValueError):
            extract_gf_coeff("G", (0, 0), 1)


class TestBracketIdentities:
    @pytest.mark.parametrize("which", ["dplus", "dminus", "odd-odd", "odd-boson",
                                       "odd-fermion-exchanged"])
    def test_identities_hold(self, which):
        rep = verify_symbolic_bracket(which, max_power=1, x_range=1)
        assert rep.passed, rep.mismatches[:2]

    def test_odd_fermion_as_written_mismatches(self):
        rep = verify_symbolic_bracket("odd-fermion", max_power=1, x_range=1)
        assert rep.mismatches

    def test_cartan_bracket(self):
        a = extract_gf_coeff("D", (0, 0), 0)
        assert bracket(a, extract_gf_coeff("D", (0, 0), 0)) == 0
