from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetareg.kernel import (Cyclotomic, MultiSeries, Poly, PrecisionError, TruncatedSeries,
                            cyclotomic_polynomial, expand_quotient, format_scalar, solve_exact)

HALF = Fraction(1, 2)
z3, z4 = Cyclotomic.root(3), Cyclotomic.root(4)
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@st.composite
def cyclo(draw, level):
    return Cyclotomic(level, draw(st.lists(rationals, min_size=level, max_size=level)))


class TestCyclotomic:
    def test_i_squared(self):
        assert z4 * z4 == -1

    def test_cube_root_product(self):
        assert (1 + z3) * (1 + z3 ** 2) == 1

    def test_identity(self):
        a = Cyclotomic(5, [1, 2, 0, Fraction(1, 3)])
        assert a * 1 == a

    def test_inverses(self):
        assert Cyclotomic.from_rational(3, 1).inverse() == 1
        assert z3.inverse() == z3 ** 2
        w = z3 - z3 ** 2
        v = w.inverse()
        assert v * w == 1
        assert v * 3 == -w
        assert w * w == -3

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            Cyclotomic.from_rational(4, 0).inverse()

    def test_mixed_levels_embed(self):
        assert z4 * z3 == Cyclotomic.root(12, 7)
        assert Cyclotomic.root(12, 4) == z3

    def test_minimal_level_formatting(self):
        assert format_scalar(Cyclotomic.root(12, 3)) == "ζ4"
        assert format_scalar(Cyclotomic.root(8, 4)) == "-1"
        assert format_scalar(Fraction(-7, 3)) == "-7/3"
        assert format_scalar(z4 / 5 + Fraction(3, 5)) == "1/5*ζ4 + 3/5"

    def test_cyclotomic_polynomials(self):
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(3) == (1, 1, 1)
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)

    def test_conjugate_and_trace(self):
        assert z4.conj() == -z4
        assert (z3 + z3.conj()) == -1
        assert z3.normalized_trace() == Fraction(-1, 2)

    def test_display_value(self):
        assert abs(z4.to_complex() - 1j) < 1e-12

    @settings(max_examples=200)
    @given(cyclo(5), cyclo(5))
    def test_field_level_5(self, a, b):
        assert (a + b) - b == a
        if b:
            assert (a * b) / b == a

    @settings(max_examples=200)
    @given(cyclo(8))
    def test_conjugation_is_multiplicative(self, a):
        assert (a * a).conj() == a.conj() * a.conj()


class TestPoly:
    def test_evaluation_and_shift(self):
        p = Poly([1, 2, 3])
        assert p(2) == 17
        assert p.shift(1)(2) == p(3)

    def test_divmod(self):
        a, b = Poly([1, 0, 1]), Poly([1, 1])
        q, r = a.divmod_by(b)
        assert q * b + r == a and r.degree < b.degree

    def test_monomial_and_derivative(self):
        assert Poly.monomial(3).derivative() == Poly([0, 0, 3])


class TestTruncatedSeries:
    def test_hurwitz_half_expansion(self):
        num, den = TruncatedSeries.exp(HALF, 6), TruncatedSeries.exp(1, 6) - 1
        s = expand_quotient(num, den, 3)
        want = {-1: 1, 0: 0, 1: Fraction(-1, 24), 2: 0, 3: Fraction(7, 5760)}
        assert all(s.coefficient(k) == v for k, v in want.items())

    def test_geometric(self):
        s = expand_quotient(TruncatedSeries({0: 1}), TruncatedSeries({0: 1, 1: -1}), 3)
        assert [s.coefficient(k) for k in range(4)] == [1, 1, 1, 1]

    def test_x_over_x(self):
        x = TruncatedSeries.monomial(1)
        s = expand_quotient(x, x, 2)
        assert s.coefficient(0) == 1 and s.coefficient(1) == 0 and s.coefficient(2) == 0

    def test_precision_is_tracked(self):
        s = TruncatedSeries.exp(1, 3)
        with pytest.raises(PrecisionError):
            s.coefficient(4)
        with pytest.raises(PrecisionError):
            expand_quotient(s, s, 5)

    def test_fractional_lattice(self):
        a = TruncatedSeries.monomial(HALF, d=2)
        b = TruncatedSeries.monomial(Fraction(1, 3), d=3)
        assert (a * b).coefficient(Fraction(5, 6)) == 1

    def test_render(self):
        s = TruncatedSeries.from_list([Fraction(-1, 24), 1, 3, 4], var="q", exact=False)
        assert s.render() == "-1/24 + q + 3*q^2 + 4*q^3 + O(q^4)"


class TestMultiSeries:
    def test_product_of_linear(self):
        a = MultiSeries(("y1", "y2"), (3, 3), {(0, 0): 1, (1, 0): 1})
        b = MultiSeries(("y1", "y2"), (3, 3), {(0, 0): 1, (0, 1): 1})
        p = a * b
        assert p.coeffs == {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}

    def test_exponential_inverse(self):
        e = MultiSeries.exp_linear(("y1",), (6,), (1,))
        f = MultiSeries.exp_linear(("y1",), (6,), (-1,))
        assert (e * f).coeffs == {(0,): 1}

    def test_mixed_coefficient(self):
        e = MultiSeries.exp_linear(("y1", "y2"), (2, 3), (1, 1))
        assert e.coefficient((2, 3)) == Fraction(1, 12)


class TestSolveExact:
    def test_consistent(self):
        assert solve_exact([[1, 0], [0, 1]], [3, 4]) == [3, 4]

    def test_inconsistent(self):
        assert solve_exact([[1, 1]], [1, 2]) is None

    def test_overdetermined_consistent(self):
        cols = [[1, 2, 3], [1, 1, 1]]
        assert solve_exact(cols, [2, 3, 4]) == [1, 1]
