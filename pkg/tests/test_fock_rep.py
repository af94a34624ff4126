from fractions import Fraction

import pytest

from zetareg.fock_rep import (VACUUM, FockState, OperatorSpec, PaddingError, SectorError,
                              apply_mode, boson_correction, boson_correction_from_series,
                              build_operator, fermion_correction, fermion_correction_as_printed,
                              fermion_correction_from_series, fock_dims, iterate_correction_series,
                              iterate_vertex_check, regularized_constant)

HALF = Fraction(1, 2)


def product_dims(max_weight2: int) -> list[int]:
    """Oracle: coefficients of prod (1 + q^{n-1/2}) / (1 - q^n) in the doubled exponent."""
    coeffs = [1] + [0] * max_weight2
    for part in range(1, max_weight2 + 1, 2):
        for e in range(max_weight2, part - 1, -1):
            coeffs[e] += coeffs[e - part]
    for part in range(2, max_weight2 + 1, 2):
        for e in range(part, max_weight2 + 1):
            coeffs[e] += coeffs[e - part]
    return coeffs


def h(*parts):
    return {FockState(parts): 1}


class TestStates:
    def test_ns_dimensions_match_product(self):
        dims = fock_dims(4)
        assert [dims[Fraction(k, 2)] for k in range(9)] == product_dims(8)

    def test_ramond_dimensions(self):
        assert list(fock_dims(2, "R").values()) == [1, 2, 4]

    def test_boson_dimensions_are_partitions(self):
        assert list(fock_dims(5, fermions=False).values()) == [1, 1, 2, 3, 5, 7]

    def test_weight(self):
        assert FockState((2, 1), (Fraction(3, 2),)).weight == Fraction(9, 2)


class TestModes:
    def test_heisenberg(self):
        assert apply_mode(("h", 1), apply_mode(("h", -1), h())) == {VACUUM: 1}

    def test_fermion_sign(self):
        v = {FockState((), (Fraction(3, 2), HALF)): 1}
        assert apply_mode(("phi", HALF), v) == {FockState((), (Fraction(3, 2),)): -1}

    def test_annihilation(self):
        assert apply_mode(("h", 2), h(1, 1)) == {}

    def test_sector_checked(self):
        with pytest.raises(SectorError):
            apply_mode(("phi", 1), {VACUUM: 1}, "NS")
        with pytest.raises(SectorError):
            apply_mode(("phi", HALF), {VACUUM: 1}, "R")


class TestOperators:
    def test_l0_eigenvalues(self):
        L0 = build_operator(OperatorSpec("vir", 0, 0))
        assert L0.apply(h(1)) == h(1)
        assert L0.apply(h(1, 1)) == {FockState((1, 1)): 2}

    @pytest.mark.parametrize("method", ["engine", "closed"])
    def test_l1_zero_mode_on_h2(self, method):
        op = build_operator(OperatorSpec("L", 1, 0), method)
        assert op.apply(h(2)) == {FockState((2,)): -8}

    def test_engine_matches_closed_on_window(self):
        for spec in (OperatorSpec("L", 2, 1), OperatorSpec("Lf", 1, -1), OperatorSpec("G", 1, HALF)):
            a, b = build_operator(spec, "engine"), build_operator(spec, "closed")
            assert a.matrix((0, 3)) == b.matrix((0, 3))

    def test_padding_error(self):
        op = build_operator(OperatorSpec("vir", 0, 1))
        op.cap = Fraction(2)
        op.block(2)
        with pytest.raises(PaddingError):
            op.block(3)

    def test_odd_generators_not_corrected(self):
        with pytest.raises(ValueError):
            build_operator(OperatorSpec("G", 0, HALF, corrected=True))


class TestCorrections:
    def test_boson_values(self):
        assert [boson_correction(r) for r in range(3)] == \
            [Fraction(-1, 24), Fraction(-1, 240), Fraction(-1, 504)]

    def test_fermion_values(self):
        assert [fermion_correction(r) for r in range(3)] == \
            [Fraction(-1, 48), Fraction(-7, 1920), Fraction(-31, 16128)]

    def test_printed_fermion_index_has_pole(self):
        with pytest.raises(ZeroDivisionError):
            fermion_correction_as_printed(0)

    @pytest.mark.parametrize("r", range(5))
    def test_series_routes(self, r):
        assert boson_correction_from_series(r) == boson_correction(r)
        assert fermion_correction_from_series(r) == fermion_correction(r)

    @pytest.mark.parametrize("r", range(3))
    def test_symmetric_ordering_route(self, r):
        assert regularized_constant(build_operator(OperatorSpec("L", r, 0))) == boson_correction(r)
        assert regularized_constant(build_operator(OperatorSpec("Lf", r, 0))) == fermion_correction(r)


class TestIterates:
    def test_boson_series(self):
        s = iterate_correction_series("h", "h", 2)
        assert s.coefficient(-2) == 1
        assert s.coefficient(0) == Fraction(-1, 12)
        assert s.coefficient(2) == Fraction(1, 240)

    @pytest.mark.parametrize("u", ["h", "phi"])
    def test_vertex_check(self, u):
        assert iterate_vertex_check(u, u, x_order=3, window=2, modes=range(-2, 3)).passed

    def test_only_free_pairs(self):
        with pytest.raises(ValueError):
            iterate_vertex_check("h", "phi")
