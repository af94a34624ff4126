"""One test group per acceptance criterion; the terminal summary prints one
PASS/FAIL line per criterion.

Displayed formulas that the computation contradicts are tested verbatim and
marked xfail(strict=True): the criterion line reports FAIL, and the test turns
red if the literal statement ever starts to hold. The supporting measurements
live in the per-module test files.
"""

import sys
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetareg.commutator_lab import (check_central_monomial, check_twisted_trivial_center,
                                    fit_monomial, measured_normalization, ns_corrected_form,
                                    ns_generators, ns_relations, projective_defect,
                                    virasoro_relation)
from zetareg.fock_rep import (basis, chi_twisted_operator, iterate_vertex_check,
                              regularized_constant, twisted_correction_from_series, twisted_mode,
                              twisted_mode_via_gauss, twisted_pole_coefficient)
from zetareg.kernel import Cyclotomic, Poly, TruncatedSeries, expand_quotient
from zetareg.number_theory import (bernoulli, bernoulli_poly, enumerate_characters, gauss_sum,
                                   gen_bernoulli, hurwitz_half_from_generating, l_value_neg,
                                   primitive_characters, verify_gauss_twist,
                                   verify_partial_fraction, working_level, zeta_neg,
                                   zeta_nonpositive)
from zetareg.q_characters import (eta_quotient_check, form4_check, form6_span,
                                  quasimod_form3_check, quasimod_form6_check, trace_vs_product)
from zetareg.symbolic_diffops import involution_suite, jacobi_suite, verify_symbolic_bracket

HALF = Fraction(1, 2)
LITERAL = "displayed formula contradicted by exact computation; see notes/decisions.md"


# ---------------------------------------------------------------- criterion 1

@pytest.mark.parametrize("corrected", [False, True], ids=["L", "Lbar"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_c1_virasoro_central_term(record, m, corrected):
    rep = virasoro_relation(m, window=(0, 6), corrected=corrected)
    want = Fraction(m ** 3, 12) if corrected else Fraction(m ** 3 - m, 12)
    ok = rep.scalar and rep.defect == want
    record(1, f"{'Lbar' if corrected else 'L'}(0), m={m}", ok)
    assert ok, rep.as_dict()


# ---------------------------------------------------------------- criterion 2

def test_c2_ns_relations(record):
    reps = ns_relations(window=(0, 5), max_mode=Fraction(5, 2))
    bad = [r.pair for r in reps if not r.passed]
    modes = [(r, Fraction(r.pair[0][2:-1]), Fraction(r.pair[1][2:-1])) for r in reps
             if r.pair[0].startswith("G") and r.pair[1].startswith("G")]
    gg = [(r, m) for r, m, n in modes if m + n == 0]
    assert len(gg) == 3 and all(r.defect == (m ** 2 - Fraction(1, 4)) / 3 * Fraction(3, 2) for r, m in gg)
    record(2, f"three NS relations ({len(reps)} matrix identities)", not bad)
    assert not bad


@pytest.mark.xfail(strict=True, reason=LITERAL)
def test_c2_corrected_form_as_displayed(record):
    results = {}
    for m in (HALF, Fraction(3, 2), Fraction(5, 2)):
        rep = ns_corrected_form(m, window=(0, 5))
        results[m] = rep.scalar and rep.defect == m ** 2 * Fraction(3, 2) / 12
    ok = all(results.values())
    record(2, "corrected form m^2 c/12", ok, "measured (c/3) m^2")
    assert ok


# ---------------------------------------------------------------- criterion 3

def _ss0(r, s, m):
    return Fraction(factorial(r + s + 1) ** 2, 2 * factorial(2 * r + 2 * s + 3)) * m ** (2 * r + 2 * s + 3)


def _ss2(r, s, m):
    return Fraction(factorial(r + s + 1) ** 2 - factorial(r + s) * factorial(r + s + 2),
                    factorial(2 * r + 2 * s + 3)) * m ** (2 * r + 2 * s + 3)


def _ss4(r, s, m):
    return Fraction((-1) ** s, (r + s + 1) * (r + s + 2)) * m ** (r + s + 2)


_C3 = {
    "ss0": (_ss0, (1, 2), [Fraction(k) for k in (1, 2, 3)]),
    "ss2": (_ss2, (1, 2), [Fraction(k) for k in (1, 2, 3)]),
    "ss4": (_ss4, (0, 1, 2), [HALF, Fraction(3, 2), Fraction(5, 2)]),
}
_C3_CACHE: dict = {}


def _central(fam, r, s, m):
    key = (fam, r, s, m)
    if key not in _C3_CACHE:
        _C3_CACHE[key] = check_central_monomial(fam, r, s, m, window=(0, 4))
    return _C3_CACHE[key]


def _c3_family(record, fam, note=""):
    closed, rs, ms = _C3[fam]
    bad = []
    for r in rs:
        for s in rs:
            for m in ms:
                rep = _central(fam, r, s, m)
                if not (rep.scalar and rep.defect == closed(r, s, m)):
                    bad.append((r, s, m))
    record(3, f"{fam} closed form", not bad, note if bad else "")
    return bad


def test_c3_ss0_closed_form(record):
    assert not _c3_family(record, "ss0")


@pytest.mark.xfail(strict=True, reason=LITERAL)
def test_c3_ss2_closed_form(record):
    assert not _c3_family(record, "ss2", "measured = -1/4 x displayed")


@pytest.mark.xfail(strict=True, reason=LITERAL)
def test_c3_ss4_closed_form(record):
    assert not _c3_family(record, "ss4", "sign (-1)^r, not (-1)^s")


def test_c3_single_monomial_fit(record):
    bad = []
    for fam, (_, rs, ms) in _C3.items():
        for r in rs:
            for s in rs:
                values = {m: _central(fam, r, s, m).defect for m in ms}
                fit = fit_monomial(values)
                if fit is None or len(fit) != 1:
                    bad.append((fam, r, s, fit))
    record(3, "polynomial fit is a single monomial", not bad)
    assert not bad


# ---------------------------------------------------------------- criterion 4

@pytest.mark.parametrize("which", ["dplus", "dminus", "odd-odd", "odd-boson"])
def test_c4_bracket_formulas(record, which):
    rep = verify_symbolic_bracket(which, max_power=2, x_range=2)
    record(4, f"bracket {which}", rep.passed)
    assert rep.passed, rep.mismatches[:3]


@pytest.mark.xfail(strict=True, reason=LITERAL)
def test_c4_odd_fermion_as_written(record):
    rep = verify_symbolic_bracket("odd-fermion", max_power=2, x_range=2)
    record(4, "bracket odd-fermion as written", rep.passed,
           f"{len(rep.mismatches)}/{rep.cases} coefficients differ")
    assert rep.passed


def test_c4_property_suites(record):
    inv = involution_suite(cases=200, seed=0)
    jac = jacobi_suite(cases=200, seed=0)
    record(4, "involution suite (200)", inv.passed)
    record(4, "super-Jacobi suite (200)", jac.passed)
    assert inv.passed and jac.passed, (inv.failures[:3], jac.failures[:3])


# ---------------------------------------------------------------- criterion 5

def _mode(name):
    return Fraction(name.rsplit("_", 1)[1])


def test_c5_projectivity(record):
    gens = ns_generators(max_r=2, max_m=2)
    norm = measured_normalization("NS")
    nonscalar, moved, checked = [], [], 0
    for i, (na, a) in enumerate(gens):
        for nb, b in gens[i:]:
            rep = projective_defect(a, b, (0, 5), norm=norm)
            checked += 1
            if not rep.scalar:
                nonscalar.append((na, nb))
            elif _mode(na) + _mode(nb) == 0:
                again = projective_defect(a, b, (0, 6), norm=norm)
                if not again.scalar or again.defect != rep.defect:
                    moved.append((na, nb))
    record(5, f"scalar defect for all {checked} pairs", not nonscalar)
    record(5, "window-stable at weight 6", not moved)
    assert not nonscalar and not moved


# ---------------------------------------------------------------- criterion 6

def test_c6_zeta_and_hurwitz(record):
    values = (zeta_neg(1) == Fraction(-1, 12) and zeta_neg(3) == Fraction(1, 120)
              and bernoulli(12) == Fraction(-691, 2730) and zeta_neg(11) == Fraction(691, 32760))
    dup = all(-bernoulli_poly(n, HALF) / n == (Fraction(2) ** (1 - n) - 1) * zeta_nonpositive(1 - n)
              for n in range(1, 21))
    gen = all(hurwitz_half_from_generating(n) == -bernoulli_poly(n, HALF) / n for n in range(1, 13))
    record(6, "zeta(-1), zeta(-3), zeta(-11)", values)
    record(6, "Hurwitz duplication n <= 20", dup)
    record(6, "generating function vs Bernoulli n <= 12", gen)
    assert values and dup and gen


# ---------------------------------------------------------------- criterion 7

MODULI = (3, 4, 5, 7, 8, 12)


def test_c7_dirichlet(record):
    twist, norm, pf, b0 = [], [], [], []
    for N in MODULI:
        for chi in primitive_characters(N):
            L = working_level(chi)
            twist += [(chi.label(), k) for k in range(N + 1) if not verify_gauss_twist(chi, k)]
            if gauss_sum(chi, L) * gauss_sum(chi.conj(), L) != chi.parity * N:
                norm.append(chi.label())
            if not verify_partial_fraction(chi, 12):
                pf.append(chi.label())
        b0 += [c.label() for c in enumerate_characters(N) if not c.is_trivial and gen_bernoulli(c, 0)]
    (chi4,) = primitive_characters(4)
    l0 = l_value_neg(chi4, 1) == HALF
    record(7, "Gauss twist for k = 0..N", not twist)
    record(7, "g(chi) g(conj chi) = chi(-1) N", not norm)
    record(7, "partial fractions to x-order 12", not pf)
    record(7, "L(0, chi_-4) = 1/2", l0)
    record(7, "B_{0,chi} = 0", not b0)
    assert not (twist or norm or pf or b0) and l0


# ---------------------------------------------------------------- criterion 8

CHARS5 = primitive_characters(5)


def test_c8_twisted_modes(record):
    states = [s for w in (2, 3) for s in basis(Fraction(w), "NS", True, False)]
    bad = []
    for chi in CHARS5:
        for mu in CHARS5:
            L = working_level(chi, mu)
            for m in range(-4, 5):
                A = twisted_mode(chi, m)
                assert twisted_mode_via_gauss(chi, m).scale == A.scale
                for n in range(-4, 5):
                    B = twisted_mode(mu, n)
                    C = A @ B - B @ A
                    want = chi.value(-1, L) * (chi * mu).value(m, L) * m if m + n == 0 else 0
                    if any(C._apply_state(s) != ({s: want} if want else {}) for s in states):
                        bad.append((chi.label(), mu.label(), m, n))
    record(8, "twisted mode commutator, N = 5, |m| <= 4", not bad)
    assert not bad


def test_c8_pole_free(record):
    bad = [(c.label(), u.label()) for c in CHARS5 for u in CHARS5
           if not (c * u).is_trivial and twisted_pole_coefficient(c, u)]
    record(8, "correction series pole-free", not bad)
    assert not bad


def _correction_pairs(N, parity=None, order=None):
    chars = [c for c in primitive_characters(N) if order is None or c.order == order]
    return [(c, u) for c in chars for u in chars
            if not (c * u).is_trivial and (parity is None or u.parity == parity)]


def _literal_correction(pairs):
    bad = []
    for chi, mu in pairs:
        series = twisted_correction_from_series(1, chi, mu)
        summed = regularized_constant(chi_twisted_operator(1, 0, chi, mu))
        if not (series == summed == -l_value_neg(chi * mu, 4) / 2):
            bad.append((chi.label(), mu.label()))
    return bad


def test_c8_correction_even_mu(record):
    pairs = _correction_pairs(5, parity=1) + _correction_pairs(7, parity=1, order=3)
    bad = _literal_correction(pairs)
    record(8, "Lbar - L = -L(-3, chi mu)/2 for even mu (N = 5, N = 7 cubic)", not bad)
    assert pairs and not bad


@pytest.mark.xfail(strict=True, reason=LITERAL)
def test_c8_correction_odd_mu_as_displayed(record):
    bad = _literal_correction(_correction_pairs(5, parity=-1))
    record(8, "Lbar - L = -L(-3, chi mu)/2 for odd mu (N = 5)", not bad,
           "sign mu(-1) is opposite: " + ", ".join("/".join(p) for p in bad))
    assert not bad


@pytest.mark.xfail(strict=True, reason=LITERAL)
def test_c8_zero_center(record):
    nonzero, total = [], 0
    for c1 in CHARS5:
        for m1 in CHARS5:
            for c2 in CHARS5:
                for m2 in CHARS5:
                    if (c1 * m1 * c2 * m2).is_trivial:
                        continue
                    total += 1
                    rep = check_twisted_trivial_center(1, 1, 1, c1, m1, c2, m2)
                    if not rep.scalar or rep.defect:
                        nonzero.append(rep.pair)
    record(8, "zero central term, N = 5, r = s = 1, m = 1", not nonzero,
           f"{len(nonzero)}/{total} quadruples have a nonzero scalar")
    assert not nonzero


# ---------------------------------------------------------------- criterion 9

@pytest.mark.parametrize("u", ["h", "phi"])
def test_c9_iterate_bridge(record, u):
    rep = iterate_vertex_check(u, u, x_order=6, window=4)
    record(9, f"free pair {u}", rep.passed)
    assert rep.passed, rep.mismatches[:3]


# ---------------------------------------------------------------- criterion 10

@pytest.mark.parametrize("sector,top", [("boson", 5), ("NS-fermion", Fraction(9, 2)),
                                        ("Ramond-fermion", 4)])
def test_c10_trace_vs_product(record, sector, top):
    ok = trace_vs_product(sector, 2, top)
    record(10, f"trace vs product, {sector}", ok)
    assert ok


def test_c10_q_series(record):
    eta = eta_quotient_check(20)
    f4 = all(form4_check(j, 12) for j in (1, 2, 3))
    f3 = all(quasimod_form3_check(j, 20) for j in (1, 2, 3))
    spans = [form6_span(jl, 24) for jl in ((1, 1), (2, 1), (2, 2))]
    f6 = all(s.passed and s.surplus >= 5 and s.residual == 0 for s in spans) and \
        all(quasimod_form6_check(jl, 2, 24) for jl in ((1, 1), (2, 1), (2, 2)))
    record(10, "eta quotient to order 20", eta)
    record(10, "level-two series via odd divisors, j <= 3", f4)
    record(10, "q-derivative identity, j <= 3", f3)
    record(10, "quasimodular span membership", f6)
    assert eta and f4 and f3 and f6


# ---------------------------------------------------------------- criterion 11

LEVELS = (1, 3, 4, 5, 8, 12)
rationals = st.fractions(min_value=-6, max_value=6, max_denominator=9)


@st.composite
def cyclotomics(draw, level=None):
    L = level or draw(st.sampled_from(LEVELS))
    return Cyclotomic(L, draw(st.lists(rationals, min_size=L, max_size=L)))


@st.composite
def series(draw, order=6, unit=False):
    cs = draw(st.lists(rationals, min_size=order + 1, max_size=order + 1))
    if unit and not cs[0]:
        cs[0] = Fraction(1)
    return TruncatedSeries.from_list(cs, exact=False)


def _run(record, label, fn):
    try:
        fn()
    except Exception:
        record(11, label, False)
        raise
    record(11, label, True)


def test_c11_ring_axioms(record):
    @settings(max_examples=1000)
    @given(cyclotomics(), cyclotomics(), cyclotomics())
    def cyclo(a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a - a == 0 and a * 1 == a

    @settings(max_examples=1000)
    @given(st.lists(rationals, max_size=5), st.lists(rationals, max_size=5),
           st.lists(rationals, max_size=5))
    def polys(x, y, z):
        a, b, c = Poly(x), Poly(y), Poly(z)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a

    _run(record, "ring axioms (1000 cases each)", lambda: (cyclo(), polys()))


def test_c11_inverse_round_trips(record):
    @settings(max_examples=1000)
    @given(cyclotomics())
    def inv(a):
        if a:
            assert a * a.inverse() == 1
            assert (a / a) == 1

    _run(record, "cyclotomic inverse round-trips (1000)", inv)


def test_c11_series_round_trips(record):
    @settings(max_examples=1000)
    @given(series(), series(unit=True))
    def muldiv(a, b):
        q = expand_quotient(a * b, b, 6)
        assert q.equal_through(a, 6)
        p = expand_quotient(a, b, 6) * b
        assert p.equal_through(a, 6)

    _run(record, "series mul/div round-trips (1000)", muldiv)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
