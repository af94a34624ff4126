"""Command-line entry point: suite orchestration, exact tables and reports.

Every number leaves this module as an exact string. Suites run in a bounded
process pool and are reassembled in a fixed order, so two runs with the same
configuration print byte-identical JSON apart from the timing fields.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable

from . import __version__
from .kernel import Cyclotomic, PrecisionError, TruncatedSeries, format_scalar

SCHEMA_VERSION = 1
SUITES = ("symbolic", "commutators", "zeta", "dirichlet", "characters", "quasimod", "iterates")
DEFAULT_MODULI = (3, 4, 5, 7, 8, 12)
OUTPUT_FORMATS = ("text", "json")
RAMOND_PREFACTORS = ("printed", "standard")
TABLE_KINDS = ("zeta", "l-values", "eisenstein")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

HALF = Fraction(1, 2)


class ConfigError(ValueError):
    """Invalid configuration; reported as a usage error."""


@dataclass(frozen=True)
class SuiteConfig:
    max_weight: int = 5
    max_power: int = 2
    series_order: int = 12
    q_order: int = 20
    moduli: tuple = DEFAULT_MODULI
    suites: tuple = SUITES
    output_format: str = "text"
    m_range: int = 3
    x_range: int = 2
    cases: int = 200
    seed: int = 0
    workers: int = 4
    approx: bool = False

    def __post_init__(self):
        for name in ("max_weight", "max_power", "series_order", "q_order", "m_range",
                     "x_range", "cases", "workers"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name.replace('_', '-')} must be a positive integer, got {v!r}")
        if not self.moduli or any(not isinstance(n, int) or n < 2 for n in self.moduli):
            raise ConfigError(f"moduli must be integers >= 2, got {self.moduli!r}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
        if not self.suites:
            raise ConfigError("no suites selected")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["moduli"] = list(self.moduli)
        d["suites"] = list(self.suites)
        return {_camel(k): v for k, v in d.items()}


def _camel(name: str) -> str:
    head, *rest = name.split("_")
    return head + "".join(p.title() for p in rest)


# --------------------------------------------------------------------------
# exact rendering

def exact(value):
    """JSON-ready exact form of a scalar, series or nested container."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, float):
        raise ArithmeticError(f"inexact value {value!r} reached the report")
    if isinstance(value, int):
        return str(value)
    if hasattr(value, "render"):
        return value.render()
    if isinstance(value, (Fraction, Cyclotomic)):
        return format_scalar(value)
    if isinstance(value, TruncatedSeries):
        return value.render()
    if isinstance(value, dict):
        return {str(k): exact(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [exact(v) for v in value]
    return str(value)


def approx(value) -> str:
    """Decimal rendering used only for the optional display column."""
    if isinstance(value, Cyclotomic):
        z = value.to_complex()
        if abs(z.imag) < 1e-12:
            return f"{z.real:.12g}"
        return f"{z.real:.12g}{z.imag:+.12g}i"
    if isinstance(value, (int, Fraction)):
        return f"{float(value):.12g}"
    return ""


@dataclass
class Check:
    id: str
    anchor: str
    passed: bool
    detail: dict = field(default_factory=dict)
    value: object = None

    def as_dict(self, with_approx: bool = False) -> dict:
        detail = exact(self.detail)
        if self.value is not None:
            detail = {"value": exact(self.value), **detail}
            if with_approx:
                detail["approx"] = approx(self.value)
        return {"id": self.id, "paperRef": self.anchor, "pass": bool(self.passed), "detail": detail}


# --------------------------------------------------------------------------
# suite: symbolic

def symbolic_checks(cfg: SuiteConfig, which: Iterable[str] | None = None,
                    roman_d: str = "Dsum", properties: bool = True) -> list[Check]:
    from .kernel import Poly
    from .symbolic_diffops import (BRACKET_IDS, DiffOp, bracket, involution_suite, jacobi_suite, psi,
                                   verify_symbolic_bracket)
    out = []
    for bid in which or BRACKET_IDS:
        rep = verify_symbolic_bracket(bid, cfg.max_power, cfg.x_range, roman_d)
        detail = {"cases": rep.cases, "mismatchCount": len(rep.mismatches),
                  "maxPower": cfg.max_power, "xRange": cfg.x_range}
        if rep.mismatches:
            detail["firstMismatch"] = rep.mismatches[0]
        out.append(Check(f"symbolic.bracket.{bid}", rep.anchor, rep.passed, detail))
    if which is not None or not properties:
        return out
    D = Poly.monomial(1)
    a, b = DiffOp.monomial(2, D), DiffOp.monomial(-2, D)
    val = psi(a, b)
    out.append(Check("symbolic.cocycle.t2D-t-2D", "central cocycle on t^2 D, t^-2 D",
                     val == -1, {"expected": "-1"}, val))
    br = bracket(DiffOp.monomial(1, D), DiffOp.monomial(-1, D))
    want = DiffOp.monomial(0, D * -2)
    out.append(Check("symbolic.bracket.tD-t-1D", "bracket [tD, t^-1 D] = -2D", br == want,
                     {"value": br.render(), "expected": want.render()}))
    for rep, anchor in ((involution_suite(cfg.cases, cfg.seed), "involutions and fixed subalgebras"),
                        (jacobi_suite(cfg.cases, cfg.seed), "associativity, super-Jacobi and cocycle laws")):
        out.append(Check(f"symbolic.property.{rep.name}", anchor, rep.passed,
                         {"cases": rep.cases, "seed": cfg.seed, "failures": rep.failures[:5]}))
    return out


# --------------------------------------------------------------------------
# suite: commutators

def _defect_check(cid: str, anchor: str, rep, extra: dict | None = None) -> Check:
    d = rep.as_dict()
    d.pop("pass", None)
    value = d.pop("defect", None)
    if extra:
        d.update(extra)
    return Check(cid, anchor, rep.passed, {"defect": value, **d})


def virasoro_checks(cfg: SuiteConfig) -> list[Check]:
    from .commutator_lab import virasoro_relation
    window = (0, cfg.max_weight + 1)
    out = []
    for corrected in (False, True):
        tag = "corrected" if corrected else "raw"
        anchor = ("Virasoro central term m^3/12 with L(0) - 1/24" if corrected
                  else "Virasoro central term (m^3 - m)/12")
        for m in range(1, cfg.m_range + 1):
            rep = virasoro_relation(m, window, corrected)
            out.append(_defect_check(f"commutators.virasoro.{tag}.m{m}", anchor, rep))
    return out


def ns_checks(cfg: SuiteConfig) -> list[Check]:
    from .commutator_lab import ns_corrected_form, ns_relations
    window = (0, cfg.max_weight)
    top = Fraction(2 * cfg.m_range - 1, 2)
    out = []
    for rep in ns_relations(window, top):
        a, b = rep.pair
        out.append(_defect_check(f"commutators.ns.[{a},{b}]",
                                 "NS relations with c = 3/2", rep))
    m = HALF
    while m <= top:
        rep = ns_corrected_form(m, window)
        out.append(_defect_check(f"commutators.ns.corrected.m{m}",
                                 "corrected NS form {G~(m), G~(-m)} central term m^2 c/12", rep))
        m += 1
    return out


_CENTRAL_ANCHORS = {
    "ss0": "boson central monomial (r+s+1)!^2 m^(2r+2s+3) / (2 (2r+2s+3)!)",
    "ss2": "fermion central monomial ((r+s+1)!^2 - (r+s)!(r+s+2)!) m^(2r+2s+3) / (2r+2s+3)!",
    "ss4": "odd central monomial (-1)^s m^(r+s+2) / ((r+s+1)(r+s+2))",
}


def _central_ms(family: str, m_range: int) -> list:
    if family == "ss4":
        return [Fraction(2 * k + 1, 2) for k in range(m_range)]
    return [Fraction(k) for k in range(1, m_range + 1)]


def central_checks(cfg: SuiteConfig, families=("ss0", "ss2", "ss4"), rs=None) -> list[Check]:
    from .commutator_lab import check_central_monomial, fit_monomial
    window = (0, min(cfg.max_weight, 4))
    out = []
    for fam in families:
        pairs = rs or [(r, s) for r in ((0, 1, 2) if fam == "ss4" else (1, 2))
                       for s in ((0, 1, 2) if fam == "ss4" else (1, 2))]
        for r, s in pairs:
            values = {}
            for m in _central_ms(fam, cfg.m_range):
                rep = check_central_monomial(fam, r, s, m, window)
                values[m] = rep.defect if rep.scalar else None
                out.append(_defect_check(f"commutators.{fam}.r{r}.s{s}.m{m}",
                                         _CENTRAL_ANCHORS[fam], rep))
            ok = all(v is not None for v in values.values())
            fit = fit_monomial(values) if ok else None
            single = fit is not None and len(fit) == 1
            out.append(Check(f"commutators.{fam}.r{r}.s{s}.fit", "central term is a single monomial in m",
                             single, {"fit": {f"m^{p}": c for p, c in (fit or {}).items()},
                                      "samples": [str(m) for m in values]}))
    return out


def _mode_of(name: str) -> Fraction:
    return Fraction(name.rsplit("_", 1)[1])


def projectivity_checks(cfg: SuiteConfig, max_r: int = 2) -> list[Check]:
    """One row for the whole generator sweep plus one for window stability."""
    from .commutator_lab import measured_normalization, ns_generators, projective_defect
    max_m = min(cfg.m_range, 2)
    gens = ns_generators(max_r, max_m)
    norm = measured_normalization("NS")
    window = (0, cfg.max_weight)
    nonscalar, degree_zero, ratios = [], [], set()
    for i, (na, a) in enumerate(gens):
        for nb, b in gens[i:]:
            rep = projective_defect(a, b, window, norm=norm)
            if not rep.scalar:
                nonscalar.append([na, nb])
                continue
            if _mode_of(na) + _mode_of(nb) == 0:
                degree_zero.append((na, a, nb, b, rep.defect))
            if "ratio" in rep.details:
                ratios.add(format_scalar(rep.details["ratio"]))
    pairs = len(gens) * (len(gens) + 1) // 2
    out = [Check("commutators.projectivity.scalar",
                 "commutator defect of generator images is a scalar (projectivity)",
                 not nonscalar,
                 {"generators": len(gens), "pairs": pairs, "window": list(window),
                  "maxR": max_r, "maxM": max_m, "nonScalar": nonscalar[:10],
                  "defectOverCocycle": sorted(ratios)})]
    stable_window = (0, cfg.max_weight + 1)
    moved = []
    for na, a, nb, b, d in degree_zero:
        rep = projective_defect(a, b, stable_window, norm=norm)
        if not rep.scalar or rep.defect != d:
            moved.append([na, nb])
    out.append(Check("commutators.projectivity.window-stable",
                     "projective defect is independent of the weight window", not moved,
                     {"degreeZeroPairs": len(degree_zero), "recheckWindow": list(stable_window),
                      "changed": moved[:10]}))
    return out


def _nontrivial_primitive(N: int):
    from .number_theory import primitive_characters
    return primitive_characters(N)


def twisted_checks(cfg: SuiteConfig) -> list[Check]:
    from .commutator_lab import check_twisted_trivial_center, twisted_image_matches_operator
    from .fock_rep import (basis, chi_twisted_operator, regularized_constant, twisted_correction,
                           twisted_correction_as_printed, twisted_correction_from_series,
                           twisted_mode, twisted_mode_via_gauss, twisted_pole_coefficient)
    from .number_theory import l_value_neg, working_level
    out = []
    chars5 = _nontrivial_primitive(5)
    states = [s for w in (2, 3) for s in basis(Fraction(w), "NS", True, False)]
    for chi in chars5:
        for mu in chars5:
            L = working_level(chi, mu)
            rho = chi * mu
            bad = []
            for m in range(-4, 5):
                A, Ag = twisted_mode(chi, m), twisted_mode_via_gauss(chi, m)
                if Ag.scale != A.scale:
                    bad.append(f"gauss route differs at m={m}")
                for n in range(-4, 5):
                    C = A @ twisted_mode(mu, n) - twisted_mode(mu, n) @ A
                    want = chi.value(-1, L) * rho.value(m, L) * m if m + n == 0 else 0
                    for s in states:
                        if C._apply_state(s) != ({s: want} if want else {}):
                            bad.append(f"m={m} n={n}")
                            break
            pair = f"{chi.label()},{mu.label()}"
            out.append(Check(f"commutators.twisted.modes.{pair}",
                             "twisted mode commutator chi(-1)(chi mu)(m) m delta_{m+n,0}",
                             not bad, {"modes": "|m|,|n| <= 4", "mismatches": bad[:5]}))
    pairs = [(chi, mu) for chi in chars5 for mu in chars5 if not (chi * mu).is_trivial]
    cubic7 = [c for c in _nontrivial_primitive(7) if c.order == 3 and c.parity == 1]
    pairs += [(chi, mu) for chi in cubic7 for mu in cubic7 if not (chi * mu).is_trivial]
    for chi, mu in pairs:
        pair = f"{chi.label()},{mu.label()}"
        pole = twisted_pole_coefficient(chi, mu)
        out.append(Check(f"commutators.twisted.pole-free.{pair}",
                         "twisted correction series has no pole when chi mu is nontrivial",
                         not pole, {"poleCoefficient": pole}))
        series = twisted_correction_from_series(1, chi, mu)
        closed = twisted_correction(1, chi, mu)
        regular = regularized_constant(chi_twisted_operator(1, 0, chi, mu))
        half_l = -l_value_neg(chi * mu, 4) / 2
        detail = {"muParity": mu.parity, "fromSeries": series, "regularizedSum": regular,
                  "closedForm": closed, "minusHalfL(-3,chi mu)": half_l}
        agree = series == closed == regular
        out.append(Check(f"commutators.twisted.correction.{pair}",
                         "twisted zero-mode correction -L(-3, chi mu)/2",
                         agree and series == half_l == twisted_correction_as_printed(1, chi, mu),
                         detail, series))
        if mu.parity == -1:
            out.append(Check(f"commutators.twisted.correction-general.{pair}",
                             "twisted zero-mode correction mu(-1)(-1)^r L(-2r-1, chi mu)/2",
                             agree and series == -half_l, detail, series))
    for chi, mu in pairs[:4]:
        ok = twisted_image_matches_operator(1, 1, chi, mu)
        out.append(Check(f"commutators.twisted.image.{chi.label()},{mu.label()}",
                         "symbolic twisted element maps to the twisted Fock operator", ok,
                         {"r": 1, "m": 1}))
    quads, nonzero, scalar = 0, [], True
    for c1 in chars5:
        for m1 in chars5:
            for c2 in chars5:
                for m2 in chars5:
                    if (c1 * m1 * c2 * m2).is_trivial:
                        continue
                    quads += 1
                    rep = check_twisted_trivial_center(1, 1, 1, c1, m1, c2, m2)
                    scalar = scalar and rep.scalar
                    if not rep.scalar or rep.defect:
                        nonzero.append({"characters": [c.label() for c in (c1, m1, c2, m2)],
                                        "defect": rep.defect if rep.scalar else "non-scalar"})
    out.append(Check("commutators.twisted.zero-center",
                     "zero central term for twisted pairs with nontrivial product (N = 5, r = s = 1, m = 1)",
                     scalar and not nonzero,
                     {"quadruples": quads, "nonzero": len(nonzero), "allScalar": scalar,
                      "examples": nonzero[:4]}))
    return out


COMMUTATOR_FAMILIES: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "virasoro": virasoro_checks,
    "ns": ns_checks,
    "ss0": lambda cfg: central_checks(cfg, ("ss0",)),
    "ss2": lambda cfg: central_checks(cfg, ("ss2",)),
    "ss4": lambda cfg: central_checks(cfg, ("ss4",)),
    "projectivity": projectivity_checks,
    "twisted": twisted_checks,
}


def commutator_checks(cfg: SuiteConfig) -> list[Check]:
    out = []
    for fam in ("virasoro", "ns", "ss0", "ss2", "ss4", "projectivity", "twisted"):
        out.extend(COMMUTATOR_FAMILIES[fam](cfg))
    return out


# --------------------------------------------------------------------------
# suite: zeta

def zeta_checks(cfg: SuiteConfig) -> list[Check]:
    from .fock_rep import (boson_correction, boson_correction_from_series, fermion_correction,
                           fermion_correction_from_series)
    from .number_theory import (bernoulli, bernoulli_poly, hurwitz_half_from_generating,
                                zeta_neg, zeta_nonpositive)
    out = []
    for n, want in ((1, Fraction(-1, 12)), (3, Fraction(1, 120)), (11, Fraction(691, 32760))):
        val = zeta_neg(n)
        out.append(Check(f"zeta.value.-{n}", "zeta at negative integers from Bernoulli numbers",
                         val == want == -bernoulli(n + 1) / (n + 1), {"expected": want}, val))
    b12 = bernoulli(12)
    out.append(Check("zeta.bernoulli.12", "B_12 = -691/2730", b12 == Fraction(-691, 2730), {}, b12))
    bad = [n for n in range(1, 21)
           if -bernoulli_poly(n, HALF) / n != (Fraction(2) ** (1 - n) - 1) * zeta_nonpositive(1 - n)]
    out.append(Check("zeta.hurwitz.duplication", "zeta(1-n, 1/2) = (2^(1-n) - 1) zeta(1-n)",
                     not bad, {"n": "1..20", "failures": bad}))
    bad = [n for n in range(1, cfg.series_order + 1)
           if hurwitz_half_from_generating(n) != -bernoulli_poly(n, HALF) / n]
    out.append(Check("zeta.hurwitz.generating", "e^(x/2)/(e^x - 1) generating function matches Bernoulli polynomials",
                     not bad, {"n": f"1..{cfg.series_order}", "failures": bad}))
    for r in range(3):
        b, bs = boson_correction(r), boson_correction_from_series(r)
        out.append(Check(f"zeta.correction.boson.r{r}", "boson zero-mode correction (-1)^r zeta(-2r-1)/2",
                         b == bs == (-1) ** r * zeta_neg(2 * r + 1) / 2, {"fromSeries": bs}, b))
        f, fs = fermion_correction(r), fermion_correction_from_series(r)
        want = (-1) ** (r + 1) * -bernoulli_poly(2 * r + 2, HALF) / (2 * r + 2) / 2
        out.append(Check(f"zeta.correction.fermion.r{r}",
                         "fermion zero-mode correction (-1)^(r+1) zeta(-1-2r, 1/2)/2",
                         f == fs == want, {"fromSeries": fs}, f))
    return out


# --------------------------------------------------------------------------
# suite: dirichlet

def dirichlet_checks(cfg: SuiteConfig) -> list[Check]:
    from .number_theory import (enumerate_characters, gauss_sum, gen_bernoulli, gen_bernoulli_oracle,
                                l_value_neg, verify_gauss_twist, verify_partial_fraction,
                                working_level)
    out = []
    for N in cfg.moduli:
        for chi in _nontrivial_primitive(N):
            lab = chi.label()
            bad = [k for k in range(N + 1) if not verify_gauss_twist(chi, k)]
            out.append(Check(f"dirichlet.gauss-twist.{lab}",
                             "sum_a chi(a) zeta_N^(ak) = conj(chi)(k) g(chi)", not bad,
                             {"k": f"0..{N}", "failures": bad}))
            L = working_level(chi)
            prod = gauss_sum(chi, L) * gauss_sum(chi.conj(), L)
            out.append(Check(f"dirichlet.gauss-norm.{lab}", "g(chi) g(conj chi) = chi(-1) N",
                             prod == chi.parity * N, {"expected": chi.parity * N}, prod))
            out.append(Check(f"dirichlet.partial-fraction.{lab}",
                             "character partial-fraction expansion of N chi(a) e^(ax)/(e^(Nx) - 1)",
                             verify_partial_fraction(chi, cfg.series_order),
                             {"xOrder": cfg.series_order}))
            bad = [n for n in range(1, 5) if gen_bernoulli(chi, n) != gen_bernoulli_oracle(chi, n)]
            out.append(Check(f"dirichlet.gen-bernoulli.{lab}",
                             "generalized Bernoulli numbers: generating function vs finite sum",
                             not bad, {"n": "1..4", "failures": bad}))
        zeros = [c.label() for c in enumerate_characters(N) if not c.is_trivial and gen_bernoulli(c, 0)]
        out.append(Check(f"dirichlet.b0.mod{N}", "B_{0,chi} = 0 for nontrivial chi", not zeros,
                         {"failures": zeros}))
        if N == 4:
            (chi4,) = _nontrivial_primitive(4)
            val = l_value_neg(chi4, 1)
            out.append(Check("dirichlet.l-value.chi-4", "L(0, chi_-4) = 1/2", val == HALF, {}, val))
    return out


# --------------------------------------------------------------------------
# suite: characters and quasimod

def character_checks(cfg: SuiteConfig, ramond_prefactor: str = "printed") -> list[Check]:
    from .q_characters import eta_quotient_check, form4_check, trace_vs_product
    out = []
    for sector, top in (("boson", 5), ("NS-fermion", Fraction(9, 2)), ("Ramond-fermion", 4),
                        ("full-W", 3)):
        ok = trace_vs_product(sector, 2, top, ramond_prefactor)
        out.append(Check(f"characters.trace.{sector}", "generalized character: Fock trace equals product formula",
                         ok, {"K": 2, "maxWeight": Fraction(top), "ramondPrefactor": ramond_prefactor}))
    if ramond_prefactor == "printed":
        ok = trace_vs_product("Ramond-fermion", 2, 4, "standard")
        out.append(Check("characters.trace.Ramond-fermion.standard",
                         "generalized character with the standard Ramond prefactor -zeta(1-2i)/2",
                         ok, {"K": 2, "maxWeight": "4"}))
    out.append(Check("characters.eta-quotient", "NS character equals the eta quotient",
                     eta_quotient_check(cfg.q_order), {"qOrder": cfg.q_order}))
    for j in (1, 2, 3):
        out.append(Check(f"characters.form4.j{j}", "level-two Eisenstein series via odd divisor sums",
                         form4_check(j, min(cfg.q_order, 12)), {"qOrder": min(cfg.q_order, 12)}))
    return out


def quasimod_checks(cfg: SuiteConfig) -> list[Check]:
    from .q_characters import form6_span, quasimod_form3_check
    out = []
    for j in (1, 2, 3):
        out.append(Check(f"quasimod.form3.j{j}", "q-derivative identity for the level-two series",
                         quasimod_form3_check(j, cfg.q_order), {"qOrder": cfg.q_order}))
    order = cfg.q_order + 4
    for jl in ((1, 1), (2, 1), (2, 2)):
        rep = form6_span(jl, order)
        out.append(Check(f"quasimod.form6.{jl[0]}-{jl[1]}",
                         "product of odd divisor series lies in the quasimodular span",
                         rep.passed, {"weight": rep.weight, "coefficients": dict(zip(rep.labels, rep.coefficients)),
                                      "constraints": rep.constraints, "surplus": rep.surplus,
                                      "residual": rep.residual, "qOrder": order}))
    return out


# --------------------------------------------------------------------------
# suite: iterates

def iterate_checks(cfg: SuiteConfig, pairs=("h", "phi"), x_order: int = 6) -> list[Check]:
    from .fock_rep import iterate_vertex_check
    window = min(cfg.max_weight, 4)
    out = []
    for u in pairs:
        rep = iterate_vertex_check(u, u, x_order, window)
        out.append(Check(f"iterates.{u}", "iterate minus normal-ordered product is e^(x wt u)/(e^x - 1)^(wt u + wt v)",
                         rep.passed, {"xOrder": x_order, "window": window,
                                      "correction": rep.correction, "mismatches": rep.mismatches[:5]}))
    return out


SUITE_RUNNERS: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "symbolic": symbolic_checks,
    "commutators": commutator_checks,
    "zeta": zeta_checks,
    "dirichlet": dirichlet_checks,
    "characters": character_checks,
    "quasimod": quasimod_checks,
    "iterates": iterate_checks,
}


# --------------------------------------------------------------------------
# reports

def _suite_block(name: str, checks: list[Check], seconds: float, with_approx: bool) -> dict:
    passed = sum(c.passed for c in checks)
    return {"suite": name, "checks": [c.as_dict(with_approx) for c in checks],
            "summary": {"total": len(checks), "passed": passed, "failed": len(checks) - passed},
            "timing": {"seconds": round(seconds, 3)}}


def _run_one(job) -> tuple[str, list[dict], float]:
    name, cfg = job
    t0 = time.perf_counter()
    checks = SUITE_RUNNERS[name](cfg)
    return name, [c.as_dict(cfg.approx) for c in checks], time.perf_counter() - t0


def run(cfg: SuiteConfig) -> tuple[dict, int]:
    """Execute the configured suites; returns (report, exit code)."""
    jobs = [(name, cfg) for name in SUITES if name in cfg.suites]
    if cfg.workers == 1 or len(jobs) == 1:
        results = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(jobs))) as pool:
            results = list(pool.map(_run_one, jobs))
    blocks = []
    for name, rows, seconds in results:
        passed = sum(r["pass"] for r in rows)
        blocks.append({"suite": name, "checks": rows,
                       "summary": {"total": len(rows), "passed": passed, "failed": len(rows) - passed},
                       "timing": {"seconds": round(seconds, 3)}})
    total = sum(b["summary"]["total"] for b in blocks)
    passed = sum(b["summary"]["passed"] for b in blocks)
    report = {"schemaVersion": SCHEMA_VERSION, "tool": "zetareg", "version": __version__,
              "config": cfg.as_dict(), "suites": blocks,
              "summary": {"total": total, "passed": passed, "failed": total - passed}}
    return report, EXIT_OK if passed == total else EXIT_FAIL


def checks_report(name: str, checks: list[Check], cfg: SuiteConfig, seconds: float) -> tuple[dict, int]:
    block = _suite_block(name, checks, seconds, cfg.approx)
    report = {"schemaVersion": SCHEMA_VERSION, "tool": "zetareg", "version": __version__,
              "config": cfg.as_dict(), "suites": [block], "summary": dict(block["summary"])}
    return report, EXIT_OK if block["summary"]["failed"] == 0 else EXIT_FAIL


def _detail_text(detail: dict) -> str:
    parts = []
    for k, v in detail.items():
        if v in ([], {}, None, ""):
            continue
        parts.append(f"{k}={json.dumps(v, ensure_ascii=False) if not isinstance(v, str) else v}")
    return "; ".join(parts)


def format_report_text(report: dict) -> str:
    lines = []
    for block in report["suites"]:
        s = block["summary"]
        lines.append(f"== {block['suite']}: {s['passed']}/{s['total']} passed "
                     f"({block['timing']['seconds']:.2f} s)")
        for row in block["checks"]:
            mark = "PASS" if row["pass"] else "FAIL"
            detail = _detail_text(row["detail"])
            lines.append(f"{mark}  {row['id']}  [{row['paperRef']}]" + (f"  {detail}" if detail else ""))
    s = report["summary"]
    lines.append(f"summary: {s['total']} checks, {s['passed']} passed, {s['failed']} failed")
    return "\n".join(lines)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


# --------------------------------------------------------------------------
# tables

def emit_tables(kind: str, *, n: int = 5, modulus: int = 4, max_m: int = 3, k: int = 2,
                order: int = 3, with_approx: bool = False) -> dict:
    """Table of exact values with a fixed column order; the JSON form is this dict."""
    from .number_theory import enumerate_characters, l_value_neg, zeta_nonpositive
    from .q_characters import eisenstein
    if kind == "zeta":
        columns = ["s", "zeta(s)"]
        rows = [[-i, zeta_nonpositive(-i)] for i in range(1, n + 1)]
    elif kind == "l-values":
        columns = ["character", "parity", "m", "L(1-m, chi)"]
        rows = []
        for chi in enumerate_characters(modulus):
            if chi.is_trivial:
                continue
            for m in range(1, max_m + 1):
                rows.append([chi.label(), "even" if chi.parity == 1 else "odd", m, l_value_neg(chi, m)])
    elif kind == "eisenstein":
        columns = ["k", "order", "series"]
        rows = [[k, order, eisenstein(k, order)]]
    else:
        raise ConfigError(f"unknown table {kind!r}")
    if with_approx and kind != "eisenstein":
        columns = columns + ["approx"]
        rows = [r + [approx(r[-1])] for r in rows]
    return {"schemaVersion": SCHEMA_VERSION, "table": kind, "columns": columns,
            "rows": [[exact(c) for c in r] for r in rows]}


def format_table_text(table: dict) -> str:
    rows = [table["columns"]] + table["rows"]
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(table["columns"]))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# --------------------------------------------------------------------------
# configuration

_CONFIG_KEYS = {
    "max-weight": "max_weight", "max-power": "max_power", "series-order": "series_order",
    "order": "series_order", "q-order": "q_order", "moduli": "moduli", "modulus": "moduli",
    "suites": "suites", "format": "output_format", "json": "output_format",
    "m-range": "m_range", "x-range": "x_range", "cases": "cases", "seed": "seed",
    "workers": "workers", "approx": "approx",
}
_SECTION = "zetareg"


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(p) for p in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"expected integers, got {text!r}") from None


def parse_config_text(text: str) -> dict:
    """Flat key = value file mirroring the long flags; '#' starts a comment."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read_string(f"[{_SECTION}]\n{text}")
    except configparser.Error as exc:
        raise ConfigError(f"config file: {exc}") from None
    out = {}
    for key, raw in parser[_SECTION].items():
        name = _CONFIG_KEYS.get(key)
        if name is None:
            raise ConfigError(f"config file: unknown key {key!r}")
        raw = raw.strip()
        if name in ("moduli",):
            out[name] = _int_list(raw)
        elif name == "suites":
            out[name] = tuple(s for s in raw.replace(",", " ").split())
        elif name == "output_format":
            if key == "json":
                out[name] = "json" if parser[_SECTION].getboolean(key) else "text"
            else:
                out[name] = raw
        elif name == "approx":
            out[name] = parser[_SECTION].getboolean(key)
        else:
            try:
                out[name] = int(raw)
            except ValueError:
                raise ConfigError(f"config file: {key} must be an integer") from None
    return out


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None


def config_from_args(args: argparse.Namespace, **fixed) -> SuiteConfig:
    """Defaults, then the config file, then explicit flags."""
    values = load_config(getattr(args, "config", None))
    flag_map = {"max_weight": "max_weight", "max_power": "max_power", "order": "series_order",
                "series_order": "series_order", "q_order": "q_order", "m_range": "m_range",
                "x_range": "x_range", "cases": "cases", "seed": "seed", "workers": "workers"}
    for attr, name in flag_map.items():
        v = getattr(args, attr, None)
        if v is not None:
            values[name] = v
    if getattr(args, "modulus", None):
        values["moduli"] = tuple(args.modulus)
    if getattr(args, "suites", None):
        values["suites"] = tuple(s for part in args.suites for s in part.replace(",", " ").split())
    if getattr(args, "json", False):
        values["output_format"] = "json"
    if getattr(args, "approx", False):
        values["approx"] = True
    values.update(fixed)
    return SuiteConfig(**values)


# --------------------------------------------------------------------------
# argument parsing

def _common_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--max-weight", type=int, help="weight window bound for Fock computations")
    p.add_argument("--max-power", type=int, help="largest y-power in symbolic bracket checks")
    p.add_argument("--order", type=int, help="series truncation order")
    p.add_argument("--modulus", type=int, action="append", help="Dirichlet modulus (repeatable)")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--approx", action="store_true", help="add a decimal display column")
    p.add_argument("--config", metavar="PATH", help="flat key = value config file; flags override it")
    p.add_argument("--workers", type=int, help="process pool size (1 runs sequentially)")
    return p


def build_parser() -> argparse.ArgumentParser:
    from .symbolic_diffops import BRACKET_IDS
    common = _common_parent()
    parser = argparse.ArgumentParser(prog="zetareg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("run", parents=[common], help="run selected suites")
    p.add_argument("--suites", action="append", metavar="NAMES",
                   help=f"comma-separated subset of {','.join(SUITES)}")
    p.add_argument("--series-order", type=int, dest="series_order")
    p.add_argument("--q-order", type=int, dest="q_order")
    p.add_argument("--m-range", type=int, dest="m_range")
    p.add_argument("--x-range", type=int, dest="x_range")
    p.add_argument("--cases", type=int)
    p.add_argument("--seed", type=int)

    sub.add_parser("all", parents=[common], help="run every suite with default bounds")

    p = sub.add_parser("verify-symbolic", parents=[common], help="symbolic bracket identities")
    p.add_argument("--which", default="all", choices=("all",) + BRACKET_IDS)
    p.add_argument("--x-range", type=int, dest="x_range")
    p.add_argument("--roman-d", default="Dsum", choices=("Dsum", "D"),
                   help="how the roman D in the bracket formulas is read")
    p.add_argument("--cases", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("verify-commutators", parents=[common], help="central terms and projectivity")
    p.add_argument("--family", required=True, choices=tuple(COMMUTATOR_FAMILIES))
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--m-range", type=int, dest="m_range")

    p = sub.add_parser("zeta-table", parents=[common], help="zeta(-n) for n = 1..N")
    p.add_argument("--n", type=int, default=5)

    p = sub.add_parser("l-values", parents=[common], help="L(1-m, chi) for characters mod N")
    p.add_argument("--max-m", type=int, default=3)

    p = sub.add_parser("eisenstein", parents=[common], help="Eisenstein series G_k as a q-series")
    p.add_argument("--k", type=int, default=2)

    sub.add_parser("dirichlet-identities", parents=[common], help="Gauss sums and L-values")

    p = sub.add_parser("characters", parents=[common], help="generalized characters")
    p.add_argument("--sector", default="boson")
    p.add_argument("--vars", type=int, default=2, help="number of q variables K")
    p.add_argument("--ramond-prefactor", choices=RAMOND_PREFACTORS, default="printed")
    p.add_argument("--show", type=int, default=12, help="coefficients to list")

    p = sub.add_parser("quasimod-check", parents=[common], help="q-series identities")
    p.add_argument("--identity", required=True, choices=("form3", "form4", "form6", "eta"))
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--jlist", default="1,1", help="comma-separated j list for form6")

    p = sub.add_parser("iterate-check", parents=[common], help="iterate/normal-order bridge")
    p.add_argument("--pair", choices=("h", "phi", "both"), default="both")
    p.add_argument("--x-order", type=int, default=6)

    p = sub.add_parser("fock-dims", parents=[common], help="graded dimensions of Fock spaces")
    p.add_argument("--sector", default="NS", choices=("NS", "R"))
    p.add_argument("--bosons-only", action="store_true")

    p = sub.add_parser("operator-matrix", parents=[common], help="exact matrix of one operator")
    p.add_argument("--family", required=True, choices=("L", "Lf", "G", "vir", "ns-L", "ns-G"))
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--m", default="0")
    p.add_argument("--corrected", action="store_true")
    p.add_argument("--sector", default="NS", choices=("NS", "R"))
    return parser


# --------------------------------------------------------------------------
# command handlers

def _emit(obj, text: str, as_json: bool) -> None:
    print(dump_json(obj) if as_json else text)


def _report_out(report: dict, cfg: SuiteConfig) -> None:
    _emit(report, format_report_text(report), cfg.output_format == "json")


def _cmd_run(args, cfg: SuiteConfig) -> int:
    report, code = run(cfg)
    _report_out(report, cfg)
    return code


def _timed(name: str, fn, cfg: SuiteConfig) -> int:
    t0 = time.perf_counter()
    checks = fn()
    report, code = checks_report(name, checks, cfg, time.perf_counter() - t0)
    _report_out(report, cfg)
    return code


def _cmd_verify_symbolic(args, cfg):
    which = None if args.which == "all" else [args.which]
    return _timed("symbolic", lambda: symbolic_checks(cfg, which, args.roman_d, which is None), cfg)


def _cmd_verify_commutators(args, cfg):
    fam = args.family
    if fam in ("ss0", "ss2", "ss4") and (args.r is not None or args.s is not None):
        lo = 0 if fam == "ss4" else 1
        r = args.r if args.r is not None else lo
        s = args.s if args.s is not None else lo
        if min(r, s) < lo:
            raise ConfigError(f"{fam} needs r, s >= {lo}")
        return _timed("commutators", lambda: central_checks(cfg, (fam,), [(r, s)]), cfg)
    return _timed("commutators", lambda: COMMUTATOR_FAMILIES[fam](cfg), cfg)


def _cmd_table(kind: str, args, cfg, **params) -> int:
    table = emit_tables(kind, with_approx=cfg.approx, **params)
    _emit(table, format_table_text(table), cfg.output_format == "json")
    return EXIT_OK


def _q_monomial(exps) -> str:
    parts = [f"q{2 * i + 1}" + ("" if e == 1 else f"^{e}") for i, e in enumerate(exps) if e]
    return " ".join(parts) or "1"


def _cmd_characters(args, cfg):
    from .q_characters import canonical_sector, fock_trace, generalized_character
    try:
        sector = canonical_sector(args.sector)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    top = Fraction(args.max_weight) if args.max_weight is not None else Fraction(4)
    prod = generalized_character(sector, args.vars, top, args.ramond_prefactor)
    vac, tc = fock_trace(sector, args.vars, top, args.ramond_prefactor)
    pc = dict(prod.items())
    keys = sorted(set(pc) | set(tc))
    mismatch = [k for k in keys if pc.get(k, 0) != tc.get(k, 0)]
    if vac != prod.prefactor:
        mismatch.insert(0, "prefactor")
    items = list(prod.items())[: args.show]
    obj = {"schemaVersion": SCHEMA_VERSION, "sector": sector, "K": args.vars,
           "maxWeight": exact(top), "ramondPrefactor": args.ramond_prefactor,
           "prefactor": exact(prod.prefactor), "pass": not mismatch,
           "coefficients": [{"exponents": exact(list(e)), "value": exact(c)} for e, c in items]}
    if mismatch:
        obj["mismatches"] = [{"exponents": exact(list(k)), "product": exact(pc.get(k, 0)),
                              "trace": exact(tc.get(k, 0))} if k != "prefactor"
                             else {"prefactor": exact(list(prod.prefactor)), "trace": exact(list(vac))}
                             for k in mismatch[:20]]
    lines = [f"sector {sector}, K = {args.vars}, weight <= {top}, ramond prefactor {args.ramond_prefactor}",
             f"prefactor exponents: {', '.join(exact(list(prod.prefactor)))}"]
    lines += [f"  {_q_monomial(e)}: {format_scalar(c)}" for e, c in items]
    lines.append(("PASS" if not mismatch else "FAIL") + "  trace equals product"
                 + (f" ({len(mismatch)} mismatching coefficients)" if mismatch else ""))
    _emit(obj, "\n".join(lines), cfg.output_format == "json")
    return EXIT_OK if not mismatch else EXIT_FAIL


def _cmd_quasimod(args, cfg):
    from .q_characters import eta_quotient_check, form4_check, form6_span, quasimod_form3_check
    order = args.order or (24 if args.identity == "form6" else 20)
    ident = args.identity
    if ident == "form3":
        checks = [Check(f"quasimod.form3.j{args.j}", "q-derivative identity for the level-two series",
                        quasimod_form3_check(args.j, order), {"qOrder": order})]
    elif ident == "form4":
        checks = [Check(f"characters.form4.j{args.j}", "level-two Eisenstein series via odd divisor sums",
                        form4_check(args.j, order), {"qOrder": order})]
    elif ident == "eta":
        checks = [Check("characters.eta-quotient", "NS character equals the eta quotient",
                        eta_quotient_check(order), {"qOrder": order})]
    else:
        jl = tuple(_int_list(args.jlist))
        if not jl or min(jl) < 1:
            raise ConfigError("--jlist needs positive integers")
        rep = form6_span(jl, order)
        checks = [Check(f"quasimod.form6.{'-'.join(map(str, jl))}",
                        "product of odd divisor series lies in the quasimodular span", rep.passed,
                        {"weight": rep.weight, "coefficients": dict(zip(rep.labels, rep.coefficients)),
                         "constraints": rep.constraints, "surplus": rep.surplus,
                         "residual": rep.residual, "qOrder": order})]
    return _timed("quasimod", lambda: checks, cfg)


def _cmd_iterate(args, cfg):
    pairs = ("h", "phi") if args.pair == "both" else (args.pair,)
    return _timed("iterates", lambda: iterate_checks(cfg, pairs, args.x_order), cfg)


def _cmd_fock_dims(args, cfg):
    from .fock_rep import fock_dims
    top = args.max_weight if args.max_weight is not None else 4
    dims = fock_dims(top, args.sector, True, not args.bosons_only)
    table = {"schemaVersion": SCHEMA_VERSION, "table": "fock-dims", "columns": ["weight", "dimension"],
             "rows": [[exact(w), exact(d)] for w, d in sorted(dims.items())]}
    _emit(table, format_table_text(table), cfg.output_format == "json")
    return EXIT_OK


def _cmd_operator_matrix(args, cfg):
    from .commutator_lab import operator_matrix
    from .fock_rep import OperatorSpec, build_operator
    m = Fraction(args.m)
    op = build_operator(OperatorSpec(args.family, args.r, m, corrected=args.corrected, sector=args.sector))
    top = args.max_weight if args.max_weight is not None else 3
    M = operator_matrix(op, (0, top))
    rows = [[src.render(), dst.render(), exact(c)] for src in sorted(M)
            for dst, c in sorted(M[src].items()) if c]
    table = {"schemaVersion": SCHEMA_VERSION, "table": "operator-matrix", "operator": op.label,
             "columns": ["source", "target", "entry"], "rows": rows}
    text = f"{op.label} on weights 0..{top}\n" + format_table_text(table)
    _emit(table, text, cfg.output_format == "json")
    return EXIT_OK


def dispatch(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "all":
        return _cmd_run(args, config_from_args(args, suites=SUITES))
    if cmd == "run":
        return _cmd_run(args, config_from_args(args))
    cfg = config_from_args(args)
    if cmd == "verify-symbolic":
        return _cmd_verify_symbolic(args, cfg)
    if cmd == "verify-commutators":
        return _cmd_verify_commutators(args, cfg)
    if cmd == "zeta-table":
        return _cmd_table("zeta", args, cfg, n=args.n)
    if cmd == "l-values":
        return _cmd_table("l-values", args, cfg, modulus=(args.modulus or [4])[0], max_m=args.max_m)
    if cmd == "eisenstein":
        return _cmd_table("eisenstein", args, cfg, k=args.k, order=args.order or 3)
    if cmd == "dirichlet-identities":
        return _timed("dirichlet", lambda: dirichlet_checks(cfg), cfg)
    if cmd == "characters":
        return _cmd_characters(args, cfg)
    if cmd == "quasimod-check":
        return _cmd_quasimod(args, cfg)
    if cmd == "iterate-check":
        return _cmd_iterate(args, cfg)
    if cmd == "fock-dims":
        return _cmd_fock_dims(args, cfg)
    if cmd == "operator-matrix":
        return _cmd_operator_matrix(args, cfg)
    raise ConfigError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    from .fock_rep import PaddingError, SectorError
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args)
    except (ConfigError, SectorError) as exc:
        parser.print_usage(sys.stderr)
        print(f"zetareg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PaddingError, PrecisionError, ArithmeticError) as exc:
        print(f"zetareg: internal inconsistency: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
