"""q-series and generalized characters.

A q-series is a TruncatedSeries in the variable q on the lattice (1/d)Z; d is 1
for Eisenstein series, 2 for level-two and fermionic series and 48 once the
vacuum prefactor q^{-1/48} is attached.

Generalized characters live in variables q1, q3, ..., q_{2K-1}. A Fock state
with parts lambda contributes q1^{sum lambda} q3^{sum lambda^3} ...; the vacuum
prefactor exponents are kept apart as exact rationals, one per variable.

The zero modes are (-1)^r Lbar^(r)(0) for both species. This sign is the one for
which the product formula has positive exponents n^{2i-1} and prefactor
exponents zeta(1-2i)/2 (bosons), -zeta(1-2i,1/2)/2 (NS fermions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .kernel import MultiSeries, TruncatedSeries, expand_quotient, solve_exact
from .number_theory import hurwitz_neg, zeta_neg

HALF = Fraction(1, 2)
QSeries = TruncatedSeries

SECTORS = ("boson", "NS-fermion", "Ramond-fermion", "full-W")
_SECTOR_ALIASES = {"boson": "boson", "bosons": "boson", "m": "boson",
                   "ns": "NS-fermion", "ns-fermion": "NS-fermion", "f": "NS-fermion",
                   "ramond": "Ramond-fermion", "r": "Ramond-fermion",
                   "ramond-fermion": "Ramond-fermion",
                   "full": "full-W", "w": "full-W", "full-w": "full-W"}


def canonical_sector(name: str) -> str:
    try:
        return _SECTOR_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown character sector {name!r}; expected one of {SECTORS}") from None


def _q(coeffs: dict, order, d: int = 1) -> TruncatedSeries:
    """Series on (1/d)Z from {exponent: coeff}, valid through q^order."""
    hi = int(Fraction(order) * d)
    return TruncatedSeries({int(Fraction(e) * d): c for e, c in coeffs.items()
                            if Fraction(e) <= order}, var="q", d=d, lo=0, hi=hi)


# --------------------------------------------------------------------------
# Eisenstein and level-two series

def _sigma(n: int, k: int, odd_only: bool = False) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0 and (d % 2 or not odd_only))


def eisenstein(k: int, order: int) -> TruncatedSeries:
    """G_k(q) = zeta(1-k)/2 + sum_n sigma_{k-1}(n) q^n through q^order."""
    if k < 2 or k % 2:
        raise ValueError("Eisenstein series need an even weight k >= 2")
    coeffs = {0: zeta_neg(k - 1) / 2}
    coeffs.update({n: Fraction(_sigma(n, k - 1)) for n in range(1, order + 1)})
    return _q(coeffs, order)


def level_two(j: int, order) -> TruncatedSeries:
    """F^(2)_{2j}(q) = G_{2j}(q^{1/2}) - 2^{2j-1} G_{2j}(q), valid through q^order."""
    if j < 1:
        raise ValueError("j must be positive")
    order = Fraction(order)
    half = eisenstein(2 * j, int(2 * order)).substitute_root(2)
    full = eisenstein(2 * j, int(order) + 1).truncate(order)
    return (half - full * 2 ** (2 * j - 1)).truncate(order)


def odd_divisor_series(j: int, order: int) -> TruncatedSeries:
    """sum_{l>=1} (sum_{d|l, d odd} d^{2j-1}) q^l, the oracle side of the level-two identity."""
    return _q({l: Fraction(_sigma(l, 2 * j - 1, odd_only=True)) for l in range(1, order + 1)},
              order)


def form4_check(j: int, order: int) -> bool:
    """Odd divisor sums equal F^(2)_{2j}(q^2) - (1 - 2^{2j-1}) zeta(1-2j)/2."""
    rhs = level_two(j, Fraction(order, 2) + 1).substitute_power(2).truncate(order)
    rhs = rhs - (1 - 2 ** (2 * j - 1)) * zeta_neg(2 * j - 1) / 2
    return odd_divisor_series(j, order).equal_through(rhs, order)


# --------------------------------------------------------------------------
# eta quotient

def euler_product(order, step=Fraction(1), offset=Fraction(0), sign: int = -1) -> TruncatedSeries:
    """prod_{n>=1} (1 + sign q^{(n - offset) step}) through q^order."""
    step, offset = Fraction(step), Fraction(offset)
    d = lcm(step.denominator, (step * offset).denominator)
    result = _q({0: 1}, order, d)
    n = 1
    while (n - offset) * step <= order:
        e = (n - offset) * step
        result = (result * _q({0: 1, e: sign}, order, d)).truncate(order)
        n += 1
    return result


def ns_character(order) -> TruncatedSeries:
    """m_0(q) = q^{-1/48} prod (1 + q^{n-1/2}), on the 1/48 lattice, through q^order."""
    core = euler_product(Fraction(order) + Fraction(1, 48), 1, HALF, +1)
    return core.rescale(48).shift(Fraction(-1, 48)).truncate(order)


ETA_PREFACTOR = {"eta(q)^2": Fraction(2, 24), "eta(q^2)": Fraction(2, 24),
                 "eta(q^1/2)": Fraction(1, 48)}


def eta_quotient(order) -> TruncatedSeries:
    """eta(q)^2 / (eta(q^2) eta(q^{1/2})) with eta(q) = q^{1/24} prod (1 - q^n)."""
    top = Fraction(order) + 1
    num = euler_product(top) ** 2
    den = euler_product(top, step=2) * euler_product(top, step=HALF)
    core = expand_quotient(num.rescale(2), den.rescale(2), top)
    shift = ETA_PREFACTOR["eta(q)^2"] - ETA_PREFACTOR["eta(q^2)"] - ETA_PREFACTOR["eta(q^1/2)"]
    return core.rescale(48).shift(shift).truncate(order)


def eta_quotient_check(order) -> bool:
    """The NS character equals the eta quotient coefficient by coefficient through q^order."""
    return ns_character(order).equal_through(eta_quotient(order), order)


# --------------------------------------------------------------------------
# generalized characters

@dataclass(frozen=True)
class MultiQSeries:
    """prod_i q_{2i-1}^{prefactor[i]} times series (exponent vectors over q1, q3, ...)."""

    series: MultiSeries
    prefactor: tuple
    sector: str

    def coefficient(self, exps):
        return self.series.coefficient(tuple(Fraction(e) for e in exps))

    def items(self):
        return sorted(self.series.coeffs.items())

    def specialize(self):
        """Set tau_3 = tau_5 = ... = 0: a q1-series (without prefactor)."""
        out: dict = {}
        for e, c in self.series.coeffs.items():
            out[e[0]] = out.get(e[0], 0) + c
        d = 1
        for e in out:
            d = max(d, Fraction(e).denominator)
        return _q(out, self.series.orders[0], d)


def prefactor_exponents(sector: str, K: int, ramond_prefactor: str = "printed") -> tuple:
    """Vacuum exponent on q_{2i-1}, i = 1..K."""
    sector = canonical_sector(sector)
    if sector == "full-W":
        b = prefactor_exponents("boson", K)
        f = prefactor_exponents("NS-fermion", K)
        return tuple(x + y for x, y in zip(b, f))
    out = []
    for i in range(1, K + 1):
        if sector == "boson":
            out.append(zeta_neg(2 * i - 1) / 2)
        elif sector == "NS-fermion" or ramond_prefactor == "printed":
            out.append(-hurwitz_neg(2 * i - 1, HALF) / 2)
        elif ramond_prefactor == "standard":
            out.append(-zeta_neg(2 * i - 1) / 2)
        else:
            raise ValueError("ramond prefactor is 'printed' or 'standard'")
    return tuple(out)


def _variables(K: int) -> tuple:
    return tuple(f"q{2 * i - 1}" for i in range(1, K + 1))


def _caps(K: int, max_weight) -> tuple:
    # sum lambda^{2i-1} <= (sum lambda)^{2i-1} for parts >= 1; half-integer parts only shrink it
    w = Fraction(max_weight)
    return tuple(w ** (2 * i - 1) if w >= 1 else w for i in range(1, K + 1))


def _expand_product(parts, K: int, max_weight, bosonic: bool) -> dict:
    """prod over parts p of (1 - x_p)^{-1} or (1 + x_p), x_p = q1^p q3^{p^3} ..., pruned by q1."""
    w = Fraction(max_weight)
    poly = {(Fraction(0),) * K: 1}
    for p in parts:
        vec = tuple(Fraction(p) ** (2 * i - 1) for i in range(1, K + 1))
        new = dict(poly)
        for e, c in poly.items():
            k = 1
            while e[0] + k * vec[0] <= w:
                f = tuple(x + k * v for x, v in zip(e, vec))
                new[f] = new.get(f, 0) + c
                if not bosonic:
                    break
                k += 1
        poly = new
    return poly


def _parts(sector: str, max_weight):
    w = Fraction(max_weight)
    if sector in ("boson", "Ramond-fermion"):
        return [Fraction(n) for n in range(1, int(w) + 1)]
    out, p = [], HALF
    while p <= w:
        out.append(p)
        p += 1
    return out


def generalized_character(sector: str, K: int, max_weight, ramond_prefactor: str = "printed"
                          ) -> MultiQSeries:
    """Product formula for the generalized character, all monomials of q1-weight <= max_weight."""
    sector = canonical_sector(sector)
    if K < 1:
        raise ValueError("K must be at least 1")
    w = Fraction(max_weight)
    if sector == "full-W":
        b = _expand_product(_parts("boson", w), K, w, True)
        f = _expand_product(_parts("NS-fermion", w), K, w, False)
        coeffs: dict = {}
        for e1, c1 in b.items():
            for e2, c2 in f.items():
                if e1[0] + e2[0] <= w:
                    e = tuple(x + y for x, y in zip(e1, e2))
                    coeffs[e] = coeffs.get(e, 0) + c1 * c2
    else:
        coeffs = _expand_product(_parts(sector, w), K, w, sector == "boson")
    series = MultiSeries(_variables(K), _caps(K, w), coeffs)
    return MultiQSeries(series, prefactor_exponents(sector, K, ramond_prefactor), sector)


# --------------------------------------------------------------------------
# trace over the Fock basis

@lru_cache(maxsize=None)
def _zero_modes(sector: str, K: int, ramond_prefactor: str):
    """(-1)^r Lbar^(r)(0) per species, r = 0..K-1, as operators on the sector's Fock space."""
    from .fock_rep import OperatorSpec, build_operator, regularized_constant
    fock_sector = "R" if sector == "Ramond-fermion" else "NS"
    species = {"boson": ("L",), "NS-fermion": ("Lf",), "Ramond-fermion": ("Lf",),
               "full-W": ("L", "Lf")}[sector]
    ops = []
    for r in range(K):
        per = []
        for fam in species:
            if sector == "Ramond-fermion" and ramond_prefactor == "standard":
                raw = build_operator(OperatorSpec(fam, r, 0, False, sector=fock_sector))
                op = raw.with_constant(regularized_constant(raw))
            else:
                op = build_operator(OperatorSpec(fam, r, 0, True, sector=fock_sector))
            per.append(op)
        ops.append((per, (-1) ** r))
    return fock_sector, species, ops


def fock_trace(sector: str, K: int, max_weight, ramond_prefactor: str = "printed"):
    """(vacuum exponents, {exponent vector: multiplicity}) from zero-mode eigenvalues."""
    from .fock_rep import basis, weights_upto
    sector = canonical_sector(sector)
    fock_sector, species, ops = _zero_modes(sector, K, ramond_prefactor)
    bos = "L" in species
    fer = "Lf" in species
    vac = None
    counts: dict = {}
    for w in weights_upto(max_weight, fock_sector, bosons=bos, fermions=fer):
        for s in basis(w, fock_sector, bosons=bos, fermions=fer):
            vec = []
            for per, sign in ops:
                total = Fraction(0)
                for op in per:
                    image = op.apply({s: 1})
                    if set(image) - {s}:
                        raise ArithmeticError(f"zero mode is not diagonal on {s.render()}")
                    total += image.get(s, 0)
                vec.append(sign * total)
            if vac is None:
                vac = tuple(vec)
            e = tuple(x - v for x, v in zip(vec, vac))
            counts[e] = counts.get(e, 0) + 1
    return vac, counts


def trace_vs_product(sector: str, K: int, max_weight, ramond_prefactor: str = "printed") -> bool:
    """Fock trace and product formula agree on every monomial and on the prefactor."""
    vac, counts = fock_trace(sector, K, max_weight, ramond_prefactor)
    char = generalized_character(sector, K, max_weight, ramond_prefactor)
    return vac == char.prefactor and counts == char.series.coeffs


# --------------------------------------------------------------------------
# quasimodularity identities

def _alternating_geometric(base, power: int, order, d: int = 2, weight=Fraction(1)) -> dict:
    """sum_m (-1)^{m+1} m^power q^{base m} * weight, as {exponent: coeff} through order."""
    out: dict = {}
    m = 1
    while base * m <= order:
        out[base * m] = out.get(base * m, 0) + (-1) ** (m + 1) * Fraction(m) ** power * weight
        m += 1
    return out


def form3_lhs(j: int, order) -> TruncatedSeries:
    """-zeta(1-2j,1/2)/2 + sum_n (n-1/2)^{2j-1} q^{n-1/2}/(1+q^{n-1/2}): d/dtau_{2j-1} log F."""
    coeffs: dict = {0: -hurwitz_neg(2 * j - 1, HALF) / 2}
    p = HALF
    while p <= order:
        for e, c in _alternating_geometric(p, 0, order, weight=p ** (2 * j - 1)).items():
            coeffs[e] = coeffs.get(e, 0) + c
        p += 1
    return _q(coeffs, order, 2)


def form3_middle(j: int, order) -> TruncatedSeries:
    """The intermediate double sum: -zeta/2 - {2 sum ((2n-1)/2)^{2j-1} q^{(2n-1)m}
    - sum ((2n-1)/2)^{2j-1} q^{(2n-1)m/2}}."""
    coeffs: dict = {0: -hurwitz_neg(2 * j - 1, HALF) / 2}
    n = 1
    while Fraction(2 * n - 1, 2) <= order:
        c = Fraction(2 * n - 1, 2) ** (2 * j - 1)
        m = 1
        while Fraction((2 * n - 1) * m, 2) <= order:
            e = Fraction((2 * n - 1) * m, 2)
            coeffs[e] = coeffs.get(e, 0) + c
            if (2 * n - 1) * m <= order:
                coeffs[(2 * n - 1) * m] = coeffs.get((2 * n - 1) * m, 0) - 2 * c
            m += 1
        n += 1
    return _q(coeffs, order, 2)


def form3_rhs(j: int, order) -> TruncatedSeries:
    """F^(2)_{2j}(q)/2^{2j-1} - F^(2)_{2j}(q^2)/2^{2j-2}."""
    order = Fraction(order)
    first = level_two(j, order) * Fraction(1, 2 ** (2 * j - 1))
    second = level_two(j, order / 2 + 1).substitute_power(2).truncate(order)
    return (first - second * Fraction(1, 2 ** (2 * j - 2))).truncate(order)


def quasimod_form3_check(j: int, order) -> bool:
    lhs = form3_lhs(j, order)
    return lhs.equal_through(form3_middle(j, order), order) and \
        lhs.equal_through(form3_rhs(j, order), order)


def form6_lhs(j_list, order) -> TruncatedSeries:
    """(2 pi i)^{-r} d^r log F / d tau_{2j_1-1} ... d tau_{2j_r-1} at tau_3 = ... = 0.

    Each derivative brings (n-1/2)^{2j-1} x d/dx on log(1 + x), x = q^{n-1/2}."""
    r = len(j_list)
    S = sum(2 * j - 1 for j in j_list)
    coeffs: dict = {}
    p = HALF
    while p <= order:
        for e, c in _alternating_geometric(p, r - 1, order, weight=p ** S).items():
            coeffs[e] = coeffs.get(e, 0) + c
        p += 1
    return _q(coeffs, order, 2)


def form6_displayed(j_list, order) -> TruncatedSeries:
    """The displayed double sums: -2^{-2(J-r)} sum (2n-1)^{2(J-r)+1} (m(2n-1))^{r-1} q^{(2n-1)m}
    + sum ((2n-1)/2)^{2(J-r)+1} ((2n-1)m/2)^{r-1} q^{(2n-1)m/2}, J = sum j_k."""
    r, J = len(j_list), sum(j_list)
    top = 2 * (J - r) + 1
    coeffs: dict = {}
    n = 1
    while Fraction(2 * n - 1, 2) <= order:
        m = 1
        while Fraction((2 * n - 1) * m, 2) <= order:
            e = Fraction((2 * n - 1) * m, 2)
            coeffs[e] = coeffs.get(e, 0) + Fraction(2 * n - 1, 2) ** top * e ** (r - 1)
            if (2 * n - 1) * m <= order:
                e2 = (2 * n - 1) * m
                coeffs[e2] = coeffs.get(e2, 0) - Fraction(1, 2 ** (2 * (J - r))) * \
                    (2 * n - 1) ** top * Fraction(e2) ** (r - 1)
            m += 1
        n += 1
    return _q(coeffs, order, 2)


@dataclass
class SpanReport:
    """Result of expressing a series in a span of basis series, exactly."""

    weight: int
    labels: tuple
    coefficients: tuple | None
    constraints: int
    surplus: int
    residual: object

    @property
    def passed(self) -> bool:
        return self.coefficients is not None and self.surplus >= 5 and self.residual == 0


def _theta_power(s: TruncatedSeries, k: int) -> TruncatedSeries:
    for _ in range(k):
        s = s.theta()
    return s


def form6_span(j_list, order) -> SpanReport:
    """Express the mixed derivative in span{theta^{r-1} F^(2)_{2w}(q), theta^{r-1} F^(2)_{2w}(q^2)}
    with w = sum j_k - r + 1 and theta = q d/dq."""
    r = len(j_list)
    if r < 2:
        raise ValueError("the span test is for r >= 2 derivatives")
    w = sum(j_list) - r + 1
    order = Fraction(order)
    lhs = form6_lhs(j_list, order)
    basis_series = [
        _theta_power(level_two(w, order), r - 1),
        _theta_power(level_two(w, order / 2 + 1).substitute_power(2).truncate(order), r - 1),
    ]
    grid = [Fraction(n, 2) for n in range(0, int(2 * order) + 1)]
    cols = [[b.coefficient(e) for e in grid] for b in basis_series]
    target = [lhs.coefficient(e) for e in grid]
    sol = solve_exact(cols, target)
    residual = None
    if sol is not None:
        combo = basis_series[0] * sol[0] + basis_series[1] * sol[1]
        residual = max((abs(lhs.coefficient(e) - combo.coefficient(e)) for e in grid),
                       default=Fraction(0))
    nonzero_rows = sum(1 for i, _ in enumerate(grid) if any(c[i] for c in cols) or target[i])
    rank = sum(1 for _ in basis_series)
    return SpanReport(w, (f"theta^{r - 1} F2_{2 * w}(q)", f"theta^{r - 1} F2_{2 * w}(q^2)"),
                      None if sol is None else tuple(sol), nonzero_rows, nonzero_rows - rank,
                      residual)


def quasimod_form6_check(j_list, r: int, order) -> bool:
    if len(j_list) != r:
        raise ValueError("jList must have r entries")
    lhs = form6_lhs(j_list, order)
    if not lhs.equal_through(form6_displayed(j_list, order), order):
        return False
    return form6_span(j_list, order).passed
