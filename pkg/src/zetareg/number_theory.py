"""Bernoulli numbers, zeta and Hurwitz zeta at non-positive integers, Dirichlet
characters, Gauss sums, generalized Bernoulli numbers and L-values.

Everything is exact: rationals are Fractions, character values and Gauss sums
live in cyclotomic fields.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial, gcd

from .kernel import Cyclotomic, TruncatedSeries, expand_quotient
from .kernel.cyclotomic import as_level

_LOCK = threading.Lock()
_BERNOULLI: list[Fraction] = [Fraction(1)]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# --------------------------------------------------------------------------
# Bernoulli numbers and zeta values

def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{k<=n} C(n+1,k) B_k = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    with _LOCK:
        while len(_BERNOULLI) <= n:
            m = len(_BERNOULLI)
            acc = sum(comb(m + 1, k) * _BERNOULLI[k] for k in range(m))
            _BERNOULLI.append(-acc / (m + 1))
        return _BERNOULLI[n]


def bernoulli_poly(n: int, x) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^(n-k)."""
    x = Fraction(x)
    return sum((comb(n, k) * bernoulli(k) * x ** (n - k) for k in range(n + 1)), Fraction(0))


def zeta_neg(n: int) -> Fraction:
    """zeta(-n) for n >= 1."""
    if n < 1:
        raise ValueError("zeta_neg expects n >= 1")
    return -bernoulli(n + 1) / (n + 1)


def zeta_nonpositive(s: int) -> Fraction:
    """zeta(s) for s <= 0 (zeta(0) = -1/2)."""
    if s > 0:
        raise ValueError("only non-positive arguments")
    return Fraction(-1, 2) if s == 0 else zeta_neg(-s)


def hurwitz_neg(s: int, a) -> Fraction:
    """zeta(-s, a) = -B_{s+1}(a)/(s+1) for s >= 0 and rational a > 0."""
    if s < 0:
        raise ValueError("s must be non-negative")
    return -bernoulli_poly(s + 1, a) / (s + 1)


def hurwitz_half(n: int) -> Fraction:
    """zeta(1-n, 1/2) for n >= 1, computed two ways that must agree."""
    if n < 1:
        raise ValueError("hurwitz_half expects n >= 1")
    via_poly = -bernoulli_poly(n, Fraction(1, 2)) / n
    via_duplication = (Fraction(2) ** (1 - n) - 1) * zeta_nonpositive(1 - n)
    if via_poly != via_duplication:
        raise ArithmeticError(f"Hurwitz paths disagree at n={n}")
    return via_poly


def hurwitz_half_generating(order: int) -> TruncatedSeries:
    """Laurent expansion of e^{x/2}/(e^x - 1) through x^order."""
    inner = order + 2
    return expand_quotient(TruncatedSeries.exp(Fraction(1, 2), inner),
                           TruncatedSeries.exp(1, inner) - 1, order)


def hurwitz_half_from_generating(n: int) -> Fraction:
    """zeta(1-n, 1/2) read off the generating function: coefficient of x^(n-1) is
    B_n(1/2)/n! = -zeta(1-n,1/2)/(n-1)!."""
    series = hurwitz_half_generating(max(n - 1, 0))
    return -series.coefficient(n - 1) * factorial(n - 1)


def regularized_power_sum(power: int, offset=Fraction(0), period_values=None) -> Fraction:
    """Zeta-regularized value of sum over k in (offset + Z_{>=0}), k > 0, of w(k) k^power.

    With no period_values the weight is 1 and the result is zeta(-power, start)
    where start is the smallest positive element of offset + Z. With
    period_values = (w(1), ..., w(N)) for integer k the result is
    -N^power sum_a w(a) B_{power+1}(a/N)/(power+1).
    """
    if period_values is None:
        start = Fraction(offset) % 1 or Fraction(1)
        return hurwitz_neg(power, start)
    N = len(period_values)
    total = 0
    for a, w in enumerate(period_values, start=1):
        if w:
            total = total + w * bernoulli_poly(power + 1, Fraction(a, N))
    return -Fraction(N) ** power * total / (power + 1)


# --------------------------------------------------------------------------
# Dirichlet characters

@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod N. phases[a] = e in [0,1) with chi(a) = exp(2 pi i e); None off units."""

    modulus: int
    phases: tuple
    order: int = field(compare=False)
    conductor: int = field(compare=False)
    index: int = field(default=0, compare=False)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def is_trivial(self) -> bool:
        return all(p is None or p == 0 for p in self.phases)

    @property
    def parity(self) -> int:
        ph = self.phases[(-1) % self.modulus]
        return 1 if ph == 0 else -1

    def phase(self, a: int):
        return self.phases[a % self.modulus]

    def value(self, a: int, level: int | None = None):
        """chi(a) as a Cyclotomic of the given level (default: the character order)."""
        level = level or self.order
        ph = self.phases[a % self.modulus]
        if ph is None:
            return Cyclotomic.from_rational(level, 0)
        k = ph * level
        if k.denominator != 1:
            raise ValueError(f"level {level} too small for character of order {self.order}")
        return Cyclotomic.root(level, int(k))

    __call__ = value

    def conj(self) -> "DirichletCharacter":
        return _make_character(self.modulus, tuple(None if p is None else (-p) % 1
                                                   for p in self.phases), self.index)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus != self.modulus:
            raise ValueError("characters must share the modulus")
        return _make_character(self.modulus, tuple(
            None if p is None else (p + q) % 1 for p, q in zip(self.phases, other.phases)))

    def label(self) -> str:
        return f"chi{self.modulus}.{self.index}"

    def table(self) -> list[str]:
        from .kernel import format_scalar
        return [format_scalar(self.value(a)) for a in range(1, self.modulus + 1)]


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _conductor(N: int, phases) -> int:
    for M in _divisors(N):
        if all(phases[a] == 0 for a in range(N) if phases[a] is not None and a % M == 1 % M):
            return M
    return N


def _make_character(N: int, phases: tuple, index: int = 0) -> DirichletCharacter:
    order = 1
    for p in phases:
        if p is not None:
            order = _lcm(order, Fraction(p).denominator)
    return DirichletCharacter(N, phases, order, _conductor(N, phases), index)


def _unit_generators(N: int) -> list[tuple[int, int]]:
    units = [a for a in range(1, N + 1) if gcd(a, N) == 1]
    span = {1 % N}
    gens = []
    for a in units:
        a %= N
        if a in span:
            continue
        order, x = 1, a
        while x != 1 % N:
            x = x * a % N
            order += 1
        gens.append((a, order))
        frontier = set(span)
        while frontier:
            nxt = set()
            for s in frontier:
                t = s * a % N
                if t not in span:
                    span.add(t)
                    nxt.add(t)
            frontier = nxt
    return gens


@lru_cache(maxsize=None)
def enumerate_characters(N: int) -> tuple[DirichletCharacter, ...]:
    """All phi(N) characters mod N, found by brute force over a generating set."""
    if N < 1:
        raise ValueError("modulus must be positive")
    gens = _unit_generators(N)
    found = []
    seen = set()
    for ks in product(*[range(o) for _, o in gens]):
        phases = {1 % N: Fraction(0)}
        queue = [1 % N]
        ok = True
        while queue and ok:
            x = queue.pop()
            for (g, o), k in zip(gens, ks):
                y = x * g % N
                val = (phases[x] + Fraction(k, o)) % 1
                if y in phases:
                    if phases[y] != val:
                        ok = False
                        break
                else:
                    phases[y] = val
                    queue.append(y)
        if not ok:
            continue
        table = tuple(phases.get(a) if gcd(a, N) == 1 else None for a in range(N))
        if N == 1:
            table = (Fraction(0),)
        if table not in seen:
            seen.add(table)
            found.append(table)
    found.sort(key=lambda t: tuple(-1 if p is None else p for p in t))
    return tuple(_make_character(N, t, i) for i, t in enumerate(found))


def trivial_character(N: int) -> DirichletCharacter:
    return enumerate_characters(N)[0]


def primitive_characters(N: int, nontrivial: bool = True) -> list[DirichletCharacter]:
    return [c for c in enumerate_characters(N) if c.is_primitive and not (nontrivial and c.is_trivial)]


def working_level(*chars: DirichletCharacter, extra: int = 1) -> int:
    level = extra
    for c in chars:
        level = _lcm(level, _lcm(c.modulus, c.order))
    return level


# --------------------------------------------------------------------------
# Gauss sums and twisting

def gauss_sum(chi: DirichletCharacter, level: int | None = None) -> Cyclotomic:
    """g(chi) = sum_{n=1}^N chi(n) zeta_N^n in Q(zeta_L), L = lcm(N, order)."""
    N = chi.modulus
    L = level or working_level(chi)
    total = Cyclotomic.from_rational(L, 0)
    for n in range(1, N + 1):
        v = chi.value(n, L)
        if v:
            total = total + v * Cyclotomic.root(L, (L // N) * n)
    return total


def twisted_sum(chi: DirichletCharacter, k: int, level: int | None = None) -> Cyclotomic:
    N = chi.modulus
    L = level or working_level(chi)
    total = Cyclotomic.from_rational(L, 0)
    for a in range(1, N + 1):
        v = chi.value(a, L)
        if v:
            total = total + v * Cyclotomic.root(L, (L // N) * a * k)
    return total


def verify_gauss_twist(chi: DirichletCharacter, k: int) -> bool:
    """sum_a chi(a) zeta_N^{ak} == conj(chi)(k) g(chi)."""
    if not chi.is_primitive:
        raise ValueError("the twist identity is only asserted for primitive characters")
    L = working_level(chi)
    return twisted_sum(chi, k, L) == chi.conj().value(k, L) * gauss_sum(chi, L)


# --------------------------------------------------------------------------
# generalized Bernoulli numbers and L-values

def _character_exp_sum(chi: DirichletCharacter, order: int, level: int) -> TruncatedSeries:
    """sum_a chi(a) e^{a y} through y^order."""
    N = chi.modulus
    coeffs = {}
    for n in range(order + 1):
        acc = Cyclotomic.from_rational(level, 0)
        for a in range(1, N + 1):
            v = chi.value(a, level)
            if v:
                acc = acc + v * Fraction(a ** n, factorial(n))
        coeffs[n] = acc
    return TruncatedSeries(coeffs, lo=0, hi=order)


@lru_cache(maxsize=None)
def _gen_bernoulli_series(chi: DirichletCharacter, n_max: int) -> TruncatedSeries:
    L = working_level(chi)
    inner = n_max + 2
    num = _character_exp_sum(chi, inner, L).shift(1)
    den = TruncatedSeries.exp(chi.modulus, inner + 1) - 1
    return expand_quotient(num, den, n_max)


def gen_bernoulli(chi: DirichletCharacter, n: int) -> Cyclotomic:
    """B_{n,chi} from sum_a chi(a) y e^{ay}/(e^{Ny}-1) = sum_n B_{n,chi} y^n/n!."""
    c = _gen_bernoulli_series(chi, max(n, 8)).coefficient(n)
    if not isinstance(c, Cyclotomic):
        c = Cyclotomic.from_rational(working_level(chi), c)
    return c * factorial(n)


def gen_bernoulli_oracle(chi: DirichletCharacter, n: int) -> Cyclotomic:
    """Independent route: B_{n,chi} = N^(n-1) sum_a chi(a) B_n(a/N)."""
    N = chi.modulus
    L = working_level(chi)
    total = Cyclotomic.from_rational(L, 0)
    for a in range(1, N + 1):
        v = chi.value(a, L)
        if v:
            total = total + v * bernoulli_poly(n, Fraction(a, N))
    return total * Fraction(N) ** (n - 1) if n >= 1 else total * Fraction(1, N)


def l_value_neg(chi: DirichletCharacter, m: int) -> Cyclotomic:
    """L(1-m, chi) = -B_{m,chi}/m for m >= 1."""
    if m < 1:
        raise ValueError("m must be positive")
    return -gen_bernoulli(chi, m) / m


def partial_fraction_sides(chi: DirichletCharacter, order: int):
    """Both sides of N g(chi)^-1 sum_a chi(a)e^{ax}/(e^{Nx}-1)
    = sum_a conj(chi)(a) e^{x - 2 pi i a/N}/(e^{x - 2 pi i a/N} - 1) as x-series."""
    N = chi.modulus
    L = working_level(chi)
    inner = order + 2
    num = _character_exp_sum(chi, inner, L)
    den = TruncatedSeries.exp(N, inner + 1) - 1
    g_inv = gauss_sum(chi, L).inverse()
    lhs = expand_quotient(num, den, order) * (g_inv * N)
    cbar = chi.conj()
    rhs = TruncatedSeries({}, lo=0, hi=order)
    for a in range(1, N + 1):
        v = cbar.value(a, L)
        if not v:
            continue
        w = Cyclotomic.root(L, -(L // N) * a)
        we = TruncatedSeries.exp(1, inner) * w
        rhs = rhs + expand_quotient(we, we - 1, order) * v
    return lhs, rhs


def verify_partial_fraction(chi: DirichletCharacter, order: int) -> bool:
    if not chi.is_primitive or chi.is_trivial:
        raise ValueError("the partial-fraction identity needs a primitive nontrivial character")
    lhs, rhs = partial_fraction_sides(chi, order)
    if lhs.coefficient(-1):
        return False
    return lhs.equal_through(rhs, order)


def twisted_contraction_series(chi: DirichletCharacter, mu: DirichletCharacter,
                               order: int) -> TruncatedSeries:
    """sum_b (chi mu)(b) e^{bz}/(e^{Nz}-1) as a Laurent series in z = y1 - y2."""
    rho = chi * mu
    N = chi.modulus
    L = working_level(chi, mu)
    inner = order + 2
    num = TruncatedSeries({}, lo=0, hi=inner)
    for n in range(inner + 1):
        acc = Cyclotomic.from_rational(L, 0)
        for b in range(1, N + 1):
            v = rho.value(b, L)
            if v:
                acc = acc + v * Fraction(b ** n, factorial(n))
        num = num + TruncatedSeries({n: acc}, lo=0)
    den = TruncatedSeries.exp(N, inner + 1) - 1
    return expand_quotient(num.truncate(inner), den, order)


def as_scalar(x, level: int):
    return as_level(x, level)
