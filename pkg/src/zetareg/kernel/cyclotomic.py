"""Exact arithmetic in cyclotomic fields Q(zeta_L).

Elements are kept in the power basis of Q[x]/(Phi_L(x)), so two elements of
the same level are equal exactly when their coefficient tuples are equal.
Elements of different levels are compared and combined after embedding both
into the level lcm(L, M).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
import cmath

Rational = Fraction


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _int_divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Divide integer polynomial num by the monic polynomial den; no remainder allowed."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j, b in enumerate(den):
                num[i - dd + j] -= c * b
    if any(num[:dd]):
        raise ArithmeticError("non-exact cyclotomic division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of Phi_n, by dividing x^n - 1 by Phi_d for proper divisors d."""
    if n < 1:
        raise ValueError("cyclotomic level must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_divexact(num, cyclotomic_polynomial(d))
    return tuple(num)


@lru_cache(maxsize=None)
def _phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result, k, m = 1, 2, n
    while k * k <= m:
        if m % k == 0:
            m //= k
            if m % k == 0:
                return 0
            result = -result
        k += 1
    if m > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def _power_table(level: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds x^k mod Phi_level in the power basis, for 0 <= k < level."""
    phi = cyclotomic_polynomial(level)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    if deg:
        cur[0] = 1
    for _ in range(level):
        rows.append(tuple(cur))
        # multiply by x and reduce the overflow coefficient
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1] if deg else []
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _reduce(level: int, coeffs) -> tuple[Fraction, ...]:
    """Reduce an arbitrary coefficient list (power i of zeta_L at index i) modulo Phi_level."""
    deg = _phi(level)
    out = [Fraction(0)] * deg
    table = _power_table(level)
    for i, c in enumerate(coeffs):
        if c:
            row = table[i % level]
            for j, r in enumerate(row):
                if r:
                    out[j] += c * r
    return tuple(out)


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a.pop()
    return _trim(q), _trim(a)


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


class Cyclotomic:
    """An element sum_i c_i zeta_L^i of Q(zeta_L), zeta_L = exp(2 pi i / L)."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs=()):
        if level < 1:
            raise ValueError("level must be positive")
        self.level = level
        self.coeffs = _reduce(level, [Fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, level: int, coeffs: tuple) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj.level = level
        obj.coeffs = coeffs
        return obj

    @classmethod
    def root(cls, level: int, power: int = 1) -> "Cyclotomic":
        """zeta_level ** power."""
        row = _power_table(level)[power % level]
        return cls._raw(level, tuple(Fraction(v) for v in row))

    @classmethod
    def from_rational(cls, level: int, value) -> "Cyclotomic":
        deg = _phi(level)
        return cls._raw(level, (Fraction(value),) + (Fraction(0),) * (deg - 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def embed(self, level: int) -> "Cyclotomic":
        """Image under Q(zeta_L) -> Q(zeta_M), zeta_L -> zeta_M^(M/L)."""
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"cannot embed level {self.level} into {level}")
        step = level // self.level
        spread = [Fraction(0)] * level
        for i, c in enumerate(self.coeffs):
            spread[(i * step) % level] += c
        return Cyclotomic._raw(level, _reduce(level, spread))

    def _pair(self, other):
        if isinstance(other, Cyclotomic):
            if other.level == self.level:
                return self, other
            m = _lcm(self.level, other.level)
            return self.embed(m), other.embed(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.from_rational(self.level, other)
        return None, None

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def minimal(self) -> "Cyclotomic":
        """The same number expressed at the smallest level whose field contains it."""
        if self.is_rational():
            return Cyclotomic.from_rational(1, self.coeffs[0] if self.coeffs else 0)
        for d in range(2, self.level):
            if self.level % d:
                continue
            found = _express_at(self, d)
            if found is not None:
                return found
        return self

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic._raw(a.level, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.level, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic._raw(a.level, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic._raw(self.level, tuple(x * other for x in self.coeffs))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return cyclotomic_mul(a, b)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        return cyclotomic_inverse(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Cyclotomic._raw(self.level, tuple(x / other for x in self.coeffs))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return cyclotomic_mul(a, cyclotomic_inverse(b))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic.from_rational(self.level, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "Cyclotomic":
        """Complex conjugation zeta -> zeta^-1."""
        spread = [Fraction(0)] * self.level
        for i, c in enumerate(self.coeffs):
            spread[(-i) % self.level] += c
        return Cyclotomic._raw(self.level, _reduce(self.level, spread))

    def normalized_trace(self) -> Fraction:
        """Trace to Q divided by the field degree; independent of the embedding level."""
        total = Fraction(0)
        L = self.level
        for i, c in enumerate(self.coeffs):
            if c:
                n = L // gcd(i, L)
                total += c * _mobius(n) / _phi(n)
        return total

    def to_complex(self) -> complex:
        """Floating-point value under zeta_L -> exp(2 pi i / L); display only."""
        L = self.level
        return sum(float(c) * cmath.exp(2j * cmath.pi * i / L) for i, c in enumerate(self.coeffs) if c)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_rational())
        return hash(("cyc", self.normalized_trace()))

    def __repr__(self):
        return f"Cyclotomic({self.level}, {format_cyclotomic(self)!r})"

    def __str__(self):
        return format_cyclotomic(self)


def _express_at(x: Cyclotomic, d: int):
    """Coordinates of x in Q(zeta_d) inside Q(zeta_L), or None if x is not in that subfield."""
    L = x.level
    step = L // d
    basis = [Cyclotomic.root(L, i * step).coeffs for i in range(_phi(d))]
    n = len(basis)
    # columns = basis vectors; augmented with x
    rows = [[basis[j][r] for j in range(n)] + [x.coeffs[r]] for r in range(len(x.coeffs))]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = rows[i][-1]
    return Cyclotomic._raw(d, tuple(sol))


def cyclotomic_mul(a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    """Product in Q(zeta_L); both factors must already share the level."""
    if a.level != b.level:
        raise ValueError(f"level mismatch: {a.level} vs {b.level}")
    L = a.level
    deg = len(a.coeffs)
    prod = [Fraction(0)] * max(2 * deg - 1, 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] += x * y
    if deg == 0:
        return a
    return Cyclotomic._raw(L, _reduce(L, prod))


def cyclotomic_inverse(a: Cyclotomic) -> Cyclotomic:
    """Inverse via the extended Euclidean algorithm against Phi_L."""
    if not a:
        raise ZeroDivisionError("inverse of zero cyclotomic element")
    L = a.level
    r0 = [Fraction(c) for c in cyclotomic_polynomial(L)]
    r1 = _trim(list(a.coeffs))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    c = r1[0]
    return Cyclotomic._raw(L, _reduce(L, [x / c for x in s1]))


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_cyclotomic(a: Cyclotomic) -> str:
    a = a.minimal()
    if a.is_rational():
        return format_rational(a.to_rational())
    parts = []
    for i in range(len(a.coeffs) - 1, -1, -1):
        c = a.coeffs[i]
        if not c:
            continue
        if i == 0:
            body = format_rational(abs(c))
        else:
            sym = f"ζ{a.level}" if i == 1 else f"ζ{a.level}^{i}"
            body = sym if abs(c) == 1 else f"{format_rational(abs(c))}*{sym}"
        parts.append(("-" if c < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_scalar(x) -> str:
    """Canonical exact rendering used by reports and golden tests."""
    if isinstance(x, Cyclotomic):
        return format_cyclotomic(x)
    return format_rational(x)


def common_level(*values) -> int:
    level = 1
    for v in values:
        if isinstance(v, Cyclotomic):
            level = _lcm(level, v.level)
    return level


def as_level(x, level: int) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x.embed(level)
    return Cyclotomic.from_rational(level, x)


def is_zero(x) -> bool:
    return not x
