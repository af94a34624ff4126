"""Truncated Laurent series in one variable with exponents in (1/d)Z.

A series carries an explicit window [lo, hi] in units of 1/d: every
coefficient with exponent below lo/d is zero, every coefficient up to hi/d is
known exactly, and nothing above hi/d is ever reported. hi = None marks an
exact finite expansion (a Laurent polynomial).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, floor, gcd

from .cyclotomic import format_scalar


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _min_hi(*vals):
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


class PrecisionError(ValueError):
    """A coefficient beyond the guaranteed window was requested."""


class TruncatedSeries:
    __slots__ = ("var", "d", "lo", "hi", "coeffs")

    def __init__(self, coeffs: dict, *, var: str = "x", d: int = 1, lo: int | None = None,
                 hi: int | None = None):
        clean = {n: c for n, c in coeffs.items() if c}
        if lo is None:
            lo = min(clean) if clean else 0
        if hi is not None:
            clean = {n: c for n, c in clean.items() if n <= hi}
        if any(n < lo for n in clean):
            raise ValueError("coefficient below the declared window")
        self.var, self.d, self.lo, self.hi, self.coeffs = var, d, lo, hi, clean

    # constructors -----------------------------------------------------
    @classmethod
    def from_list(cls, values, *, var="x", start: int = 0, d: int = 1, exact=True):
        coeffs = {start + i: v for i, v in enumerate(values)}
        hi = None if exact else start + len(values) - 1
        return cls(coeffs, var=var, d=d, lo=start, hi=hi)

    @classmethod
    def monomial(cls, exponent, coeff=1, *, var="x", d: int = 1):
        n = Fraction(exponent) * d
        if n.denominator != 1:
            raise ValueError("exponent not on the 1/d lattice")
        return cls({int(n): coeff}, var=var, d=d, lo=int(n), hi=None)

    @classmethod
    def exp(cls, a, order: int, *, var="x"):
        """e^{a x} through x^order."""
        coeffs, term = {}, Fraction(1)
        for n in range(order + 1):
            coeffs[n] = term
            term = term * a / (n + 1)
        return cls(coeffs, var=var, lo=0, hi=order)

    # windows --------------------------------------------------------------
    def rescale(self, d: int) -> "TruncatedSeries":
        """Re-express on the finer lattice (1/d)Z; d must be a multiple of self.d."""
        if d == self.d:
            return self
        if d % self.d:
            raise ValueError("can only refine the exponent lattice")
        k = d // self.d
        hi = None if self.hi is None else self.hi * k + (k - 1)
        return TruncatedSeries({n * k: c for n, c in self.coeffs.items()}, var=self.var, d=d,
                               lo=self.lo * k, hi=hi)

    def _align(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries({0: other}, var=self.var, d=self.d, lo=0)
        d = _lcm(self.d, other.d)
        return self.rescale(d), other.rescale(d)

    @property
    def valid_to(self):
        """Largest exponent (as a Fraction) whose coefficient is guaranteed, or None if exact."""
        return None if self.hi is None else Fraction(self.hi, self.d)

    def coefficient(self, exponent):
        n = Fraction(exponent) * self.d
        if n.denominator != 1:
            return 0
        n = int(n)
        if self.hi is not None and n > self.hi:
            raise PrecisionError(f"x^{exponent} lies beyond the window (valid to {self.valid_to})")
        return self.coeffs.get(n, 0)

    def __getitem__(self, exponent):
        return self.coefficient(exponent)

    def items(self):
        """(exponent, coefficient) pairs in increasing exponent order."""
        for n in sorted(self.coeffs):
            yield Fraction(n, self.d), self.coeffs[n]

    def valuation(self):
        if not self.coeffs:
            return None
        return Fraction(min(self.coeffs), self.d)

    def truncate(self, order) -> "TruncatedSeries":
        hi = floor(Fraction(order) * self.d)
        if self.hi is not None and hi > self.hi:
            raise PrecisionError("cannot truncate beyond the valid window")
        return TruncatedSeries(self.coeffs, var=self.var, d=self.d, lo=min(self.lo, hi), hi=hi)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        a, b = self._align(other)
        out = dict(a.coeffs)
        for n, c in b.coeffs.items():
            out[n] = out.get(n, 0) + c
        return TruncatedSeries(out, var=a.var, d=a.d, lo=min(a.lo, b.lo), hi=_min_hi(a.hi, b.hi))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries({n: -c for n, c in self.coeffs.items()}, var=self.var, d=self.d,
                               lo=self.lo, hi=self.hi)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedSeries) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries({n: c * other for n, c in self.coeffs.items()}, var=self.var,
                                   d=self.d, lo=self.lo, hi=self.hi)
        a, b = self._align(other)
        # a known through a.hi, zero below a.lo; likewise b
        hi = _min_hi(None if a.hi is None else a.hi + b.lo, None if b.hi is None else b.hi + a.lo)
        out = {}
        for i, x in a.coeffs.items():
            for j, y in b.coeffs.items():
                n = i + j
                if hi is not None and n > hi:
                    continue
                out[n] = out.get(n, 0) + x * y
        return TruncatedSeries(out, var=a.var, d=a.d, lo=a.lo + b.lo, hi=hi)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("use expand_quotient for negative powers")
        result = TruncatedSeries({0: 1}, var=self.var, d=self.d, lo=0)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, exponent) -> "TruncatedSeries":
        """Multiply by x^exponent."""
        n = Fraction(exponent) * self.d
        if n.denominator != 1:
            raise ValueError("shift not on the exponent lattice")
        n = int(n)
        return TruncatedSeries({k + n: c for k, c in self.coeffs.items()}, var=self.var, d=self.d,
                               lo=self.lo + n, hi=None if self.hi is None else self.hi + n)

    def scale_variable(self, a) -> "TruncatedSeries":
        """f(a x) for scalar a (integer exponents only)."""
        if self.d != 1:
            raise ValueError("scaling needs an integral exponent lattice")
        return TruncatedSeries({n: c * (Fraction(a) ** n if isinstance(a, (int, Fraction)) else a ** n)
                                for n, c in self.coeffs.items()}, var=self.var, d=1, lo=self.lo,
                               hi=self.hi)

    def substitute_power(self, k: int) -> "TruncatedSeries":
        """f(x^k) for a positive integer k."""
        hi = None if self.hi is None else self.hi * k + (k - 1)
        return TruncatedSeries({n * k: c for n, c in self.coeffs.items()}, var=self.var, d=self.d,
                               lo=self.lo * k, hi=hi)

    def substitute_root(self, k: int) -> "TruncatedSeries":
        """f(x^(1/k)): exponents divided by k, lattice refined accordingly."""
        return TruncatedSeries(dict(self.coeffs), var=self.var, d=self.d * k, lo=self.lo,
                               hi=self.hi)

    def derivative(self) -> "TruncatedSeries":
        """d/dx (the valid window moves down by one)."""
        if self.d != 1:
            raise ValueError("derivative needs an integral exponent lattice")
        out = {n - 1: n * c for n, c in self.coeffs.items() if n}
        return TruncatedSeries(out, var=self.var, d=1, lo=self.lo - 1,
                               hi=None if self.hi is None else self.hi - 1)

    def theta(self) -> "TruncatedSeries":
        """x d/dx, which keeps the window and multiplies x^e by e."""
        return TruncatedSeries({n: c * Fraction(n, self.d) for n, c in self.coeffs.items()},
                               var=self.var, d=self.d, lo=self.lo, hi=self.hi)

    def map_coefficients(self, f) -> "TruncatedSeries":
        return TruncatedSeries({n: f(c) for n, c in self.coeffs.items()}, var=self.var, d=self.d,
                               lo=self.lo, hi=self.hi)

    def equal_through(self, other, order) -> bool:
        """Coefficient-wise equality for all exponents <= order (both must be valid there)."""
        a, b = self._align(other)
        top = Fraction(order) * a.d
        for n in set(a.coeffs) | set(b.coeffs):
            if n <= top and a.coeffs.get(n, 0) != b.coeffs.get(n, 0):
                return False
        for s in (a, b):
            if s.hi is not None and s.hi < top:
                raise PrecisionError("comparison beyond the valid window")
        return True

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs and a.hi == b.hi

    __hash__ = None

    def render(self, fmt=format_scalar) -> str:
        parts = []
        for e, c in self.items():
            s = fmt(c)
            if e == 0:
                mon = ""
            elif e == 1:
                mon = self.var
            else:
                mon = f"{self.var}^{e}" if e > 0 and Fraction(e).denominator == 1 else f"{self.var}^({e})"
            if not mon:
                parts.append(s)
            elif s == "1":
                parts.append(mon)
            elif s == "-1":
                parts.append("-" + mon)
            else:
                parts.append(f"({s})*{mon}" if " " in s else f"{s}*{mon}")
        body = " + ".join(parts) if parts else "0"
        body = body.replace("+ -", "- ")
        if self.hi is not None:
            top = Fraction(self.hi + 1, self.d)
            body += f" + O({self.var}^{top})" if top.denominator == 1 else f" + O({self.var}^({top}))"
        return body

    def __repr__(self):
        return f"TruncatedSeries({self.render()})"


def expand_quotient(numerator: TruncatedSeries, denominator: TruncatedSeries,
                    order) -> TruncatedSeries:
    """Laurent expansion of numerator/denominator valid through x^order."""
    num, den = numerator._align(denominator)
    if not den.coeffs:
        raise ZeroDivisionError("denominator is identically zero in its window")
    v = min(den.coeffs)
    if v < den.lo:
        raise ValueError("denominator window is inconsistent")
    lead = den.coeffs[v]
    top = Fraction(order) * num.d
    top = top.numerator // top.denominator
    # guaranteed precision of the quotient
    avail = _min_hi(None if num.hi is None else num.hi - v,
                    None if den.hi is None else num.lo + (den.hi - v) - v)
    if avail is not None and avail < top:
        raise PrecisionError(f"quotient only valid to exponent {Fraction(avail, num.d)}")
    start = num.lo - v
    q = {}
    tail = [(k - v, c) for k, c in den.coeffs.items() if k != v]
    for e in range(start, top + 1):
        acc = num.coeffs.get(e + v, 0)
        for off, c in tail:
            prev = q.get(e - off)
            if prev:
                acc = acc - c * prev
        if acc:
            q[e] = acc / lead if not isinstance(acc, int) else Fraction(acc) / lead
    return TruncatedSeries(q, var=num.var, d=num.d, lo=min(start, top), hi=top)


def exp_minus_one(a, order: int, *, var="x") -> TruncatedSeries:
    """e^{a x} - 1 through x^order."""
    return TruncatedSeries.exp(a, order, var=var) - 1


def factorial_coefficient(series: TruncatedSeries, n: int):
    """n! times the coefficient of x^n (exponential generating function coefficient)."""
    return series.coefficient(n) * factorial(n)
