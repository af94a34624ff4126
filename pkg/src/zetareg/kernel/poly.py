"""Dense univariate polynomials with exact coefficients.

Used for the D-part of differential operators t^k p(D), so the operations
that matter are products, affine substitution p(D) -> p(aD + b) and
evaluation at integers or half-integers.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb


def _strip(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        self.c = _strip(coeffs)

    @classmethod
    def const(cls, value) -> "Poly":
        return cls((value,))

    @classmethod
    def monomial(cls, n: int, value=1) -> "Poly":
        return cls((0,) * n + (value,))

    @classmethod
    def linear(cls, a, b) -> "Poly":
        """a*D + b."""
        return cls((b, a))

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if not self.c:
            return other == 0
        return len(self.c) == 1 and self.c[0] == other

    def __hash__(self):
        return hash(self.c)

    def __getitem__(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        return Poly(tuple(x + b[i] if i < len(b) else x for i, x in enumerate(a)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-x for x in self.c))

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return Poly()
            return Poly(tuple(x * other for x in self.c))
        a, b = self.c, other.c
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return Poly(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for coef in reversed(self.c):
            acc = acc * x + coef
        return acc

    def shift(self, s) -> "Poly":
        """p(D + s)."""
        if not s or len(self.c) <= 1:
            return self
        n = len(self.c)
        out = [0] * n
        for k, a in enumerate(self.c):
            if a:
                sp = 1
                for j in range(k, -1, -1):
                    # coefficient of D^j in (D+s)^k is C(k,j) s^(k-j)
                    out[j] = out[j] + a * comb(k, j) * sp
                    sp = sp * s
        return Poly(out)

    def affine(self, a, b) -> "Poly":
        """p(a*D + b)."""
        out = Poly()
        lin = Poly.linear(a, b)
        for coef in reversed(self.c):
            out = out * lin + coef
        return out

    def derivative(self) -> "Poly":
        return Poly(tuple(k * self.c[k] for k in range(1, len(self.c))))

    def map(self, f) -> "Poly":
        return Poly(tuple(f(x) for x in self.c))

    def divmod_by(self, other: "Poly") -> tuple["Poly", "Poly"]:
        a = list(self.c)
        b = other.c
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        q = [0] * max(len(a) - len(b) + 1, 0)
        lead = b[-1]
        for shift in range(len(a) - len(b), -1, -1):
            coef = a[shift + len(b) - 1]
            if coef:
                coef = coef / lead if not isinstance(coef, int) or not isinstance(lead, int) \
                    else Fraction(coef, lead)
                q[shift] = coef
                for j, bj in enumerate(b):
                    a[shift + j] = a[shift + j] - coef * bj
        return Poly(q), Poly(a)

    def __repr__(self):
        return f"Poly({list(self.c)})"

    def render(self, var: str = "D", fmt=str) -> str:
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            s = fmt(a)
            if mon:
                if s == "1":
                    term = mon
                elif s == "-1":
                    term = "-" + mon
                else:
                    term = f"({s})*{mon}" if (" " in s) else f"{s}*{mon}"
            else:
                term = f"({s})" if " " in s else s
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out
