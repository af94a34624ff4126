"""Sparse multivariate truncated series.

Exponents may be rationals (characters need q1^(1/2), q3^(1/8), ...). Each
variable has its own truncation order; a coefficient is reported only when
every exponent lies within its variable's order. Coefficients can be any
exact ring element, including Poly, which is how operator generating
functions in y1..y4 carry their D-dependence.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial


def _zero_like(c):
    return c * 0


class MultiSeries:
    __slots__ = ("variables", "orders", "coeffs")

    def __init__(self, variables, orders, coeffs: dict):
        self.variables = tuple(variables)
        self.orders = tuple(orders)
        if len(self.orders) != len(self.variables):
            raise ValueError("one order per variable")
        clean = {}
        for e, c in coeffs.items():
            if c and self._inside(e):
                clean[tuple(e)] = c
        self.coeffs = clean

    def _inside(self, e) -> bool:
        return all(o is None or x <= o for x, o in zip(e, self.orders))

    @classmethod
    def one(cls, variables, orders, value=1):
        return cls(variables, orders, {(0,) * len(tuple(variables)): value})

    @classmethod
    def exp_linear(cls, variables, orders, weights):
        """exp(sum_i w_i y_i); the w_i may be Poly (commuting with the y's)."""
        variables = tuple(variables)
        per_var = []
        for w, o in zip(weights, orders):
            terms, power = [], 1
            for n in range(o + 1):
                terms.append((n, power * Fraction(1, factorial(n))))
                power = power * w
                if not w:
                    break
            per_var.append(terms)
        coeffs = {(): 1}
        for terms in per_var:
            nxt = {}
            for e, c in coeffs.items():
                for n, t in terms:
                    if t:
                        nxt[e + (n,)] = c * t
            coeffs = nxt
        return cls(variables, orders, coeffs)

    def _check(self, other: "MultiSeries"):
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")

    def _meet(self, other):
        return tuple(a if b is None else b if a is None else min(a, b)
                     for a, b in zip(self.orders, other.orders))

    def coefficient(self, exps):
        exps = tuple(exps)
        if not self._inside(exps):
            raise ValueError(f"exponent {exps} beyond truncation orders {self.orders}")
        return self.coeffs.get(exps, 0)

    def total_degree_part(self, k):
        return {e: c for e, c in self.coeffs.items() if sum(e) == k}

    def __add__(self, other):
        if not isinstance(other, MultiSeries):
            other = MultiSeries.one(self.variables, self.orders, other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return MultiSeries(self.variables, self._meet(other), out)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries(self.variables, self.orders, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return MultiSeries(self.variables, self.orders,
                               {e: c * other for e, c in self.coeffs.items()})
        return multiseries_mul(self, other)

    def __rmul__(self, other):
        return MultiSeries(self.variables, self.orders, {e: other * c for e, c in self.coeffs.items()})

    def map_coefficients(self, f) -> "MultiSeries":
        return MultiSeries(self.variables, self.orders, {e: f(c) for e, c in self.coeffs.items()})

    def derivative(self, var: int) -> "MultiSeries":
        """Partial derivative in variable index var; that variable's order drops by one."""
        orders = list(self.orders)
        if orders[var] is not None:
            orders[var] -= 1
        out = {}
        for e, c in self.coeffs.items():
            if e[var]:
                f = list(e)
                f[var] -= 1
                out[tuple(f)] = c * e[var]
        return MultiSeries(self.variables, orders, out)

    def restrict(self, orders) -> "MultiSeries":
        return MultiSeries(self.variables, orders, self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.variables == other.variables and self.orders == other.orders and \
            self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        return f"MultiSeries({self.variables}, orders={self.orders}, {len(self.coeffs)} terms)"


def multiseries_mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Convolution truncated to the intersection of the two valid boxes."""
    a._check(b)
    orders = a._meet(b)
    out = {}
    for e1, c1 in a.coeffs.items():
        if not all(o is None or x <= o for x, o in zip(e1, orders)):
            continue
        for e2, c2 in b.coeffs.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if all(o is None or x <= o for x, o in zip(e, orders)):
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
    return MultiSeries(a.variables, orders, out)
