"""Differential operators on the circle, their super extension and twisted version.

A DiffOp is a finite sum of t^k p(D) zeta_N^{aD} with D = t d/dt. The product
rule is

    (t^k1 f zeta^{a1 D})(t^k2 g zeta^{a2 D}) = zeta^{a1 k2} t^(k1+k2) f(D+k2) g(D) zeta^{(a1+a2)D}.

t-degrees are Fractions so that the NS odd generators t^(n+1/2) fit in the
same container. SuperDiffOp tensors four DiffOps with the 2x2 matrix units
realized by d/dtheta theta, theta d/dtheta, theta, d/dtheta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from functools import lru_cache
from math import factorial

from .kernel import Cyclotomic, Poly, format_scalar

_D = Poly.monomial(1)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _scalar_zero(x) -> bool:
    return not x


# --------------------------------------------------------------------------
# DiffOp

class DiffOp:
    """Sparse sum of t^k p(D) zeta_N^{aD}; keys (k, a) with a taken mod N."""

    __slots__ = ("terms", "modulus")

    def __init__(self, terms=None, modulus: int = 1):
        self.modulus = modulus
        clean = {}
        for (k, a), p in (terms or {}).items():
            if not isinstance(p, Poly):
                p = Poly.const(p)
            if p:
                key = (_frac(k), a % modulus)
                clean[key] = clean[key] + p if key in clean else p
        self.terms = {key: p for key, p in clean.items() if p}

    # constructors
    @classmethod
    def monomial(cls, k, poly, a: int = 0, modulus: int = 1) -> "DiffOp":
        return cls({(k, a): poly}, modulus)

    @classmethod
    def t(cls, k=1) -> "DiffOp":
        return cls.monomial(k, Poly.const(1))

    @classmethod
    def D(cls, power: int = 1) -> "DiffOp":
        return cls.monomial(0, Poly.monomial(power))

    @classmethod
    def twist(cls, a: int, modulus: int) -> "DiffOp":
        """zeta_N^{aD}."""
        return cls({(0, a): Poly.const(1)}, modulus)

    def _compatible(self, other: "DiffOp") -> int:
        if self.modulus == other.modulus:
            return self.modulus
        if self.modulus == 1 and not other._twisted() or other.modulus == 1 and not self._twisted():
            return max(self.modulus, other.modulus)
        if self.modulus == 1 and all(a == 0 for _, a in self.terms):
            return other.modulus
        if other.modulus == 1 and all(a == 0 for _, a in other.terms):
            return self.modulus
        raise ValueError(f"incompatible twist moduli {self.modulus} and {other.modulus}")

    def _twisted(self) -> bool:
        return any(a for _, a in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other: "DiffOp") -> "DiffOp":
        if not isinstance(other, DiffOp):
            if other == 0:
                return self
            return NotImplemented
        N = self._compatible(other)
        out = dict(self.terms)
        for key, p in other.terms.items():
            out[key] = out[key] + p if key in out else p
        return DiffOp(out, N)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({key: -p for key, p in self.terms.items()}, self.modulus)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        if _scalar_zero(c):
            return DiffOp({}, self.modulus)
        return DiffOp({key: p * c for key, p in self.terms.items()}, self.modulus)

    def __mul__(self, other):
        if not isinstance(other, DiffOp):
            return self.scale(other)
        return diffop_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def degrees(self) -> set:
        return {k for k, _ in self.terms}

    def part(self, k) -> "DiffOp":
        k = _frac(k)
        return DiffOp({key: p for key, p in self.terms.items() if key[0] == k}, self.modulus)

    def poly(self, k, a: int = 0) -> Poly:
        return self.terms.get((_frac(k), a % self.modulus), Poly())

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (k, a) in sorted(self.terms, key=lambda x: (x[0], x[1])):
            p = self.terms[(k, a)].render("D", format_scalar)
            tk = "" if k == 0 else ("t" if k == 1 else f"t^({k})" if k.denominator != 1 or k < 0 else f"t^{k}")
            tw = f"*z{self.modulus}^({a}D)" if a else ""
            body = f"({p})" if (" " in p and (tk or tw)) else p
            parts.append("*".join(x for x in (tk, body) if x) + tw)
        return " + ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"DiffOp({self.render()})"


def diffop_mul(a: DiffOp, b: DiffOp) -> DiffOp:
    """Associative product of two DiffOps via the product rule."""
    N = a._compatible(b)
    out: dict = {}
    for (k1, a1), f in a.terms.items():
        for (k2, a2), g in b.terms.items():
            p = f.shift(k2) * g
            if a1 and N > 1:
                if k2.denominator != 1:
                    raise ValueError("twisted factors need integral t-degrees")
                p = p * Cyclotomic.root(N, a1 * int(k2))
            key = (k1 + k2, (a1 + a2) % N)
            out[key] = out[key] + p if key in out else p
    return DiffOp(out, N)


def bracket(a: DiffOp, b: DiffOp) -> DiffOp:
    return diffop_mul(a, b) - diffop_mul(b, a)


# --------------------------------------------------------------------------
# SuperDiffOp

CLIFFORD = {"E": (0, 0), "F": (1, 1), "T": (1, 0), "P": (0, 1)}
_UNIT = {v: k for k, v in CLIFFORD.items()}
EVEN = ("E", "F")
ODD = ("T", "P")
CLIFFORD_NAMES = {"E": "d/dθ θ", "F": "θ d/dθ", "T": "θ", "P": "d/dθ"}


class SuperDiffOp:
    """sum over X in {E, F, T, P} of comps[X] * X.

    E = d/dθ θ, F = θ d/dθ, T = θ, P = d/dθ act on span(1, θ) as the matrix units
    e00, e11, e10, e01; D commutes with all of them.
    """

    __slots__ = ("comps",)

    def __init__(self, comps=None):
        self.comps = {k: v for k, v in (comps or {}).items() if v}
        for k in self.comps:
            if k not in CLIFFORD:
                raise KeyError(k)

    @classmethod
    def embed(cls, op: DiffOp, label: str) -> "SuperDiffOp":
        return cls({label: op})

    def comp(self, label: str) -> DiffOp:
        return self.comps.get(label, DiffOp())

    @property
    def half_shift(self) -> bool:
        """True when the odd part carries t-exponents in Z + 1/2 (NS sector)."""
        return any(k.denominator == 2 for lab in ODD for k in self.comp(lab).degrees())

    def parity(self):
        """0, 1, or None when inhomogeneous (zero counts as even)."""
        ev = any(lab in self.comps for lab in EVEN)
        od = any(lab in self.comps for lab in ODD)
        if ev and od:
            return None
        return 1 if od else 0

    def even_part(self) -> "SuperDiffOp":
        return SuperDiffOp({k: v for k, v in self.comps.items() if k in EVEN})

    def odd_part(self) -> "SuperDiffOp":
        return SuperDiffOp({k: v for k, v in self.comps.items() if k in ODD})

    def __bool__(self):
        return bool(self.comps)

    def __eq__(self, other):
        if isinstance(other, SuperDiffOp):
            return self.comps == other.comps
        if other == 0:
            return not self.comps
        return NotImplemented

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, SuperDiffOp):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return SuperDiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return SuperDiffOp({k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperDiffOp":
        return SuperDiffOp({k: v.scale(c) for k, v in self.comps.items()})

    def __mul__(self, other):
        if not isinstance(other, SuperDiffOp):
            return self.scale(other)
        out: dict = {}
        for k1, v1 in self.comps.items():
            i, j = CLIFFORD[k1]
            for k2, v2 in other.comps.items():
                jj, l = CLIFFORD[k2]
                if j != jj:
                    continue
                lab = _UNIT[(i, l)]
                prod = diffop_mul(v1, v2)
                out[lab] = out[lab] + prod if lab in out else prod
        return SuperDiffOp(out)

    def __rmul__(self, other):
        return self.scale(other)

    def render(self) -> str:
        if not self.comps:
            return "0"
        return " + ".join(f"[{self.comps[k].render()}]*{CLIFFORD_NAMES[k]}"
                          for k in ("E", "F", "T", "P") if k in self.comps)

    __str__ = render

    def __repr__(self):
        return f"SuperDiffOp({self.render()})"


def super_bracket(a: SuperDiffOp, b: SuperDiffOp) -> SuperDiffOp:
    """[a,b] = ab - (-1)^{p(a)p(b)} ba, extended bilinearly over homogeneous parts."""
    total = SuperDiffOp()
    for x in (a.even_part(), a.odd_part()):
        if not x:
            continue
        px = x.parity()
        for y in (b.even_part(), b.odd_part()):
            if not y:
                continue
            py = y.parity()
            if px and py:
                total = total + x * y + y * x
            else:
                total = total + x * y - y * x
    return total


def any_bracket(a, b):
    if isinstance(a, SuperDiffOp) or isinstance(b, SuperDiffOp):
        return super_bracket(_as_super(a), _as_super(b))
    return bracket(a, b)


def _as_super(x) -> SuperDiffOp:
    return x if isinstance(x, SuperDiffOp) else SuperDiffOp.embed(x, "E")


# --------------------------------------------------------------------------
# involutions

def _untwisted(op: DiffOp):
    if op._twisted():
        raise ValueError("involutions are defined on the untwisted algebra only")


def _split_right_D(p: Poly, k) -> Poly:
    q, r = p.divmod_by(_D)
    if r:
        raise ValueError(f"term t^{k} {p.render()} has no right factor D")
    return q


def theta1(op: DiffOp) -> DiffOp:
    """t^k q(D) D -> t^k q(-D-k) D."""
    _untwisted(op)
    out = {}
    for (k, a), p in op.terms.items():
        q = _split_right_D(p, k)
        out[(k, a)] = q.affine(-1, -k) * _D
    return DiffOp(out, op.modulus)


def theta2(op: DiffOp) -> DiffOp:
    """t^k p(D) -> -t^k p(-D-k)."""
    _untwisted(op)
    return DiffOp({(k, a): -p.affine(-1, -k) for (k, a), p in op.terms.items()}, op.modulus)


def gamma(op: SuperDiffOp) -> SuperDiffOp:
    """theta1 on the d/dθ θ part, theta2 on θ d/dθ, and swaps t^k F(D) D θ <-> t^k F(-D-k) d/dθ."""
    out = {}
    if "E" in op.comps:
        out["E"] = theta1(op.comps["E"])
    if "F" in op.comps:
        out["F"] = theta2(op.comps["F"])
    new_p, new_t = {}, {}
    for (k, a), p in op.comp("T").terms.items():
        new_p[(k, a)] = _split_right_D(p, k).affine(-1, -k)
    for (k, a), p in op.comp("P").terms.items():
        new_t[(k, a)] = p.affine(-1, -k) * _D
    if new_p:
        out["P"] = DiffOp(new_p)
    if new_t:
        out["T"] = DiffOp(new_t)
    return SuperDiffOp(out)


def involution(which: str, x):
    if which in ("theta1", "θ₁", "θ1"):
        return theta1(x)
    if which in ("theta2", "θ₂", "θ2"):
        return theta2(x)
    if which in ("gamma", "γ"):
        return gamma(x)
    raise ValueError(f"unknown involution {which!r}")


def fixed_subalgebra_check(which: str, x) -> bool:
    """Membership in D+, D-, SD_R+ or SD_NS+ (fixed points of the matching involution)."""
    if which in ("D+", "dplus"):
        try:
            return theta1(x) == x
        except ValueError:
            return False
    if which in ("D-", "dminus"):
        return theta2(x) == x
    if which in ("SD_R+", "SD_NS+", "sdr", "sdns"):
        x = _as_super(x)
        want_half = which in ("SD_NS+", "sdns")
        for lab in ODD:
            for k in x.comp(lab).degrees():
                if (k.denominator == 2) != want_half:
                    return False
        for lab in EVEN:
            if any(k.denominator != 1 for k in x.comp(lab).degrees()):
                return False
        try:
            return gamma(x) == x
        except ValueError:
            return False
    raise ValueError(f"unknown subalgebra {which!r}")


# --------------------------------------------------------------------------
# bases of the fixed subalgebras

def dplus_basis(k: int, l: int) -> DiffOp:
    """t^l ((D+l)^{2k} D + D^{2k} D)."""
    return DiffOp.monomial(l, (_D.shift(l) ** (2 * k) + _D ** (2 * k)) * _D)


def dminus_basis(m: int, l: int) -> DiffOp:
    """t^l (D^m + (-1)^{m+1} (D+l)^m), m odd."""
    if m % 2 == 0:
        raise ValueError("D- basis uses odd m")
    return DiffOp.monomial(l, _D ** m + _D.shift(l) ** m * (-1) ** (m + 1))


def odd_basis(k: int, l) -> SuperDiffOp:
    """t^l D^{k+1} θ + t^l (-1)^k (D+l)^k d/dθ."""
    l = _frac(l)
    return SuperDiffOp({"T": DiffOp.monomial(l, _D ** (k + 1)),
                        "P": DiffOp.monomial(l, _D.shift(l) ** k * (-1) ** k)})


def boson_generator(r: int, m: int) -> DiffOp:
    """L^{(r)}_m = 1/2 (-1)^r t^m (D+m)^r D^{r+1}, the y1^r y2^r coefficient of D^{y1,y2} times (r!)^2."""
    return DiffOp.monomial(m, _D.shift(m) ** r * _D ** (r + 1) * Fraction((-1) ** r, 2))


def fermion_generator(s: int, m: int) -> DiffOp:
    """script-L^{(s)}_m = 1/2 (-1)^{s+1} t^m (D+m)^s D^s (2D+m)."""
    return DiffOp.monomial(m, _D.shift(m) ** s * _D ** s * Poly.linear(2, m) * Fraction((-1) ** (s + 1), 2))


def odd_generator(r: int, n) -> SuperDiffOp:
    """G^{(r)}_n = t^n [(-1)^r (D+n)^r D θ + D^r d/dθ], the y1^r coefficient of G^{y1,0} times r!."""
    n = _frac(n)
    return SuperDiffOp({"T": DiffOp.monomial(n, _D.shift(n) ** r * _D * (-1) ** r),
                        "P": DiffOp.monomial(n, _D ** r)})


def super_boson(r: int, m: int) -> SuperDiffOp:
    return SuperDiffOp.embed(boson_generator(r, m), "E")


def super_fermion(s: int, m: int) -> SuperDiffOp:
    return SuperDiffOp.embed(fermion_generator(s, m), "F")


def twisted_generator(r: int, m: int, a: int, b: int, modulus: int) -> DiffOp:
    """(r!)^2/2 times the y1^r y2^r x^{-m} coefficient of D^{y1,y2,a,b}(x), a, b in (2 pi i/N)Z."""
    return extract_gf_coeff("twisted", (r, r), -m, a=a, b=b, modulus=modulus).scale(
        Fraction(factorial(r) ** 2, 2))


# --------------------------------------------------------------------------
# cocycles

def _sum_range(k1, offset=Fraction(0)):
    """i in offset + Z with -k1 <= i < 0."""
    i = -k1
    shift = (offset - i) % 1
    i += shift
    while i < 0:
        yield i
        i += 1


def psi(a: DiffOp, b: DiffOp):
    """Kac-Peterson cocycle; the k1 < 0 case follows from antisymmetry."""
    total = Fraction(0)
    for (k1, a1), f in a.terms.items():
        for (k2, a2), g in b.terms.items():
            if k1 + k2 != 0 or k1 == 0:
                continue
            if a1 or a2:
                raise ValueError("cocycle is defined on the untwisted algebra")
            if k1 > 0:
                total = total + sum((f(i) * g(i + k1) for i in _sum_range(k1)), Fraction(0))
            else:
                total = total - sum((g(i) * f(i + k2) for i in _sum_range(k2)), Fraction(0))
    return total


# supertrace pairs (a-slot, b-slot, sign); the sum index runs over the lattice
# of the space the a-slot acts on: span t^j (j in Z) for E and T, span t^j θ
# for F and P, where j is in Z (Ramond) or Z + 1/2 (NS)
_STR_PAIRS = (("E", "E", 1), ("P", "T", 1), ("T", "P", -1), ("F", "F", -1))
_SOURCE_IS_THETA = {"E": False, "T": False, "F": True, "P": True}


def _psi_super_homog(a: SuperDiffOp, b: SuperDiffOp, theta_offset):
    total = Fraction(0)
    for la, lb, sign in _STR_PAIRS:
        fa, gb = a.comp(la), b.comp(lb)
        off = theta_offset if _SOURCE_IS_THETA[la] else Fraction(0)
        for (k1, _), f in fa.terms.items():
            for (k2, _), g in gb.terms.items():
                if k1 + k2 != 0 or k1 <= 0:
                    continue
                total = total + sign * sum((f(i) * g(i + k1) for i in _sum_range(k1, off)),
                                           Fraction(0))
    return total


def psi_super(a, b, sector: str | None = None):
    """Supertrace cocycle; k1 < 0 contributions use super-antisymmetry.

    sector 'R' or 'NS' fixes the lattice of the θ-sector; by default it is
    read off the arguments (NS when an odd part has half-integral degree).
    """
    a, b = _as_super(a), _as_super(b)
    if sector is None:
        sector = "NS" if (a.half_shift or b.half_shift) else "R"
    off = Fraction(1, 2) if sector == "NS" else Fraction(0)
    total = Fraction(0)
    for x in (a.even_part(), a.odd_part()):
        for y in (b.even_part(), b.odd_part()):
            if not x or not y:
                continue
            sign = -1 if (x.parity() and y.parity()) else 1
            total = total + _psi_super_homog(x, y, off) - sign * _psi_super_homog(y, x, off)
    return total


def cocycle(which: str, a, b):
    if which in ("Psi", "Ψ", "psi"):
        return psi(a, b)
    if which in ("Psi_s", "Ψs", "Ψˢ", "psi_s"):
        return psi_super(a, b)
    raise ValueError(f"unknown cocycle {which!r}")


# --------------------------------------------------------------------------
# generating-function coefficients

def _ell(m) -> Poly:
    """-(D+m): the D-weight picked up by y1 after moving e^{-y1 D} past t^m."""
    return Poly.linear(-1, -_frac(m))


def extract_gf_coeff(which: str, powers, x_power, *, a: int = 0, b: int = 0, modulus: int = 1):
    """Coefficient of y1^i y2^j x^{x_power} of one of the generating functions.

    The delta function makes the x^{x_power} coefficient live in t-degree -x_power.
    'D' is the symmetrized 1/2(...)D family, 'Dbar' the antisymmetric one,
    'G' the odd NS family (x_power in Z + 1/2), 'twisted' the root-of-unity
    shifted family with twists a, b in (2 pi i/N)Z.
    """
    i, j = powers
    m = -_frac(x_power)
    den = factorial(i) * factorial(j)
    ell = _ell(m)
    first = ell ** i * _D ** j * Fraction(1, den)
    second = ell ** j * _D ** i * Fraction(1, den)
    if which == "D":
        return DiffOp.monomial(m, (first + second) * _D * Fraction(1, 2))
    if which == "Dsum":
        return DiffOp.monomial(m, (first + second) * _D)
    if which == "Dbar":
        return DiffOp.monomial(m, first - second)
    if which == "G":
        if m.denominator != 2:
            raise ValueError("odd NS modes sit at half-integral x-powers")
        return SuperDiffOp({"T": DiffOp.monomial(m, first * _D), "P": DiffOp.monomial(m, second)})
    if which == "twisted":
        if m.denominator != 1:
            raise ValueError("twisted family has integral modes")
        N = modulus
        mi = int(m)
        c1 = Cyclotomic.root(N, -a * mi) if N > 1 else 1
        c2 = Cyclotomic.root(N, -b * mi) if N > 1 else 1
        return (DiffOp({(m, b - a): first * _D * c1}, N)
                + DiffOp({(m, a - b): second * _D * c2}, N))
    raise ValueError(f"unknown generating function {which!r}")


# --------------------------------------------------------------------------
# bracket identities among generating functions

@dataclass(frozen=True)
class GFTerm:
    """coef * [d/dy_deriv] W^{Y1.y, Y2.y}(x_loc) delta_{(1/2)}(e^{Z.y} x1/x2)."""

    coef: Fraction
    family: str          # 'D', 'Dsum', 'Dbar', 'G'
    Y1: tuple
    Y2: tuple
    loc: int             # 1 or 2
    Z: tuple
    deriv: int | None = None
    label: str | None = None   # Clifford slot for even families inside the super algebra


def _vec(**kw):
    v = [0, 0, 0, 0]
    for name, c in kw.items():
        v[int(name[1]) - 1] = c
    return tuple(v)


def _lin(spec: str):
    """Parse 'y4+y1-y3' into a 4-vector."""
    v = [0, 0, 0, 0]
    spec = spec.replace(" ", "").replace("-", "+-")
    for tok in spec.split("+"):
        if not tok:
            continue
        sign = -1 if tok.startswith("-") else 1
        v[int(tok.lstrip("-")[1]) - 1] += sign
    return tuple(v)


def _int_if_possible(x):
    x = _frac(x)
    return x.numerator if x.denominator == 1 else x


@lru_cache(maxsize=None)
def _linear_power(a, b, e: int) -> Poly:
    return Poly.linear(a, b) ** e


def _term_value(term: GFTerm, exps, m, n):
    """Coefficient of y^exps x1^{-m} x2^{-n} of one right-hand-side term."""
    p = m + n
    c = n if term.loc == 1 else -m
    e = list(exps)
    denom = 1
    for k in e:
        denom *= factorial(k)

    def weight_poly(A, B):
        acc = Poly.const(1)
        for i in range(4):
            lin = (A[i] * -1 + B[i], _int_if_possible(-A[i] * p + c * term.Z[i]))
            power = e[i] + (1 if term.deriv == i else 0)
            if power:
                acc = acc * _linear_power(lin[0], lin[1], power)
        return acc

    scale = term.coef / denom
    w1 = weight_poly(term.Y1, term.Y2)
    w2 = weight_poly(term.Y2, term.Y1)
    fam = term.family
    if fam in ("D", "Dsum"):
        norm = Fraction(1, 2) if fam == "D" else Fraction(1)
        op = DiffOp.monomial(p, (w1 + w2) * _D * (norm * scale))
    elif fam == "Dbar":
        op = DiffOp.monomial(p, (w1 - w2) * scale)
    elif fam == "G":
        return SuperDiffOp({"T": DiffOp.monomial(p, w1 * _D * scale),
                            "P": DiffOp.monomial(p, w2 * scale)})
    else:
        raise ValueError(fam)
    return SuperDiffOp.embed(op, term.label) if term.label else op


@lru_cache(maxsize=4096)
def _lhs_value(fam, label, powers, m):
    x = extract_gf_coeff(fam, powers, -m)
    if label:
        return SuperDiffOp.embed(x, label)
    return x


@dataclass(frozen=True)
class BracketIdentity:
    key: str
    anchor: str
    left: tuple      # (family, label)
    right: tuple
    half_left: bool
    half_right: bool
    rhs: tuple


def _T(coef, fam, y1, y2, loc, z, deriv=None, label=None):
    return GFTerm(Fraction(coef), fam, _lin(y1), _lin(y2), loc, _lin(z), deriv, label)


def bracket_identities(roman_d: str = "Dsum") -> dict[str, BracketIdentity]:
    """The generating-function bracket identities as written, plus one corrected form.

    roman_d is the reading of the roman-letter D^{y,y'} in the odd brackets:
    'Dsum' (both terms with coefficient one, as the proof of (a) produces) or
    'D' (the 1/2-symmetrized family).
    """
    half = Fraction(1, 2)
    return {
        "dplus": BracketIdentity(
            "dplus", "[D^{y1,y2}(x1), D^{y3,y4}(x2)] as four shifted D-terms", ("D", None), ("D", None), False, False, (
                _T(half, "D", "y4", "y3+y1-y2", 2, "y2-y3", deriv=1),
                _T(half, "D", "y3", "y4+y1-y2", 2, "y2-y4", deriv=1),
                _T(half, "D", "y3", "y4+y2-y1", 2, "y1-y4", deriv=0),
                _T(half, "D", "y4", "y3+y2-y1", 2, "y1-y3", deriv=0),
            )),
        "dminus": BracketIdentity(
            "dminus", "[Dbar^{y1,y2}(x1), Dbar^{y3,y4}(x2)] as four shifted Dbar-terms", ("Dbar", None), ("Dbar", None), False, False, (
                _T(1, "Dbar", "y1", "y4+y2-y3", 1, "y2-y3"),
                _T(1, "Dbar", "y2", "y1+y3-y4", 1, "y1-y4"),
                _T(-1, "Dbar", "y1", "y2+y3-y4", 1, "y2-y4"),
                _T(-1, "Dbar", "y2", "y4+y1-y3", 1, "y1-y3"),
            )),
        "odd-odd": BracketIdentity(
            "odd-odd", "[G^{y1,y2}(x1), G^{y3,y4}(x2)] = D-term + d/dy4 Dbar-term", ("G", None), ("G", None), True, True, (
                _T(1, roman_d, "y2", "y4+y1-y3", 1, "y1-y3", label="E"),
                _T(-1, "Dbar", "y1", "y2+y3-y4", 1, "y2-y4", deriv=3, label="F"),
            )),
        "odd-boson": BracketIdentity(
            "odd-boson", "[G^{y1,y2}(x1), D^{y3,y4}(x2)] as two d/dy G-terms", ("G", None), (roman_d, "E"), True, False, (
                _T(1, "G", "y1", "y4+y2-y3", 1, "y2-y3", deriv=1),
                _T(1, "G", "y1", "y2-y4+y3", 1, "y2-y4", deriv=1),
            )),
        "odd-fermion": BracketIdentity(
            "odd-fermion", "[G^{y1,y2}(x1), Dbar^{y3,y4}(x2)] with G^{y2, ...} as written", ("G", None), ("Dbar", "F"), True, False, (
                _T(1, "G", "y2", "y4+y1-y3", 1, "y1-y3"),
                _T(-1, "G", "y2", "y1-y4+y3", 1, "y1-y4"),
            )),
        # superscripts of G in (c) exchanged; the d/dθ component of the
        # bracket forces e^{-y2 D} on the left
        "odd-fermion-exchanged": BracketIdentity(
            "odd-fermion-exchanged", "[G^{y1,y2}(x1), Dbar^{y3,y4}(x2)] with the G superscripts exchanged", ("G", None),
            ("Dbar", "F"), True, False, (
                _T(1, "G", "y4+y1-y3", "y2", 1, "y1-y3"),
                _T(-1, "G", "y1-y4+y3", "y2", 1, "y1-y4"),
            )),
    }


BRACKET_IDS = ("dplus", "dminus", "odd-odd", "odd-boson", "odd-fermion", "odd-fermion-exchanged")


def _modes(x_range: int, half: bool):
    if half:
        vals = [Fraction(2 * k + 1, 2) for k in range(-x_range, x_range)]
        return [v for v in vals if abs(v) <= x_range]
    return [Fraction(k) for k in range(-x_range, x_range + 1)]


@dataclass
class BracketReport:
    check: str
    anchor: str
    cases: int
    mismatches: list

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.mismatches


def verify_symbolic_bracket(which: str, max_power: int = 2, x_range: int = 2,
                            roman_d: str = "Dsum") -> BracketReport:
    """Compare both sides coefficient-wise for every y-multi-index <= max_power and
    t-degrees |m|, |n| <= x_range."""
    ident = bracket_identities(roman_d)[which]
    mismatches = []
    cases = 0
    for m in _modes(x_range, ident.half_left):
        for n in _modes(x_range, ident.half_right):
            for exps in product(range(max_power + 1), repeat=4):
                a = _lhs_value(ident.left[0], ident.left[1], exps[:2], m)
                b = _lhs_value(ident.right[0], ident.right[1], exps[2:], n)
                lhs = any_bracket(a, b)
                rhs = None
                for term in ident.rhs:
                    v = _term_value(term, exps, m, n)
                    rhs = v if rhs is None else rhs + v
                if isinstance(lhs, SuperDiffOp) and not isinstance(rhs, SuperDiffOp):
                    rhs = _as_super(rhs)
                cases += 1
                if not (lhs - rhs) == 0:
                    mismatches.append({"indices": exps, "m": str(m), "n": str(n),
                                       "lhs": str(lhs), "rhs": str(rhs)})
    return BracketReport(which, ident.anchor, cases, mismatches)


# --------------------------------------------------------------------------
# randomized property suites

def random_poly(rng, max_degree: int = 3, bound: int = 3) -> Poly:
    return Poly([Fraction(rng.randint(-bound, bound)) for _ in range(rng.randint(0, max_degree) + 1)])


def random_diffop(rng, max_degree: int = 3, max_k: int = 3, terms: int = 3,
                  right_D: bool = False, half: bool = False) -> DiffOp:
    """Sum of a few t^k p(D); right_D multiplies each p by D, half shifts k into Z + 1/2."""
    out = DiffOp()
    for _ in range(terms):
        k = Fraction(rng.randint(-max_k, max_k))
        if half:
            k += Fraction(1, 2) if k < max_k else Fraction(-1, 2)
        p = random_poly(rng, max_degree)
        out = out + DiffOp.monomial(k, p * _D if right_D else p)
    return out


def random_super(rng, parity: int | None = None, sector: str = "R", max_degree: int = 2,
                 max_k: int = 2) -> SuperDiffOp:
    """Homogeneous element of Diff[t, t^-1, θ]; odd parts live on Z + 1/2 in the NS sector."""
    if parity is None:
        parity = rng.randint(0, 1)
    half = sector == "NS"
    if parity == 0:
        return SuperDiffOp({"E": random_diffop(rng, max_degree, max_k, 2, right_D=True),
                            "F": random_diffop(rng, max_degree, max_k, 2)})
    return SuperDiffOp({"T": random_diffop(rng, max_degree, max_k, 2, right_D=True, half=half),
                        "P": random_diffop(rng, max_degree, max_k, 2, half=half)})


def random_fixed(rng, which: str, size: int = 3):
    """Random combination of basis elements of D+, D- or SD_NS+ / SD_R+."""
    c = lambda: Fraction(rng.randint(-3, 3))
    if which == "D+":
        return sum((dplus_basis(rng.randint(0, 2), rng.randint(-3, 3)).scale(c())
                    for _ in range(size)), DiffOp())
    if which == "D-":
        return sum((dminus_basis(2 * rng.randint(0, 1) + 1, rng.randint(-3, 3)).scale(c())
                    for _ in range(size)), DiffOp())
    half = Fraction(1, 2) if which == "SD_NS+" else Fraction(0)
    if rng.randint(0, 1):
        return SuperDiffOp({"E": random_fixed(rng, "D+", size), "F": random_fixed(rng, "D-", size)})
    return sum((odd_basis(rng.randint(0, 2), rng.randint(-2, 2) + half).scale(c())
                for _ in range(size)), SuperDiffOp())


@dataclass
class PropertyReport:
    name: str
    cases: int
    failures: list

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures


def _parity(x) -> int:
    return x.parity() if isinstance(x, SuperDiffOp) else 0


def involution_suite(cases: int = 200, seed: int = 0) -> PropertyReport:
    """Squares are the identity, θ1, θ2, γ respect brackets, fixed subalgebras close."""
    import random
    rng = random.Random(seed)
    failures = []
    for i in range(cases):
        a, b = random_diffop(rng, right_D=True), random_diffop(rng, right_D=True)
        checks = {
            "theta1^2": theta1(theta1(a)) == a,
            "theta1 morphism": theta1(bracket(a, b)) == bracket(theta1(a), theta1(b)),
        }
        a2, b2 = random_diffop(rng), random_diffop(rng)
        checks["theta2^2"] = theta2(theta2(a2)) == a2
        checks["theta2 morphism"] = theta2(bracket(a2, b2)) == bracket(theta2(a2), theta2(b2))
        sector = "NS" if i % 2 else "R"
        x, y = random_super(rng, sector=sector), random_super(rng, sector=sector)
        checks["gamma^2"] = gamma(gamma(x)) == x
        checks["gamma morphism"] = gamma(super_bracket(x, y)) == super_bracket(gamma(x), gamma(y))
        for which in ("D+", "D-", "SD_NS+", "SD_R+"):
            u, v = random_fixed(rng, which), random_fixed(rng, which)
            checks[f"{which} closed"] = fixed_subalgebra_check(which, any_bracket(u, v))
        bad = [k for k, ok in checks.items() if not ok]
        if bad:
            failures.append({"case": i, "failed": bad})
    return PropertyReport("involutions", cases, failures)


def jacobi_suite(cases: int = 200, seed: int = 0) -> PropertyReport:
    """Associativity, (super-)antisymmetry, (super-)Jacobi, cocycle identities, D_I closure."""
    import random
    rng = random.Random(seed)
    failures = []
    I_ideal = _D ** 2
    for i in range(cases):
        a, b, c = (random_diffop(rng, max_degree=3) for _ in range(3))
        checks = {
            "associativity": diffop_mul(diffop_mul(a, b), c) == diffop_mul(a, diffop_mul(b, c)),
            "jacobi": (bracket(a, bracket(b, c)) + bracket(b, bracket(c, a))
                       + bracket(c, bracket(a, b))) == DiffOp(),
            "psi cocycle": psi(bracket(a, b), c) + psi(bracket(b, c), a)
            + psi(bracket(c, a), b) == 0,
        }
        f = DiffOp({k: p * I_ideal for k, p in a.terms.items()})
        g = DiffOp({k: p * I_ideal for k, p in b.terms.items()})
        checks["D_I closure"] = all(not p.divmod_by(I_ideal)[1]
                                    for p in bracket(f, g).terms.values())
        sector = "NS" if i % 2 else "R"
        x, y, z = (random_super(rng, sector=sector) for _ in range(3))
        px, py, pz = _parity(x), _parity(y), _parity(z)
        sgn = lambda p, q: -1 if p and q else 1
        checks["super antisymmetry"] = super_bracket(x, y) == \
            super_bracket(y, x).scale(-sgn(px, py))
        lhs = super_bracket(x, super_bracket(y, z))
        rhs = super_bracket(super_bracket(x, y), z) + \
            super_bracket(y, super_bracket(x, z)).scale(sgn(px, py))
        checks["super jacobi"] = lhs == rhs
        checks["psi_s cocycle"] = psi_super(super_bracket(x, y), z, sector) == \
            psi_super(x, super_bracket(y, z), sector) - \
            sgn(px, py) * psi_super(y, super_bracket(x, z), sector)
        bad = [k for k, ok in checks.items() if not ok]
        if bad:
            failures.append({"case": i, "failed": bad})
    return PropertyReport("jacobi-and-cocycles", cases, failures)
