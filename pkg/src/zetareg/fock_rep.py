"""The Fock space W = M(1) (x) F and its Ramond analogue, with exact operators.

A basis state is h(-l1)...h(-lk) phi(-u1)...phi(-uj) vac with l descending
(a multiset of positive integers) and u strictly descending: positive
half-integers in the NS sector, non-negative integers in the Ramond sector
(0 marks the Clifford zero mode, phi(0)^2 = 1/2).

Operators are exact linear maps. Matrices are built on demand, one weight
block at a time, by applying the operator to basis states, so products of
operators never see a truncated intermediate space.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable

from .kernel import Cyclotomic, MultiSeries, TruncatedSeries, expand_quotient
from .number_theory import (DirichletCharacter, gauss_sum, hurwitz_neg, l_value_neg,
                            regularized_power_sum, twisted_contraction_series, working_level,
                            zeta_neg)

HALF = Fraction(1, 2)


class SectorError(ValueError):
    """A fermion mode index does not belong to the sector."""


class PaddingError(RuntimeError):
    """A product needed a block beyond the declared window."""


class FockState:
    """h(-l1)...h(-lk) φ(-u1)...φ(-uj) vac; equality and hashing go through a cached
    integer key (fermion labels doubled)."""

    __slots__ = ("bosons", "fermions", "_key", "_hash")

    def __init__(self, bosons=(), fermions=(), _f2=None):
        self.bosons = tuple(bosons)
        self.fermions = tuple(Fraction(f) for f in fermions) if _f2 is None else tuple(fermions)
        if _f2 is None:
            _f2 = tuple(2 * f.numerator // f.denominator for f in self.fermions)
        self._key = (self.bosons, _f2)
        self._hash = hash(self._key)

    @classmethod
    def _fast(cls, bosons: tuple, fermions: tuple, f2: tuple) -> "FockState":
        st = object.__new__(cls)
        st.bosons, st.fermions, st._key = bosons, fermions, (bosons, f2)
        st._hash = hash(st._key)
        return st

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, FockState) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __iter__(self):
        return iter((self.bosons, self.fermions))

    def __repr__(self):
        return f"FockState({self.bosons}, {tuple(str(f) for f in self.fermions)})"

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(self.bosons) * 2 + sum(self._key[1]), 2)

    def render(self) -> str:
        parts = [f"h(-{b})" for b in self.bosons] + [f"φ(-{f})" for f in self.fermions]
        return "".join(parts) + "vac" if parts else "vac"


VACUUM = FockState()
StateVector = dict


def _fermion_lattice_ok(r, sector: str) -> bool:
    r = Fraction(r)
    return r.denominator == 2 if sector == "NS" else r.denominator == 1


# --------------------------------------------------------------------------
# basis enumeration

@lru_cache(maxsize=None)
def _partitions(n: int, largest: int | None = None) -> tuple:
    if n == 0:
        return ((),)
    largest = n if largest is None else min(largest, n)
    out = []
    for first in range(largest, 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _strict_parts(total: Fraction, parts: tuple) -> tuple:
    """Strictly decreasing tuples drawn from `parts` (descending) summing to total."""
    if total == 0:
        return ((),)
    out = []
    for i, p in enumerate(parts):
        if p > total:
            continue
        for rest in _strict_parts(total - p, parts[i + 1:]):
            out.append((p,) + rest)
    return tuple(out)


def _fermion_modes(max_weight: Fraction, sector: str) -> tuple:
    if sector == "NS":
        vals = [Fraction(2 * k + 1, 2) for k in range(int(max_weight) + 1)]
    else:
        vals = [Fraction(k) for k in range(1, int(max_weight) + 1)]
    return tuple(sorted((v for v in vals if v <= max_weight), reverse=True))


@lru_cache(maxsize=None)
def basis(weight, sector: str = "NS", bosons: bool = True, fermions: bool = True,
          zero_mode: bool = False) -> tuple:
    """Basis states of the given weight; sector 'NS' or 'R'."""
    weight = Fraction(weight)
    out = []
    bos_weights = range(int(weight) + 1) if bosons else [0]
    for bw in bos_weights:
        fw = weight - bw
        if fw < 0:
            continue
        if not fermions:
            if fw:
                continue
            fparts = [()]
        else:
            fparts = list(_strict_parts(fw, _fermion_modes(fw, sector)))
            if zero_mode and sector == "R":
                fparts = fparts + [f + (Fraction(0),) for f in fparts]
        for bp in _partitions(bw):
            for fp in fparts:
                out.append(FockState(bp, tuple(fp)))
    out.sort()
    return tuple(out)


def weights_upto(max_weight, sector: str = "NS", bosons: bool = True,
                 fermions: bool = True) -> list[Fraction]:
    step = HALF if (fermions and sector == "NS") else Fraction(1)
    out, w = [], Fraction(0)
    while w <= max_weight:
        out.append(w)
        w += step
    return out


def fock_dims(max_weight, sector: str = "NS", bosons: bool = True, fermions: bool = True):
    return {w: len(basis(w, sector, bosons, fermions)) for w in weights_upto(max_weight, sector, bosons, fermions)}


# --------------------------------------------------------------------------
# modes

def _add(vec: dict, state, c):
    if not c:
        return
    if state in vec:
        s = vec[state] + c
        if s:
            vec[state] = s
        else:
            del vec[state]
    else:
        vec[state] = c


def _boson_on_state(n: int, s: FockState):
    """h(n) applied to a basis state: list of (coefficient, state)."""
    if n == 0:
        return []
    if n < 0:
        b = tuple(sorted(s.bosons + (-n,), reverse=True))
        return [(1, FockState._fast(b, s.fermions, s._key[1]))]
    mult = s.bosons.count(n)
    if not mult:
        return []
    b = list(s.bosons)
    b.remove(n)
    return [(n * mult, FockState._fast(tuple(b), s.fermions, s._key[1]))]


def _fermion_on_state(r, s: FockState):
    r2 = 2 * r.numerator // r.denominator
    f, f2 = s.fermions, s._key[1]
    if r2 < 0:
        if -r2 in f2:
            return []
        pos = sum(1 for x in f2 if x > -r2)
        return [((-1) ** pos, FockState._fast(s.bosons, f[:pos] + (-r,) + f[pos:],
                                              f2[:pos] + (-r2,) + f2[pos:]))]
    if r2 > 0:
        if r2 not in f2:
            return []
        pos = f2.index(r2)
        return [((-1) ** pos, FockState._fast(s.bosons, f[:pos] + f[pos + 1:],
                                              f2[:pos] + f2[pos + 1:]))]
    # zero mode: sits at the right end of the fermion string
    if f2 and f2[-1] == 0:
        return [(Fraction((-1) ** (len(f) - 1), 2), FockState._fast(s.bosons, f[:-1], f2[:-1]))]
    return [((-1) ** len(f), FockState._fast(s.bosons, f + (Fraction(0),), f2 + (0,)))]


def apply_mode(mode, v: dict, sector: str = "NS") -> dict:
    """mode = ('h', n) or ('phi', r); v a StateVector."""
    kind, idx = mode
    out: dict = {}
    if kind == "h":
        if Fraction(idx).denominator != 1:
            raise SectorError(f"boson modes are integral, got {idx}")
        for s, c in v.items():
            for k, t in _boson_on_state(int(idx), s):
                _add(out, t, c * k)
        return out
    if kind in ("phi", "φ"):
        if not _fermion_lattice_ok(idx, sector):
            raise SectorError(f"φ({idx}) does not belong to the {sector} sector")
        idx = Fraction(idx)
        for s, c in v.items():
            for k, t in _fermion_on_state(idx, s):
                _add(out, t, c * k)
        return out
    raise ValueError(f"unknown mode {mode!r}")


# --------------------------------------------------------------------------
# operators

class GradedOperator:
    """Exact homogeneous operator; subclasses implement _apply_state."""

    degree: Fraction = Fraction(0)
    parity: int = 0
    sector: str = "NS"
    label: str = "op"

    def __init__(self):
        self._blocks: dict = {}
        self._cols: dict = {}
        self._lock = threading.Lock()
        self.cap = None

    def _apply_state(self, s: FockState) -> dict:
        raise NotImplementedError

    def column(self, s: FockState) -> dict:
        """Image of one basis state (memoized; treat the result as read-only)."""
        col = self._cols.get(s)
        if col is None:
            col = self._apply_state(s)
            with self._lock:
                self._cols.setdefault(s, col)
        return col

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for s, c in v.items():
            for t, d in self.column(s).items():
                _add(out, t, c * d)
        return out

    def block(self, w) -> dict:
        """Columns {state: image} for every basis state of weight w."""
        w = Fraction(w)
        if self.cap is not None and w > self.cap:
            raise PaddingError(f"{self.label}: block at weight {w} beyond window {self.cap}")
        with self._lock:
            cached = self._blocks.get(w)
        if cached is not None:
            return cached
        cols = {s: self.column(s) for s in basis(w, self.sector, *self._space())}
        with self._lock:
            self._blocks.setdefault(w, cols)
        return cols

    def _space(self):
        return (True, True)

    def matrix(self, window) -> dict:
        """Sparse map state -> image for all basis states with weight in [lo, hi]."""
        lo, hi = window
        out = {}
        for w in weights_upto(hi, self.sector, *self._space()):
            if w >= lo:
                out.update(self.block(w))
        return out

    # algebra
    def __add__(self, other):
        return LinearCombination([(1, self), (1, other)])

    def __sub__(self, other):
        return LinearCombination([(1, self), (-1, other)])

    def __neg__(self):
        return LinearCombination([(-1, self)])

    def __mul__(self, c):
        return LinearCombination([(c, self)])

    __rmul__ = __mul__

    def __matmul__(self, other):
        return Product(self, other)


def _common(ops, attr):
    vals = {getattr(o, attr) for o in ops}
    return vals


class LinearCombination(GradedOperator):
    def __init__(self, items):
        super().__init__()
        flat = []
        for c, op in items:
            if isinstance(op, LinearCombination):
                flat.extend((c * d, o) for d, o in op.items)
            else:
                flat.append((c, op))
        self.items = [(c, o) for c, o in flat if c]
        ops = [o for _, o in self.items]
        degs = {o.degree for o in ops}
        if len(degs) > 1:
            raise ValueError("linear combinations must be homogeneous in degree")
        self.degree = degs.pop() if degs else Fraction(0)
        pars = {o.parity for o in ops}
        self.parity = pars.pop() if len(pars) == 1 else 0
        secs = {o.sector for o in ops}
        self.sector = secs.pop() if len(secs) == 1 else "NS"
        self.label = " + ".join(o.label for o in ops) or "0"
        spaces = {o._space() for o in ops}
        self._sp = (any(s[0] for s in spaces), any(s[1] for s in spaces)) if spaces else (True, True)

    def _space(self):
        return self._sp

    def _apply_state(self, s):
        out: dict = {}
        for c, op in self.items:
            for t, d in op.column(s).items():
                _add(out, t, c * d)
        return out


class Product(GradedOperator):
    """A after B."""

    def __init__(self, A: GradedOperator, B: GradedOperator):
        super().__init__()
        self.A, self.B = A, B
        self.degree = A.degree + B.degree
        self.parity = (A.parity + B.parity) % 2
        self.sector = A.sector
        self.label = f"({A.label})({B.label})"

    def _space(self):
        a, b = self.A._space(), self.B._space()
        return (a[0] or b[0], a[1] or b[1])

    def _apply_state(self, s):
        return self.A.apply(self.B.column(s))


class Identity(GradedOperator):
    def __init__(self, sector="NS", bosons=True, fermions=True):
        super().__init__()
        self.sector = sector
        self._sp = (bosons, fermions)
        self.label = "1"

    def _space(self):
        return self._sp

    def _apply_state(self, s):
        return {s: 1}


class ModeOperator(GradedOperator):
    def __init__(self, kind: str, idx, sector: str = "NS", scale=1):
        super().__init__()
        idx = Fraction(idx)
        if kind == "phi" and not _fermion_lattice_ok(idx, sector):
            raise SectorError(f"φ({idx}) does not belong to the {sector} sector")
        self.kind, self.idx, self.sector, self.scale = kind, idx, sector, scale
        self.degree = idx
        self.parity = 1 if kind == "phi" else 0
        self.label = f"{kind}({idx})"

    def _apply_state(self, s):
        out = apply_mode((self.kind, self.idx), {s: self.scale}, self.sector)
        return out


@dataclass(frozen=True)
class QuadraticTerm:
    """sum over j of coef(j) :a(j) b(m-j): with kind 'hh', 'ff' or 'fh' (φ(j) h(m-j))."""

    kind: str
    m: Fraction
    coef: Callable


def _normal_pair(kind: str, j, k, s: FockState, sector: str):
    """:a(j) b(k): applied to a basis state; list of (coef, state)."""
    if kind == "hh":
        first, second = ("h", j), ("h", k)
        if j > k:
            first, second = second, first
        sign = 1
    elif kind == "ff":
        first, second = ("phi", j), ("phi", k)
        sign = 1
        if j > k:
            first, second = second, first
            sign = -1
    elif kind == "fh":
        first, second = ("phi", j), ("h", k)
        sign = 1
    else:
        raise ValueError(kind)
    inner = apply_mode(second, {s: sign}, sector)
    if not inner:
        return {}
    return apply_mode(first, inner, sector)


def _may_act(kind, j, k, bos, f2) -> bool:
    """Cheap necessary condition: every positive (annihilation) mode needs a partner in the state."""
    if kind == "hh":
        return not (j > 0 and j not in bos or k > 0 and k not in bos)
    if kind == "ff":
        return not (j > 0 and int(2 * j) not in f2 or k > 0 and int(2 * k) not in f2)
    return not (j > 0 and int(2 * j) not in f2 or k > 0 and k not in bos)


class QuadraticOperator(GradedOperator):
    """Finite sum of normal-ordered quadratic families plus a scalar (zero modes only)."""

    def __init__(self, terms, m, *, constant=0, sector: str = "NS", parity: int = 0,
                 label: str = "Q", space=(True, True)):
        super().__init__()
        self.terms = tuple(terms)
        self.degree = Fraction(m)
        self.constant = constant
        self.sector = sector
        self.parity = parity
        self.label = label
        self._sp = space
        if constant and self.degree != 0:
            raise ValueError("a scalar shift only makes sense on a zero mode")

    def _space(self):
        return self._sp

    def _first_indices(self, term: QuadraticTerm, w: Fraction):
        m = term.m
        if term.kind == "hh":
            lo, step, off = m - w, 1, Fraction(0)
        elif term.kind == "ff":
            lo, step = m - w, 1
            off = HALF if self.sector == "NS" else Fraction(0)
        else:
            lo, step = m - w, 1
            off = HALF if self.sector == "NS" else Fraction(0)
        j = lo + ((off - lo) % 1)
        while j <= w:
            yield j
            j += step

    def _apply_state(self, s):
        w = s.weight
        out: dict = {}
        bos, f2 = set(s.bosons), set(s._key[1])
        for term in self.terms:
            for j in self._first_indices(term, w):
                k = term.m - j
                if not _may_act(term.kind, j, k, bos, f2):
                    continue
                c = term.coef(j)
                if not c:
                    continue
                for t, d in _normal_pair(term.kind, j, k, s, self.sector).items():
                    _add(out, t, c * d)
        if self.constant:
            _add(out, s, self.constant)
        return out

    def with_constant(self, c) -> "QuadraticOperator":
        return QuadraticOperator(self.terms, self.degree, constant=self.constant + c,
                                 sector=self.sector, parity=self.parity,
                                 label=self.label + "+c", space=self._sp)

    def coefficient_table(self, lo, hi) -> dict:
        """{(kind, j): coef(j)} for first-mode indices in [lo, hi]."""
        out = {}
        for term in self.terms:
            off = HALF if (term.kind != "hh" and self.sector == "NS") else Fraction(0)
            j = lo + ((off - lo) % 1)
            while j <= hi:
                c = term.coef(j)
                if c:
                    key = (term.kind, j)
                    out[key] = out.get(key, 0) + c
                j += 1
        return out


# --------------------------------------------------------------------------
# operator families

@dataclass(frozen=True)
class OperatorSpec:
    """family: 'L' (boson L^(r)), 'Lf' (fermion script-L^(r)), 'G' (odd G^(r)),
    'vir' (bosonic Virasoro), 'ns-L', 'ns-G', or 'twisted' (L^(r,chi,mu))."""

    family: str
    r: int = 0
    m: Fraction = Fraction(0)
    corrected: bool = False
    chi: DirichletCharacter | None = None
    mu: DirichletCharacter | None = None
    sector: str = "NS"


def _engine_coefficient(a: int, b: int, j, k):
    """coeff of y1^a y2^b in exp(-j y1 - k y2), through the multivariate series kernel."""
    series = MultiSeries.exp_linear(("y1", "y2"), (a, b), (-j, -k))
    return series.coefficient((a, b))


def _boson_coef(r, m, method):
    m = Fraction(m)
    scale = Fraction(factorial(r) ** 2, 2)
    if method == "closed":
        return lambda j: Fraction(1, 2) * (j * (m - j)) ** r
    return lambda j: scale * _engine_coefficient(r, r, j, m - j)


def _fermion_coef(s, m, method):
    m = Fraction(m)
    scale = Fraction(factorial(s + 1) * factorial(s), 2)
    if method == "closed":
        return lambda j: -Fraction(1, 2) * j ** (s + 1) * (m - j) ** s
    return lambda j: scale * _engine_coefficient(s + 1, s, j, m - j)


def _odd_coef(r, n, method):
    n = Fraction(n)
    if method == "closed":
        return lambda j: (-j) ** r
    return lambda j: factorial(r) * _engine_coefficient(r, 0, j, n - j)


def boson_correction(r: int) -> Fraction:
    """(-1)^r zeta(-2r-1)/2."""
    return (-1) ** r * zeta_neg(2 * r + 1) / 2


def fermion_correction(r: int) -> Fraction:
    """(-1)^(r+1) zeta(-1-2r, 1/2)/2, the constant produced by the e^{z/2}/(e^z-1) subtraction."""
    return (-1) ** (r + 1) * hurwitz_neg(2 * r + 1, HALF) / 2


def fermion_correction_as_printed(r: int) -> Fraction:
    """(-1)^(r+1) zeta(1-2r, 1/2)/2 exactly as displayed; undefined (pole) at r = 0."""
    if r < 1:
        raise ZeroDivisionError("zeta(1, 1/2) is a pole")
    return (-1) ** (r + 1) * hurwitz_neg(2 * r - 1, HALF) / 2


def _series_zero_mode(kernel: TruncatedSeries, a: int, b: int, scale) -> Fraction:
    """scale * coeff of y1^a y2^b in kernel(y1 - y2) (kernel a Laurent series in z)."""
    n = a + b
    return scale * kernel.coefficient(n) * comb(n, a) * (-1) ** b


def boson_correction_from_series(r: int) -> Fraction:
    """Route through the subtraction -d/dy1 e^{y1-y2}/(e^{y1-y2}-1)."""
    order = 2 * r + 1
    inner = order + 3
    f = expand_quotient(TruncatedSeries.exp(1, inner), TruncatedSeries.exp(1, inner) - 1, order + 1)
    return _series_zero_mode(-f.derivative(), r, r, Fraction(factorial(r) ** 2, 2))


def fermion_correction_from_series(r: int) -> Fraction:
    """Route through the subtraction e^{(y1-y2)/2}/(e^{y1-y2}-1)."""
    order = 2 * r + 1
    inner = order + 3
    f = expand_quotient(TruncatedSeries.exp(HALF, inner), TruncatedSeries.exp(1, inner) - 1, order)
    return _series_zero_mode(f, r + 1, r, Fraction(factorial(r + 1) * factorial(r), 2))


def build_operator(spec: OperatorSpec, method: str = "engine") -> QuadraticOperator:
    """Quadratic operator described by spec; method 'engine' (generating-function
    extraction) or 'closed' (closed-form coefficients)."""
    fam, r, m = spec.family, spec.r, Fraction(spec.m)
    if fam == "L":
        op = QuadraticOperator([QuadraticTerm("hh", m, _boson_coef(r, m, method))], m,
                               sector=spec.sector, label=f"L^({r})({m})")
        if spec.corrected and m == 0:
            op = op.with_constant(boson_correction(r))
        return op
    if fam == "Lf":
        op = QuadraticOperator([QuadraticTerm("ff", m, _fermion_coef(r, m, method))], m,
                               sector=spec.sector, label=f"Lf^({r})({m})")
        if spec.corrected and m == 0:
            op = op.with_constant(fermion_correction(r))
        return op
    if fam == "G":
        if spec.corrected:
            raise ValueError("the odd generators carry no zeta correction")
        return QuadraticOperator([QuadraticTerm("fh", m, _odd_coef(r, m, method))], m,
                                 sector=spec.sector, parity=1, label=f"G^({r})({m})")
    if fam == "vir":
        op = QuadraticOperator([QuadraticTerm("hh", m, _boson_coef(0, m, method))], m,
                               sector=spec.sector, label=f"L({m})", space=(True, False))
        if spec.corrected and m == 0:
            op = op.with_constant(boson_correction(0))
        return op
    if fam == "ns-L":
        op = QuadraticOperator([QuadraticTerm("hh", m, _boson_coef(0, m, method)),
                                QuadraticTerm("ff", m, _fermion_coef(0, m, method))], m,
                               sector=spec.sector, label=f"L({m})")
        if spec.corrected and m == 0:
            op = op.with_constant(boson_correction(0) + fermion_correction(0))
        return op
    if fam == "ns-G":
        return build_operator(OperatorSpec("G", 0, m, sector=spec.sector), method)
    if fam == "twisted":
        return chi_twisted_operator(r, int(m), spec.chi, spec.mu, method=method,
                                    corrected=spec.corrected)
    raise ValueError(f"unknown operator family {fam!r}")


def zeta_correct(op: QuadraticOperator, spec: OperatorSpec) -> QuadraticOperator:
    """Add the zeta-regularized constant to a zero mode; nonzero modes are returned unchanged."""
    if spec.family == "G" or spec.family == "ns-G":
        raise ValueError("G(n) is not corrected")
    if Fraction(spec.m) != 0:
        return op
    if spec.family in ("L", "vir"):
        return op.with_constant(boson_correction(spec.r))
    if spec.family == "Lf":
        return op.with_constant(fermion_correction(spec.r))
    if spec.family == "ns-L":
        return op.with_constant(boson_correction(0) + fermion_correction(0))
    if spec.family == "twisted":
        return op.with_constant(twisted_correction(spec.r, spec.chi, spec.mu))
    raise ValueError(f"no correction rule for {spec.family!r}")


# --------------------------------------------------------------------------
# symmetric-ordering regularization (an independent route to the constants)

def regularized_constant(op: QuadraticOperator):
    """Scalar that turns the normal-ordered zero mode into its symmetrically ordered,
    zeta-regularized version: 1/2 sum_{k>0} k c(k) for bosons, -1/2 sum_{p>0} c(p) for
    fermions, where c is the coefficient of h(-k)h(k) (resp. φ(-p)φ(p)).

    The coefficient functions must be quasi-polynomial: a polynomial in k times a
    function of k mod N. They are sampled, decomposed, and summed with Hurwitz zeta.
    """
    if op.degree != 0:
        return Fraction(0)
    total = Fraction(0)
    for term in op.terms:
        if term.kind == "fh":
            continue
        if term.kind == "hh":
            def c(k, f=term.coef):
                return f(-k) + f(k)
            total = total + _regularized_quasi_sum(lambda k: k * c(k), Fraction(0), op) / 2
        else:
            def c(p, f=term.coef):
                return f(-p) - f(p)
            off = HALF if op.sector == "NS" else Fraction(0)
            total = total - _regularized_quasi_sum(c, off, op) / 2
    return total


def _regularized_quasi_sum(fn, offset, op, max_degree: int = 12):
    """Zeta-regularized sum over k in offset + Z_{>0} (k > 0) of fn(k), where fn is a
    quasi-polynomial of degree <= max_degree and period N = op.period."""
    N = getattr(op, "period", 1)
    start = offset if offset > 0 else Fraction(1)
    total = Fraction(0)
    for res in range(N):
        # values on the progression start + res + N*t, t = 0..max_degree+1
        base = start + res
        pts = [fn(base + N * t) for t in range(max_degree + 2)]
        coeffs = _newton_to_power(pts, max_degree)
        if coeffs is None:
            raise ValueError("coefficient function is not quasi-polynomial of the assumed degree")
        # sum over t >= 0 of sum_d a_d t^d -> sum_d a_d zeta(-d, ...) with the shift
        # handled by rewriting in k = base + N t: use Hurwitz at x = base/N
        total = total + _hurwitz_poly_sum(coeffs, base, N)
    return total


def _newton_to_power(values, max_degree):
    """Interpolating polynomial in t through (t, values[t]); None if degree exceeds max_degree."""
    n = len(values)
    diffs = [values]
    for _ in range(n - 1):
        prev = diffs[-1]
        diffs.append([prev[i + 1] - prev[i] for i in range(len(prev) - 1)])
    if diffs[-1] and diffs[-1][0]:
        return None
    # Newton forward form: sum_i Delta^i f(0) * C(t, i)
    poly = [0] * n
    for i in range(n):
        d = diffs[i][0]
        if not d:
            continue
        # C(t, i) = t(t-1)...(t-i+1)/i!
        falling = [Fraction(1)]
        for s in range(i):
            nxt = [0] * (len(falling) + 1)
            for e, c in enumerate(falling):
                nxt[e + 1] += c
                nxt[e] -= s * c
            falling = nxt
        for e, c in enumerate(falling):
            poly[e] = poly[e] + d * c / factorial(i)
    while poly and not poly[-1]:
        poly.pop()
    return poly


def _hurwitz_poly_sum(coeffs, base, N):
    """Regularized sum_{t>=0} P(t) with P(t) given in powers of t, evaluated by rewriting
    P in powers of k = base + N t and using sum_{t>=0} (base + N t)^d = N^d zeta(-d, base/N)."""
    deg = len(coeffs) - 1
    # t = (k - base)/N
    in_k = [0] * (deg + 1)
    for d, a in enumerate(coeffs):
        if not a:
            continue
        for e in range(d + 1):
            in_k[e] = in_k[e] + a * comb(d, e) * Fraction(-base) ** (d - e) / Fraction(N) ** d
    total = Fraction(0)
    x = Fraction(base) / N
    for e, a in enumerate(in_k):
        if a:
            total = total + a * Fraction(N) ** e * hurwitz_neg(e, x)
    return total


# --------------------------------------------------------------------------
# chi-twisted operators

def _check_twist_chars(*chars):
    for c in chars:
        if c is None or not c.is_primitive or c.is_trivial:
            raise ValueError("twisted operators need primitive nontrivial characters")
    if len({c.modulus for c in chars}) != 1:
        raise ValueError("characters must share the modulus")


def twisted_mode(chi: DirichletCharacter, n: int, sector: str = "NS") -> ModeOperator:
    """h_chi(n) = chi(-n) h(n), the x^{-n} coefficient of X_chi(h(-1)vac, x)."""
    return ModeOperator("h", n, sector, chi.value(-n, working_level(chi)))


def twisted_mode_via_gauss(chi: DirichletCharacter, n: int, sector: str = "NS") -> ModeOperator:
    """Same mode through g(conj chi)^-1 sum_a conj(chi)(a) X(zeta_N^a x)."""
    N = chi.modulus
    L = working_level(chi)
    cbar = chi.conj()
    acc = Cyclotomic.from_rational(L, 0)
    for a in range(1, N + 1):
        v = cbar.value(a, L)
        if v:
            acc = acc + v * Cyclotomic.root(L, -(L // N) * a * n)
    return ModeOperator("h", n, sector, acc / gauss_sum(cbar, L))


class TwistedQuadratic(QuadraticOperator):
    period: int = 1


def chi_twisted_operator(r: int, m: int, chi: DirichletCharacter, mu: DirichletCharacter, *,
                         method: str = "engine", corrected: bool = False,
                         sector: str = "NS") -> QuadraticOperator:
    """L^(r,chi,mu)(m) = (r!)^2/2 coeff_{y1^r y2^r x^-m} :X_chi(e^{y1}x) X_mu(e^{y2}x):.

    'engine' realizes X_chi through the Gauss-sum average of root-of-unity shifted
    fields; 'closed' uses the twisted modes chi(-j)h(j) directly.
    """
    _check_twist_chars(chi, mu)
    N = chi.modulus
    L = working_level(chi, mu)
    m = Fraction(m)
    scale = Fraction(factorial(r) ** 2, 2)
    if method == "closed":
        def coef(j):
            k = m - j
            return chi.value(int(-j), L) * mu.value(int(-k), L) * (Fraction(1, 2) * (j * k) ** r)
    else:
        cbar, mbar = chi.conj(), mu.conj()
        norm = (gauss_sum(cbar, L) * gauss_sum(mbar, L)).inverse()
        rows = [(a, b, cbar.value(a, L) * mbar.value(b, L))
                for a in range(1, N + 1) for b in range(1, N + 1)]
        rows = [(a, b, w) for a, b, w in rows if w]

        @lru_cache(maxsize=None)
        def coef(j):
            k = m - j
            acc = Cyclotomic.from_rational(L, 0)
            for a, b, w in rows:
                acc = acc + w * Cyclotomic.root(L, -(L // N) * int(a * j + b * k))
            return acc * norm * (scale * _engine_coefficient(r, r, j, k))
    op = TwistedQuadratic([QuadraticTerm("hh", m, coef)], m, sector=sector,
                          label=f"L^({r},{chi.label()},{mu.label()})({m})", space=(True, False))
    op.period = N
    if corrected and m == 0:
        op = op.with_constant(twisted_correction(r, chi, mu))
        op.__class__ = TwistedQuadratic
        op.period = N
    return op


def twisted_correction(r: int, chi: DirichletCharacter, mu: DirichletCharacter):
    """mu(-1) (-1)^r L(-2r-1, chi mu)/2; for even mu this is the displayed (-1)^r L(-2r-1, chi mu)/2."""
    rho = chi * mu
    return l_value_neg(rho, 2 * r + 2) * (mu.parity * (-1) ** r) / 2


def twisted_correction_as_printed(r: int, chi: DirichletCharacter, mu: DirichletCharacter):
    return l_value_neg(chi * mu, 2 * r + 2) * ((-1) ** r) / 2


def twisted_correction_from_series(r: int, chi: DirichletCharacter, mu: DirichletCharacter):
    """(r!)^2/2 coeff_{y1^r y2^r} of the regularized contraction -mu(-1) S'(y1 - y2),
    S(z) = sum_b (chi mu)(b) e^{bz}/(e^{Nz}-1)."""
    S = twisted_contraction_series(chi, mu, 2 * r + 1)
    kernel = -S.derivative() * mu.parity
    return _series_zero_mode(kernel, r, r, Fraction(factorial(r) ** 2, 2))


def twisted_pole_coefficient(chi: DirichletCharacter, mu: DirichletCharacter):
    """Coefficient of (y1-y2)^-1 in S; zero exactly when chi mu is nontrivial."""
    return twisted_contraction_series(chi, mu, 2).coefficient(-1)


# --------------------------------------------------------------------------
# iterates of free pairs

FREE_PAIR_VECTORS = {"h": FockState((1,), ()), "phi": FockState((), (HALF,))}


def _vector_weight(name):
    return FREE_PAIR_VECTORS[name].weight


def _field_modes(state: FockState):
    """Y(state, y) for states with at most two modes, as a list of
    (scale, [(kind, mode-shift)]) data: returns (modes, weight) where each mode
    factor is (kind, a) meaning the field d^{(a-1)} of h (or the φ descendant)."""
    factors = [("h", b) for b in state.bosons] + [("phi", f) for f in state.fermions]
    if len(factors) > 2:
        raise ValueError("only states with at most two modes have fields here")
    return factors


def _field_coefficient(kind, a, j):
    """Coefficient of y^{-j-a} (bosons) or y^{-j-a} (fermions) in the field of
    h(-a)vac (resp. φ(-a)vac) at mode j: C(-j-1, a-1) for h, C(-j-1/2, a-1/2) for φ."""
    if kind == "h":
        return _binom(-j - 1, a - 1)
    return _binom(-j - HALF, a - HALF)


def _binom(x, n):
    n = int(n)
    acc = Fraction(1)
    for i in range(n):
        acc = acc * (Fraction(x) - i) / (i + 1)
    return acc


class StateFieldMode(GradedOperator):
    """The y^{-M} coefficient of X(w, y) = Y(y^{L(0)} w, y) for a state w with <= 2 modes."""

    def __init__(self, state: FockState, M, sector: str = "NS"):
        super().__init__()
        self.state, self.M, self.sector = state, Fraction(M), sector
        self.degree = self.M
        self.factors = _field_modes(state)
        self.parity = sum(1 for k, _ in self.factors if k == "phi") % 2
        self.label = f"X({state.render()})[{M}]"

    def _apply_state(self, s):
        if not self.factors:
            return {s: 1} if self.M == 0 else {}
        if len(self.factors) == 1:
            (kind, a), = self.factors
            c = _field_coefficient(kind, a, self.M)
            if not c:
                return {}
            return apply_mode((kind, self.M), {s: c}, self.sector)
        (k1, a1), (k2, a2) = self.factors
        w = s.weight
        out: dict = {}
        off1 = HALF if (k1 == "phi" and self.sector == "NS") else Fraction(0)
        lo = self.M - w
        j = lo + ((off1 - lo) % 1)
        kind = {"hh": "hh", "phiphi": "ff", "phih": "fh"}.get(k1 + k2)
        swap = False
        if kind is None:        # h then phi: reorder to phi h (they commute)
            kind, swap = "fh", True
        while j <= w:
            k = self.M - j
            if swap:
                c = _field_coefficient(k1, a1, k) * _field_coefficient(k2, a2, j)
                jj, kk = j, k
            else:
                c = _field_coefficient(k1, a1, j) * _field_coefficient(k2, a2, k)
                jj, kk = j, k
            if c:
                for t, d in _normal_pair(kind, jj, kk, s, self.sector).items():
                    _add(out, t, c * d)
            j += 1
        return out


def _mode_of(name: str, n):
    """u(n) for the generator u: h(-1)vac has u(n) = h(n); φ(-1/2)vac has u(n) = φ(n + 1/2)."""
    if name == "h":
        return ("h", n)
    return ("phi", Fraction(n) + HALF)


@dataclass
class IterateReport:
    pair: tuple
    x_order: int
    window: int
    correction: TruncatedSeries
    mismatches: list

    @property
    def passed(self) -> bool:
        return not self.mismatches


def iterate_correction_series(u: str, v: str, order: int) -> TruncatedSeries:
    """e^{x wt u}/(e^x - 1)^{wt u + wt v} through x^order."""
    wu, wv = _vector_weight(u), _vector_weight(v)
    n = int(wu + wv)
    inner = order + n + 2
    num = TruncatedSeries.exp(wu, inner)
    den = (TruncatedSeries.exp(1, inner) - 1) ** n
    return expand_quotient(num, den, order)


def iterate_vertex_check(u: str, v: str, x_order: int = 6, window: int = 4,
                         sector: str = "NS", modes=range(-3, 4)) -> IterateReport:
    """Compare X(Y[u,x]v, y) - :X(u, e^x y) X(v, y): with the scalar series
    e^{x wt u}/(e^x-1)^{wt u + wt v}, x-coefficient by x-coefficient and y-mode by y-mode."""
    if u not in FREE_PAIR_VECTORS or v not in FREE_PAIR_VECTORS or u != v:
        raise ValueError("only the free pairs (h(-1)vac, h(-1)vac) and (φ(-1/2)vac, φ(-1/2)vac)")
    wu, wv = _vector_weight(u), _vector_weight(v)
    top = int(wu + wv) - 1
    correction = iterate_correction_series(u, v, x_order)
    vec_v = {FREE_PAIR_VECTORS[v]: 1}
    # u(n) v for n from -(x_order+1) .. top: states of weight wu + wv - n - 1
    pieces = {}
    for n in range(-(x_order + 1), top + 1):
        state = apply_mode(_mode_of(u, n), vec_v, sector)
        pieces[n] = state
    # x-series e^{x wu} (e^x-1)^{-n-1}
    series = {}
    for n in pieces:
        inner = x_order + top + 3
        e1 = TruncatedSeries.exp(1, inner) - 1
        if -n - 1 >= 0:
            s = TruncatedSeries.exp(wu, inner) * (e1 ** (-n - 1))
            series[n] = s.truncate(x_order)
        else:
            series[n] = expand_quotient(TruncatedSeries.exp(wu, inner), e1 ** (n + 1), x_order)
    kind = "hh" if u == "h" else "ff"
    mismatches = []
    for p in range(x_order + 1):
        for M in modes:
            # LHS operator: sum_n [x^p] series_n * X(u(n)v, y)[y^-M]
            items = []
            scalar_part = 0
            for n, vec in pieces.items():
                c = series[n].coefficient(p)
                if not c or not vec:
                    continue
                for st, a in vec.items():
                    if st == VACUUM:
                        if M == 0:
                            scalar_part = scalar_part + c * a
                        continue
                    items.append((c * a, StateFieldMode(st, M, sector)))
            # RHS: sum_{j+k=M} (-j)^p/p! :u(j) v(k):
            rhs = QuadraticOperator([QuadraticTerm(kind, Fraction(M),
                                                   lambda j, p=p: Fraction((-j) ** p, factorial(p)))],
                                    M, sector=sector)
            expected_scalar = correction.coefficient(p) if M == 0 else 0
            if scalar_part != expected_scalar:
                mismatches.append({"x": p, "M": M, "scalar": str(scalar_part),
                                   "expected": str(expected_scalar)})
            lhs = LinearCombination(items) if items else None
            for w in weights_upto(window, sector):
                for s in basis(w, sector):
                    left = lhs._apply_state(s) if lhs is not None else {}
                    right = rhs._apply_state(s)
                    if left != right:
                        mismatches.append({"x": p, "M": M, "state": s.render()})
    return IterateReport((u, v), x_order, window, correction, mismatches)
