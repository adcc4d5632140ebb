"""Group ring of translation operators on R^d.

A ``TranslationPolynomial`` is a finite combination  sum_y  c_y tau_y  with
shifts y in the declared field and coefficients in the exponential ring; the
identity is tau_0.  Composition is the (commutative) convolution of shifts.
Operators act on the left on exponential polynomials and on sampled grids;
forward differences are

    delta(h, m) = sum_k C(m,k) (-1)^(m-k) tau_(k h).

The module also provides the two exact operator identities the rest of the
library leans on: the factor Q with (tau_(p h) - 1)^n = Q (tau_h - 1)^n, and
the multinomial expansion of (tau_(m1 h1 + ... + mt ht) - 1)^N into summands
each divisible by some (tau_(h_k)^(m_k) - 1)^(alpha_k).

Operators act on the left with the function-side (forward shift) convention
throughout; the adjoint convention, where a pairing against test functions
flips the shift sign, is not implemented.  Negative powers of a translation
are shifts by the negated vector, so the terms range over the full group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    FieldMismatch,
    MalformedInput,
    ShiftNotOnGrid,
)
from .expcoef import ExpCoefficient
from .exppoly import ExpPolynomial
from .qmath import frac
from .scalar import AlgebraicScalar, NumberField


def _shift_key(field: NumberField, y, dim: int):
    y = tuple(v if isinstance(v, AlgebraicScalar) else field.rational(frac(v)) for v in y)
    if len(y) != dim:
        raise DimensionMismatch("shift length must equal operator dimension")
    for v in y:
        if not (v.field is field or v.field == field):
            raise FieldMismatch("shift component from a different field")
    return y


class TranslationPolynomial:
    __slots__ = ("field", "dim", "terms")

    def __init__(self, field: NumberField, dim: int, terms: dict, _normalized=False):
        self.field = field
        self.dim = dim
        self.terms = terms
        if not _normalized:
            self.terms = {y: c for y, c in terms.items() if not c.is_zero()}

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(field: NumberField, dim: int) -> "TranslationPolynomial":
        return TranslationPolynomial(field, dim, {}, _normalized=True)

    @staticmethod
    def identity(field: NumberField, dim: int) -> "TranslationPolynomial":
        z = tuple(field.zero() for _ in range(dim))
        return TranslationPolynomial(field, dim, {z: ExpCoefficient.one(field)},
                                     _normalized=True)

    @staticmethod
    def tau(field: NumberField, y, dim: int | None = None) -> "TranslationPolynomial":
        dim = dim if dim is not None else len(y)
        key = _shift_key(field, y, dim)
        return TranslationPolynomial(field, dim, {key: ExpCoefficient.one(field)},
                                     _normalized=True)

    @staticmethod
    def delta(field: NumberField, h, m: int, dim: int | None = None) -> "TranslationPolynomial":
        """The forward-difference operator delta_h^m (m = 0 gives the identity)."""
        if m < 0:
            raise MalformedInput("difference order must be >= 0")
        dim = dim if dim is not None else len(h)
        h = _shift_key(field, h, dim)
        terms: dict = {}
        for k in range(m + 1):
            key = tuple(v * k for v in h)
            c = ExpCoefficient.scalar(field, Fraction(comb(m, k) * (-1) ** (m - k)))
            acc = terms.get(key)
            terms[key] = c if acc is None else acc + c
        return TranslationPolynomial(field, dim, terms)

    # -- ring operations --------------------------------------------------------

    def _check(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch("operators of different dimension")
        if not (self.field is other.field or self.field == other.field):
            raise FieldMismatch("operators over different fields")

    def _coerce(self, other):
        if isinstance(other, TranslationPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, ExpCoefficient)):
            c = other if isinstance(other, ExpCoefficient) else \
                ExpCoefficient.scalar(self.field, other)
            z = tuple(self.field.zero() for _ in range(self.dim))
            return TranslationPolynomial(self.field, self.dim, {z: c})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for y, c in o.terms.items():
            acc = terms.get(y)
            s = c if acc is None else acc + c
            if s.is_zero():
                terms.pop(y, None)
            else:
                terms[y] = s
        return TranslationPolynomial(self.field, self.dim, terms, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return TranslationPolynomial(self.field, self.dim,
                                     {y: -c for y, c in self.terms.items()},
                                     _normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        """Composition (convolution of shifts); commutative."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms: dict = {}
        for y, c in self.terms.items():
            for z, d in o.terms.items():
                key = tuple(a + b for a, b in zip(y, z))
                prod = c * d
                acc = terms.get(key)
                s = prod if acc is None else acc + prod
                if s.is_zero():
                    terms.pop(key, None)
                else:
                    terms[key] = s
        return TranslationPolynomial(self.field, self.dim, terms, _normalized=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise MalformedInput("operator powers must be >= 0")
        out = TranslationPolynomial.identity(self.field, self.dim)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (DimensionMismatch, FieldMismatch):
            return False
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    __hash__ = None

    def shifts_sorted(self):
        return sorted(self.terms.keys(), key=lambda y: tuple(v.coords for v in y))

    # -- actions -------------------------------------------------------------

    def apply(self, f: ExpPolynomial) -> ExpPolynomial:
        if f.dim != self.dim:
            raise DimensionMismatch("operator and function dimensions differ")
        acc = ExpPolynomial.zero(self.field, self.dim)
        for y, c in self.terms.items():
            acc = acc + f.translate(y).scale(c)
        return acc

    def apply_grid(self, values: "GridFunction") -> "GridFunction":
        """Pointwise action on sampled data; grid points whose shifted
        arguments leave the window become absent (NaN)."""
        spec = values.spec
        offsets = []
        for y, c in self.terms.items():
            off = []
            for v, ax in zip(y, spec.axes):
                q = v / ax.step
                if not q.is_rational() or q.as_rational().denominator != 1:
                    raise ShiftNotOnGrid(
                        "operator shift is not an integer multiple of the grid step")
                off.append(int(q.as_rational()))
            offsets.append((tuple(off), c.evaluate()))
        shape = values.data.shape
        out = np.zeros(shape, dtype=complex)
        valid = np.ones(shape, dtype=bool)
        for off, coeff in offsets:
            src = np.full(shape, np.nan + 0j)
            dst_slices, src_slices = [], []
            ok = True
            for n, o in zip(shape, off):
                # destination indices i with 0 <= i + o < n
                dst_lo, dst_hi = max(0, -o), min(n, n - o)
                if dst_lo >= dst_hi:
                    ok = False
                    break
                dst_slices.append(slice(dst_lo, dst_hi))
                src_slices.append(slice(dst_lo + o, dst_hi + o))
            if not ok:
                valid[...] = False
                continue
            src[tuple(dst_slices)] = values.data[tuple(src_slices)]
            mask = ~np.isnan(src.real)
            valid &= mask
            out = out + np.where(mask, src, 0) * coeff
        out[~valid] = np.nan
        return GridFunction(spec, out)

    def __repr__(self):
        bits = []
        for y in self.shifts_sorted():
            bits.append(f"tau_{tuple(str(v.coords) for v in y)}")
        return "TranslationPolynomial(" + " + ".join(bits) + ")" if bits else \
            "TranslationPolynomial(0)"


def divisibility_factor(field: NumberField, h, p: int, n: int,
                        dim: int | None = None) -> TranslationPolynomial:
    """The exact factor Q with (tau_(p h) - 1)^n = Q (tau_h - 1)^n.

    For positive p this is the geometric sum (1 + tau_h + ... + tau_h^(p-1))^n;
    for negative p the sign identity tau_(-h) - 1 = -tau_(-h)(tau_h - 1)
    contributes an extra unit (-tau_(p h))^n.
    """
    if p == 0:
        raise MalformedInput("p must be a nonzero integer")
    if n < 0:
        raise MalformedInput("n must be >= 0")
    dim = dim if dim is not None else len(h)
    h = _shift_key(field, h, dim)
    q = abs(p)
    geo = TranslationPolynomial.zero(field, dim)
    for j in range(q):
        geo = geo + TranslationPolynomial.tau(field, tuple(v * j for v in h), dim)
    Q = geo ** n
    if p < 0:
        unit = -TranslationPolynomial.tau(field, tuple(v * p for v in h), dim)
        Q = (unit ** n) * Q
    return Q


@dataclass(frozen=True)
class TelescopeSummand:
    alpha: tuple
    op: TranslationPolynomial


def telescope_expansion(field: NumberField, steps, powers, N: int):
    """Multinomial expansion of (tau_(sum_k m_k h_k) - 1)^N.

    ``steps`` is a list of field shift vectors h_k and ``powers`` the integer
    exponents m_k.  Returns the list of summands

        N!/(a_1! ... a_t!) * prod_i tau_(sum_{j>i} m_j h_j)^(a_i)
                                    * (tau_(m_i h_i) - 1)^(a_i)

    over all multi-indices (a_1..a_t) with sum N; their sum equals the
    expanded left side exactly, and every summand has some a_k >= ceil(N/t).
    """
    t = len(steps)
    if t == 0:
        raise EmptyInput("need at least one step")
    if len(powers) != t:
        raise MalformedInput("steps and powers must have equal length")
    if N < 1:
        raise MalformedInput("N must be >= 1")
    dim = len(steps[0])
    hs = [_shift_key(field, h, dim) for h in steps]
    ms = [int(m) for m in powers]

    def scaled(vec, k):
        return tuple(v * k for v in vec)

    def vec_add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    zero_vec = tuple(field.zero() for _ in range(dim))
    suffix = [zero_vec] * (t + 1)
    for i in range(t - 1, -1, -1):
        suffix[i] = vec_add(suffix[i + 1], scaled(hs[i], ms[i]))
    # suffix[i] = sum_{j >= i} m_j h_j ; the prefix operator for index i is tau_(suffix[i+1])

    bracket = []
    for i in range(t):
        di = TranslationPolynomial.tau(field, scaled(hs[i], ms[i]), dim) - \
            TranslationPolynomial.identity(field, dim)
        bracket.append(di)

    summands = []
    for alpha in _compositions(N, t):
        coeff = factorial(N)
        for a in alpha:
            coeff //= factorial(a)
        op = TranslationPolynomial.identity(field, dim) * Fraction(coeff)
        for i, a_i in enumerate(alpha):
            if a_i == 0:
                continue
            op = op * TranslationPolynomial.tau(field, scaled(suffix[i + 1], a_i), dim)
            op = op * (bracket[i] ** a_i)
        summands.append(TelescopeSummand(tuple(alpha), op))
    return summands


def telescope_total(field: NumberField, steps, powers, N: int) -> TranslationPolynomial:
    """(tau_(sum m_k h_k) - 1)^N, the left side of the telescoping identity."""
    dim = len(steps[0])
    hs = [_shift_key(field, h, dim) for h in steps]
    total = tuple(field.zero() for _ in range(dim))
    for h, m in zip(hs, powers):
        total = tuple(a + v * int(m) for a, v in zip(total, h))
    base = TranslationPolynomial.tau(field, total, dim) - \
        TranslationPolynomial.identity(field, dim)
    return base ** N


def telescope_pigeonhole_ok(summands, N: int, t: int) -> bool:
    bound = -(-N // t)
    return all(max(s.alpha) >= bound for s in summands)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridAxis:
    start: AlgebraicScalar
    step: AlgebraicScalar
    count: int


@dataclass(frozen=True)
class GridSpec:
    """Rectangular lattice with exact field geometry."""

    axes: tuple

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple:
        return tuple(ax.count for ax in self.axes)

    @staticmethod
    def regular(field: NumberField, bounds):
        """Axes from (min, max, count) triples with rational endpoints."""
        axes = []
        for lo, hi, n in bounds:
            lo, hi = frac(lo), frac(hi)
            n = int(n)
            if n < 2 or not hi > lo:
                raise MalformedInput("grid axis needs min < max and count >= 2")
            step = (hi - lo) / (n - 1)
            axes.append(GridAxis(field.rational(lo), field.rational(step), n))
        return GridSpec(tuple(axes))

    def point_arrays(self) -> np.ndarray:
        """(prod(shape), dim) array of float points, C index order."""
        coords = [float(ax.start) + float(ax.step) * np.arange(ax.count)
                  for ax in self.axes]
        mesh = np.meshgrid(*coords, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass
class GridFunction:
    spec: GridSpec
    data: np.ndarray  # complex, NaN marks absent points

    @staticmethod
    def sample(spec: GridSpec, fn) -> "GridFunction":
        pts = spec.point_arrays()
        vals = np.asarray(fn(pts), dtype=complex).reshape(spec.shape)
        return GridFunction(spec, vals)

    def valid_mask(self) -> np.ndarray:
        return ~np.isnan(self.data.real)

    def max_abs(self) -> float:
        m = self.valid_mask()
        if not m.any():
            return float("nan")
        return float(np.max(np.abs(self.data[m])))
