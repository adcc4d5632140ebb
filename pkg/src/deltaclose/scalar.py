"""Exact arithmetic in a declared real algebraic number field Q(theta).

A field is declared once by a monic square-free minimal polynomial together
with an isolating interval bracketing exactly one real root theta.  Every
scalar in the library is a rational-coefficient vector over the power basis
1, theta, ..., theta^(n-1); arithmetic reduces modulo the minimal polynomial,
so equality and sign are decidable.  Sign determination refines the isolating
interval by bisection until an exact rational interval enclosure of the value
excludes zero, which terminates for every nonzero algebraic number.

Irreducibility of the minimal polynomial is assumed, not verified; a
reducible declaration surfaces later as a zero-divisor error when inverting.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .errors import FieldMismatch, MalformedInput, NoSignChange, NotSquareFree
from .qmath import (
    frac,
    ival_poly_eval,
    poly_deriv,
    poly_eval,
    poly_gcd,
    poly_trim,
)


class NumberField:
    """The real algebraic number field Q(theta).

    Instances are immutable apart from a monotonically refined enclosure of
    theta, which is guarded by a lock so values can be shared across threads.
    """

    __slots__ = ("minpoly", "degree", "_init_interval", "_lo", "_hi", "_lock",
                 "_reduction_rows")

    def __init__(self, minpoly, interval):
        minpoly = tuple(frac(c) for c in minpoly)
        if len(minpoly) < 2:
            raise MalformedInput("minimal polynomial must have degree >= 1")
        if poly_trim(list(minpoly)) != list(minpoly):
            raise MalformedInput("minimal polynomial has trailing zero coefficients")
        if minpoly[-1] != 1:
            raise MalformedInput("minimal polynomial must be monic")
        g = poly_gcd(list(minpoly), poly_deriv(list(minpoly)))
        if len(g) > 1:
            raise NotSquareFree("minimal polynomial is not square-free")
        a, b = frac(interval[0]), frac(interval[1])
        if not a < b:
            raise MalformedInput("isolating interval must satisfy a < b")
        ea, eb = poly_eval(list(minpoly), a), poly_eval(list(minpoly), b)
        if ea == 0 or eb == 0 or (ea > 0) == (eb > 0):
            raise NoSignChange("isolating interval does not bracket a root")
        self.minpoly = minpoly
        self.degree = len(minpoly) - 1
        self._init_interval = (a, b)
        self._lo, self._hi = a, b
        self._lock = threading.Lock()
        self._reduction_rows = self._build_reduction_rows()

    def _build_reduction_rows(self):
        # coords of theta^k for k = degree .. 2*degree-2, used to reduce products
        n = self.degree
        rows = []
        # theta^n = -(c0 + c1 theta + ... + c_{n-1} theta^{n-1})
        cur = [-c for c in self.minpoly[:n]]
        rows.append(tuple(cur))
        for _ in range(n - 2):
            nxt = [Fraction(0)] * n
            carry = cur[n - 1]
            for i in range(n - 1):
                nxt[i + 1] += cur[i]
            if carry:
                for i in range(n):
                    nxt[i] += carry * rows[0][i]
            cur = nxt
            rows.append(tuple(cur))
        return rows

    # -- root enclosure -------------------------------------------------

    def enclosure(self, width: Fraction):
        """Rational interval around theta of width <= ``width``."""
        with self._lock:
            lo, hi = self._lo, self._hi
            if hi - lo <= width:
                return lo, hi
            p = list(self.minpoly)
            slo = poly_eval(p, lo)
            while hi - lo > width:
                mid = (lo + hi) / 2
                smid = poly_eval(p, mid)
                if smid == 0:
                    lo = hi = mid
                    break
                if (smid > 0) == (slo > 0):
                    lo, slo = mid, smid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    def theta_float(self) -> float:
        lo, hi = self.enclosure(Fraction(1, 2**64))
        return float((lo + hi) / 2)

    # -- element constructors -------------------------------------------

    def element(self, coords) -> "AlgebraicScalar":
        coords = list(coords)
        if len(coords) > self.degree:
            raise MalformedInput("too many coordinates for field degree")
        coords = coords + [0] * (self.degree - len(coords))
        return AlgebraicScalar(self, tuple(frac(c) for c in coords))

    def rational(self, q) -> "AlgebraicScalar":
        return self.element([frac(q)])

    def zero(self) -> "AlgebraicScalar":
        return self.rational(0)

    def one(self) -> "AlgebraicScalar":
        return self.rational(1)

    def gen(self) -> "AlgebraicScalar":
        """theta itself (equals the rational root for degree-1 fields)."""
        if self.degree == 1:
            return self.rational(-self.minpoly[0])
        return self.element([0, 1])

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        return (self.minpoly == other.minpoly
                and self._init_interval == other._init_interval)

    def __hash__(self):
        return hash((self.minpoly, self._init_interval))

    def __repr__(self):
        return f"NumberField(minpoly={[str(c) for c in self.minpoly]}, interval={self._init_interval})"


def make_field(minpoly, interval) -> NumberField:
    """Declare Q(theta) from a monic minimal polynomial and isolating interval."""
    return NumberField(minpoly, interval)


def rational_field() -> NumberField:
    """The degree-1 field encoding plain Q (theta = 0)."""
    return NumberField([0, 1], (-1, 1))


def _common_field(a: "AlgebraicScalar", b: "AlgebraicScalar") -> NumberField:
    if a.field is b.field or a.field == b.field:
        return a.field
    raise FieldMismatch("operands belong to different number fields")


class AlgebraicScalar:
    """An element of the declared field, stored over the power basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = tuple(coords)

    # -- ring structure ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AlgebraicScalar):
            _common_field(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicScalar(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicScalar(self.field, tuple(-a for a in self.coords))

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
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.field.degree
        if n == 1:
            return AlgebraicScalar(self.field, (self.coords[0] * o.coords[0],))
        # rational factors avoid the full convolution and reduction
        if all(c == 0 for c in self.coords[1:]):
            q = self.coords[0]
            if q == 1:
                return o
            return AlgebraicScalar(self.field, tuple(q * b for b in o.coords))
        if all(c == 0 for c in o.coords[1:]):
            q = o.coords[0]
            if q == 1:
                return self
            return AlgebraicScalar(self.field, tuple(q * a for a in self.coords))
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[:n])
        rows = self.field._reduction_rows
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                row = rows[k - n]
                for i in range(n):
                    out[i] += c * row[i]
        return AlgebraicScalar(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicScalar":
        """Multiplicative inverse via the extended Euclidean algorithm.

        Raises ZeroDivisionError for zero and for zero divisors (the latter
        only occur if the declared minimal polynomial was reducible).
        """
        if self.is_zero():
            raise ZeroDivisionError("division by zero field element")
        n = self.field.degree
        if n == 1:
            return AlgebraicScalar(self.field, (1 / self.coords[0],))
        # extended gcd of the coordinate polynomial with the minimal polynomial
        from .qmath import poly_divmod, poly_mul, poly_sub

        r0, r1 = list(self.field.minpoly), poly_trim(list(self.coords))
        s0, s1 = [], [Fraction(1)]  # coefficients of the second argument
        while r1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        if len(r0) != 1:
            raise ZeroDivisionError(
                "zero divisor encountered: declared minimal polynomial is reducible")
        inv = [c / r0[0] for c in s0]
        _, rem = poly_divmod(inv, list(self.field.minpoly))
        return self.field.element(rem)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- decision procedures ----------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __bool__(self):
        return not self.is_zero()

    def sign(self) -> int:
        """-1, 0, or +1; exact, via interval refinement of theta."""
        if self.is_zero():
            return 0
        if all(c == 0 for c in self.coords[1:]):
            return -1 if self.coords[0] < 0 else 1
        width = Fraction(1, 2**8)
        p = poly_trim(list(self.coords))
        while True:
            box = self.field.enclosure(width)
            lo, hi = ival_poly_eval(p, box)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            width /= 4

    def value_enclosure(self, eps: Fraction):
        """Exact rational interval of width <= eps containing the value."""
        if all(c == 0 for c in self.coords[1:]):
            return (self.coords[0], self.coords[0])
        width = Fraction(1, 2**8)
        p = poly_trim(list(self.coords))
        while True:
            lo, hi = ival_poly_eval(p, self.field.enclosure(width))
            if hi - lo <= eps:
                return lo, hi
            width /= 4

    def __float__(self):
        lo, hi = self.value_enclosure(Fraction(1, 2**64))
        return float((lo + hi) / 2)

    def floor(self) -> int:
        """Exact floor of the real value."""
        if self.is_rational():
            q = self.coords[0]
            return q.numerator // q.denominator
        eps = Fraction(1, 2**20)
        while True:
            lo, hi = self.value_enclosure(eps)
            flo = lo.numerator // lo.denominator
            fhi = hi.numerator // hi.denominator
            if flo == fhi:
                return flo
            # an irrational value cannot sit on an integer, so this terminates
            eps /= 16

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise MalformedInput("value is not rational")
        return self.coords[0]

    def abs(self) -> "AlgebraicScalar":
        return -self if self.sign() < 0 else self

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, AlgebraicScalar):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __lt__(self, other):
        o = self._coerce(other)
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        return (self - o).sign() >= 0

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "AlgebraicScalar(" + ", ".join(str(c) for c in self.coords) + ")"


class ComplexAlgebraic:
    """Complexification of the declared field: re + i*im."""

    __slots__ = ("re", "im", "_hash", "_key")

    def __init__(self, re: AlgebraicScalar, im: AlgebraicScalar | None = None):
        self.re = re
        self.im = im if im is not None else re.field.zero()
        self._hash = None
        self._key = None

    @property
    def field(self) -> NumberField:
        return self.re.field

    def _coerce(self, other):
        if isinstance(other, ComplexAlgebraic):
            _common_field(self.re, other.re)
            return other
        if isinstance(other, AlgebraicScalar):
            return ComplexAlgebraic(other)
        if isinstance(other, (int, Fraction)):
            return ComplexAlgebraic(self.field.rational(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexAlgebraic(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexAlgebraic(-self.re, -self.im)

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
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.im.is_zero():
            if o.im.is_zero():
                return ComplexAlgebraic(self.re * o.re)
            return ComplexAlgebraic(self.re * o.re, self.re * o.im)
        if o.im.is_zero():
            return ComplexAlgebraic(self.re * o.re, self.im * o.re)
        return ComplexAlgebraic(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexAlgebraic":
        return ComplexAlgebraic(self.re, -self.im)

    def inverse(self) -> "ComplexAlgebraic":
        norm = self.re * self.re + self.im * self.im
        inv = norm.inverse()
        return ComplexAlgebraic(self.re * inv, -(self.im * inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except FieldMismatch:
            return False
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.re.coords, self.im.coords))
        return self._hash

    def sort_key(self):
        """Total order key compatible with addition; used for canonical forms."""
        if self._key is None:
            self._key = self.re.coords + self.im.coords
        return self._key

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexAlgebraic({self.re!r}, {self.im!r})"


def calg(field: NumberField, re=0, im=0) -> ComplexAlgebraic:
    """Convenience constructor from rationals / coordinate lists."""
    def mk(v):
        if isinstance(v, AlgebraicScalar):
            return v
        if isinstance(v, (list, tuple)):
            return field.element(v)
        return field.rational(frac(v))
    return ComplexAlgebraic(mk(re), mk(im))
