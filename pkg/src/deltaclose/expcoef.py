"""Group ring of formal exponentials e^mu with algebraic exponents.

An element is a finite sum  sum_j  c_j * e^(mu_j)  with pairwise distinct
exponents mu_j and nonzero coefficients c_j, both complex algebraic over the
declared field.  Multiplication follows e^a * e^b = e^(a+b).  Zero testing is
exact: the element is zero iff it has no stored term.  Soundness of that test
rests on the linear independence of exponentials with distinct algebraic
exponents (Lindemann-Weierstrass); it is the decision that makes exact
forward differencing of exponentials possible.

The class also carries an optional denominator so that quotients produced by
linear solving remain representable.  Freshly constructed ring elements have
unit denominator; the invariants quoted above apply to that canonical case.
Whenever a quotient divides out exactly the denominator is removed, so a/b
collapses back to a plain ring element when it can.

Exponents are totally ordered by the lexicographic order on their coordinate
vectors.  That order is translation-invariant, which makes the ring an
integral domain and makes leading-term exact division well defined.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

from .errors import FieldMismatch, InternalError
from .qmath import frac
from .scalar import AlgebraicScalar, ComplexAlgebraic, NumberField

_DIV_STEP_HARD_CAP = 20000


def _zero_exp(field: NumberField) -> ComplexAlgebraic:
    return ComplexAlgebraic(field.zero(), field.zero())


def _coerce_coeff(field: NumberField, v) -> ComplexAlgebraic:
    if isinstance(v, ComplexAlgebraic):
        return v
    if isinstance(v, AlgebraicScalar):
        return ComplexAlgebraic(v)
    if isinstance(v, (int, Fraction)):
        return ComplexAlgebraic(field.rational(frac(v)))
    raise TypeError(f"cannot coerce {v!r} into the coefficient field")


def _dict_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for mu, c in b.items():
        acc = out.get(mu)
        s = c if acc is None else acc + c
        if s.is_zero():
            out.pop(mu, None)
        else:
            out[mu] = s
    return out


def _dict_neg(a: dict) -> dict:
    return {mu: -c for mu, c in a.items()}


def _dict_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for mu, c in a.items():
        for nu, d in b.items():
            key = mu + nu
            acc = out.get(key)
            s = c * d if acc is None else acc + c * d
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def _dict_scale(a: dict, c: ComplexAlgebraic) -> dict:
    if c.is_zero():
        return {}
    return {mu: v * c for mu, v in a.items()}


def _leading(a: dict) -> ComplexAlgebraic:
    return max(a, key=lambda mu: mu.sort_key())


def _dict_divexact(num: dict, den: dict, step_cap: int | None):
    """Quotient num/den in the group ring, or None if not exactly divisible.

    Leading-term division with respect to the lexicographic exponent order;
    terminates unconditionally on exact input, and via ``step_cap`` when used
    as a divisibility probe.
    """
    if not num:
        return {}
    den_lead = _leading(den)
    den_lc = den[den_lead]
    rem = dict(num)
    quo: dict = {}
    steps = 0
    while rem:
        steps += 1
        if step_cap is not None and steps > step_cap:
            return None
        if steps > _DIV_STEP_HARD_CAP:
            raise InternalError("group-ring exact division failed to terminate")
        r_lead = _leading(rem)
        t_exp = r_lead - den_lead
        t_coeff = rem[r_lead] / den_lc
        quo[t_exp] = t_coeff
        for nu, d in den.items():
            key = t_exp + nu
            acc = rem.get(key)
            s = -(t_coeff * d) if acc is None else acc - t_coeff * d
            if s.is_zero():
                rem.pop(key, None)
            else:
                rem[key] = s
    return quo


class ExpCoefficient:
    """Finite formal sum of exponentials, closed under +, -, *, exact /."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: NumberField, num: dict, den: dict | None = None,
                 _normalized: bool = False):
        self.field = field
        self.num = num
        self.den = den if den is not None else {_zero_exp(field): _coerce_coeff(field, 1)}
        if not _normalized:
            self._normalize()

    # -- canonical form ----------------------------------------------------

    def _normalize(self):
        self.num = {mu: c for mu, c in self.num.items() if not c.is_zero()}
        self.den = {mu: c for mu, c in self.den.items() if not c.is_zero()}
        if not self.den:
            raise ZeroDivisionError("zero denominator in exponential coefficient")
        if not self.num:
            self.den = {_zero_exp(self.field): _coerce_coeff(self.field, 1)}
            return
        if len(self.den) == 1:
            ((mu, c),) = self.den.items()
            if not (mu.is_zero() and c == _coerce_coeff(self.field, 1)):
                cinv = c.inverse()
                self.num = {nu - mu: v * cinv for nu, v in self.num.items()}
                self.den = {_zero_exp(self.field): _coerce_coeff(self.field, 1)}
            return
        # multi-term denominator: try to divide out, else normalise its lead
        cap = 4 * (len(self.num) + len(self.den)) + 64
        quo = _dict_divexact(self.num, self.den, cap)
        if quo is not None:
            self.num = quo
            self.den = {_zero_exp(self.field): _coerce_coeff(self.field, 1)}
            return
        lead = _leading(self.den)
        lc = self.den[lead]
        if not (lead.is_zero() and lc == _coerce_coeff(self.field, 1)):
            cinv = lc.inverse()
            self.num = {nu - lead: v * cinv for nu, v in self.num.items()}
            self.den = {nu - lead: v * cinv for nu, v in self.den.items()}

    @property
    def has_unit_den(self) -> bool:
        if len(self.den) != 1:
            return False
        ((mu, c),) = self.den.items()
        return mu.is_zero() and c == _coerce_coeff(self.field, 1)

    def terms_sorted(self):
        return sorted(self.num.items(), key=lambda kv: kv[0].sort_key())

    def den_terms_sorted(self):
        return sorted(self.den.items(), key=lambda kv: kv[0].sort_key())

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(field: NumberField) -> "ExpCoefficient":
        return ExpCoefficient(field, {})

    @staticmethod
    def one(field: NumberField) -> "ExpCoefficient":
        return ExpCoefficient.scalar(field, 1)

    @staticmethod
    def scalar(field: NumberField, c) -> "ExpCoefficient":
        cc = _coerce_coeff(field, c)
        return ExpCoefficient(field, {} if cc.is_zero() else {_zero_exp(field): cc})

    @staticmethod
    def exponential(field: NumberField, mu: ComplexAlgebraic, coeff=1) -> "ExpCoefficient":
        cc = _coerce_coeff(field, coeff)
        return ExpCoefficient(field, {} if cc.is_zero() else {mu: cc})

    # -- ring / field operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExpCoefficient):
            if not (self.field is other.field or self.field == other.field):
                raise FieldMismatch("exponential coefficients over different fields")
            return other
        if isinstance(other, (int, Fraction, AlgebraicScalar, ComplexAlgebraic)):
            return ExpCoefficient.scalar(self.field, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.has_unit_den and o.has_unit_den:
            return ExpCoefficient(self.field, _dict_add(self.num, o.num))
        num = _dict_add(_dict_mul(self.num, o.den), _dict_mul(o.num, self.den))
        return ExpCoefficient(self.field, num, _dict_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return ExpCoefficient(self.field, _dict_neg(self.num), dict(self.den),
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
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.has_unit_den and o.has_unit_den:
            # single-term factors act by shift and scale
            if len(self.num) == 1:
                ((mu, c),) = self.num.items()
                out = o if mu.is_zero() else o.shift(mu)
                return out if c == _coerce_coeff(self.field, 1) else out.scale_scalar(c)
            if len(o.num) == 1:
                ((mu, c),) = o.num.items()
                out = self if mu.is_zero() else self.shift(mu)
                return out if c == _coerce_coeff(self.field, 1) else out.scale_scalar(c)
            return ExpCoefficient(self.field, _dict_mul(self.num, o.num))
        return ExpCoefficient(self.field, _dict_mul(self.num, o.num),
                              _dict_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero exponential coefficient")
        return ExpCoefficient(self.field, _dict_mul(self.num, o.den),
                              _dict_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return (ExpCoefficient.one(self.field) / self) ** (-k)
        out = ExpCoefficient.one(self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return not self.is_zero()

    def is_scalar(self) -> bool:
        if not self.has_unit_den:
            return False
        if not self.num:
            return True
        return len(self.num) == 1 and next(iter(self.num)).is_zero()

    def scalar_value(self) -> ComplexAlgebraic:
        """The value as a complex algebraic number; requires is_scalar()."""
        if not self.is_scalar():
            raise InternalError("coefficient is not a pure scalar")
        if not self.num:
            return _zero_exp(self.field)
        return next(iter(self.num.values()))

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except FieldMismatch:
            return False
        if o is None:
            return NotImplemented
        if self.has_unit_den and o.has_unit_den:
            return self.num == o.num
        return _dict_mul(self.num, o.den) == _dict_mul(o.num, self.den)

    __hash__ = None

    def conjugate(self) -> "ExpCoefficient":
        num = {mu.conjugate(): c.conjugate() for mu, c in self.num.items()}
        den = {mu.conjugate(): c.conjugate() for mu, c in self.den.items()}
        return ExpCoefficient(self.field, num, den)

    # -- structure helpers used by the exact linear algebra --------------------

    def exponent_span(self):
        """All exponents appearing in the numerator (canonical elements only)."""
        return list(self.num.keys())

    def shift(self, mu: ComplexAlgebraic) -> "ExpCoefficient":
        """Multiply by the unit e^mu."""
        num = {nu + mu: c for nu, c in self.num.items()}
        return ExpCoefficient(self.field, num, dict(self.den), _normalized=True)

    def scale_scalar(self, c: ComplexAlgebraic) -> "ExpCoefficient":
        if c.is_zero():
            return ExpCoefficient.zero(self.field)
        return ExpCoefficient(self.field, _dict_scale(self.num, c),
                              dict(self.den), _normalized=True)

    def leading_term(self):
        """(exponent, coefficient) with lexicographically largest exponent."""
        mu = _leading(self.num)
        return mu, self.num[mu]

    def min_exponent(self) -> ComplexAlgebraic:
        return min(self.num, key=lambda m: m.sort_key())

    def divexact(self, other: "ExpCoefficient") -> "ExpCoefficient":
        """Exact quotient in the ring; both operands must have unit denominator
        and the division must come out exact (used by fraction-free elimination)."""
        if not (self.has_unit_den and other.has_unit_den):
            raise InternalError("divexact expects canonical ring elements")
        if other.is_zero():
            raise ZeroDivisionError("exact division by zero")
        quo = _dict_divexact(self.num, other.num, None)
        return ExpCoefficient(self.field, quo, _normalized=False)

    def fraction_parts(self) -> tuple["ExpCoefficient", "ExpCoefficient"]:
        return (ExpCoefficient(self.field, dict(self.num), _normalized=True),
                ExpCoefficient(self.field, dict(self.den), _normalized=True))

    def all_fractions(self):
        """Every rational coordinate appearing in numerator coefficients."""
        for c in self.num.values():
            yield from c.re.coords
            yield from c.im.coords

    # -- numerics ---------------------------------------------------------------

    def evaluate(self, precision: int = 53) -> complex:
        """Numerical value  sum c_j exp(mu_j) / sum d_j exp(nu_j).

        Computed with a certified rational enclosure of theta.  For
        ``precision`` above 53 bits the sum is accumulated with mpmath and
        rounded to a machine complex at the end; the accumulation error is
        bounded by 2^(1-precision) * (term count) * max |term|.
        """
        if precision <= 53:
            den = sum(complex(c) * cmath.exp(complex(mu)) for mu, c in self.den.items())
            if not self.num:
                return 0j
            num = sum(complex(c) * cmath.exp(complex(mu)) for mu, c in self.num.items())
            return num / den
        import mpmath

        with mpmath.workprec(precision + 30):
            def term(mu, c):
                def mpq(q):
                    return mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)

                lo, hi = mu.re.value_enclosure(Fraction(1, 2 ** (precision + 30)))
                re = (mpq(lo) + mpq(hi)) / 2
                lo, hi = mu.im.value_enclosure(Fraction(1, 2 ** (precision + 30)))
                im = (mpq(lo) + mpq(hi)) / 2
                lo, hi = c.re.value_enclosure(Fraction(1, 2 ** (precision + 30)))
                cre = (mpq(lo) + mpq(hi)) / 2
                lo, hi = c.im.value_enclosure(Fraction(1, 2 ** (precision + 30)))
                cim = (mpq(lo) + mpq(hi)) / 2
                return mpmath.mpc(cre, cim) * mpmath.exp(mpmath.mpc(re, im))

            den = mpmath.fsum((term(mu, c) for mu, c in self.den.items()))
            if not self.num:
                return 0j
            num = mpmath.fsum((term(mu, c) for mu, c in self.num.items()))
            val = num / den
            return complex(val)

    def __repr__(self):
        if self.is_zero():
            return "ExpCoefficient(0)"
        bits = []
        for mu, c in self.terms_sorted():
            if mu.is_zero():
                bits.append(f"({c.re.coords},{c.im.coords})")
            else:
                bits.append(f"({c.re.coords},{c.im.coords})*e^{mu.re.coords},{mu.im.coords}")
        s = " + ".join(bits)
        if not self.has_unit_den:
            s = f"({s}) / (...)"
        return f"ExpCoefficient({s})"
