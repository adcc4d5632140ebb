"""Exponential polynomials  sum_j p_j(x) e^(lambda_j . x)  on R^d.

Frequencies are vectors of complex algebraic numbers over the declared field;
polynomial coefficients live in the exponential-coefficient ring so the class
is closed under translation and forward differencing: translating by y
multiplies the lambda-term by the formal exponential e^(lambda . y).

Canonical form: frequencies pairwise distinct, every stored polynomial
nonempty, every stored coefficient nonzero.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np

from .errors import DimensionMismatch, FieldMismatch
from .expcoef import ExpCoefficient
from .linalg import ff_echelon
from .qmath import frac
from .scalar import AlgebraicScalar, ComplexAlgebraic, NumberField


def _freq_key_sort(freq):
    return tuple(c.sort_key() for c in freq)


def atom_sort_key(alpha, freq):
    """Graded-lexicographic atom order used everywhere for determinism."""
    return (sum(alpha), alpha, _freq_key_sort(freq))


class ExpPolynomial:
    __slots__ = ("field", "dim", "terms")

    def __init__(self, field: NumberField, dim: int, terms: dict, _normalized=False):
        self.field = field
        self.dim = dim
        self.terms = terms
        if not _normalized:
            self._normalize()

    def _normalize(self):
        clean = {}
        for freq, poly in self.terms.items():
            poly = {alpha: c for alpha, c in poly.items() if not c.is_zero()}
            if poly:
                clean[freq] = poly
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(field: NumberField, dim: int) -> "ExpPolynomial":
        return ExpPolynomial(field, dim, {}, _normalized=True)

    @staticmethod
    def monomial(field: NumberField, dim: int, alpha, coeff=1, freq=None) -> "ExpPolynomial":
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != dim:
            raise DimensionMismatch("multi-index length must equal dim")
        if freq is None:
            zero = ComplexAlgebraic(field.zero())
            freq = tuple(zero for _ in range(dim))
        else:
            freq = tuple(freq)
        if len(freq) != dim:
            raise DimensionMismatch("frequency length must equal dim")
        c = coeff if isinstance(coeff, ExpCoefficient) else ExpCoefficient.scalar(field, coeff)
        if c.is_zero():
            return ExpPolynomial.zero(field, dim)
        return ExpPolynomial(field, dim, {freq: {alpha: c}}, _normalized=True)

    @staticmethod
    def exponential(field: NumberField, dim: int, freq, coeff=1) -> "ExpPolynomial":
        return ExpPolynomial.monomial(field, dim, (0,) * dim, coeff, freq)

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return not self.is_zero()

    def frequencies(self):
        return sorted(self.terms.keys(), key=_freq_key_sort)

    def atoms(self):
        """All (alpha, freq) labels carrying a nonzero coefficient, in the
        canonical graded-lexicographic order."""
        out = [(alpha, freq) for freq, poly in self.terms.items() for alpha in poly]
        out.sort(key=lambda af: atom_sort_key(*af))
        return out

    def coefficient(self, alpha, freq) -> ExpCoefficient:
        poly = self.terms.get(tuple(freq))
        if not poly:
            return ExpCoefficient.zero(self.field)
        return poly.get(tuple(alpha), ExpCoefficient.zero(self.field))

    def degree_at(self, freq) -> int:
        """Max total degree of the polynomial part at the given frequency;
        -1 when the component is absent."""
        poly = self.terms.get(tuple(freq))
        if not poly:
            return -1
        return max(sum(alpha) for alpha in poly)

    def __eq__(self, other):
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        return (self.dim == other.dim and self.field == other.field
                and self.terms == other.terms)

    __hash__ = None

    # -- linear structure -----------------------------------------------------

    def _check(self, other: "ExpPolynomial"):
        if self.dim != other.dim:
            raise DimensionMismatch("exponential polynomials of different dimension")
        if not (self.field is other.field or self.field == other.field):
            raise FieldMismatch("exponential polynomials over different fields")

    def __add__(self, other):
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        self._check(other)
        terms = {f: dict(p) for f, p in self.terms.items()}
        for freq, poly in other.terms.items():
            tgt = terms.setdefault(freq, {})
            for alpha, c in poly.items():
                s = tgt.get(alpha)
                s = c if s is None else s + c
                if s.is_zero():
                    tgt.pop(alpha, None)
                else:
                    tgt[alpha] = s
        return ExpPolynomial(self.field, self.dim, terms)

    def __neg__(self):
        return ExpPolynomial(
            self.field, self.dim,
            {f: {a: -c for a, c in p.items()} for f, p in self.terms.items()},
            _normalized=True)

    def __sub__(self, other):
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "ExpPolynomial":
        c = c if isinstance(c, ExpCoefficient) else ExpCoefficient.scalar(self.field, c)
        if c.is_zero():
            return ExpPolynomial.zero(self.field, self.dim)
        return ExpPolynomial(
            self.field, self.dim,
            {f: {a: v * c for a, v in p.items()} for f, p in self.terms.items()})

    def conjugate(self) -> "ExpPolynomial":
        terms = {}
        for freq, poly in self.terms.items():
            cf = tuple(z.conjugate() for z in freq)
            terms[cf] = {a: c.conjugate() for a, c in poly.items()}
        return ExpPolynomial(self.field, self.dim, terms)

    def is_real(self) -> bool:
        """Whether the function is real valued (equals its own conjugate)."""
        return self == self.conjugate()

    # -- the operators ----------------------------------------------------------

    def translate(self, y) -> "ExpPolynomial":
        """Exact translate x |-> f(x + y) for a field vector y."""
        y = tuple(self._as_field_scalar(v) for v in y)
        if len(y) != self.dim:
            raise DimensionMismatch("shift vector length must equal dim")
        out: dict = {}
        for freq, poly in self.terms.items():
            dot = ComplexAlgebraic(self.field.zero())
            for lam_i, y_i in zip(freq, y):
                dot = dot + lam_i * y_i
            factor = ExpCoefficient.exponential(self.field, dot)
            new_poly: dict = {}
            for alpha, c in poly.items():
                base = c * factor
                for beta in product(*(range(a + 1) for a in alpha)):
                    w = Fraction(1)
                    scal = self.field.one()
                    for a_i, b_i, y_i in zip(alpha, beta, y):
                        w *= comb(a_i, b_i)
                        scal = scal * y_i ** (a_i - b_i)
                    add = base.scale_scalar(ComplexAlgebraic(scal * self.field.rational(w)))
                    if add.is_zero():
                        continue
                    acc = new_poly.get(beta)
                    s = add if acc is None else acc + add
                    if s.is_zero():
                        new_poly.pop(beta, None)
                    else:
                        new_poly[beta] = s
            if new_poly:
                tgt = out.setdefault(freq, {})
                for beta, c in new_poly.items():
                    acc = tgt.get(beta)
                    s = c if acc is None else acc + c
                    if s.is_zero():
                        tgt.pop(beta, None)
                    else:
                        tgt[beta] = s
        return ExpPolynomial(self.field, self.dim, out)

    def forward_difference(self, h, m: int = 1) -> "ExpPolynomial":
        """m-th forward difference with step h, by the binomial expansion
        sum_k C(m,k) (-1)^(m-k) f(x + k h)."""
        if m < 0:
            raise ValueError("difference order must be >= 0")
        h = tuple(self._as_field_scalar(v) for v in h)
        if len(h) != self.dim:
            raise DimensionMismatch("step vector length must equal dim")
        acc = ExpPolynomial.zero(self.field, self.dim)
        for k in range(m + 1):
            kh = tuple(v * k for v in h)
            term = self.translate(kh).scale(Fraction(comb(m, k) * (-1) ** (m - k)))
            acc = acc + term
        return acc

    def _as_field_scalar(self, v) -> AlgebraicScalar:
        if isinstance(v, AlgebraicScalar):
            if not (v.field is self.field or v.field == self.field):
                raise FieldMismatch("shift component from a different field")
            return v
        return self.field.rational(frac(v))

    def substitute_linear(self, matrix) -> "ExpPolynomial":
        """Exact composition x |-> f(M x) for a d x d field matrix M (rows)."""
        d = self.dim
        M = [[self._as_field_scalar(matrix[i][j]) for j in range(d)] for i in range(d)]
        out = ExpPolynomial.zero(self.field, d)
        for freq, poly in self.terms.items():
            new_freq = []
            for j in range(d):
                s = ComplexAlgebraic(self.field.zero())
                for i in range(d):
                    s = s + freq[i] * M[i][j]
                new_freq.append(s)
            new_freq = tuple(new_freq)
            for alpha, c in poly.items():
                expanded = {(0,) * d: self.field.one()}
                for i, a_i in enumerate(alpha):
                    if a_i == 0:
                        continue
                    factor = _linear_form_power(M[i], a_i, self.field)
                    expanded = _poly_dict_mul(expanded, factor)
                for beta, w in expanded.items():
                    if w.is_zero():
                        continue
                    add = c.scale_scalar(ComplexAlgebraic(w))
                    out = out + ExpPolynomial(self.field, d, {new_freq: {beta: add}})
        return out

    # -- numerics ------------------------------------------------------------

    def _numeric_terms(self):
        for freq, poly in self.terms.items():
            lam = np.array([complex(z) for z in freq])
            coeffs = [(alpha, c.evaluate()) for alpha, c in poly.items()]
            yield lam, coeffs

    def evaluate(self, x) -> complex:
        x = tuple(float(v) for v in x)
        total = 0j
        for freq, poly in self.terms.items():
            lam_dot = sum(complex(z) * v for z, v in zip(freq, x))
            pv = 0j
            for alpha, c in poly.items():
                mono = 1.0
                for a_i, x_i in zip(alpha, x):
                    mono *= x_i ** a_i
                pv += c.evaluate() * mono
            total += pv * cmath.exp(lam_dot)
        return total

    def evaluate_array(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (N, d) array of points."""
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        total = np.zeros(points.shape[0], dtype=complex)
        for lam, coeffs in self._numeric_terms():
            pv = np.zeros(points.shape[0], dtype=complex)
            for alpha, c in coeffs:
                mono = np.ones(points.shape[0])
                for i, a_i in enumerate(alpha):
                    if a_i:
                        mono = mono * points[:, i] ** a_i
                pv += c * mono
            total += pv * np.exp(points @ lam)
        return total

    def evaluate_certified(self, x):
        """(value, crude error bound) at a float point."""
        val = self.evaluate(x)
        scale = sum(abs(c.evaluate()) for _, poly in self.terms.items()
                    for c in poly.values())
        nterms = sum(len(p) for p in self.terms.values())
        bound = 2.0 ** -50 * max(1.0, abs(val) + scale) * max(1, nterms)
        return val, bound

    def __repr__(self):
        if self.is_zero():
            return "ExpPolynomial(0)"
        parts = []
        for freq in self.frequencies():
            poly = self.terms[freq]
            for alpha in sorted(poly, key=lambda a: (sum(a), a)):
                parts.append(f"x^{alpha} e^({_freq_key_sort(freq)})")
        return "ExpPolynomial(" + " + ".join(parts) + ")"


def _poly_dict_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for alpha, ca in a.items():
        for beta, cb in b.items():
            key = tuple(x + y for x, y in zip(alpha, beta))
            prod = ca * cb
            acc = out.get(key)
            s = prod if acc is None else acc + prod
            out[key] = s
    return {k: v for k, v in out.items() if not v.is_zero()}


def _linear_form_power(row, power: int, field) -> dict:
    """Multi-index expansion of (sum_j row_j x_j)^power with field coefficients."""
    d = len(row)
    base = {}
    for j, r in enumerate(row):
        if not r.is_zero():
            key = tuple(1 if i == j else 0 for i in range(d))
            base[key] = r
    out = {(0,) * d: field.one()}
    for _ in range(power):
        out = _poly_dict_mul(out, base)
    return out


def translation_hull(f: ExpPolynomial, shift_checks: int = 0, rng=None):
    """Basis of the smallest translation-invariant subspace containing f.

    Per frequency component p e^(lambda.x) the hull is spanned by all partial
    derivatives of p times the same exponential; the returned list is reduced
    to a linearly independent set.  With ``shift_checks`` > 0, membership of
    that many random translates is verified exactly.
    """
    field, d = f.field, f.dim
    basis_polys = []
    for freq, poly in f.terms.items():
        support = list(poly.keys())
        deriv_indices = set()
        for alpha in support:
            for beta in product(*(range(a + 1) for a in alpha)):
                deriv_indices.add(beta)
        derivs = []
        for beta in sorted(deriv_indices, key=lambda b: (sum(b), b)):
            dp = {}
            for alpha, c in poly.items():
                if all(a >= b for a, b in zip(alpha, beta)):
                    gamma = tuple(a - b for a, b in zip(alpha, beta))
                    w = Fraction(1)
                    for a_i, b_i in zip(alpha, beta):
                        # falling factorial a_i (a_i-1) ... (a_i-b_i+1)
                        for s in range(b_i):
                            w *= a_i - s
                    add = c.scale_scalar(ComplexAlgebraic(field.rational(w)))
                    if add.is_zero():
                        continue
                    acc = dp.get(gamma)
                    val = add if acc is None else acc + add
                    if val.is_zero():
                        dp.pop(gamma, None)
                    else:
                        dp[gamma] = val
            if dp:
                derivs.append(dp)
        # reduce to an independent set over the atom list of this frequency
        atom_list = sorted({a for dp in derivs for a in dp}, key=lambda a: (sum(a), a))
        col = {a: i for i, a in enumerate(atom_list)}
        rows = []
        for dp in derivs:
            row = [ExpCoefficient.zero(field) for _ in atom_list]
            for a, c in dp.items():
                row[col[a]] = c
            rows.append(row)
        ech, _ = ff_echelon(rows)
        for row in ech:
            terms = {freq: {atom_list[i]: c for i, c in enumerate(row) if not c.is_zero()}}
            basis_polys.append(ExpPolynomial(field, d, terms))
    if shift_checks:
        from .subspace import FunctionSubspace

        space = FunctionSubspace.span(basis_polys, dim=d, field=field)
        rng = rng or __import__("random").Random(0)
        for _ in range(shift_checks):
            y = tuple(field.rational(Fraction(rng.randint(-8, 8), rng.randint(1, 4)))
                      + field.gen() * Fraction(rng.randint(-2, 2)) for _ in range(d))
            if not space.contains(f.translate(y)):
                raise AssertionError("translation hull is not closed under a translate")
    return basis_polys
