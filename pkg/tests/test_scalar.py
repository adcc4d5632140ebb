import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltaclose import ExpCoefficient, calg, make_field, rational_field
from deltaclose.errors import NoSignChange, NotSquareFree
from deltaclose.scalar import ComplexAlgebraic

from conftest import random_complex, random_expcoef, random_nonzero_scalar, rng_for


@pytest.fixture(scope="module")
def F():
    return make_field([-2, 0, 1], (1, 2))


fractions = st.fractions(min_value=-20, max_value=20, max_denominator=8)


def to_scalar(F, pair):
    return F.element(list(pair))


# -- field declaration ---------------------------------------------------------

def test_rational_field_is_degree_one():
    Q = rational_field()
    assert Q.degree == 1
    assert Q.gen() == 0


def test_sqrt2_declaration(F):
    th = F.gen()
    assert th * th == 2
    # bisection oracle: the root the interval isolates is ~1.41421356
    assert abs(float(th) - math.sqrt(2)) < 1e-12


def test_no_real_root_rejected():
    with pytest.raises(NoSignChange):
        make_field([1, 0, 1], (0, 2))  # x^2 + 1


def test_square_free_check():
    with pytest.raises(NotSquareFree):
        make_field([0, 0, 1], (-1, 1))  # x^2


# -- sign decisions --------------------------------------------------------------

def test_sign_examples(F):
    th = F.gen()
    assert F.zero().sign() == 0
    assert (1 - th).sign() == -1
    assert (-3 + th * 3).sign() == 1


def test_sign_agrees_with_256_bit_interval(F):
    rng = rng_for("sign-oracle")
    for _ in range(1000):
        x = random_nonzero_scalar(rng, F)
        lo, hi = x.value_enclosure(Fraction(1, 2**256))
        assert lo <= hi
        oracle = 1 if lo > 0 else (-1 if hi < 0 else 0)
        # a nonzero algebraic value separates from 0 at this precision
        assert oracle != 0
        assert x.sign() == oracle


def test_floor(F):
    th = F.gen()
    assert (th * 10).floor() == 14
    assert (-th).floor() == -2
    assert F.rational(Fraction(7, 2)).floor() == 3
    assert F.rational(-3).floor() == -3


# -- field axioms (property-based) -----------------------------------------------

@settings(max_examples=250, deadline=None)
@given(a=st.tuples(fractions, fractions), b=st.tuples(fractions, fractions),
       c=st.tuples(fractions, fractions))
def test_field_axioms(a, b, c):
    F = test_field_axioms.F
    x, y, z = to_scalar(F, a), to_scalar(F, b), to_scalar(F, c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == F.one()


test_field_axioms.F = make_field([-2, 0, 1], (1, 2))


def test_field_axioms_bulk(F):
    # exact equality on 1000 random triples, plain rng alongside hypothesis
    rng = rng_for("field-bulk")
    for _ in range(1000):
        x = random_nonzero_scalar(rng, F)
        y = random_nonzero_scalar(rng, F)
        z = random_nonzero_scalar(rng, F)
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * x.inverse() == F.one()


@settings(max_examples=100, deadline=None)
@given(a=st.tuples(fractions, fractions), b=st.tuples(fractions, fractions))
def test_complex_field_roundtrip(a, b):
    F = test_field_axioms.F
    z = ComplexAlgebraic(to_scalar(F, a), to_scalar(F, b))
    if not z.is_zero():
        assert z * z.inverse() == ComplexAlgebraic(F.one())
    assert z.conjugate().conjugate() == z


def test_zero_divisor_surfaces():
    # a reducible declaration is assumed irreducible; inverting a factor
    # must fail loudly rather than silently
    B = make_field([-1, 0, 1], (Fraction(1, 2), 2))  # x^2 - 1, root 1
    x = B.element([1, -1])  # theta - 1 ... (theta-1)(theta+1) = 0
    with pytest.raises(ZeroDivisionError):
        (B.element([1, 1])).inverse() * x.inverse()


# -- exponential coefficients ------------------------------------------------------

def test_expcoef_inverse_exponents(F):
    mu = calg(F, F.gen())
    a = ExpCoefficient.exponential(F, mu)
    b = ExpCoefficient.exponential(F, -mu)
    assert a * b == ExpCoefficient.one(F)


def test_expcoef_difference_of_squares(F):
    mu = calg(F, F.gen())
    a = ExpCoefficient.exponential(F, mu)
    assert (a - 1) * (a + 1) == ExpCoefficient.exponential(F, mu + mu) - 1


def test_expcoef_eval_matches_high_precision(F):
    # e^(sqrt 2) - 1
    a = ExpCoefficient.exponential(F, calg(F, F.gen())) - 1
    v = a.evaluate()
    assert abs(v.real - (math.exp(math.sqrt(2)) - 1)) < 1e-12
    assert abs(v.imag) < 1e-15
    import mpmath
    hp = a.evaluate(precision=200)
    with mpmath.workprec(220):
        oracle = mpmath.exp(mpmath.sqrt(2)) - 1
        assert abs(hp.real - float(oracle)) < 1e-14


def test_expcoef_eval_is_ring_homomorphism(F):
    rng = rng_for("expcoef-eval")
    for _ in range(12):
        a = random_expcoef(rng, F)
        b = random_expcoef(rng, F)
        lhs = (a * b).evaluate()
        rhs = a.evaluate() * b.evaluate()
        scale = max(1.0, abs(lhs), abs(rhs))
        assert abs(lhs - rhs) / scale < 1e-12
        lhs = (a + b).evaluate()
        rhs = a.evaluate() + b.evaluate()
        assert abs(lhs - rhs) / max(1.0, abs(lhs)) < 1e-12


def test_expcoef_ring_axioms_random(F):
    rng = rng_for("expcoef-ring")
    for _ in range(200):
        a = random_expcoef(rng, F)
        b = random_expcoef(rng, F)
        c = random_expcoef(rng, F)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a + ExpCoefficient.zero(F) == a
        assert a * ExpCoefficient.one(F) == a


def test_expcoef_zero_iff_empty(F):
    mu = random_complex(rng_for("zero-test"), F)
    a = ExpCoefficient.exponential(F, mu) - ExpCoefficient.exponential(F, mu)
    assert a.is_zero() and not a.num


def test_fraction_collapse(F):
    mu = calg(F, F.gen())
    a = ExpCoefficient.exponential(F, mu) - 1
    q = (a * Fraction(7, 3)) / a
    assert q.has_unit_den
    assert q == ExpCoefficient.scalar(F, Fraction(7, 3))
    # division by a pure monomial is always exact
    m = ExpCoefficient.exponential(F, mu, Fraction(2, 5))
    r = (a + 3) / m
    assert r.has_unit_den


def test_canonicalization_idempotent(F):
    rng = rng_for("canon")
    for _ in range(50):
        a = random_expcoef(rng, F)
        b = ExpCoefficient(F, dict(a.num), dict(a.den))
        assert a.num == b.num and a.den == b.den


def test_empty_and_unit_eval(F):
    assert ExpCoefficient.zero(F).evaluate() == 0
    assert ExpCoefficient.one(F).evaluate() == 1.0


def test_field_mismatch_rejected(F):
    from deltaclose.errors import FieldMismatch
    other = make_field([-3, 0, 1], (1, 2))   # sqrt(3)
    with pytest.raises(FieldMismatch):
        F.gen() + other.gen()
    a = ExpCoefficient.exponential(F, calg(F, F.gen()))
    b = ExpCoefficient.exponential(other, calg(other, other.gen()))
    with pytest.raises(FieldMismatch):
        a * b


def test_sign_queries_are_thread_safe(F):
    # concurrent refinement of the shared enclosure must stay monotone
    import threading
    G = make_field([-2, 0, 1], (1, 2))
    values = [G.element([Fraction(k, 7), Fraction(1)]) for k in range(-8, 8)]
    results = {}

    def worker(tag):
        out = [x.sign() for x in values]
        results[tag] = out

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    expect = [x.sign() for x in values]
    assert all(v == expect for v in results.values())


@settings(max_examples=150, deadline=None)
@given(data=st.lists(st.tuples(fractions, fractions, fractions, fractions),
                     min_size=1, max_size=3))
def test_expcoef_product_shape(data):
    # hypothesis sweep: products of binomials stay canonical (no zero terms,
    # distinct exponents) and match their own re-normalization
    F = test_field_axioms.F
    acc = ExpCoefficient.one(F)
    for re1, im1, re2, im2 in data:
        mu = calg(F, to_scalar(F, (re1, im1)), to_scalar(F, (re2, im2)))
        acc = acc * (ExpCoefficient.exponential(F, mu) - 1)
    for muK, c in acc.num.items():
        assert not c.is_zero()
    again = ExpCoefficient(F, dict(acc.num), dict(acc.den))
    assert again == acc
