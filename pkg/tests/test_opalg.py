from fractions import Fraction

import numpy as np
import pytest

from deltaclose import make_field
from deltaclose.errors import ShiftNotOnGrid
from deltaclose.exppoly import ExpPolynomial
from deltaclose.opalg import (
    GridFunction,
    GridSpec,
    TranslationPolynomial,
    divisibility_factor,
    telescope_expansion,
    telescope_pigeonhole_ok,
    telescope_total,
)
from deltaclose.construct import make_triangle_wave

from conftest import random_exppoly, random_scalar, rng_for


@pytest.fixture(scope="module")
def F():
    return make_field([-2, 0, 1], (1, 2))


def random_op(rng, F, dim=1, max_terms=3):
    out = TranslationPolynomial.zero(F, dim)
    for _ in range(rng.randint(0, max_terms)):
        y = tuple(random_scalar(rng, F) for _ in range(dim))
        out = out + TranslationPolynomial.tau(F, y, dim) * Fraction(rng.randint(-3, 3))
    return out


def test_delta_zero_is_identity(F):
    assert TranslationPolynomial.delta(F, (1,), 0) == TranslationPolynomial.identity(F, 1)


def test_delta_two_binomial(F):
    T = TranslationPolynomial.tau
    want = T(F, (2,)) - T(F, (1,)) * 2 + T(F, (0,))
    assert TranslationPolynomial.delta(F, (1,), 2) == want


def test_identity_neutral(F):
    rng = rng_for("op-identity")
    A = random_op(rng, F)
    assert A * TranslationPolynomial.identity(F, 1) == A


def test_shifted_difference_product(F):
    T = TranslationPolynomial.tau
    one = TranslationPolynomial.identity(F, 1)
    h = F.rational(Fraction(2, 3))
    assert (T(F, (h,)) - one) * (T(F, (h,)) + one) == T(F, (h * 2,)) - one


def test_iterated_first_difference_is_delta_m(F):
    h = F.gen()
    D1 = TranslationPolynomial.delta(F, (h,), 1)
    acc = D1
    for m in range(2, 5):
        acc = acc * D1
        assert acc == TranslationPolynomial.delta(F, (h,), m)


def test_ring_axioms_random(F):
    rng = rng_for("op-ring")
    for _ in range(500):
        A = random_op(rng, F)
        B = random_op(rng, F)
        C = random_op(rng, F)
        assert (A + B) + C == A + (B + C)
        assert (A * B) * C == A * (B * C)
        assert A * (B + C) == A * B + A * C
        assert A * B == B * A


def test_apply_matches_forward_difference(F):
    rng = rng_for("op-apply")
    for _ in range(30):
        f = random_exppoly(rng, F, dim=1, max_freqs=3, max_deg=2)
        h = random_scalar(rng, F)
        m = rng.randint(1, 3)
        D = TranslationPolynomial.delta(F, (h,), m)
        assert D.apply(f) == f.forward_difference((h,), m)


# -- divisibility -------------------------------------------------------------------

def test_divisibility_examples(F):
    h = (F.rational(Fraction(1, 2)),)
    one = TranslationPolynomial.identity(F, 1)
    T = TranslationPolynomial.tau
    assert divisibility_factor(F, h, 1, 1) == one
    assert divisibility_factor(F, h, 2, 1) == T(F, (h[0],)) + one
    assert divisibility_factor(F, h, -1, 1) == -T(F, (-h[0],))


def test_divisibility_identity_full_range(F):
    h = (F.gen(),)
    T = TranslationPolynomial.tau
    one = TranslationPolynomial.identity(F, 1)
    for p in (-3, -2, -1, 1, 2, 3):
        for n in (1, 2, 3):
            Q = divisibility_factor(F, h, p, n)
            lhs = (T(F, (h[0] * p,)) - one) ** n
            assert lhs == Q * ((T(F, h) - one) ** n), (p, n)


def test_period_propagation_consequence(F):
    # delta_h^m f = 0 forces delta_(p h)^m f = 0, through the exact factor
    rng = rng_for("lemma5")
    h = F.rational(Fraction(1, 3))
    for m in (1, 2, 3):
        f = ExpPolynomial.zero(F, 1)
        for d in range(m):
            f = f + ExpPolynomial.monomial(F, 1, (d,), Fraction(rng.randint(1, 5)))
        assert f.forward_difference((h,), m).is_zero()
        for p in (-3, -2, 2, 3):
            D = TranslationPolynomial.delta(F, (h * p,), m)
            assert D.apply(f).is_zero(), (m, p)


# -- telescoping -----------------------------------------------------------------

def test_telescope_single_step(F):
    s = telescope_expansion(F, [(F.gen(),)], [2], 3)
    total = telescope_total(F, [(F.gen(),)], [2], 3)
    acc = TranslationPolynomial.zero(F, 1)
    for sm in s:
        acc = acc + sm.op
    assert acc == total and len(s) == 1


def test_telescope_two_steps_base_case(F):
    h1 = (F.one(), F.zero())
    h2 = (F.zero(), F.one())
    s = telescope_expansion(F, [h1, h2], [1, 1], 1)
    total = telescope_total(F, [h1, h2], [1, 1], 1)
    acc = TranslationPolynomial.zero(F, 2)
    for sm in s:
        acc = acc + sm.op
    assert acc == total
    assert telescope_pigeonhole_ok(s, 1, 2)


def test_telescope_random_instances(F):
    rng = rng_for("telescope")
    for _ in range(100):
        t = rng.randint(1, 3)
        d = rng.randint(1, 2)
        steps = [tuple(random_scalar(rng, F) for _ in range(d)) for _ in range(t)]
        powers = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(t)]
        N = rng.randint(1, 4)
        summands = telescope_expansion(F, steps, powers, N)
        total = telescope_total(F, steps, powers, N)
        acc = TranslationPolynomial.zero(F, d)
        for sm in summands:
            acc = acc + sm.op
        assert acc == total
        assert telescope_pigeonhole_ok(summands, N, t)


# -- grid action ----------------------------------------------------------------

def test_grid_identity(F):
    spec = GridSpec.regular(F, [(-2, 2, 41)])
    vals = GridFunction.sample(spec, lambda p: p[:, 0] ** 2)
    out = TranslationPolynomial.identity(F, 1).apply_grid(vals)
    assert np.allclose(out.data, vals.data, equal_nan=True)


def test_grid_second_difference_of_square(F):
    spec = GridSpec.regular(F, [(-2, 2, 41)])
    h = F.rational(Fraction(1, 10))
    vals = GridFunction.sample(spec, lambda p: p[:, 0] ** 2)
    D = TranslationPolynomial.delta(F, (h,), 2)
    out = D.apply_grid(vals)
    good = out.valid_mask()
    assert good.sum() == 39
    assert np.allclose(out.data[good], 2 * 0.1 ** 2)


def test_grid_shift_must_be_on_grid(F):
    spec = GridSpec.regular(F, [(-2, 2, 41)])
    vals = GridFunction.sample(spec, lambda p: p[:, 0])
    D = TranslationPolynomial.delta(F, (F.gen(),), 1)
    with pytest.raises(ShiftNotOnGrid):
        D.apply_grid(vals)


def test_grid_wave_periodicity(F):
    wave = make_triangle_wave(F.one())
    spec = GridSpec.regular(F, [(-5, 5, 101)])
    vals = GridFunction.sample(spec, wave.eval_array)
    D = TranslationPolynomial.delta(F, (F.one(),), 1)
    out = D.apply_grid(vals)
    assert out.max_abs() <= 1e-12
