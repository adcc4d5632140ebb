import math
from fractions import Fraction

import numpy as np
import pytest

from deltaclose import calg, make_field
from deltaclose.construct import (
    ExpPolyLeaf,
    corner_witness,
    difference_values,
    grid_membership_residual,
    make_antidifference,
    make_counterexample,
    make_fm,
    make_triangle_wave,
    verify_space_invariance,
)
from deltaclose.errors import LatticeValuesNonzero, NonpositivePeriod
from deltaclose.exppoly import ExpPolynomial
from deltaclose.groups import build_frame, group_closure
from conftest import rng_for


@pytest.fixture(scope="module")
def F():
    return make_field([-2, 0, 1], (1, 2))


@pytest.fixture(scope="module")
def wave(F):
    return make_triangle_wave(F.one())


def test_wave_values(F, wave):
    assert wave.eval_float((0.0,)) == 0
    assert abs(wave.eval_float((0.5,)) - 0.5) < 1e-15
    assert abs(wave.eval_float((-0.25,)) - 0.25) < 1e-15
    assert wave.eval_exact((F.rational(Fraction(1, 2)),)) == Fraction(1, 2)
    assert wave.eval_exact((F.rational(Fraction(-1, 4)),)) == Fraction(1, 4)
    # exact at an irrational field point too
    v = wave.eval_exact((F.gen(),))
    assert abs(float(v) - (math.sqrt(2) - 1)) < 1e-12


def test_wave_periodicity(F, wave):
    rng = np.random.default_rng(7)
    xs = rng.uniform(-12, 12, 1000)
    a = wave.eval_array(xs[:, None])
    b = wave.eval_array((xs + 1.0)[:, None])
    assert np.max(np.abs(a - b)) < 1e-12


def test_wave_needs_positive_period(F):
    with pytest.raises(NonpositivePeriod):
        make_triangle_wave(F.zero())


def test_antidifference_zero(F, wave):
    zero = ExpPolyLeaf(ExpPolynomial.zero(F, 1))
    f = make_antidifference(zero, F.one())
    xs = np.linspace(-7, 7, 101)[:, None]
    assert np.max(np.abs(f.eval_array(xs))) == 0


def test_antidifference_partial_sum_values(F, wave):
    f = make_antidifference(wave, F.one())
    # f(1/2 + 3) = 3 * wave(1/2) = 3/2, against the direct sum oracle
    assert f.eval_exact((F.rational(Fraction(7, 2)),)) == Fraction(3, 2)
    rng = rng_for("antidiff-oracle")
    for _ in range(1000):
        k = rng.randint(-12, 12)
        x0 = rng.random()
        z = x0 + k
        direct = 0.0
        if k > 0:
            direct = sum(wave.eval_float((x0 + j,)) for j in range(k)).real
        elif k < 0:
            direct = -sum(wave.eval_float((z + i,)) for i in range(-k)).real
        assert abs(f.eval_float((z,)).real - direct) < 1e-10


def test_antidifference_defining_property(F, wave):
    f = make_antidifference(wave, F.one())
    rng = np.random.default_rng(3)
    xs = rng.uniform(-20, 20, 10000)[:, None]
    resid = difference_values(f, (1.0,), 1, xs) - wave.eval_array(xs)
    assert np.max(np.abs(resid)) < 1e-10


def test_antidifference_vanishes_on_lattice(F, wave):
    f = make_antidifference(wave, F.one())
    for k in range(-50, 51):
        assert f.eval_exact((F.rational(k),)).is_zero()


def test_antidifference_rejects_nonvanishing(F):
    one = ExpPolyLeaf(ExpPolynomial.monomial(F, 1, (0,)))
    with pytest.raises(LatticeValuesNonzero):
        make_antidifference(one, F.one())


def test_antidifference_continuity_at_seams(F, wave):
    # continuity across lattice seams, spot-checked at shrinking offsets
    f = make_antidifference(wave, F.one())
    for k in (-3, -1, 0, 1, 2, 5):
        base = f.eval_float((float(k),))
        for eps in (1e-6, 1e-9):
            assert abs(f.eval_float((k - eps,)) - base) < 1e-5
            assert abs(f.eval_float((k + eps,)) - base) < 1e-5


def test_fm_tower(F, wave):
    rng = np.random.default_rng(11)
    xs = rng.uniform(-20, 20, 10000)[:, None]
    for m in (1, 2, 3, 4):
        fm = make_fm(m, F.one())
        top = difference_values(fm, (1.0,), m, xs)
        assert np.max(np.abs(top)) < 1e-9, m
        if m > 1:
            below = difference_values(fm, (1.0,), m - 1, xs)
            assert np.max(np.abs(below - wave.eval_array(xs))) < 1e-9, m


def test_fm_scaled_period_consequence(F):
    # vanishing at the base step propagates to integer multiples of it
    rng = np.random.default_rng(13)
    xs = rng.uniform(-20, 20, 10000)[:, None]
    for m in (1, 2, 3):
        fm = make_fm(m, F.one())
        for p in (1, 2, 3):
            resid = difference_values(fm, (float(p),), m, xs)
            assert np.max(np.abs(resid)) < 1e-9, (m, p)


def test_corner_of_wave_at_origin(F, wave):
    w = corner_witness(wave, [(-0.4, 0.4)])
    assert w is not None
    assert abs(w.gap - 2.0) < 0.01
    assert abs(w.point[0]) < 1e-3


def test_smooth_function_has_no_corner(F):
    f = ExpPolyLeaf(ExpPolynomial.monomial(F, 1, (2,)))
    assert corner_witness(f, [(-1.0, 1.0)]) is None
    e = ExpPolyLeaf(ExpPolynomial.exponential(F, 1, (calg(F, 1),)))
    assert corner_witness(e, [(-1.0, 1.0)]) is None


def test_corner_of_towers(F):
    for m in (2, 3, 4):
        fm = make_fm(m, F.one())
        w = corner_witness(fm, [(0.6, float(m + 2))])
        assert w is not None and w.gap >= 0.5, m


# -- the hyperplane counterexample -------------------------------------------------

@pytest.fixture(scope="module")
def plane_instance(F):
    th = F.gen()
    gens = [(F.one(), F.zero()), (th, F.zero()), (F.zero(), F.one())]
    closure = group_closure(gens, field=F)
    frame = build_frame(closure)
    outer = ExpPolynomial.exponential(F, 2, (calg(F, 1), calg(F, 0)))
    return gens, closure, frame, outer


def test_counterexample_certificates(F, plane_instance):
    gens, closure, frame, outer = plane_instance
    for m in (1, 2):
        phi, H = make_counterexample(frame, outer, m)
        assert verify_space_invariance(H, gens)
        pts = _grid2(41)
        worst = 0.0
        for h in gens:
            dv = difference_values(phi, [float(x) for x in h], m, pts)
            worst = max(worst, grid_membership_residual(dv, pts, H))
        assert worst <= 1e-8, (m, worst)
        wdir = tuple(float(x) for x in frame.w)
        witness = corner_witness(phi, [(-1.4, 1.4)] * 2, directions=[wdir])
        assert witness is not None


def test_counterexample_higher_order_membership(F, plane_instance):
    # differences of any order n >= m stay in H
    gens, closure, frame, outer = plane_instance
    m = 1
    phi, H = make_counterexample(frame, outer, m)
    pts = _grid2(25)
    for h in gens:
        for n in (m, m + 1, m + 2):
            dv = difference_values(phi, [float(x) for x in h], n, pts)
            assert grid_membership_residual(dv, pts, H) <= 1e-8


def test_counterexample_values(F, plane_instance):
    _, _, frame, outer = plane_instance
    phi, _ = make_counterexample(frame, outer, 1)
    val = phi.eval_float((0.3, 0.25))
    assert abs(val - (math.exp(0.3) + 0.25)) < 1e-12


def _grid2(n):
    xs = np.linspace(-2, 2, n)
    mesh = np.meshgrid(xs, xs, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)
