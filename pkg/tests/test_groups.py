from fractions import Fraction

import pytest

from deltaclose import make_field
from deltaclose.errors import DenseGroup, EmptyInput
from deltaclose.groups import (
    build_frame,
    dual_witness,
    group_closure,
    heuristic_density_report,
    project_onto,
    verify_orthogonality,
    verify_reconstruction,
    witness_checks,
)

from conftest import random_fraction, rng_for


@pytest.fixture(scope="module")
def F():
    return make_field([-2, 0, 1], (1, 2))


@pytest.fixture(scope="module")
def G4():
    return make_field([1, 0, -10, 0, 1], (Fraction(31, 10), Fraction(32, 10)))


def test_dyadic_chain(F):
    c = group_closure([(1,), (Fraction(1, 2),), (Fraction(1, 4),)], field=F)
    assert not c.dense
    assert c.v_basis == []
    assert len(c.lambda_basis) == 1
    assert c.lambda_basis[0][0] == Fraction(1, 4)
    assert verify_reconstruction(c)
    assert verify_orthogonality(c)


def test_irrational_pair_dense(F):
    c = group_closure([(1,), (F.gen(),)], field=F)
    assert c.dense and len(c.v_basis) == 1 and not c.lambda_basis


def test_single_generator_not_dense(F):
    c = group_closure([(1,)], field=F)
    assert not c.dense
    assert c.lambda_basis and c.lambda_basis[0][0] == 1


def test_mixed_plane(F):
    th = F.gen()
    c = group_closure([(1, 0), (th, F.zero()), (0, 1)], field=F)
    assert not c.dense
    assert len(c.v_basis) == 1
    assert c.v_basis[0][0] == 1 and c.v_basis[0][1].is_zero()
    assert len(c.lambda_basis) == 1
    assert c.lambda_basis[0][0].is_zero() and c.lambda_basis[0][1] == 1
    assert verify_reconstruction(c) and verify_orthogonality(c)


def test_plane_with_independent_irrationals_dense(G4):
    mu = G4.gen()
    s2 = (mu ** 3 - mu * 9) / 2
    s3 = (mu * 11 - mu ** 3) / 2
    assert s2 * s2 == 2 and s3 * s3 == 3
    c = group_closure([(1, 0), (0, 1), (s2, s3)], field=G4)
    assert c.dense
    assert dual_witness([(1, 0), (0, 1), (s2, s3)], G4) is None


def test_parallel_irrational_direction_not_dense(F):
    # two rational axes plus one theta-direction vector: a rational relation
    # among the theta parts always yields a dual witness
    th = F.gen()
    gens = [(1, 0), (0, 1), (th, th)]
    c = group_closure(gens, field=F)
    assert not c.dense
    w = dual_witness(gens, F)
    assert w is not None and witness_checks(w[0], gens, F)


def test_idempotence_under_basis_union(F):
    from deltaclose.linalg import field_rref

    th = F.gen()
    gens = [(1, 0), (th, F.zero()), (0, 1)]
    c = group_closure(gens, field=F)
    again = group_closure(c.v_basis + c.lambda_basis + c.generators, field=F)
    assert again.dense == c.dense
    assert again.lambda_basis == c.lambda_basis
    ref, _ = field_rref([list(v) for v in c.v_basis])
    ref2, _ = field_rref([list(v) for v in again.v_basis])
    assert [list(r) for r in ref] == [list(r) for r in ref2]


def test_empty_input(F):
    with pytest.raises(EmptyInput):
        group_closure([], field=F)


def test_duality_consistent_on_random_suite(F):
    rng = rng_for("duality-suite")
    th = F.gen()
    for _ in range(30):
        d = rng.randint(1, 2)
        t = rng.randint(1, 3)
        gens = []
        for _ in range(t):
            vec = []
            for _ in range(d):
                q = random_fraction(rng, num=3, den=3)
                vec.append(q + th * Fraction(rng.randint(-1, 1)))
            gens.append(tuple(vec))
        if all(all(x.is_zero() for x in g) for g in gens):
            gens[0] = (F.one(),) * d
        c = group_closure(gens, field=F)
        w = dual_witness(gens, F)
        if c.dense:
            assert w is None
        else:
            assert w is not None
            assert witness_checks(w[0], gens, F)
        assert verify_reconstruction(c)
        assert verify_orthogonality(c)


def test_heuristic_float_report():
    rep = heuristic_density_report([[1.0, 0.0], [0.0, 1.0]], height_cap=5)
    assert rep["mode"] == "heuristic" and rep["dense"] is False
    import math
    rep2 = heuristic_density_report([[1.0], [math.pi / 7]], height_cap=12)
    assert rep2["dense"] is True


# -- hyperplane frames ----------------------------------------------------------

def test_frame_integer_line(F):
    c = group_closure([(1,)], field=F)
    fr = build_frame(c)
    assert fr.vt_basis == []
    assert fr.w == (F.one(),)
    assert fr.r == 1
    assert fr.p == [1]


def test_frame_plane(F):
    th = F.gen()
    c = group_closure([(1, 0), (th, F.zero()), (0, 1)], field=F)
    fr = build_frame(c)
    assert fr.r == 1
    assert fr.p == [0, 0, 1]
    proj, s = fr.split((Fraction(3), Fraction(5)))
    assert s == 5 and proj[0] == 3 and proj[1].is_zero()
    _, sw = fr.split(fr.w)
    assert sw == 1


def test_frame_square_lattice(F):
    c = group_closure([(1, 0), (0, 1)], field=F)
    fr = build_frame(c)
    assert fr.p == [0, 1]
    assert fr.r == 1


def test_frame_rejects_dense(F):
    c = group_closure([(1,), (F.gen(),)], field=F)
    with pytest.raises(DenseGroup):
        build_frame(c)


def test_s_additive_and_reassembly(F):
    th = F.gen()
    c = group_closure([(1, 0), (th, F.zero()), (0, 1)], field=F)
    fr = build_frame(c)
    rng = rng_for("s-additive")
    for _ in range(100):
        z1 = tuple(F.element([random_fraction(rng), random_fraction(rng)])
                   for _ in range(2))
        z2 = tuple(F.element([random_fraction(rng), random_fraction(rng)])
                   for _ in range(2))
        s1 = fr.s_value(z1)
        s2 = fr.s_value(z2)
        s12 = fr.s_value(tuple(a + b for a, b in zip(z1, z2)))
        assert s12 == s1 + s2
        proj, s = fr.split(z1)
        back = tuple(a + s * b for a, b in zip(proj, fr.w))
        assert all((a - b).is_zero() for a, b in zip(back, z1))


def test_split_float_matches_exact(F):
    import numpy as np
    th = F.gen()
    c = group_closure([(1, 0), (th, F.zero()), (0, 1)], field=F)
    fr = build_frame(c)
    rng = rng_for("split-float")
    pts = np.array([[rng.uniform(-3, 3), rng.uniform(-3, 3)] for _ in range(50)])
    proj, s = fr.split_float(pts)
    w = np.array([float(x) for x in fr.w])
    recon = proj + np.outer(s, w)
    assert np.max(np.abs(recon - pts)) < 1e-12


def test_projection_helper(F):
    th = F.gen()
    basis = [(F.one(), F.zero())]
    p = project_onto(basis, (th, F.one()))
    assert p[0] == th and p[1].is_zero()
