"""Explicitly evaluable functions: the triangle wave, lattice antidifferences,
the tower with vanishing m-th difference, and the hyperplane counterexample.

Functions are closed combinator trees.  Every node evaluates at float points
(vectorized over numpy arrays); the triangle wave and antidifference nodes
also evaluate exactly at field points, which the seam and lattice checks use.

The antidifference of g with step h > 0, defined when g vanishes on h Z, is
the lattice partial sum

    f(x + k h) = sum_{j=0}^{k-1} g(x + j h)        (k > 0, x in [0, h))
    f(x)       = 0                                 (x in [0, h))
    f(z)       = -sum_{i=0}^{|k|-1} g(z + i h)     (k < 0)

and satisfies  delta_h f = g  and  f(h Z) = {0} pointwise.  Iterating it on
the triangle wave gives, for each m, a continuous f_m with
delta_h^(m-1) f_m equal to the wave and delta_h^m f_m identically zero,
while f_m itself keeps corners and therefore is not an exponential
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import (
    DimensionMismatch,
    FrameInvalid,
    LatticeValuesNonzero,
    NonpositivePeriod,
)
from .exppoly import ExpPolynomial, translation_hull
from .groups import HyperplaneFrame
from .qmath import frac
from .scalar import AlgebraicScalar
from .subspace import FunctionSubspace


class EvaluableFunction:
    """Base combinator node; subclasses set ``dim`` and the eval methods."""

    dim: int

    def eval_float(self, z) -> complex:
        arr = np.asarray([z], dtype=float).reshape(1, self.dim)
        return complex(self.eval_array(arr)[0])

    def eval_array(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eval_exact(self, z):
        """Exact value at a field point, or None when not available."""
        return None

    def __call__(self, z):
        return self.eval_float(z)


class ExpPolyLeaf(EvaluableFunction):
    def __init__(self, poly: ExpPolynomial):
        self.poly = poly
        self.dim = poly.dim

    def eval_array(self, pts):
        return self.poly.evaluate_array(np.asarray(pts, dtype=float))


class TriangleWave(EvaluableFunction):
    """h-periodic, equals |x| on [-h/2, h/2]; vanishes on h Z, even, with
    slope jumps of size 2 at the lattice and -2 at half-lattice points."""

    def __init__(self, period: AlgebraicScalar):
        if period.sign() <= 0:
            raise NonpositivePeriod("triangle wave needs period > 0")
        self.period = period
        self.dim = 1

    def eval_array(self, pts):
        pts = np.asarray(pts, dtype=float)
        z = pts[:, 0] if pts.ndim == 2 else pts
        h = float(self.period)
        r = np.mod(z, h)
        return np.minimum(r, h - r).astype(complex)

    def eval_exact(self, z):
        z = z[0] if isinstance(z, (tuple, list)) else z
        if not isinstance(z, AlgebraicScalar):
            z = self.period.field.rational(frac(z))
        t = z / self.period
        r = t - t.floor()
        half = Fraction(1, 2)
        val = r if (r - half).sign() <= 0 else (1 - r)
        return val * self.period


class AntiDifference(EvaluableFunction):
    """Partial-sum antidifference of a 1-d function vanishing on h Z."""

    def __init__(self, child: EvaluableFunction, step: AlgebraicScalar):
        if child.dim != 1:
            raise DimensionMismatch("antidifference acts on 1-d functions")
        if step.sign() <= 0:
            raise NonpositivePeriod("antidifference needs step > 0")
        self.child = child
        self.step = step
        self.dim = 1

    def eval_array(self, pts):
        pts = np.asarray(pts, dtype=float)
        z = pts[:, 0] if pts.ndim == 2 else pts
        h = float(self.step)
        k = np.floor(z / h).astype(np.int64)
        out = np.zeros(z.shape, dtype=complex)
        kmax = int(k.max(initial=0))
        if kmax > 0:
            x0 = z - k * h
            for j in range(kmax):
                mask = k > j
                if mask.any():
                    vals = self.child.eval_array((x0[mask] + j * h)[:, None])
                    out[mask] += vals
        kmin = int(k.min(initial=0))
        if kmin < 0:
            for i in range(-kmin):
                mask = k < -i
                if mask.any():
                    vals = self.child.eval_array((z[mask] + i * h)[:, None])
                    out[mask] -= vals
        return out

    def eval_exact(self, z):
        z = z[0] if isinstance(z, (tuple, list)) else z
        if not isinstance(z, AlgebraicScalar):
            z = self.step.field.rational(frac(z))
        k = (z / self.step).floor()
        zero = self.step.field.zero()
        if k == 0:
            return zero
        acc = zero
        if k > 0:
            x0 = z - self.step * k
            for j in range(k):
                v = self.child.eval_exact((x0 + self.step * j,))
                if v is None:
                    return None
                acc = acc + v
            return acc
        for i in range(-k):
            v = self.child.eval_exact((z + self.step * i,))
            if v is None:
                return None
            acc = acc - v
        return acc


class Sum(EvaluableFunction):
    def __init__(self, children):
        children = list(children)
        if not children:
            raise DimensionMismatch("empty sum")
        self.children = children
        self.dim = children[0].dim
        if any(c.dim != self.dim for c in children):
            raise DimensionMismatch("summands of different dimension")

    def eval_array(self, pts):
        acc = self.children[0].eval_array(pts)
        for c in self.children[1:]:
            acc = acc + c.eval_array(pts)
        return acc

    def eval_exact(self, z):
        vals = [c.eval_exact(z) for c in self.children]
        if any(v is None for v in vals):
            return None
        acc = vals[0]
        for v in vals[1:]:
            acc = acc + v
        return acc


class Scale(EvaluableFunction):
    def __init__(self, factor, child: EvaluableFunction):
        self.factor = factor
        self.child = child
        self.dim = child.dim

    def eval_array(self, pts):
        return self._factor_complex() * self.child.eval_array(pts)

    def _factor_complex(self) -> complex:
        f = self.factor
        if isinstance(f, AlgebraicScalar):
            return complex(float(f))
        return complex(f)

    def eval_exact(self, z):
        if not isinstance(self.factor, (AlgebraicScalar, Fraction, int)):
            return None
        v = self.child.eval_exact(z)
        if v is None:
            return None
        return v * self.factor


class Project(EvaluableFunction):
    """z |-> child(M z) for a fixed square matrix (rows)."""

    def __init__(self, child: EvaluableFunction, matrix):
        self.child = child
        self.matrix = [list(row) for row in matrix]
        self.dim = len(self.matrix)

    def eval_array(self, pts):
        M = np.array([[float(x) for x in row] for row in self.matrix])
        pts = np.asarray(pts, dtype=float)
        return self.child.eval_array(pts @ M.T)

    def eval_exact(self, z):
        if not all(isinstance(x, AlgebraicScalar) for row in self.matrix for x in row):
            return None
        w = tuple(sum((row[j] * z[j] for j in range(len(row))),
                      start=self.matrix[0][0].field.zero())
                  for row in self.matrix)
        return self.child.eval_exact(w)


class CosetBuild(EvaluableFunction):
    """phi(z) = outer(P(z)) + inner(s(z) / r) for a hyperplane frame."""

    def __init__(self, frame: HyperplaneFrame, outer: ExpPolynomial,
                 inner: EvaluableFunction):
        if outer.dim != frame.dim:
            raise DimensionMismatch("outer polynomial dimension differs from frame")
        if inner.dim != 1:
            raise DimensionMismatch("inner profile must be 1-d")
        self.frame = frame
        self.outer = outer
        self.inner = inner
        self.dim = frame.dim

    def eval_array(self, pts):
        pts = np.asarray(pts, dtype=float)
        proj, s = self.frame.split_float(pts)
        outer_vals = self.outer.evaluate_array(proj)
        inner_vals = self.inner.eval_array((s / float(self.frame.r))[:, None])
        return outer_vals + inner_vals


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def make_triangle_wave(period) -> TriangleWave:
    return TriangleWave(period)


def check_vanishes_on_lattice(g: EvaluableFunction, step, kmin=-50, kmax=50,
                              tol: float = 1e-10):
    """Verify g(k h) = 0 for k in [kmin, kmax]; exact where g is exact."""
    for k in range(kmin, kmax + 1):
        zk = step * k
        exact = g.eval_exact((zk,))
        if exact is not None:
            if not exact.is_zero():
                raise LatticeValuesNonzero(f"g({k} h) != 0 exactly")
            continue
        if abs(g.eval_float((float(zk),))) > tol:
            raise LatticeValuesNonzero(f"|g({k} h)| > {tol}")


def make_antidifference(g: EvaluableFunction, step, depth: int = 1) -> EvaluableFunction:
    """Iterated antidifference: delta_h^depth (result) = g.

    Requires g to vanish on the step lattice (checked on [-50, 50] h,
    exactly where g supports exact evaluation).
    """
    if isinstance(step, (int, Fraction)):
        raise TypeError("step must be an AlgebraicScalar; build it from the field")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    check_vanishes_on_lattice(g, step)
    f = g
    for _ in range(depth):
        f = AntiDifference(f, step)
    return f


def make_fm(m: int, period) -> EvaluableFunction:
    """The tower function f_m: delta_h^(m-1) f_m is the triangle wave of the
    given period and delta_h^m f_m = 0;  f_1 is the wave itself."""
    if m < 1:
        raise ValueError("m must be >= 1")
    wave = make_triangle_wave(period)
    if m == 1:
        return wave
    return make_antidifference(wave, period, depth=m - 1)


def difference_values(f: EvaluableFunction, h, m: int, pts: np.ndarray) -> np.ndarray:
    """delta_h^m f at float points, from the binomial expansion."""
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    h = np.asarray([float(x) for x in (h if hasattr(h, "__len__") else (h,))])
    acc = np.zeros(pts.shape[0], dtype=complex)
    for k in range(m + 1):
        acc = acc + comb(m, k) * (-1) ** (m - k) * f.eval_array(pts + k * h)
    return acc


def make_counterexample(frame: HyperplaneFrame, outer: ExpPolynomial, m: int
                        ) -> tuple[CosetBuild, FunctionSubspace]:
    """The hyperplane construction: a continuous non-exponential-polynomial
    phi together with the finite-dimensional space H absorbing its
    differences.

    phi(z) = outer(P(z)) + f_m(s(z)/r), where f_m has unit period; H is the
    translation hull of ``outer`` composed with the frame projection.  For
    every generator h_k of the frame's closure, delta_(h_k)(H) lies in H
    exactly, and delta_(h_k)^n phi lies in H for n >= m (the inner tower
    telescopes away because s moves by integer multiples of r along the
    generators).
    """
    if m < 1:
        raise FrameInvalid("difference order m must be >= 1")
    if outer.dim != frame.dim:
        raise FrameInvalid("outer polynomial dimension differs from frame")
    inner = make_fm(m, frame.field.one())
    phi = CosetBuild(frame, outer, inner)
    P = frame.projection_matrix()
    hull = translation_hull(outer)
    composed = [g.substitute_linear(P) for g in hull]
    H = FunctionSubspace.span(composed, dim=frame.dim, field=frame.field)
    return phi, H


def verify_space_invariance(H: FunctionSubspace, steps) -> bool:
    """Exact check that delta_h(H) lies in H for every step."""
    from .opalg import TranslationPolynomial

    for h in steps:
        D = TranslationPolynomial.delta(H.field, h, 1, dim=H.dim_ambient)
        if not H.is_invariant_under(D):
            return False
    return True


def grid_membership_residual(values: np.ndarray, pts: np.ndarray,
                             space: FunctionSubspace) -> float:
    """Max absolute residual of the least-squares projection of sampled
    values onto the space's basis functions evaluated on the same points."""
    basis = space.basis_polynomials()
    if not basis:
        return float(np.max(np.abs(values))) if len(values) else 0.0
    cols = np.stack([b.evaluate_array(pts) for b in basis], axis=1)
    coef, *_ = np.linalg.lstsq(cols, values, rcond=None)
    resid = values - cols @ coef
    return float(np.max(np.abs(resid)))


# ---------------------------------------------------------------------------
# corner witness
# ---------------------------------------------------------------------------

@dataclass
class CornerWitness:
    point: tuple
    direction: tuple
    gap: float


def _directional_gaps(f: EvaluableFunction, pts: np.ndarray, u: np.ndarray,
                      delta: float) -> np.ndarray:
    fw = f.eval_array(pts + delta * u)
    bk = f.eval_array(pts - delta * u)
    md = f.eval_array(pts)
    return np.abs((fw - 2 * md + bk) / delta)


def corner_witness(f: EvaluableFunction, window, steps=(1e-2, 1e-3, 1e-4),
                   directions=None, min_gap: float = 0.1):
    """Search for a point and direction where one-sided slopes stably
    disagree; returns a CornerWitness or None.

    The slope gap must exceed ``min_gap`` for every listed step size.  A
    coarse scan (detection step at least the scan spacing, so no corner can
    fall between probes) localizes a candidate, a nested zoom ladder along
    the direction pins it under the finest step, and the reported gap is the
    one at the finest step at the pinned point.
    """
    d = f.dim
    window = [(float(lo), float(hi)) for lo, hi in window]
    if directions is None:
        directions = [tuple(1.0 if i == j else 0.0 for j in range(d))
                      for i in range(d)]
    best = None
    steps = sorted(steps, reverse=True)
    for u in directions:
        u_arr = np.asarray(u, dtype=float)
        u_arr = u_arr / np.linalg.norm(u_arr)
        if d == 1:
            base = np.linspace(window[0][0], window[0][1], 1601)[:, None]
            spacing = (window[0][1] - window[0][0]) / 1600
        else:
            per_axis = max(7, int(round(4000 ** (1 / d))))
            axes = [np.linspace(lo, hi, per_axis) for lo, hi in window]
            mesh = np.meshgrid(*axes, indexing="ij")
            base = np.stack([m.ravel() for m in mesh], axis=-1)
            spacing = max((hi - lo) / (per_axis - 1) for lo, hi in window)
        delta_detect = max(steps[0], spacing)
        gaps = _directional_gaps(f, base, u_arr, delta_detect)
        idx = int(np.argmax(gaps))
        if gaps[idx] < min_gap:
            continue
        center = base[idx]
        # nested zoom: each window covers the previous stage's localization
        # error, each grid is fine enough for the tent peak of its step
        ladder = [(steps[0], max(2 * spacing, 4 * steps[0]))]
        for k in range(1, len(steps)):
            ladder.append((steps[k], 4 * steps[k - 1]))
        ladder.append((steps[-1], 4 * steps[-1]))
        ladder.append((steps[-1], steps[-1] / 12))
        t_center = 0.0
        for delta, width in ladder:
            ts = np.linspace(t_center - width, t_center + width, 1601)
            pts = center[None, :] + ts[:, None] * u_arr[None, :]
            g = _directional_gaps(f, pts, u_arr, delta)
            t_center = float(ts[int(np.argmax(g))])
        point = center + t_center * u_arr
        gap_by_step = [float(_directional_gaps(f, point[None, :], u_arr, s)[0])
                       for s in steps]
        if min(gap_by_step) >= min_gap:
            wit = CornerWitness(tuple(float(x) for x in point), tuple(u),
                                gap_by_step[-1])
            if best is None or wit.gap > best.gap:
                best = wit
    return best
