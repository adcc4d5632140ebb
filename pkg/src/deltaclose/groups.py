"""Closure decomposition of finitely generated subgroups of R^d.

For generators h_1..h_t with coordinates in the declared field, the closure
of  h_1 Z + ... + h_t Z  splits as  V + Lambda  with V a linear subspace and
Lambda a discrete lattice orthogonal to V.  The algorithm:

1. kernel over the field of  n |-> sum n_k h_k;
2. rational closure of the kernel: expand each kernel basis vector over the
   power basis of theta and take the Q-span of the component vectors;
3. V is the span of the images of those rational vectors under the generator
   matrix (this equals the closure's connected component: an integer vector z
   annihilates all field kernel vectors iff it annihilates every component
   vector, so the achievable integer characters are exactly the annihilator
   of the rational closure);
4. project the generators onto the orthogonal complement of V and extract a
   canonical lattice basis by Hermite normal form on the flattened rational
   coordinates;
5. repeat on the projections while they still produce a nonzero subspace
   part (equivalently: while the projected kernel is not rationally spanned);
   each round strictly grows V, so at most d rounds run.

``dual_witness`` is the independent check: it searches, by pure rational
linear algebra on the dual side, for a nonzero field vector y with every
product <y, h_k> an integer.  Such a witness exists iff the group is not
dense, so agreement of the two routes certifies every density verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import (
    DenseGroup,
    DimensionMismatch,
    EmptyInput,
    FieldMismatch,
    InternalError,
    NonIntegralRatio,
)
from .linalg import field_kernel, field_rref, field_solve, int_solve_exact, lattice_basis
from .qmath import frac
from .scalar import AlgebraicScalar, NumberField


def _as_vector(field: NumberField, v, dim: int):
    vec = tuple(x if isinstance(x, AlgebraicScalar) else field.rational(frac(x))
                for x in v)
    if len(vec) != dim:
        raise DimensionMismatch("generator length differs from ambient dimension")
    for x in vec:
        if not (x.field is field or x.field == field):
            raise FieldMismatch("generator coordinate from a different field")
    return vec


def _dot(u, v) -> AlgebraicScalar:
    acc = u[0].field.zero()
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def _flatten(vec) -> list:
    out = []
    for x in vec:
        out.extend(x.coords)
    return out


def _unflatten(field: NumberField, flat, dim: int):
    n = field.degree
    return tuple(field.element(flat[i * n:(i + 1) * n]) for i in range(dim))


def project_onto(basis_rows, x):
    """Orthogonal projection of x onto the span of the given field vectors."""
    if not basis_rows:
        return tuple(v.field.zero() for v in x)
    field = basis_rows[0][0].field
    k = len(basis_rows)
    gram = [[_dot(basis_rows[i], basis_rows[j]) for j in range(k)] for i in range(k)]
    rhs = [_dot(basis_rows[i], x) for i in range(k)]
    sol, kern = field_solve(gram, rhs, k, field.zero(), field.one())
    if sol is None or kern:
        raise InternalError("projection basis is not linearly independent")
    out = [field.zero() for _ in x]
    for c, row in zip(sol, basis_rows):
        for i, v in enumerate(row):
            out[i] = out[i] + c * v
    return tuple(out)


@dataclass
class GroupClosure:
    field: NumberField
    dim: int
    generators: list
    v_basis: list
    lambda_basis: list
    dense: bool
    reconstruction: list  # per generator: (v_part, integer lattice coords)

    def is_dense(self) -> bool:
        return self.dense

    def project_v(self, x):
        return project_onto(self.v_basis, x)


def group_closure(generators, field: NumberField | None = None) -> GroupClosure:
    if not generators:
        raise EmptyInput("need at least one generator")
    first = generators[0]
    if field is None:
        for x in first:
            if isinstance(x, AlgebraicScalar):
                field = x.field
                break
        else:
            raise EmptyInput("cannot infer the field from rational generators; pass field=")
    dim = len(first)
    gens = [_as_vector(field, g, dim) for g in generators]

    v_rows: list = []
    cur = gens
    for _ in range(dim + 1):
        proj_cur = cur
        # field kernel of the generator matrix (rows indexed by coordinates)
        a_rows = [[g[i] for g in proj_cur] for i in range(dim)]
        kernel = field_kernel(a_rows, len(proj_cur), field.zero(), field.one())
        # rational closure of the kernel
        degree = field.degree
        rat_rows = []
        for kv in kernel:
            for slot in range(degree):
                row = [x.coords[slot] for x in kv]
                if any(f != 0 for f in row):
                    rat_rows.append(row)
        rat_basis, _ = field_rref(rat_rows) if rat_rows else ([], [])
        # image of the rational closure under the generator matrix
        new_v = []
        for r in rat_basis:
            img = [field.zero() for _ in range(dim)]
            for coef, g in zip(r, proj_cur):
                cs = field.rational(coef)
                for i in range(dim):
                    img[i] = img[i] + cs * g[i]
            if any(not x.is_zero() for x in img):
                new_v.append(tuple(img))
        if not new_v:
            break
        v_rows.extend(new_v)
        v_rows, _ = field_rref(v_rows)
        v_rows = [tuple(r) for r in v_rows]
        cur = [tuple(a - b for a, b in zip(g, project_onto(v_rows, g))) for g in gens]
    else:
        raise InternalError("closure recursion exceeded the ambient dimension")

    v_rows, _ = field_rref(v_rows) if v_rows else ([], [])
    v_rows = [tuple(r) for r in v_rows]
    projected = [tuple(a - b for a, b in zip(g, project_onto(v_rows, g)))
                 for g in gens]
    flat = [[Fraction(f) for f in _flatten(p)] for p in projected]
    lam_flat = lattice_basis(flat)
    lam = [_unflatten(field, row, dim) for row in lam_flat]
    if lam:
        rank_rows, _ = field_rref([list(v) for v in lam])
        if len(rank_rows) != len(lam):
            raise InternalError(
                "projected generators do not form a discrete group; "
                "subspace part was not fully extracted")
    dense = len(v_rows) == dim
    reconstruction = []
    for g, p in zip(gens, projected):
        coords = int_solve_exact(lam_flat, _flatten(p)) if lam_flat else (
            [] if all(x.is_zero() for x in p) else None)
        if coords is None:
            raise InternalError("generator does not decompose over the lattice basis")
        v_part = tuple(a - b for a, b in zip(g, p))
        reconstruction.append((v_part, coords))
    return GroupClosure(field, dim, gens, v_rows, lam, dense, reconstruction)


def verify_reconstruction(c: GroupClosure) -> bool:
    """Each generator equals its V-component plus the recorded integer
    combination of the lattice basis, exactly."""
    for g, (v_part, coords) in zip(c.generators, c.reconstruction):
        acc = list(v_part)
        for n, lam in zip(coords, c.lambda_basis):
            for i, x in enumerate(lam):
                acc[i] = acc[i] + x * n
        if any(not (a - b).is_zero() for a, b in zip(acc, g)):
            return False
        # the V-component must lie in the span of the V-basis
        resid = tuple(a - b for a, b in zip(v_part, project_onto(c.v_basis, v_part)))
        if any(not x.is_zero() for x in resid):
            return False
    return True


def verify_orthogonality(c: GroupClosure) -> bool:
    for lam in c.lambda_basis:
        for v in c.v_basis:
            if not _dot(lam, v).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# dual-side witness search (independent oracle)
# ---------------------------------------------------------------------------

def dual_witness(generators, field: NumberField, height_cap: int = 20):
    """Nonzero field vector y with <y, h_k> in Z for every generator, or None.

    Built from the dual side only: rational kernel of the irrationality
    constraints, then scaling into the integer character lattice.  Returns
    (y, height) or None; None certifies density regardless of ``height_cap``
    because the solve is exact rather than an enumeration — the cap is the
    nominal search bound callers compare the reported height against.
    """
    if not generators:
        raise EmptyInput("need at least one generator")
    dim = len(generators[0])
    gens = [_as_vector(field, g, dim) for g in generators]
    n = field.degree
    unknowns = n * dim
    theta_pows = [field.one()]
    for _ in range(n - 1):
        theta_pows.append(theta_pows[-1] * field.gen())

    # coords of <y, h_k> as a Q-linear map of the nd unknowns
    maps = []
    for g in gens:
        mk = [[Fraction(0)] * unknowns for _ in range(n)]
        for j in range(dim):
            for i in range(n):
                prod = theta_pows[i] * g[j]
                for slot in range(n):
                    mk[slot][j * n + i] = prod.coords[slot]
        maps.append(mk)

    irr_rows = [row for mk in maps for row in mk[1:]]
    kern = field_kernel(irr_rows, unknowns, Fraction(0), Fraction(1)) if irr_rows \
        else [[Fraction(1) if i == j else Fraction(0) for j in range(unknowns)]
              for i in range(unknowns)]
    if not kern:
        return None
    # any rational-product direction scales into the integer character lattice
    q = kern[0]
    prods = [sum(mk[0][i] * q[i] for i in range(unknowns)) for mk in maps]
    scale = lcm(*(p.denominator for p in prods), 1)
    q = [x * scale for x in q]
    y = _unflatten(field, q, dim)
    height = max(max(abs(x.numerator) for x in q), max(x.denominator for x in q))
    return y, height


def witness_checks(y, generators, field: NumberField) -> bool:
    """Exact check that every product <y, h_k> is a rational integer."""
    dim = len(y)
    for g in generators:
        gv = _as_vector(field, g, dim)
        p = _dot(y, gv)
        if not p.is_rational() or p.as_rational().denominator != 1:
            return False
    return True


def heuristic_density_report(generators, height_cap: int = 20, tol: float = 1e-9):
    """Float-only duality search for non-field inputs; clearly heuristic.

    Scans y = c / s with small integer c and scale s for near-integer
    products against every generator.
    """
    G = np.asarray(generators, dtype=float)
    t, d = G.shape
    rng = range(-height_cap, height_cap + 1)
    mesh = np.meshgrid(*([list(rng)] * d), indexing="ij")
    cand = np.stack([m.ravel() for m in mesh], axis=-1)
    cand = cand[np.any(cand != 0, axis=1)]
    for s in range(1, height_cap + 1):
        ys = cand / s
        prods = ys @ G.T
        near = np.all(np.abs(prods - np.round(prods)) <= tol, axis=1)
        if near.any():
            y = ys[int(np.argmax(near))]
            return {"mode": "heuristic", "dense": False,
                    "witness": [float(v) for v in y]}
    return {"mode": "heuristic", "dense": True, "witness": None}


# ---------------------------------------------------------------------------
# hyperplane frame
# ---------------------------------------------------------------------------

@dataclass
class HyperplaneFrame:
    """Transverse frame for a non-dense closure: a hyperplane Vt containing
    V, a field normal w (not unit), the positive step r with s(Lambda) = r Z,
    and the integer levels p_k of the generators, where
    s(h) = <h, w> / <w, w> (so s(w) = 1 and  z = P(z) + s(z) w  exactly)."""

    field: NumberField
    dim: int
    vt_basis: list
    w: tuple
    r: AlgebraicScalar
    p: list
    closure: GroupClosure

    def s_value(self, z) -> AlgebraicScalar:
        wz = _dot(self.w, z)
        return wz / self._wnorm2()

    def _wnorm2(self) -> AlgebraicScalar:
        return _dot(self.w, self.w)

    def split(self, z):
        """(P(z), s(z)) with z = P(z) + s(z) w, both exact."""
        z = _as_vector(self.field, z, self.dim)
        s = self.s_value(z)
        proj = tuple(a - s * b for a, b in zip(z, self.w))
        return proj, s

    def split_float(self, z: np.ndarray):
        """Vectorized float split of an (N, d) array: (projections, s-values)."""
        w = np.array([float(x) for x in self.w])
        wn = float(self._wnorm2())
        z = np.asarray(z, dtype=float)
        s = (z @ w) / wn
        proj = z - np.outer(s, w)
        return proj, s

    def projection_matrix(self):
        """Field matrix of P (rows), P z = z - s(z) w."""
        wn = self._wnorm2()
        rows = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                e = self.field.one() if i == j else self.field.zero()
                row.append(e - self.w[i] * self.w[j] / wn)
            rows.append(row)
        return rows


def build_frame(closure: GroupClosure) -> HyperplaneFrame:
    """Constructive transverse frame for a non-dense closure.

    The hyperplane is V + all lattice directions but the last + the full
    orthogonal complement of V + Lambda-span; the normal w is a field vector
    oriented so the last lattice direction has positive level, and r is that
    level.  With no lattice part any field hyperplane containing V works and
    r = 1.
    """
    if closure.dense:
        raise DenseGroup("dense closures admit no transverse hyperplane")
    field, dim = closure.field, closure.dim
    if closure.lambda_basis:
        span_rows = [list(v) for v in closure.v_basis] + \
                    [list(v) for v in closure.lambda_basis]
        comp = field_kernel(span_rows, dim, field.zero(), field.one())
        vt_rows = [list(v) for v in closure.v_basis] + \
                  [list(v) for v in closure.lambda_basis[:-1]] + \
                  [list(c) for c in comp]
    else:
        span_rows = [list(v) for v in closure.v_basis]
        comp = field_kernel(span_rows, dim, field.zero(), field.one()) if span_rows \
            else [[field.one() if i == j else field.zero() for j in range(dim)]
                  for i in range(dim)]
        need = dim - 1 - len(closure.v_basis)
        vt_rows = [list(v) for v in closure.v_basis] + \
                  [list(c) for c in comp[:need]]
    vt_rows, _ = field_rref(vt_rows) if vt_rows else ([], [])
    if len(vt_rows) != dim - 1:
        raise InternalError("transverse hyperplane has wrong dimension")
    normal = field_kernel(vt_rows, dim, field.zero(), field.one())
    if len(normal) != 1:
        raise InternalError("hyperplane normal is not one-dimensional")
    w = tuple(normal[0])
    frame = HyperplaneFrame(field, dim, [tuple(r) for r in vt_rows], w,
                            field.one(), [], closure)
    if closure.lambda_basis:
        s_last = frame.s_value(closure.lambda_basis[-1])
        sgn = s_last.sign()
        if sgn == 0:
            raise InternalError("last lattice direction lies in the hyperplane")
        if sgn < 0:
            w = tuple(-x for x in w)
            frame = HyperplaneFrame(field, dim, frame.vt_basis, w,
                                    field.one(), [], closure)
            s_last = -s_last
        r = s_last
        for lam in closure.lambda_basis[:-1]:
            if not frame.s_value(lam).is_zero():
                raise NonIntegralRatio("lattice level set is not r Z")
    else:
        r = field.one()
    p = []
    for g in closure.generators:
        ratio = frame.s_value(g) / r
        if not ratio.is_rational() or ratio.as_rational().denominator != 1:
            raise NonIntegralRatio("generator level is not an integer multiple of r")
        p.append(int(ratio.as_rational()))
    return HyperplaneFrame(field, dim, frame.vt_basis, w, r, p, closure)
