"""Reconstruction of exponential polynomials from prescribed forward
differences, joint difference kernels, and coset-slice fitting for
non-dense step groups.

``solve_difference_system`` inverts  g_k = delta_(h_k)^(m_k) f  when the
steps span a dense subgroup.  The ansatz frequencies are those of the g_k
plus zero: density forbids a nonzero frequency orthogonal to every step,
and a frequency with lambda.h nonzero survives differencing because
e^(lambda.h) differs from one for nonzero algebraic exponents.  Each nonzero
frequency block is triangular in the graded monomial order with diagonal
(e^(lambda.h)-1)^m, so its component is unique; the zero-frequency block is
a plain exact linear system whose nullspace is the polynomial kernel.  The
returned particular solution has its free coordinates set to zero under the
fixed graded-lexicographic atom order, and the full answer is re-verified
exactly against every equation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .construct import EvaluableFunction, ExpPolyLeaf, Scale, Sum
from .errors import (
    DenseGroup,
    DimensionMismatch,
    IllConditionedFit,
    Inconsistent,
    InternalError,
    MalformedInput,
    NotDense,
)
from .expcoef import ExpCoefficient
from .exppoly import ExpPolynomial, _linear_form_power, _poly_dict_mul
from .groups import GroupClosure, group_closure, project_onto, _dot
from .linalg import field_solve, field_kernel, int_solve_exact
from .opalg import TranslationPolynomial
from .scalar import AlgebraicScalar, ComplexAlgebraic, NumberField
from .subspace import FunctionSubspace, invariant_closure


@dataclass
class DifferenceSystem:
    field: NumberField
    dim: int
    steps: list          # [(step vector, order m_k)]
    rhs: list            # [ExpPolynomial]

    def __post_init__(self):
        if len(self.steps) != len(self.rhs):
            raise MalformedInput("steps and right-hand sides must pair up")
        if not self.steps:
            raise MalformedInput("need at least one equation")
        norm = []
        for h, m in self.steps:
            h = tuple(x if isinstance(x, AlgebraicScalar) else self.field.rational(x)
                      for x in h)
            if len(h) != self.dim:
                raise DimensionMismatch("step length differs from dimension")
            if int(m) < 1:
                raise MalformedInput("difference orders must be >= 1")
            norm.append((h, int(m)))
        self.steps = norm
        for g in self.rhs:
            if g.dim != self.dim:
                raise DimensionMismatch("right-hand side dimension mismatch")


@dataclass
class SolutionBundle:
    particular: ExpPolynomial
    kernel_basis: list
    ansatz: list         # [(frequency, degree bound)]


def _zero_freq(field: NumberField, dim: int):
    z = ComplexAlgebraic(field.zero())
    return tuple(z for _ in range(dim))


def _freq_dot(freq, h) -> ComplexAlgebraic:
    field = h[0].field
    acc = ComplexAlgebraic(field.zero())
    for lam_i, h_i in zip(freq, h):
        acc = acc + lam_i * h_i
    return acc


def _density_gate(sys: DifferenceSystem) -> GroupClosure:
    c = group_closure([h for h, _ in sys.steps], field=sys.field)
    if not c.dense:
        raise NotDense("steps do not span a dense subgroup")
    return c


def ansatz_atoms(sys: DifferenceSystem):
    """Frequencies with degree bounds sufficient to contain every solution."""
    _density_gate(sys)
    freqs = {}
    zero = _zero_freq(sys.field, sys.dim)
    freqs[zero] = 0
    for g in sys.rhs:
        for fr in g.terms:
            freqs.setdefault(fr, 0)
    out = []
    for fr in freqs:
        bound = 0
        for (h, m), g in zip(sys.steps, sys.rhs):
            deg = max(g.degree_at(fr), 0)
            if _freq_dot(fr, h).is_zero():
                bound = max(bound, deg + m)
            else:
                bound = max(bound, deg)
        out.append((fr, bound))
    out.sort(key=lambda fb: tuple(c.sort_key() for c in fb[0]))
    return out


def _multi_indices(dim: int, max_total: int):
    idx = [a for a in product(range(max_total + 1), repeat=dim)
           if sum(a) <= max_total]
    idx.sort(key=lambda a: (sum(a), a))
    return idx


def solve_difference_system(sys: DifferenceSystem) -> SolutionBundle:
    field, dim = sys.field, sys.dim
    ansatz = ansatz_atoms(sys)
    zero = _zero_freq(field, dim)
    particular = ExpPolynomial.zero(field, dim)
    kernel: list = []
    for freq, bound in ansatz:
        atoms = _multi_indices(dim, bound)
        if freq == zero:
            comp, kern = _solve_zero_block(sys, atoms)
            kernel.extend(kern)
        else:
            comp = _solve_nonzero_block(sys, freq, atoms)
        particular = particular + comp
    for (h, m), g in zip(sys.steps, sys.rhs):
        if particular.forward_difference(h, m) != g:
            raise Inconsistent(
                "prescribed differences are not simultaneous differences of one function")
    return SolutionBundle(particular, kernel, ansatz)


def _solve_nonzero_block(sys: DifferenceSystem, freq, atoms) -> ExpPolynomial:
    """Unique frequency component via the triangular block of one step with
    lambda.h nonzero; remaining equations are covered by the final exact
    re-verification."""
    field, dim = sys.field, sys.dim
    k_star = None
    for k, (h, m) in enumerate(sys.steps):
        if not _freq_dot(freq, h).is_zero():
            k_star = k
            break
    if k_star is None:
        raise InternalError("dense steps cannot all annihilate a nonzero frequency")
    h, m = sys.steps[k_star]
    g = sys.rhs[k_star]
    images = {}
    for alpha in atoms:
        mono = ExpPolynomial.monomial(field, dim, alpha, 1, freq=freq)
        images[alpha] = mono.forward_difference(h, m)
    coeffs: dict = {}
    for alpha in sorted(atoms, key=lambda a: (sum(a), a), reverse=True):
        resid = g.coefficient(alpha, freq)
        for beta, c in coeffs.items():
            resid = resid - images[beta].coefficient(alpha, freq) * c
        diag = images[alpha].coefficient(alpha, freq)
        if diag.is_zero():
            raise InternalError("triangular diagonal vanished for a nonzero frequency")
        c = resid / diag
        if not c.is_zero():
            coeffs[alpha] = c
    if not coeffs:
        return ExpPolynomial.zero(field, dim)
    return ExpPolynomial(field, dim, {freq: coeffs})


def _solve_zero_block(sys: DifferenceSystem, atoms):
    """Exact linear solve of the polynomial block, all equations stacked."""
    field, dim = sys.field, sys.dim
    zero_freq = _zero_freq(field, dim)
    col = {a: i for i, a in enumerate(atoms)}
    rows, rhs_vec = [], []
    zero = ExpCoefficient.zero(field)
    one = ExpCoefficient.one(field)
    for (h, m), g in zip(sys.steps, sys.rhs):
        images = {}
        for alpha in atoms:
            mono = ExpPolynomial.monomial(field, dim, alpha, 1)
            images[alpha] = mono.forward_difference(h, m)
        out_atoms = sorted({a for img in images.values()
                            for a, fr in img.atoms() if fr == zero_freq} | set(atoms),
                           key=lambda a: (sum(a), a))
        for beta in out_atoms:
            row = [zero] * len(atoms)
            for alpha in atoms:
                row[col[alpha]] = images[alpha].coefficient(beta, zero_freq)
            rows.append(row)
            rhs_vec.append(g.coefficient(beta, zero_freq))
    if all(e.is_scalar() for row in rows for e in row) and \
            all(b.is_scalar() for b in rhs_vec):
        # entries are plain complex field scalars; eliminate without the
        # group-ring wrapper
        ca_zero = ComplexAlgebraic(field.zero())
        ca_one = ComplexAlgebraic(field.one())
        part_s, kern_s = field_solve([[e.scalar_value() for e in row] for row in rows],
                                     [b.scalar_value() for b in rhs_vec],
                                     len(atoms), ca_zero, ca_one)
        part = None if part_s is None else \
            [ExpCoefficient.scalar(field, c) for c in part_s]
        kern = [[ExpCoefficient.scalar(field, c) for c in kv] for kv in kern_s]
    else:
        part, kern = field_solve(rows, rhs_vec, len(atoms), zero, one)
    if part is None:
        raise Inconsistent("polynomial block admits no solution")
    comp_terms = {a: c for a, c in zip(atoms, part) if not c.is_zero()}
    comp = ExpPolynomial(field, dim, {zero_freq: comp_terms}) if comp_terms \
        else ExpPolynomial.zero(field, dim)
    kernel = []
    for kv in kern:
        terms = {a: c for a, c in zip(atoms, kv) if not c.is_zero()}
        if terms:
            kernel.append(ExpPolynomial(field, dim, {zero_freq: terms}))
    return comp, kernel


def polynomial_kernel(field: NumberField, dim: int, steps, cap: int):
    """Basis of polynomials of total degree <= cap annihilated by every
    delta_(h_k)^(m_k); requires dense steps."""
    sys = DifferenceSystem(field, dim, list(steps),
                           [ExpPolynomial.zero(field, dim) for _ in steps])
    c = group_closure([h for h, _ in sys.steps], field=field)
    if not c.dense:
        raise NotDense("kernel computation requires dense steps")
    atoms = _multi_indices(dim, cap)
    _, kern = _solve_zero_block(sys, atoms)
    return kern


def in_kernel_span(diff: ExpPolynomial, kernel_basis) -> bool:
    """Exact membership of diff in the span of the kernel basis."""
    if diff.is_zero():
        return True
    space = FunctionSubspace.span(kernel_basis, dim=diff.dim, field=diff.field) \
        if kernel_basis else None
    if space is None:
        return False
    return space.contains(diff)


# ---------------------------------------------------------------------------
# coset-slice fitting for non-dense step groups
# ---------------------------------------------------------------------------

@dataclass
class FittedSlice:
    lattice_point: tuple
    residual: float
    coefficients: list
    function: EvaluableFunction


@dataclass
class CosetFitReport:
    slices: list
    candidate_dim: int
    condition: float
    completion_steps: list


def _poly_to_ambient(p: ExpPolynomial, tmatrix) -> ExpPolynomial:
    """Pure polynomial in v fit variables composed with the linear map
    t(x) = T x (T a v-by-d field matrix); result is an ambient polynomial."""
    field = p.field
    d = len(tmatrix[0])
    zero_freq = _zero_freq(field, d)
    out = ExpPolynomial.zero(field, d)
    for freq, poly in p.terms.items():
        if any(not z.is_zero() for z in freq):
            raise InternalError("kernel candidates must be pure polynomials")
        for alpha, c in poly.items():
            expanded = {(0,) * d: field.one()}
            for i, a_i in enumerate(alpha):
                if a_i == 0:
                    continue
                factor = _linear_form_power(tmatrix[i], a_i, field)
                expanded = _poly_dict_mul(expanded, factor)
            for beta, w in expanded.items():
                add = c.scale_scalar(ComplexAlgebraic(w))
                out = out + ExpPolynomial(field, d, {zero_freq: {beta: add}})
    return out


def fit_coset_slices(f: EvaluableFunction, closure: GroupClosure, orders,
                     H: FunctionSubspace, lambdas, grid_count: int = 16,
                     grid_halfwidth: float = 2.0, cond_cap: float = 1e12
                     ) -> CosetFitReport:
    """Least-squares slices  e_lambda with  f(x + lambda) ~ e_lambda(x) on V.

    ``orders`` lists (h_k, n_k, m_k): n_k bounds the order of the difference
    of f lying in H, m_k is the invariance order of H (checked exactly).  H
    is first replaced by its closure invariant under every single difference.
    The candidate space is that closure restricted to V plus the joint
    polynomial kernel of the projected steps at order N = sum n_k.  Residuals
    are reported on a held-out grid offset from the fitting grid; this is a
    numerical verification, not a proof.

    Per-point fits share only immutable data, so distinct lattice points are
    safe to fit concurrently; this implementation runs them in sequence.
    """
    field = closure.field
    d = closure.dim
    if closure.dense:
        raise DenseGroup("slices are only defined for non-dense step groups")
    norm_orders = []
    for entry in orders:
        if len(entry) == 2:
            h, n = entry
            m = n
        else:
            h, n, m = entry
        h = tuple(x if isinstance(x, AlgebraicScalar) else field.rational(x) for x in h)
        norm_orders.append((h, int(n), int(m)))
    lam_flat = [[Fraction(fl) for fl in _flatten_vec(v)] for v in closure.lambda_basis]
    lam_vecs = []
    for lam in lambdas:
        lv = tuple(x if isinstance(x, AlgebraicScalar) else field.rational(x)
                   for x in lam)
        if lam_flat:
            if int_solve_exact(lam_flat, _flatten_vec(lv)) is None:
                raise MalformedInput("lattice point is not in the lattice span")
        elif any(not x.is_zero() for x in lv):
            raise MalformedInput("lattice part is trivial; only 0 is allowed")
        lam_vecs.append(lv)

    ops = [(TranslationPolynomial.delta(field, h, 1, dim=d), m)
           for h, _, m in norm_orders]
    H_closed = invariant_closure(H, ops)

    v_basis = closure.v_basis
    vdim = len(v_basis)
    N = sum(n for _, n, _ in norm_orders)

    # projected steps in fit coordinates, and the density certificate inside V
    proj_steps = []
    if vdim:
        gram = [[_dot(v_basis[i], v_basis[j]) for j in range(vdim)]
                for i in range(vdim)]
        for h, n, _ in norm_orders:
            ph = project_onto(v_basis, h)
            rhsv = [_dot(v_basis[i], ph) for i in range(vdim)]
            sol, _ = field_solve(gram, rhsv, vdim, field.zero(), field.one())
            proj_steps.append((tuple(sol), N))
        sub = group_closure([h for h, _ in proj_steps], field=field)
        if not sub.dense:
            raise InternalError("projected steps must be dense inside V")
        kern = polynomial_kernel(field, vdim, proj_steps, N)
    else:
        kern = []

    # completion directions recorded for the report: an orthogonal field basis
    # of the complement of V, plain and scaled by theta
    comp = field_kernel([list(v) for v in v_basis], d, field.zero(), field.one()) \
        if v_basis else [[field.one() if i == j else field.zero() for j in range(d)]
                         for i in range(d)]
    completion = [tuple(v) for v in comp] + \
                 [tuple(x * field.gen() for x in v) for v in comp]

    # fit and held-out grids inside V
    if vdim:
        ts = np.linspace(-grid_halfwidth, grid_halfwidth, grid_count)
        mesh = np.meshgrid(*([ts] * vdim), indexing="ij")
        tgrid = np.stack([m.ravel() for m in mesh], axis=-1)
        t2 = np.linspace(-grid_halfwidth, grid_halfwidth, grid_count + 7)
        mesh2 = np.meshgrid(*([t2] * vdim), indexing="ij")
        tgrid_out = np.stack([m.ravel() for m in mesh2], axis=-1)
        B = np.array([[float(x) for x in v] for v in v_basis])
        xgrid = tgrid @ B
        xgrid_out = tgrid_out @ B
    else:
        xgrid = np.zeros((1, d))
        xgrid_out = np.zeros((1, d))

    candidates: list[ExpPolynomial] = list(H_closed.basis_polynomials())
    if vdim and kern:
        # fit variables t relate to ambient points by t = G^(-1) B x
        ginv_rows, _ = field_solve_matrix_inverse(gram, field)
        T = []
        for i in range(vdim):
            row = []
            for j in range(d):
                acc = field.zero()
                for l in range(vdim):
                    acc = acc + ginv_rows[i][l] * v_basis[l][j]
                row.append(acc)
            T.append(row)
        candidates.extend(_poly_to_ambient(p, T) for p in kern)

    design = np.stack([c.evaluate_array(xgrid) for c in candidates], axis=1)
    design_out = np.stack([c.evaluate_array(xgrid_out) for c in candidates], axis=1)
    cond = float(np.linalg.cond(design))
    if cond > cond_cap:
        raise IllConditionedFit(f"design condition {cond:.3e} exceeds {cond_cap:.1e}")

    slices = []
    for lv in lam_vecs:
        lam_float = np.array([float(x) for x in lv])
        vals = f.eval_array(xgrid + lam_float)
        coeffs, *_ = np.linalg.lstsq(design, vals, rcond=None)
        vals_out = f.eval_array(xgrid_out + lam_float)
        resid = float(np.max(np.abs(vals_out - design_out @ coeffs)))
        fitted = Sum([Scale(complex(c), ExpPolyLeaf(b))
                      for c, b in zip(coeffs, candidates)])
        slices.append(FittedSlice(lv, resid, [complex(c) for c in coeffs], fitted))
    return CosetFitReport(slices, len(candidates), cond, completion)


def field_solve_matrix_inverse(gram, field: NumberField):
    """Inverse of a square field matrix via per-column exact solves."""
    k = len(gram)
    cols = []
    for j in range(k):
        e = [field.one() if i == j else field.zero() for i in range(k)]
        sol, kern = field_solve(gram, e, k, field.zero(), field.one())
        if sol is None or kern:
            raise InternalError("matrix is singular")
        cols.append(sol)
    rows = [[cols[j][i] for j in range(k)] for i in range(k)]
    return rows, None


def _flatten_vec(vec):
    out = []
    for x in vec:
        out.extend(x.coords)
    return out
