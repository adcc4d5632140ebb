"""Exact linear algebra kernels.

Three layers, by coefficient structure:

* ``ff_*``   -- fraction-free elimination over the exponential-coefficient
               integral domain (cross-multiplication updates, divisions only
               by rational content, unit monomials, and scalar leading
               coefficients, all exact in the domain);
* ``field_*`` -- classical Gauss-Jordan over any exact division ring
               (Fraction, AlgebraicScalar, ComplexAlgebraic, or the
               exponential-coefficient fraction field);
* integer routines -- Hermite normal form with transform, saturated integer
               kernels, canonical lattice bases.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import InternalError
from .expcoef import ExpCoefficient
from .qmath import frac_gcd
from .scalar import ComplexAlgebraic


# ---------------------------------------------------------------------------
# fraction-free elimination over ExpCoefficient rows
# ---------------------------------------------------------------------------

def _row_is_zero(row):
    return all(e.is_zero() for e in row)

def _row_content_normalize(row):
    """Scale a row by a rational content and a unit monomial; exact and
    rank-preserving, keeps intermediate entries small."""
    nonzero = [e for e in row if not e.is_zero()]
    if not nonzero:
        return row
    field = nonzero[0].field
    g = frac_gcd(f for e in nonzero for f in e.all_fractions())
    if g not in (0, 1):
        inv = ComplexAlgebraic(field.rational(1 / g))
        row = [e.scale_scalar(inv) for e in row]
        nonzero = [e for e in row if not e.is_zero()]
    mu_min = min((e.min_exponent() for e in nonzero), key=lambda m: m.sort_key())
    if not mu_min.is_zero():
        row = [e.shift(-mu_min) if not e.is_zero() else e for e in row]
    return row


def _row_pivot_normalize(row, pivot_col):
    _, lc = row[pivot_col].leading_term()
    if lc != ComplexAlgebraic(row[pivot_col].field.one()):
        inv = lc.inverse()
        row = [e.scale_scalar(inv) for e in row]
    return row


def _row_divide_if_exact(row, divisor):
    """Divide every entry by ``divisor`` when all divisions are exact
    (all-or-nothing: the row must scale uniformly); otherwise normalize the
    rational content only.  Row rescaling by a nonzero ring element is always
    rank- and span-preserving because spans live over the fraction field."""
    if all(e.is_zero() for e in row):
        return row
    if divisor is None or divisor.is_scalar():
        return _row_content_normalize(row)
    from .expcoef import _dict_divexact

    cap = 16 * (1 + max(len(e.num) for e in row if not e.is_zero()))
    quotients = []
    for e in row:
        if e.is_zero():
            quotients.append(e)
            continue
        if not e.has_unit_den:
            return _row_content_normalize(row)
        q = _dict_divexact(e.num, divisor.num, cap)
        if q is None:
            return _row_content_normalize(row)
        quotients.append(ExpCoefficient(e.field, q, _normalized=False))
    return _row_content_normalize(quotients)


def _row_pivot_divide(row, pivot_col):
    """Scale the row so the pivot entry becomes one: divide by the whole
    pivot entry when that divides every entry exactly, else by the pivot's
    leading coefficient and the common unit monomial."""
    piv = row[pivot_col]
    if not piv.is_scalar():
        scaled = _row_divide_if_exact(list(row), piv)
        if scaled[pivot_col].is_scalar():
            row = scaled
    return _row_pivot_normalize(_row_content_normalize(row), pivot_col)


def ff_echelon(rows):
    """Reduced echelon form of rows over the group-ring domain.

    Fraction-free one-step elimination: a row update is the cross-multiplied
    combination  pivot*row - row[col]*pivot_row  followed by exact division
    by the last pivot that participated in this row's updates (deferred per
    row, so rows that already have zeros under the pivots are never touched).
    Returns (rows, pivot_columns); rows are canonical: pivot columns strictly
    increasing, zero entries above and below every pivot, minimal exponent
    zero, pivot leading coefficient one.  Re-running reproduces the output.
    """
    work = [list(r) for r in rows if not _row_is_zero(r)]
    if not work:
        return [], []
    ncols = len(work[0])
    prev = [None] * len(work)  # last pivot that updated each row
    out, pivots, out_prev = [], [], []
    for col in range(ncols):
        # prefer the sparsest candidate row: less frequency mixing downstream
        best = None
        for i, r in enumerate(work):
            if r[col].is_zero():
                continue
            weight = (sum(1 for e in r if not e.is_zero()),
                      sum(len(e.num) for e in r), i)
            if best is None or weight < best[0]:
                best = (weight, i)
        if best is None:
            continue
        idx = best[1]
        pivot_row, pivot_prev = work.pop(idx), prev.pop(idx)
        rest, rest_prev = work, prev
        piv = pivot_row[col]
        new_rest, new_prev = [], []
        for r, pr in zip(rest, rest_prev):
            if not r[col].is_zero():
                c = r[col]
                r = [piv * a - c * b for a, b in zip(r, pivot_row)]
                r = _row_divide_if_exact(r, pr)
                pr = piv
            if not _row_is_zero(r):
                new_rest.append(r)
                new_prev.append(pr)
        out.append(pivot_row)
        pivots.append(col)
        out_prev.append(pivot_prev)
        work, prev = new_rest, new_prev
        if not work:
            break
    # normalize forward-echelon rows, then eliminate above the pivots
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    out = [out[i] for i in order]
    pivots = [pivots[i] for i in order]
    out = [_row_pivot_divide(r, p) for r, p in zip(out, pivots)]
    for i in range(len(out) - 1, -1, -1):
        p_col = pivots[i]
        for j in range(i):
            if not out[j][p_col].is_zero():
                p, c = out[i][p_col], out[j][p_col]
                out[j] = _row_content_normalize(
                    [p * a - c * b for a, b in zip(out[j], out[i])])
    out = [_row_pivot_divide(r, p) for r, p in zip(out, pivots)]
    return out, pivots


def ff_reduce(vec, rows, pivots):
    """Remainder of vec after elimination against an echelon basis.

    The remainder is a nonzero multiple of the true residual by a product of
    pivots, which is all membership testing needs.
    """
    vec = list(vec)
    prev = None
    for row, p in zip(rows, pivots):
        c = vec[p]
        if not c.is_zero():
            piv = row[p]
            vec = [piv * a - c * b for a, b in zip(vec, row)]
            vec = _row_divide_if_exact(vec, prev)
            prev = piv
    return vec


def ff_is_member(vec, rows, pivots) -> bool:
    return all(e.is_zero() for e in ff_reduce(vec, rows, pivots))


# ---------------------------------------------------------------------------
# Gauss-Jordan over an exact division ring (duck-typed entries)
# ---------------------------------------------------------------------------

def field_rref(rows):
    """Reduced row echelon form with unit pivots. Returns (rows, pivots)."""
    work = [list(r) for r in rows]
    work = [r for r in work if any(bool(e) for e in r)]
    if not work:
        return [], []
    ncols = len(work[0])
    out, pivots = [], []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if bool(work[i][col]):
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv_row = [e / work[r][col] for e in work[r]]
        work[r] = inv_row
        for i in range(len(work)):
            if i != r and bool(work[i][col]):
                c = work[i][col]
                work[i] = [a - c * b for a, b in zip(work[i], inv_row)]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def field_kernel(rows, ncols, zero, one):
    """Basis of the right kernel {x : A x = 0} of the matrix given by rows."""
    rref, pivots = field_rref(rows)
    pivset = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [zero] * ncols
        v[j] = one
        for i, p in enumerate(pivots):
            v[p] = zero - rref[i][j]
        basis.append(v)
    return basis


def field_solve(rows, rhs, ncols, zero, one):
    """Solve A x = b exactly.

    Returns (particular, kernel_basis); particular is None when inconsistent.
    Free variables are set to zero, so the answer is deterministic for a
    fixed column order.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = field_rref(aug)
    if ncols in pivots:
        return None, field_kernel(rows, ncols, zero, one)
    particular = [zero] * ncols
    for i, p in enumerate(pivots):
        particular[p] = rref[i][ncols]
    return particular, field_kernel(rows, ncols, zero, one)


# ---------------------------------------------------------------------------
# integer lattice routines
# ---------------------------------------------------------------------------

def hnf_with_transform(mat):
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular, U @ mat == H, pivots positive and
    entries above each pivot reduced modulo it.  Zero rows sink to the bottom.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    H = [[int(x) for x in row] for row in mat]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if H[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            while H[i][col] != 0:
                q = H[r][col] // H[i][col]
                H[r] = [a - q * b for a, b in zip(H[r], H[i])]
                U[r] = [a - q * b for a, b in zip(U[r], U[i])]
                H[r], H[i] = H[i], H[r]
                U[r], U[i] = U[i], U[r]
        if H[r][col] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = H[i][col] // H[r][col]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return H, U


def hnf(mat):
    H, _ = hnf_with_transform(mat)
    return [row for row in H if any(row)]


def integer_kernel(rows):
    """Basis of {x in Z^n : A x = 0} for a rational matrix A (saturated)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    denom = lcm(*(f.denominator if isinstance(f, Fraction) else 1
                  for row in rows for f in row), 1)
    cols = [[int(rows[i][j] * denom) for i in range(m)] for j in range(n)]
    aug = [cols[j] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    H, _ = hnf_with_transform(aug)
    basis = [row[m:] for row in H if not any(row[:m]) and any(row[m:])]
    return basis


def lattice_basis(generators):
    """Canonical basis (HNF rows, ascending pivots) of the Z-span of rational
    row vectors.  Returns a list of Fraction rows."""
    gens = [row for row in generators if any(f != 0 for f in row)]
    if not gens:
        return []
    denom = lcm(*(f.denominator for row in gens for f in row), 1)
    intm = [[int(f * denom) for f in row] for row in gens]
    rows = hnf(intm)
    return [[Fraction(x, denom) for x in row] for row in rows]


def int_solve_exact(basis_rows, target):
    """Integer coordinates of target in the given lattice basis, or None.

    basis_rows and target hold rationals; solves over Q first, then checks
    integrality.
    """
    if not basis_rows:
        return [] if all(f == 0 for f in target) else None
    ncols = len(basis_rows)
    rows = [[basis_rows[j][i] for j in range(ncols)] for i in range(len(target))]
    part, kern = field_solve(rows, list(target), ncols, Fraction(0), Fraction(1))
    if part is None:
        return None
    if kern:
        raise InternalError("lattice basis is not linearly independent")
    if any(f.denominator != 1 for f in part):
        return None
    return [int(f) for f in part]
