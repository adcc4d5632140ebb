"""Command-line interface.

Every command prints one JSON document to standard output with a
``certificates`` block naming each checked property and its status.  Output
is deterministic: keys sorted, scalars as exact "p/q" strings, fixed list
orders.  Exit codes: 0 success / verified, 2 malformed input, 3 inconsistent
system, 4 density gate (dense needed or dense forbidden), 5 subspace
precondition not invariant, 1 internal failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import jsonio
from .construct import (
    corner_witness,
    difference_values,
    grid_membership_residual,
    make_counterexample,
    make_fm,
    make_triangle_wave,
)
from .errors import (
    DeltaCloseError,
    DenseGroup,
    Inconsistent,
    MalformedInput,
    NotDense,
    PreconditionNotInvariant,
)
from .groups import (
    build_frame,
    dual_witness,
    group_closure,
    heuristic_density_report,
    verify_orthogonality,
    verify_reconstruction,
    witness_checks,
)
from .opalg import (
    TranslationPolynomial,
    divisibility_factor,
    telescope_expansion,
    telescope_pigeonhole_ok,
    telescope_total,
)
from .qmath import frac
from .scalar import NumberField, rational_field
from .solver import (
    DifferenceSystem,
    fit_coset_slices,
    polynomial_kernel,
    solve_difference_system,
)
from .subspace import invariant_closure, saturate


def _load_json(value: str):
    """Inline JSON, or the contents of a file when prefixed with @ or when
    the value names an existing .json file."""
    if value.startswith("@"):
        path = value[1:]
        with open(path) as fh:
            return json.load(fh)
    if value.endswith(".json") and os.path.exists(value):
        with open(value) as fh:
            return json.load(fh)
    try:
        return json.loads(value)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"argument is neither a file nor JSON: {e}") from e


def _field_from_args(args) -> NumberField:
    if getattr(args, "field", None):
        return jsonio.decode_field(_load_json(args.field))
    return rational_field()


def _scalar_display(x) -> str:
    coords = x.coords
    if all(c == 0 for c in coords[1:]):
        return jsonio.frac_str(coords[0])
    bits = []
    for i, c in enumerate(coords):
        if c == 0:
            continue
        if i == 0:
            bits.append(jsonio.frac_str(c))
        elif i == 1:
            bits.append(f"{jsonio.frac_str(c)}*theta")
        else:
            bits.append(f"{jsonio.frac_str(c)}*theta^{i}")
    return " + ".join(bits) if bits else "0/1"


def _vector_display(v):
    if len(v) == 1:
        return _scalar_display(v[0])
    return [_scalar_display(x) for x in v]


def _emit(args, doc) -> int:
    text = jsonio.dumps(doc)
    print(text)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0


def _status(ok: bool) -> str:
    return "exact-pass" if ok else "fail"


# -- group closure -----------------------------------------------------------

def cmd_group_closure(args) -> int:
    field = _field_from_args(args)
    gens_raw = _load_json(args.generators)
    if not isinstance(gens_raw, list) or not gens_raw:
        raise MalformedInput("generators must be a non-empty JSON list")
    if any(_has_float(g) for g in gens_raw):
        report = heuristic_density_report(
            [[float(x) for x in (g if isinstance(g, list) else [g])] for g in gens_raw],
            height_cap=20)
        return _emit(args, {"version": jsonio.SCHEMA_VERSION, "heuristic": report})
    gens = [jsonio.decode_vector(field, g if isinstance(g, list) else [g])
            for g in gens_raw]
    c = group_closure(gens, field=field)
    witness = dual_witness(gens, field)
    consistent = (witness is None) == c.dense
    if witness is not None:
        consistent = consistent and witness_checks(witness[0], gens, field)
    doc = jsonio.manifest(field, {"closure": jsonio.encode_closure(c)}, {
        "reconstruction": _status(verify_reconstruction(c)),
        "orthogonality": _status(verify_orthogonality(c)),
        "duality_witness": _status(consistent),
    })
    doc["dense"] = c.dense
    doc["V"] = [_vector_display(v) for v in c.v_basis]
    doc["Lambda"] = [_vector_display(v) for v in c.lambda_basis]
    return _emit(args, doc)


def _has_float(g):
    vals = g if isinstance(g, list) else [g]
    return any(isinstance(x, float) and not float(x).is_integer() for x in vals)


# -- operator commands ---------------------------------------------------------

def cmd_op_expand(args) -> int:
    field = _field_from_args(args)
    steps_raw = _load_json(args.steps)
    powers = _load_json(args.powers)
    steps = [jsonio.decode_vector(field, s if isinstance(s, list) else [s])
             for s in steps_raw]
    summands = telescope_expansion(field, steps, powers, args.N)
    total = telescope_total(field, steps, powers, args.N)
    acc = TranslationPolynomial.zero(field, len(steps[0]))
    for s in summands:
        acc = acc + s.op
    identity_ok = acc == total
    doc = jsonio.manifest(field, {
        "summands": [{"alpha": list(s.alpha), "op": jsonio.encode_op(s.op)}
                     for s in summands],
        "total": jsonio.encode_op(total),
    }, {
        "pigeonhole": _status(telescope_pigeonhole_ok(summands, args.N, len(steps))),
    })
    doc["identity"] = "exact-pass" if identity_ok else "fail"
    return _emit(args, doc)


def cmd_op_divide(args) -> int:
    field = _field_from_args(args)
    h = jsonio.decode_vector(field, _load_json(args.step))
    Q = divisibility_factor(field, h, args.p, args.n)
    dim = len(h)
    tau_ph = TranslationPolynomial.tau(field, tuple(x * args.p for x in h), dim)
    tau_h = TranslationPolynomial.tau(field, h, dim)
    one = TranslationPolynomial.identity(field, dim)
    identity_ok = (tau_ph - one) ** args.n == Q * ((tau_h - one) ** args.n)
    doc = jsonio.manifest(field, {"factor": jsonio.encode_op(Q)})
    doc["identity"] = "exact-pass" if identity_ok else "fail"
    return _emit(args, doc)


# -- subspace ----------------------------------------------------------------

def _decode_ops(field, ops_raw):
    ops = []
    for entry in ops_raw:
        power = int(entry.get("power", 1))
        if "delta" in entry:
            spec = entry["delta"]
            h = jsonio.decode_vector(field, spec["h"])
            m = int(spec.get("m", 1))
            L = TranslationPolynomial.delta(field, h, m, dim=len(h))
        elif "op" in entry:
            L = jsonio.decode_op(field, entry["op"])
        else:
            raise MalformedInput("operator entry needs 'delta' or 'op'")
        ops.append((L, power))
    return ops


def cmd_space_diamond(args) -> int:
    field = _field_from_args(args)
    V = jsonio.decode_space(field, _load_json(args.space))
    ops = _decode_ops(field, _load_json(args.ops))
    closed = invariant_closure(V, ops)
    perm = invariant_closure(V, list(reversed(ops)))
    sat = saturate(V, [L for L, _ in ops], cap=64)
    doc = jsonio.manifest(field, {"space": jsonio.encode_space(closed)}, {
        "contains_input": _status(closed.contains_all(V.basis_polynomials())),
        "invariant": _status(all(closed.is_invariant_under(L) for L, _ in ops)),
        "relabeling_independent": _status(closed.equals(perm)),
        "saturation_agrees": _status(not sat.capped and sat.space.equals(closed)),
    })
    doc["dimension"] = closed.dim
    return _emit(args, doc)


# -- solver -------------------------------------------------------------------

def _decode_system(obj) -> DifferenceSystem:
    try:
        field = jsonio.decode_field(obj["field"])
        dim = int(obj["dim"])
        steps = [(jsonio.decode_vector(field, e["h"]), int(e["m"]))
                 for e in obj["steps"]]
        rhs = [jsonio.decode_exppoly(field, g) for g in obj["rhs"]]
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInput(f"bad system document: {e}") from e
    return DifferenceSystem(field, dim, steps, rhs)


def cmd_solve(args) -> int:
    sys_doc = _load_json(args.system)
    system = _decode_system(sys_doc)
    sol = solve_difference_system(system)
    residual_ok = all(sol.particular.forward_difference(h, m) == g
                      for (h, m), g in zip(system.steps, system.rhs))
    kernel_ok = all(k.forward_difference(h, m).is_zero()
                    for k in sol.kernel_basis for h, m in system.steps)
    doc = jsonio.manifest(system.field, {
        "particular": jsonio.encode_exppoly(sol.particular),
        "kernel": [jsonio.encode_exppoly(k) for k in sol.kernel_basis],
        "ansatz": [{"lambda": [jsonio.encode_complex(z) for z in fr],
                    "degree_bound": b} for fr, b in sol.ansatz],
    }, {
        "residual_zero": _status(residual_ok),
        "kernel_annihilated": _status(kernel_ok),
    })
    return _emit(args, doc)


def cmd_kernel(args) -> int:
    field = _field_from_args(args)
    steps_raw = _load_json(args.steps)
    steps = [(jsonio.decode_vector(field, e["h"]), int(e["m"])) for e in steps_raw]
    dim = len(steps[0][0])
    kern = polynomial_kernel(field, dim, steps, args.cap)
    ok = all(k.forward_difference(h, m).is_zero() for k in kern for h, m in steps)
    doc = jsonio.manifest(field, {
        "kernel": [jsonio.encode_exppoly(k) for k in kern],
    }, {"kernel_annihilated": _status(ok)})
    doc["dimension"] = len(kern)
    return _emit(args, doc)


# -- constructions --------------------------------------------------------------

def cmd_construct_triangle(args) -> int:
    field = _field_from_args(args)
    period = field.rational(frac(args.period))
    wave = make_triangle_wave(period)
    half = float(period) / 2
    rng = np.random.default_rng(args.seed)
    xs = rng.uniform(-10 * float(period), 10 * float(period), 1000)
    per_resid = float(np.max(np.abs(
        wave.eval_array(xs[:, None]) - wave.eval_array((xs + float(period))[:, None]))))
    doc = jsonio.manifest(field, {"function": jsonio.encode_function(wave)}, {
        "vanishes_at_zero": _status(wave.eval_float((0.0,)) == 0),
        "peak_at_half_period": _status(abs(wave.eval_float((half,)) - half) < 1e-15),
        "periodicity_residual": per_resid,
    })
    return _emit(args, doc)


def cmd_construct_fm(args) -> int:
    field = _field_from_args(args)
    period = field.rational(frac(args.period))
    fm = make_fm(args.m, period)
    wave = make_triangle_wave(period)
    rng = np.random.default_rng(args.seed)
    xs = rng.uniform(-20 * float(period), 20 * float(period), 10000)[:, None]
    top = float(np.max(np.abs(difference_values(fm, (float(period),), args.m, xs))))
    below = difference_values(fm, (float(period),), args.m - 1, xs) if args.m > 1 \
        else fm.eval_array(xs)
    wave_resid = float(np.max(np.abs(below - wave.eval_array(xs))))
    witness = corner_witness(fm, [(0.6 * float(period), (args.m + 2) * float(period))]) \
        if args.m > 1 else corner_witness(fm, [(-0.4 * float(period), 0.4 * float(period))])
    doc = jsonio.manifest(field, {"function": jsonio.encode_function(fm)}, {
        "top_difference_residual": top,
        "tower_step_residual": wave_resid,
        "corner": _status(witness is not None),
    })
    if witness:
        doc["corner_witness"] = {"point": list(witness.point), "gap": witness.gap,
                                 "direction": list(witness.direction)}
    return _emit(args, doc)


def cmd_construct_prop7(args) -> int:
    field = _field_from_args(args)
    gens_raw = _load_json(args.generators)
    gens = [jsonio.decode_vector(field, g if isinstance(g, list) else [g])
            for g in gens_raw]
    closure = group_closure(gens, field=field)
    frame = build_frame(closure)
    if args.hyperplane:
        vt = [jsonio.decode_vector(field, v) for v in _load_json(args.hyperplane)]
        frame = _frame_with_hyperplane(closure, vt)
    outer = jsonio.decode_exppoly(field, _load_json(args.outer))
    phi, H = make_counterexample(frame, outer, args.m)
    d = closure.dim
    deltas = [TranslationPolynomial.delta(field, h, 1, dim=d) for h in gens]
    inv_ok = all(H.is_invariant_under(D) for D in deltas)
    pts = _default_grid_points(d, 41)
    resid = 0.0
    for h in gens:
        dv = difference_values(phi, [float(x) for x in h], args.m, pts)
        resid = max(resid, grid_membership_residual(dv, pts, H))
    wdir = tuple(float(x) for x in frame.w)
    witness = corner_witness(phi, [(-1.4, 1.4)] * d, directions=[wdir])
    doc = jsonio.manifest(field, {
        "phi": jsonio.encode_function(phi),
        "H": jsonio.encode_space(H),
        "frame": jsonio.encode_frame(frame),
    }, {
        "h_invariance": _status(inv_ok),
        "membership_residual": resid,
        "membership": _status(resid <= args.tolerance_atol * 1e4 + 1e-8),
        "corner": _status(witness is not None),
    })
    if witness:
        doc["corner_witness"] = {"point": list(witness.point), "gap": witness.gap,
                                 "direction": list(witness.direction)}
    return _emit(args, doc)


def _frame_with_hyperplane(closure, vt_rows):
    """Frame from a user-supplied hyperplane basis (must contain V and keep
    the lattice levels discrete)."""
    from .errors import FrameInvalid, NonIntegralRatio
    from .groups import HyperplaneFrame, project_onto
    from .linalg import field_kernel, field_rref

    field, dim = closure.field, closure.dim
    rows, _ = field_rref([list(v) for v in vt_rows])
    if len(rows) != dim - 1:
        raise FrameInvalid("hyperplane override must have dimension d-1")
    for v in closure.v_basis:
        resid = tuple(a - b for a, b in zip(v, project_onto([tuple(r) for r in rows], v)))
        if any(not x.is_zero() for x in resid):
            raise FrameInvalid("hyperplane override does not contain V")
    normal = field_kernel(rows, dim, field.zero(), field.one())
    w = tuple(normal[0])
    frame = HyperplaneFrame(field, dim, [tuple(r) for r in rows], w,
                            field.one(), [], closure)
    svals = [frame.s_value(l) for l in closure.lambda_basis]
    nonzero = [s for s in svals if not s.is_zero()]
    if nonzero:
        base = nonzero[0]
        qs = []
        for s in nonzero:
            ratio = s / base
            if not ratio.is_rational():
                raise NonIntegralRatio("lattice levels are not commensurable")
            qs.append(ratio.as_rational())
        from math import gcd, lcm
        den = lcm(*(q.denominator for q in qs), 1)
        num = 0
        for q in qs:
            num = gcd(num, abs(int(q * den)))
        r = base * Fraction(num, den)
        if r.sign() < 0:
            r = -r
    else:
        r = field.one()
    p = []
    for g in closure.generators:
        ratio = frame.s_value(g) / r
        if not ratio.is_rational() or ratio.as_rational().denominator != 1:
            raise NonIntegralRatio("generator level is not an integer multiple of r")
        p.append(int(ratio.as_rational()))
    return HyperplaneFrame(field, dim, frame.vt_basis, w, r, p, closure)


def _default_grid_points(d: int, per_axis: int) -> np.ndarray:
    xs = np.linspace(-2.0, 2.0, per_axis)
    mesh = np.meshgrid(*([xs] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


# -- verification --------------------------------------------------------------

def _parse_grid(spec: str):
    axes = []
    for part in spec.split(";"):
        lo, hi, n = part.split(",")
        axes.append((float(lo), float(hi), int(n)))
    return axes


def _parse_op_spec(field, text: str, dim: int):
    toks = text.split()
    if not toks or toks[0] != "delta":
        raise MalformedInput("only 'delta h=<...> m=<k>' operators are supported")
    h = None
    m = 1
    for tok in toks[1:]:
        key, _, val = tok.partition("=")
        if key == "h":
            parsed = json.loads(val)
            if not isinstance(parsed, list):
                parsed = [parsed]
            h = [frac(str(x)) if not isinstance(x, str) else frac(x) for x in parsed]
        elif key == "m":
            m = int(val)
        else:
            raise MalformedInput(f"unknown operator token {tok!r}")
    if h is None:
        raise MalformedInput("operator needs h=<step>")
    if len(h) != dim:
        raise MalformedInput("operator step length differs from function dimension")
    return [float(x) for x in h], m


def cmd_verify_grid(args) -> int:
    tree = _load_json(args.function)
    if "objects" in tree:
        field = jsonio.decode_field(tree["field"])
        fn_doc = tree["objects"].get("function") or tree["objects"].get("phi")
        if fn_doc is None:
            raise MalformedInput("manifest has no 'function' or 'phi' object")
    else:
        field = _field_from_args(args)
        fn_doc = tree
    f = jsonio.decode_function(field, fn_doc)
    axes = _parse_grid(args.grid)
    if len(axes) != f.dim:
        raise MalformedInput("grid dimension differs from function dimension")
    coords = [np.linspace(lo, hi, n) for lo, hi, n in axes]
    mesh = np.meshgrid(*coords, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    h, m = _parse_op_spec(field, args.op, f.dim)
    vals = difference_values(f, h, m, pts)
    max_resid = float(np.max(np.abs(vals)))
    tol = args.tolerance_atol + args.tolerance_rtol * max(
        1.0, float(np.max(np.abs(f.eval_array(pts)))))
    doc = {"version": jsonio.SCHEMA_VERSION,
           "max_residual": max_resid,
           "tolerance": tol,
           "certificates": {"residual_within_tolerance": _status(max_resid <= tol)}}
    if args.out:
        _write_grid_csv(args.out, axes, pts, vals)
        doc["csv"] = args.out
    print(jsonio.dumps(doc))
    return 0 if max_resid <= tol else 1


def _write_grid_csv(path: str, axes, pts: np.ndarray, vals: np.ndarray):
    with open(path, "w") as fh:
        cols = [f"x{i}" for i in range(pts.shape[1])]
        fh.write(",".join(cols + ["re", "im"]) + "\n")
        for p, v in zip(pts, vals):
            fh.write(",".join(repr(float(x)) for x in p) +
                     f",{v.real!r},{v.imag!r}\n")
    meta = {"axes": [{"min": lo, "max": hi, "count": n} for lo, hi, n in axes]}
    with open(path + ".meta.json", "w") as fh:
        fh.write(jsonio.dumps(meta) + "\n")


def cmd_fit_cosets(args) -> int:
    fn_doc = _load_json(args.function)
    if "objects" in fn_doc:
        field = jsonio.decode_field(fn_doc["field"])
        fn_doc = fn_doc["objects"].get("function") or fn_doc["objects"].get("phi")
    else:
        field = _field_from_args(args)
    f = jsonio.decode_function(field, fn_doc)
    closure = jsonio.decode_closure(field, _load_json(args.closure))
    H = jsonio.decode_space(field, _load_json(args.space))
    orders_raw = _load_json(args.orders)
    orders = []
    for e in orders_raw:
        h = jsonio.decode_vector(field, e["h"])
        orders.append((h, int(e["n"]), int(e.get("m", e["n"]))))
    lambdas = [jsonio.decode_vector(field, l) for l in _load_json(args.lambdas)]
    report = fit_coset_slices(f, closure, orders, H, lambdas,
                              grid_count=args.grid_count,
                              grid_halfwidth=args.grid_halfwidth)
    tol = args.tolerance_atol
    worst = max((s.residual for s in report.slices), default=0.0)
    doc = jsonio.manifest(field, {
        "slices": [{
            "lambda": jsonio.encode_vector(s.lattice_point),
            "residual": s.residual,
            "coefficients": [[c.real, c.imag] for c in s.coefficients],
            "function": jsonio.encode_function(s.function),
        } for s in report.slices],
        "completion_steps": [jsonio.encode_vector(v)
                             for v in report.completion_steps],
    }, {
        "held_out_residual": worst,
        "within_tolerance": _status(worst <= tol),
    })
    doc["condition"] = report.condition
    doc["candidate_dimension"] = report.candidate_dim
    print(jsonio.dumps(doc))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(jsonio.dumps(doc) + "\n")
    return 0 if worst <= tol else 1


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="deltaclose",
        description="Exact forward-difference operator algebra, subgroup "
                    "closures, and exponential-polynomial reconstruction.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fit_tol=False):
        p.add_argument("--field", help="field JSON {'minpoly': [...], 'interval': [...]}")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tolerance-atol", type=float,
                       default=1e-8 if fit_tol else 1e-12, dest="tolerance_atol")
        p.add_argument("--tolerance-rtol", type=float, default=1e-9,
                       dest="tolerance_rtol")
        p.add_argument("--out", help="also write the JSON document to this path")

    group = sub.add_parser("group").add_subparsers(dest="sub", required=True)
    p = group.add_parser("closure")
    common(p)
    p.add_argument("--generators", required=True)
    p.set_defaults(handler=cmd_group_closure)

    op = sub.add_parser("op").add_subparsers(dest="sub", required=True)
    p = op.add_parser("expand")
    common(p)
    p.add_argument("--steps", required=True)
    p.add_argument("--powers", required=True)
    p.add_argument("-N", type=int, required=True)
    p.set_defaults(handler=cmd_op_expand)
    p = op.add_parser("divide")
    common(p)
    p.add_argument("--step", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(handler=cmd_op_divide)

    space = sub.add_parser("space").add_subparsers(dest="sub", required=True)
    p = space.add_parser("diamond")
    common(p)
    p.add_argument("--space", required=True)
    p.add_argument("--ops", required=True)
    p.set_defaults(handler=cmd_space_diamond)

    p = sub.add_parser("solve")
    common(p)
    p.add_argument("--system", required=True)
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("kernel")
    common(p)
    p.add_argument("--steps", required=True)
    p.add_argument("--cap", type=int, required=True)
    p.set_defaults(handler=cmd_kernel)

    cons = sub.add_parser("construct").add_subparsers(dest="sub", required=True)
    p = cons.add_parser("triangle")
    common(p)
    p.add_argument("--period", default="1")
    p.set_defaults(handler=cmd_construct_triangle)
    p = cons.add_parser("fm")
    common(p)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--period", default="1")
    p.set_defaults(handler=cmd_construct_fm)
    p = cons.add_parser("prop7")
    common(p)
    p.add_argument("--generators", required=True)
    p.add_argument("--outer", required=True)
    p.add_argument("-m", type=int, default=1)
    p.add_argument("--hyperplane", help="optional hyperplane basis override")
    p.set_defaults(handler=cmd_construct_prop7)

    ver = sub.add_parser("verify").add_subparsers(dest="sub", required=True)
    p = ver.add_parser("grid")
    common(p, fit_tol=True)
    p.add_argument("--function", required=True)
    p.add_argument("--op", required=True)
    p.add_argument("--grid", required=True)
    p.set_defaults(handler=cmd_verify_grid)

    fit = sub.add_parser("fit").add_subparsers(dest="sub", required=True)
    p = fit.add_parser("cosets")
    common(p, fit_tol=True)
    p.add_argument("--function", required=True)
    p.add_argument("--closure", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--orders", required=True)
    p.add_argument("--lambdas", required=True)
    p.add_argument("--grid-count", type=int, default=16, dest="grid_count")
    p.add_argument("--grid-halfwidth", type=float, default=2.0, dest="grid_halfwidth")
    p.set_defaults(handler=cmd_fit_cosets)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.handler(args)
    except MalformedInput as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Inconsistent as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (NotDense, DenseGroup) as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except PreconditionNotInvariant as e:
        print(f"error: {e}", file=sys.stderr)
        return 5
    except DeltaCloseError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
