"""Canonical JSON encodings for every document the CLI reads or writes.

Scalars are strings "p/q" so round trips are loss-free; the field is declared
once per document; lists are emitted in canonical (sorted) order so identical
inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .construct import (
    AntiDifference,
    CosetBuild,
    EvaluableFunction,
    ExpPolyLeaf,
    Project,
    Scale,
    Sum,
    TriangleWave,
)
from .errors import MalformedInput
from .expcoef import ExpCoefficient
from .exppoly import ExpPolynomial
from .groups import GroupClosure, HyperplaneFrame
from .opalg import TranslationPolynomial
from .scalar import AlgebraicScalar, ComplexAlgebraic, NumberField
from .subspace import FunctionSubspace

SCHEMA_VERSION = "1"


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise MalformedInput(f"bad rational {s!r}") from e


def encode_field(field: NumberField) -> dict:
    return {"minpoly": [frac_str(c) for c in field.minpoly],
            "interval": [frac_str(field._init_interval[0]),
                         frac_str(field._init_interval[1])]}


def decode_field(obj) -> NumberField:
    try:
        return NumberField([parse_frac(c) for c in obj["minpoly"]],
                           (parse_frac(obj["interval"][0]),
                            parse_frac(obj["interval"][1])))
    except (KeyError, TypeError, IndexError) as e:
        raise MalformedInput("field document needs 'minpoly' and 'interval'") from e


def encode_scalar(x: AlgebraicScalar) -> dict:
    return {"coords": [frac_str(c) for c in x.coords]}


def decode_scalar(field: NumberField, obj) -> AlgebraicScalar:
    if isinstance(obj, str):
        return field.rational(parse_frac(obj))
    if isinstance(obj, (int, float)):
        if isinstance(obj, float) and not obj.is_integer():
            raise MalformedInput("float scalars are not exact; pass 'p/q' strings")
        return field.rational(int(obj))
    try:
        return field.element([parse_frac(c) for c in obj["coords"]])
    except (KeyError, TypeError) as e:
        raise MalformedInput(f"bad scalar {obj!r}") from e


def encode_complex(z: ComplexAlgebraic) -> list:
    return [encode_scalar(z.re), encode_scalar(z.im)]


def decode_complex(field: NumberField, obj) -> ComplexAlgebraic:
    if isinstance(obj, (str, int)):
        return ComplexAlgebraic(decode_scalar(field, obj))
    if isinstance(obj, list) and len(obj) == 2:
        return ComplexAlgebraic(decode_scalar(field, obj[0]),
                                decode_scalar(field, obj[1]))
    raise MalformedInput(f"bad complex scalar {obj!r}")


def encode_vector(v) -> list:
    return [encode_scalar(x) for x in v]


def decode_vector(field: NumberField, obj) -> tuple:
    if not isinstance(obj, list):
        raise MalformedInput(f"bad vector {obj!r}")
    return tuple(decode_scalar(field, x) for x in obj)


def encode_expcoef(c: ExpCoefficient) -> dict:
    out = {"terms": [{"mu": encode_complex(mu), "c": encode_complex(v)}
                     for mu, v in c.terms_sorted()]}
    if not c.has_unit_den:
        out["den"] = [{"mu": encode_complex(mu), "c": encode_complex(v)}
                      for mu, v in c.den_terms_sorted()]
    return out


def decode_expcoef(field: NumberField, obj) -> ExpCoefficient:
    if isinstance(obj, (str, int)):
        return ExpCoefficient.scalar(field, parse_frac(obj) if isinstance(obj, str) else obj)
    try:
        num = {}
        for t in obj["terms"]:
            num[decode_complex(field, t["mu"])] = decode_complex(field, t["c"])
        den = None
        if "den" in obj:
            den = {}
            for t in obj["den"]:
                den[decode_complex(field, t["mu"])] = decode_complex(field, t["c"])
        return ExpCoefficient(field, num, den)
    except (KeyError, TypeError) as e:
        raise MalformedInput(f"bad exponential coefficient {obj!r}") from e


def encode_exppoly(f: ExpPolynomial) -> dict:
    terms = []
    for freq in f.frequencies():
        poly = f.terms[freq]
        entry = {"lambda": [encode_complex(z) for z in freq],
                 "poly": [{"alpha": list(alpha), "coeff": encode_expcoef(c)}
                          for alpha, c in sorted(poly.items(),
                                                 key=lambda kv: (sum(kv[0]), kv[0]))]}
        terms.append(entry)
    return {"dim": f.dim, "terms": terms}


def decode_exppoly(field: NumberField, obj) -> ExpPolynomial:
    try:
        dim = int(obj["dim"])
        out = ExpPolynomial.zero(field, dim)
        for entry in obj["terms"]:
            freq = tuple(decode_complex(field, z) for z in entry["lambda"])
            for mono in entry["poly"]:
                alpha = tuple(int(a) for a in mono["alpha"])
                coeff = decode_expcoef(field, mono["coeff"])
                out = out + ExpPolynomial.monomial(field, dim, alpha, coeff, freq=freq)
        return out
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInput(f"bad exponential polynomial: {e}") from e


def encode_op(T: TranslationPolynomial) -> dict:
    return {"dim": T.dim,
            "terms": [{"shift": encode_vector(y), "coeff": encode_expcoef(T.terms[y])}
                      for y in T.shifts_sorted()]}


def decode_op(field: NumberField, obj) -> TranslationPolynomial:
    try:
        dim = int(obj["dim"])
        terms = {}
        for t in obj["terms"]:
            y = decode_vector(field, t["shift"])
            terms[y] = decode_expcoef(field, t["coeff"])
        return TranslationPolynomial(field, dim, terms)
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInput(f"bad translation operator: {e}") from e


def encode_space(V: FunctionSubspace) -> dict:
    return {"dim": V.dim_ambient,
            "basis": [encode_exppoly(b) for b in V.basis_polynomials()]}


def decode_space(field: NumberField, obj) -> FunctionSubspace:
    try:
        dim = int(obj["dim"])
        basis = [decode_exppoly(field, b) for b in obj["basis"]]
        return FunctionSubspace.span(basis, dim=dim, field=field)
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInput(f"bad subspace document: {e}") from e


def encode_closure(c: GroupClosure) -> dict:
    return {"dense": c.dense,
            "generators": [encode_vector(g) for g in c.generators],
            "V": [encode_vector(v) for v in c.v_basis],
            "Lambda": [encode_vector(l) for l in c.lambda_basis]}


def decode_closure(field: NumberField, obj) -> GroupClosure:
    from .groups import group_closure

    try:
        gens = [decode_vector(field, g) for g in obj["generators"]]
    except (KeyError, TypeError) as e:
        raise MalformedInput("closure document needs 'generators'") from e
    return group_closure(gens, field=field)


def encode_frame(fr: HyperplaneFrame) -> dict:
    return {"vt": [encode_vector(v) for v in fr.vt_basis],
            "w": encode_vector(fr.w),
            "r": encode_scalar(fr.r),
            "p": list(fr.p),
            "closure": encode_closure(fr.closure)}


def decode_frame(field: NumberField, obj) -> HyperplaneFrame:
    try:
        closure = decode_closure(field, obj["closure"])
        vt = [decode_vector(field, v) for v in obj["vt"]]
        w = decode_vector(field, obj["w"])
        r = decode_scalar(field, obj["r"])
        p = [int(x) for x in obj["p"]]
        return HyperplaneFrame(field, closure.dim, vt, w, r, p, closure)
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInput(f"bad frame document: {e}") from e


def encode_function(f: EvaluableFunction) -> dict:
    if isinstance(f, ExpPolyLeaf):
        return {"kind": "exppoly", "poly": encode_exppoly(f.poly)}
    if isinstance(f, TriangleWave):
        return {"kind": "triangle_wave", "period": encode_scalar(f.period)}
    if isinstance(f, AntiDifference):
        return {"kind": "antidifference", "step": encode_scalar(f.step),
                "child": encode_function(f.child)}
    if isinstance(f, Sum):
        return {"kind": "sum", "children": [encode_function(c) for c in f.children]}
    if isinstance(f, Scale):
        if isinstance(f.factor, AlgebraicScalar):
            factor = {"scalar": encode_scalar(f.factor)}
        else:
            z = complex(f.factor)
            factor = {"complex": [z.real, z.imag]}
        return {"kind": "scale", "factor": factor, "child": encode_function(f.child)}
    if isinstance(f, Project):
        return {"kind": "project",
                "matrix": [encode_vector(row) for row in f.matrix],
                "child": encode_function(f.child)}
    if isinstance(f, CosetBuild):
        return {"kind": "coset", "frame": encode_frame(f.frame),
                "outer": encode_exppoly(f.outer),
                "inner": encode_function(f.inner)}
    raise MalformedInput(f"cannot encode function node {type(f).__name__}")


def decode_function(field: NumberField, obj) -> EvaluableFunction:
    try:
        kind = obj["kind"]
        if kind == "exppoly":
            return ExpPolyLeaf(decode_exppoly(field, obj["poly"]))
        if kind == "triangle_wave":
            return TriangleWave(decode_scalar(field, obj["period"]))
        if kind == "antidifference":
            return AntiDifference(decode_function(field, obj["child"]),
                                  decode_scalar(field, obj["step"]))
        if kind == "sum":
            return Sum([decode_function(field, c) for c in obj["children"]])
        if kind == "scale":
            fobj = obj["factor"]
            if "scalar" in fobj:
                factor = decode_scalar(field, fobj["scalar"])
            else:
                factor = complex(fobj["complex"][0], fobj["complex"][1])
            return Scale(factor, decode_function(field, obj["child"]))
        if kind == "project":
            matrix = [decode_vector(field, row) for row in obj["matrix"]]
            return Project(decode_function(field, obj["child"]), matrix)
        if kind == "coset":
            frame = decode_frame(field, obj["frame"])
            outer = decode_exppoly(field, obj["outer"])
            inner = decode_function(field, obj["inner"])
            return CosetBuild(frame, outer, inner)
        raise MalformedInput(f"unknown function node kind {kind!r}")
    except (KeyError, TypeError) as e:
        raise MalformedInput(f"bad function document: {e}") from e


def manifest(field: NumberField, objects: dict, certificates: dict | None = None) -> dict:
    doc = {"version": SCHEMA_VERSION, "field": encode_field(field),
           "objects": objects}
    if certificates is not None:
        doc["certificates"] = certificates
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ": "), indent=1)
