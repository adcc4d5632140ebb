import json
import subprocess
import sys

from deltaclose import calg, make_field
from deltaclose import jsonio
from deltaclose.cli import main
from deltaclose.exppoly import ExpPolynomial
from deltaclose.expcoef import ExpCoefficient
from deltaclose.opalg import TranslationPolynomial

from conftest import random_expcoef, random_exppoly, rng_for

SQRT2 = '{"minpoly":["-2/1","0/1","1/1"],"interval":["1/1","2/1"]}'


def run_cli(args):
    r = subprocess.run([sys.executable, "-m", "deltaclose.cli", *args],
                       capture_output=True, text=True)
    return r


def test_group_closure_dyadic_display():
    r = run_cli(["group", "closure", "--generators", '[["1/1"],["1/2"],["1/4"]]'])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["Lambda"] == ["1/4"]
    assert doc["dense"] is False
    assert all(v == "exact-pass" for v in doc["certificates"].values())


def test_group_closure_dense_flag():
    r = run_cli(["group", "closure", "--field", SQRT2,
                 "--generators", '[["1/1"],[{"coords":["0/1","1/1"]}]]'])
    doc = json.loads(r.stdout)
    assert doc["dense"] is True


def test_op_expand_base_case():
    r = run_cli(["op", "expand", "--steps", '[["1/1"],["1/2"]]',
                 "--powers", "[1,1]", "-N", "1"])
    doc = json.loads(r.stdout)
    assert doc["identity"] == "exact-pass"
    assert doc["certificates"]["pigeonhole"] == "exact-pass"
    assert len(doc["objects"]["summands"]) == 2


def test_determinism_byte_identical():
    args = ["op", "expand", "--field", SQRT2,
            "--steps", '[["1/1"],[{"coords":["0/1","1/1"]}]]',
            "--powers", "[2,-1]", "-N", "3"]
    a, b = run_cli(args), run_cli(args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    # also for a command whose report carries floats and random sweeps
    args2 = ["construct", "fm", "-m", "2", "--period", "1"]
    c, d = run_cli(args2), run_cli(args2)
    assert c.stdout == d.stdout


def test_exit_code_malformed():
    r = run_cli(["group", "closure", "--generators", "not json"])
    assert r.returncode == 2


def test_exit_code_not_dense():
    sys_doc = {
        "field": json.loads(SQRT2),
        "dim": 1,
        "steps": [{"h": ["1/1"], "m": 1}],
        "rhs": [{"dim": 1, "terms": []}],
    }
    r = run_cli(["solve", "--system", json.dumps(sys_doc)])
    assert r.returncode == 4


def test_exit_code_inconsistent():
    one = {"dim": 1, "terms": [{"lambda": [[{"coords": ["0/1", "0/1"]},
                                            {"coords": ["0/1", "0/1"]}]],
                                "poly": [{"alpha": [0], "coeff": "1"}]}]}
    sys_doc = {
        "field": json.loads(SQRT2),
        "dim": 1,
        "steps": [{"h": ["1/1"], "m": 1}, {"h": [{"coords": ["0/1", "1/1"]}], "m": 1}],
        "rhs": [one, {"dim": 1, "terms": []}],
    }
    r = run_cli(["solve", "--system", json.dumps(sys_doc)])
    assert r.returncode == 3


def test_exit_code_precondition():
    x2 = {"dim": 1, "terms": [{"lambda": [[{"coords": ["0/1", "0/1"]},
                                           {"coords": ["0/1", "0/1"]}]],
                               "poly": [{"alpha": [2], "coeff": "1"}]}]}
    space = {"dim": 1, "basis": [x2]}
    ops = [{"delta": {"h": ["1/1"], "m": 1}, "power": 1}]
    r = run_cli(["space", "diamond", "--field", SQRT2,
                 "--space", json.dumps(space), "--ops", json.dumps(ops)])
    assert r.returncode == 5


def test_solve_roundtrip_via_cli():
    F = make_field([-2, 0, 1], (1, 2))
    th = F.gen()
    f = ExpPolynomial.monomial(F, 1, (2,)) + \
        ExpPolynomial.exponential(F, 1, (calg(F, th),))
    steps = [((F.one(),), 2), ((th,), 2)]
    sys_doc = {
        "field": json.loads(SQRT2),
        "dim": 1,
        "steps": [{"h": jsonio.encode_vector(h), "m": m} for h, m in steps],
        "rhs": [jsonio.encode_exppoly(f.forward_difference(h, m)) for h, m in steps],
    }
    r = run_cli(["solve", "--system", json.dumps(sys_doc)])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["certificates"]["residual_zero"] == "exact-pass"
    assert doc["certificates"]["kernel_annihilated"] == "exact-pass"
    assert len(doc["objects"]["kernel"]) == 2


def test_kernel_cli():
    steps = json.dumps([{"h": ["1/1"], "m": 2},
                        {"h": [{"coords": ["0/1", "1/1"]}], "m": 2}])
    r = run_cli(["kernel", "--field", SQRT2, "--steps", steps, "--cap", "3"])
    doc = json.loads(r.stdout)
    assert r.returncode == 0
    assert doc["dimension"] == 2


def test_construct_and_verify_grid(tmp_path):
    out = tmp_path / "fm2.json"
    r = run_cli(["construct", "fm", "-m", "2", "--period", "1",
                 "--out", str(out)])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["certificates"]["top_difference_residual"] <= 1e-9
    assert doc["certificates"]["corner"] == "exact-pass"
    csv = tmp_path / "resid.csv"
    r2 = run_cli(["verify", "grid", "--function", str(out),
                  "--op", "delta h=1 m=2", "--grid=-20,20,10001",
                  "--out", str(csv)])
    assert r2.returncode == 0
    doc2 = json.loads(r2.stdout)
    assert doc2["max_residual"] <= 1e-9
    assert csv.exists() and (tmp_path / "resid.csv.meta.json").exists()


def test_full_counterexample_pipeline(tmp_path):
    outer = {"dim": 2, "terms": [{
        "lambda": [[{"coords": ["1/1", "0/1"]}, {"coords": ["0/1", "0/1"]}],
                   [{"coords": ["0/1", "0/1"]}, {"coords": ["0/1", "0/1"]}]],
        "poly": [{"alpha": [0, 0], "coeff": "1"}]}]}
    gens = '[["1/1","0/1"],[{"coords":["0/1","1/1"]},"0/1"],["0/1","1/1"]]'
    bundle = tmp_path / "phf.json"
    r = run_cli(["construct", "prop7", "--field", SQRT2, "--generators", gens,
                 "--outer", json.dumps(outer), "-m", "1", "--out", str(bundle)])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["certificates"]["h_invariance"] == "exact-pass"
    assert doc["certificates"]["membership_residual"] <= 1e-8
    assert doc["certificates"]["corner"] == "exact-pass"
    closure = json.dumps(doc["objects"]["frame"]["closure"])
    space = json.dumps(doc["objects"]["H"])
    orders = json.dumps([
        {"h": ["1/1", "0/1"], "n": 1},
        {"h": [{"coords": ["0/1", "1/1"]}, "0/1"], "n": 1},
        {"h": ["0/1", "1/1"], "n": 1}])
    lambdas = json.dumps([["0/1", "0/1"], ["0/1", "1/1"]])
    r2 = run_cli(["fit", "cosets", "--function", str(bundle),
                  "--closure", closure, "--space", space,
                  "--orders", orders, "--lambdas", lambdas])
    assert r2.returncode == 0
    doc2 = json.loads(r2.stdout)
    assert doc2["certificates"]["within_tolerance"] == "exact-pass"
    assert all(s["residual"] <= 1e-8 for s in doc2["objects"]["slices"])


def test_heuristic_float_closure():
    r = run_cli(["group", "closure", "--generators", "[[1.0],[0.3333333333]]"])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["heuristic"]["mode"] == "heuristic"


def test_prop7_hyperplane_override():
    outer = {"dim": 2, "terms": [{
        "lambda": [[{"coords": ["1/1", "0/1"]}, {"coords": ["0/1", "0/1"]}],
                   [{"coords": ["0/1", "0/1"]}, {"coords": ["0/1", "0/1"]}]],
        "poly": [{"alpha": [0, 0], "coeff": "1"}]}]}
    gens = '[["1/1","0/1"],[{"coords":["0/1","1/1"]},"0/1"],["0/1","1/1"]]'
    r = run_cli(["construct", "prop7", "--field", SQRT2, "--generators", gens,
                 "--outer", json.dumps(outer), "-m", "1",
                 "--hyperplane", '[["1/1","0/1"]]'])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["certificates"]["h_invariance"] == "exact-pass"
    # a hyperplane that misses V is rejected as malformed input
    r2 = run_cli(["construct", "prop7", "--field", SQRT2, "--generators", gens,
                  "--outer", json.dumps(outer), "-m", "1",
                  "--hyperplane", '[["0/1","1/1"]]'])
    assert r2.returncode == 2


def test_fit_cosets_dense_gate():
    e = {"dim": 1, "terms": [{"lambda": [[{"coords": ["0/1", "0/1"]},
                                          {"coords": ["0/1", "0/1"]}]],
                              "poly": [{"alpha": [0], "coeff": "1"}]}]}
    closure = {"generators": [["1/1"], [{"coords": ["0/1", "1/1"]}]]}
    space = {"dim": 1, "basis": [e]}
    r = run_cli(["fit", "cosets", "--field", SQRT2,
                 "--function", json.dumps({"kind": "exppoly", "poly": e}),
                 "--closure", json.dumps(closure), "--space", json.dumps(space),
                 "--orders", '[{"h":["1/1"],"n":1}]', "--lambdas", '[["0/1"]]'])
    assert r.returncode == 4


def test_json_roundtrips():
    rng = rng_for("jsonio")
    F = make_field([-2, 0, 1], (1, 2))
    assert jsonio.decode_field(jsonio.encode_field(F)) == F
    for _ in range(10):
        c = random_expcoef(rng, F)
        assert jsonio.decode_expcoef(F, jsonio.encode_expcoef(c)) == c
        f = random_exppoly(rng, F, dim=2, max_freqs=2, max_deg=2)
        assert jsonio.decode_exppoly(F, jsonio.encode_exppoly(f)) == f
    D = TranslationPolynomial.delta(F, (F.gen(),), 2)
    assert jsonio.decode_op(F, jsonio.encode_op(D)) == D
    frac_den = ExpCoefficient.one(F) / (
        ExpCoefficient.exponential(F, calg(F, F.gen())) - 1)
    assert jsonio.decode_expcoef(F, jsonio.encode_expcoef(frac_den)) == frac_den


def test_function_tree_roundtrip():
    from deltaclose.construct import make_fm
    F = make_field([-2, 0, 1], (1, 2))
    fm = make_fm(3, F.one())
    doc = jsonio.encode_function(fm)
    back = jsonio.decode_function(F, doc)
    import numpy as np
    xs = np.linspace(-5, 5, 101)[:, None]
    assert np.max(np.abs(fm.eval_array(xs) - back.eval_array(xs))) == 0


def test_main_entrypoint_in_process(capsys):
    rc = main(["group", "closure", "--generators", '[["1/1"],["1/2"]]'])
    assert rc == 0
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["Lambda"] == ["1/2"]
