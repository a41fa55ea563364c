import io
import json
import subprocess
import sys

import jsonschema
import pytest

from superfermat import FinitePresentation, SuperPoly, load_schema
from superfermat.cli import Session, main
from superfermat.parser import parse_superpoly

SCHEMA = load_schema()


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return data


@pytest.mark.parametrize("argv, expected", [
    (["dq", "--sig", "1,0", "x1^2", "--var", "x1"], "x1 + y"),
    (["dxi", "--sig", "0,2", "xi1*xi2", "--var", "xi2"], "-xi1"),
    (["split", "--sig", "0,1", "1 + xi1", "--var", "xi1"], "h = 1\ng = 1"),
    (["weilcheck", "--sig", "0,2", "--rel", ""], "dim=4 nilindex=3 WEIL"),
    (["rd", "--sig", "1,2", "--rel", "x1^2 - xi1*xi2"], "sig 1,0; relations: x1^2"),
    (["nf", "--sig", "1,0", "--rel", "x1^2-1", "x1^3"], "x1"),
    (["jet", "--weil", "t^2", "--expr", "exp(u1)", "--arg", "0 + t"], "1 + 1*t"),
    (["dx", "--sig", "2,1", "x1^3*x2 + x1*xi1", "--var", "x1"], "3*x1^2*x2 + xi1"),
    (["member", "--sig", "1,2", "--rel", "x1 - xi1*xi2", "--rel", "xi1", "x1"], "true"),
    (["member", "--sig", "1,0", "--rel", "x1", "1"], "false"),
    (["basis", "--sig", "1,0", "--rel", "x1^3"], "1\nx1\nx1^2"),
    (["basis", "--sig", "1,0"], "infinite"),
    (["weilcheck", "--sig", "1,0", "--rel", "x1^2 - 1"], "dim=2 NOT-WEIL"),
    (["prodcheck", "--sig-a", "0,1", "--sig-b", "0,2"], "PRESERVED dim=2"),
    (["gb", "--sig", "1,0", "--rel", "x1^3; x1^2 - x1^3"], "x1^2"),
])
def test_examples(argv, expected):
    code, out, err = run(*argv)
    assert (code, out.strip()) == (0, expected), err


def test_jet_numeric_tolerance():
    data = run_json("jet", "--weil", "t^2", "--expr", "exp(u1)", "--arg", "0 + t")
    values = [c["value"] for c in data["coeffs"]]
    assert all(abs(v - 1.0) <= 1e-12 for v in values) and len(values) == 2


def test_jet_oracle_match():
    code, out, _ = run("jet", "--weil", "t^3", "--expr", "u1^3 - 2*u1*u2 + 1/3", "--arg", "1/2 + t",
                       "--arg", "2 - t^2", "--oracle", "exact")
    assert code == 0 and out.strip().splitlines()[-1] == "MATCH"


def test_jet_oracle_requires_polynomial():
    code, _, err = run("jet", "--weil", "t^2", "--expr", "exp(u1)", "--arg", "t", "--oracle", "exact")
    assert code == 2 and "polynomial" in err


def test_domain_error_exit_code_and_span():
    code, out, err = run("jet", "--weil", "t^2", "--expr", "log(u1)", "--arg", "0 + t")
    assert code == 2 and out == ""
    assert "DomainError" in err and "^^^^^^^" in err


def test_parse_error_span():
    code, _, err = run("dx", "--sig", "1,0", "x1 + * 2", "--var", "x1")
    assert code == 2
    lines = err.splitlines()
    assert lines[0].startswith("error: ParseError")
    assert lines[2].index("^") - 2 == len("x1 + ")


def test_inhomogeneous_relation():
    code, _, err = run("gb", "--sig", "1,1", "--rel", "x1 + xi1")
    assert code == 2 and "InhomogeneousRelation" in err and "x1 + xi1" in err


def test_user_errors_exit_2():
    assert run("dq", "--sig", "1,0", "x1", "--var", "xi1")[0] == 2
    assert run("dq", "x1", "--var", "x1")[0] == 2
    assert run("dx", "--sig", "a,b", "x1", "--var", "x1")[0] == 2
    assert run("weilcheck", "--sig", "1,0")[0] == 2
    assert run("nosuch")[0] == 2
    assert run("jet", "--weil", "t^2 - 1", "--expr", "u1", "--arg", "t")[0] == 2


def test_step_limit_exit_1(monkeypatch):
    monkeypatch.setenv("SUPERFERMAT_MAX_GB_STEPS", "1")
    code, _, err = run("gb", "--sig", "2,0", "--rel", "x1^2 - x2", "--rel", "x1*x2 - 1")
    assert code == 1 and "internal error" in err


def test_json_outputs_validate_and_parse_back():
    d = run_json("dq", "--sig", "2,1", "x1^2*x2 + x1*xi1", "--var", "x1")
    assert d["fresh_index"] == 3
    q = SuperPoly.from_json(d["result"])
    # y is the last even generator in JSON
    assert q == parse_superpoly("x1*x2 + x3*x2 + xi1", (3, 1))
    _, text, _ = run("dq", "--sig", "2,1", "x1^2*x2 + x1*xi1", "--var", "x1")
    assert text.strip() == "x1*x2 + y*x2 + xi1"

    for argv in (["dx", "--sig", "1,2", "x1^3*xi1*xi2 - 1/2*x1", "--var", "x1"],
                 ["dxi", "--sig", "1,3", "x1*xi1*xi2*xi3", "--var", "xi2"],
                 ["nf", "--sig", "1,2", "--rel", "x1^2", "--rel", "x1 - xi1*xi2", "x1 + 3*xi1*xi2*x1"]):
        data = run_json(*argv)
        _, text, _ = run(*argv)
        sig = tuple(data["result"]["sig"])
        assert SuperPoly.from_json(data["result"]) == parse_superpoly(text.strip(), sig)

    d = run_json("split", "--sig", "1,2", "x1 + x1*xi2 + xi1*xi2", "--var", "xi2")
    assert SuperPoly.from_json(d["g"]) == parse_superpoly("x1 - xi1", (1, 2))

    d = run_json("rd", "--sig", "1,2", "--rel", "x1^2 - xi1*xi2")
    assert FinitePresentation.from_json(d["presentation"]).relations.generators == (
        parse_superpoly("x1^2", (1, 0)),)

    for argv in (["gb", "--sig", "1,2", "--rel", "x1^2 - xi1*xi2"],
                 ["member", "--sig", "0,1", "--rel", "xi1", "xi1"],
                 ["basis", "--sig", "0,2"], ["basis", "--sig", "1,0"],
                 ["weilcheck", "--sig", "0,3"], ["weilcheck", "--sig", "1,0", "--rel", "x1^2-1"],
                 ["prodcheck", "--sig-a", "1,2", "--rel-a", "x1^2", "--rel-a", "x1-xi1*xi2", "--sig-b", "0,0"],
                 ["jet", "--weil", "t^2", "--expr", "u1^2", "--arg", "1/2 + t", "--oracle", "exact"],
                 ["berezin", "--sig", "0,3", "--component", "xi1*xi2:exp(u1)", "--arg", "1/2",
                  "--odd-arg", "xi1", "--odd-arg", "xi2"]):
        run_json(*argv)


def test_berezin_cli():
    code, out, _ = run("berezin", "--sig", "0,3", "--component", "xi2*xi1:u1^2", "--component", "1:u1",
                       "--arg", "2", "--odd-arg", "xi1", "--odd-arg", "xi3")
    assert (code, out.strip()) == (0, "2 - 4*xi1*xi3")
    code, _, err = run("berezin", "--sig", "0,2", "--component", "xi1:1", "--odd-arg", "1 + xi1")
    assert code == 2 and "ParityMismatch" in err


def test_generator_names_inferred():
    code, out, _ = run("jet", "--weil", "s^2", "--weil", "t^2", "--weil", "s*t", "--expr", "u1*u2",
                       "--arg", "1 + s", "--arg", "2 + t")
    assert (code, out.strip()) == (0, "2 + 1*t + 2*s")


def test_determinism():
    argv = ["gb", "--sig", "2,2", "--rel", "x1^2 - xi1*xi2", "--rel", "x2^2 - x1*x2", "--rel", "x1*xi1"]
    assert len({run(*argv)[1] for _ in range(3)}) == 1
    prog = [sys.executable, "-m", "superfermat.cli", *argv, "--json"]
    outs = {subprocess.run(prog, capture_output=True, text=True, check=True).stdout for _ in range(2)}
    assert len(outs) == 1


def test_session():
    s = Session()
    assert s.execute("sig 1,2") == "sig 1,2"
    assert s.execute("let f = x1^3 + x1*xi1*xi2") == "x1^3 + x1*xi1*xi2"
    assert s.execute("dx f x1") == "3*x1^2 + xi1*xi2"
    assert s.execute("dq f x1") == "x1^2 + x1*y + y^2 + xi1*xi2"
    assert s.execute("pres A = x1^2; x1 - xi1*xi2") == "sig 1,2; relations: x1^2, x1 - xi1*xi2"
    assert s.execute("weilcheck A") == "dim=4 nilindex=3 WEIL"
    assert s.execute("nf f in A") == "0"
    assert s.execute("let f = xi1") == "xi1"  # rebinding replaces
    assert s.execute("show f") == "xi1"
    assert s.execute("fn g = exp(u1)*u2").startswith("(exp(u1)")
    assert s.execute("# comment") is None


def test_repl_stream():
    inp = io.StringIO("sig 0,2\nlet f = xi2*xi1\nshow f\nbogus\nquit\nshow f\n")
    out, err = io.StringIO(), io.StringIO()
    sys_stdin = sys.stdin
    try:
        sys.stdin = inp
        code = main(["repl"], stdout=out, stderr=err)
    finally:
        sys.stdin = sys_stdin
    assert code == 0
    assert out.getvalue().splitlines() == ["sig 0,2", "-xi1*xi2", "-xi1*xi2"]
    assert "unknown command" in err.getvalue()


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "superfermat.cli", "dq", "--sig", "1,0", "x1^2", "--var", "x1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "x1 + y\n"
