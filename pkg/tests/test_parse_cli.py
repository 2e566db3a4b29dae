import io
import json
import subprocess
import sys

import pytest

from tmotif.cli import main
from tmotif.errors import ParseError
from tmotif.parse import parse_definitions, parse_expr, parse_scalar, parse_skew, parse_tpoly
from tmotif.ratfunc import function_field
from tmotif.skew import SkewPoly
from tmotif.tpoly import TPoly

K2 = function_field(2)

CARLITZ = """\
field { p = 2, e = 1 }
# the Carlitz module
tmodule carlitz { d = 1, phi_t = [["theta + s"]] }
point x { module = carlitz, coords = ["theta^2 + 1"] }
"""

DRINFELD3 = """\
field { p = 3 }
tmodule phi { d = 1, phi_t = [["theta + s + theta*s^2"]] }
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def carlitz_file(tmp_path):
    f = tmp_path / "carlitz.def"
    f.write_text(CARLITZ)
    return f


# -- grammar ------------------------------------------------------------------


def test_scalar_expressions():
    th = K2.theta
    assert parse_scalar("theta^2 + 1", K2) == th**2 + K2.one
    assert parse_scalar('("theta^2+1")/("theta^3")', K2) == (th**2 + K2.one) / th**3
    assert parse_scalar("3*theta", K2) == th
    assert parse_tpoly("t - theta", K2) == TPoly(K2, [th, K2.one])
    assert parse_skew("theta + s", K2) == SkewPoly(K2, [th, K2.one])
    # the twist is applied when s moves past theta
    assert parse_skew("s*theta", K2) == SkewPoly(K2, [K2.zero, th**2])


@pytest.mark.parametrize(
    "src,word",
    [("theta + ", "syntax"), ("theta*s*t", "mix"), ("x+1", "unknown symbol"), ("1/(t)", "divide"), ("1/0", "")],
)
def test_expression_errors_carry_position(src, word):
    with pytest.raises(ParseError) as ei:
        parse_expr(src, K2)
    assert word in str(ei.value)
    if word:
        assert "column" in str(ei.value)


def test_definition_file():
    d = parse_definitions(CARLITZ)
    assert d.K.q == 2
    E = d.pick("tmodules")
    assert E.dim == 1
    assert d.points["x"] == ("carlitz", [K2.theta**2 + K2.one])


@pytest.mark.parametrize(
    "text,word",
    [
        ('tmodule c { d = 1, phi_t = [["s"]] }', "field block must come first"),
        ("field { p = 2 }\nfield { p = 3 }", "twice"),
        ('field { p = 2 }\npoint x { module = nope, coords = ["1"] }', "unknown module"),
        ('field { p = 2 }\ntmodule c { d = 2, phi_t = [["s"]] }', "line 2"),
        ("field { p = 2 }\nwidget w { a = 1 }", "unknown block"),
        ("field { p = 2 ", "line 1"),
    ],
)
def test_definition_errors(text, word):
    with pytest.raises(ParseError) as ei:
        parse_definitions(text)
    assert word in str(ei.value)


# -- commands -----------------------------------------------------------------


def test_round_trip_through_files(carlitz_file, tmp_path):
    code, out, _ = run("ext", "from-point", carlitz_file, "--x", "theta")
    assert code == 0
    e = tmp_path / "e.def"
    e.write_text(out)
    code, out, _ = run("ext", "to-point", e)
    assert (code, out.strip()) == (0, "theta")


def test_round_trip_drinfeld(tmp_path):
    f = tmp_path / "d.def"
    f.write_text(DRINFELD3)
    _, out, _ = run("ext", "from-point", f, "--x", "theta^2 + 2")
    e = tmp_path / "e.def"
    e.write_text(out)
    assert run("ext", "to-point", e)[1].strip() == "theta^2 + 2"


def test_baer_sum(carlitz_file, tmp_path):
    files = []
    for i, x in enumerate(["theta", "theta^2 + 1"]):
        f = tmp_path / f"e{i}.def"
        f.write_text(run("ext", "from-point", carlitz_file, "--x", x)[1])
        files.append(f)
    code, out, _ = run("ext", "baer", *files)
    assert code == 0
    s = tmp_path / "s.def"
    s.write_text(out)
    assert run("ext", "to-point", s)[1].strip() == "theta^2 + theta + 1"


def test_frob_table_over_F2(carlitz_file):
    code, out, _ = run("--json", "frob", "table", carlitz_file, "--max-deg", "3")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 5
    for r in rows:
        # over F_2 the charpoly X - f_v(t) prints as X + f_v(t)
        assert r["charpoly"].replace("(", "").replace(")", "") == "X + " + r["prime"].replace("theta", "t")


def test_motif_of_json(carlitz_file):
    code, out, _ = run("motif-of", carlitz_file, "--json")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["family"] == "carlitz" and data["lie_dim"] == 1


def test_selftest_quick():
    code, out, _ = run("selftest", "--quick")
    assert code == 0 and "FAIL" not in out


def test_exit_codes(carlitz_file, tmp_path):
    assert run("nonsense")[0] == 2
    assert run("ext", "to-point", tmp_path / "missing.def")[0] == 2
    bad = tmp_path / "bad.def"
    bad.write_text("field { p = 2 }\ntmodule c { phi_t = [[\"theta +\"]] }\n")
    code, _, err = run("motif-of", bad)
    assert code == 2 and err.startswith("error[")
    # a domain error: a nilpotency failure in the t-module
    nn = tmp_path / "nn.def"
    nn.write_text('field { p = 2 }\ntmodule c { phi_t = [["theta^2 + s"]] }\n')
    code, _, err = run("motif-of", nn)
    assert code == 1 and err.startswith("error[")


def test_json_errors_are_structured(tmp_path):
    code, out, _ = run("--json", "ext", "to-point", tmp_path / "missing.def")
    data = json.loads(out)
    assert code == 2 and data["ok"] is False and data["error"]["code"] == "usage"


def test_precision_env_var(carlitz_file, monkeypatch):
    monkeypatch.setenv("TMOTIF_PRECISION", "20")
    _, out, _ = run("--json", "analytic", "invariants", carlitz_file)
    assert json.loads(out)["P"] == 20
    _, out, _ = run("--json", "analytic", "invariants", carlitz_file, "-P", "25")
    assert json.loads(out)["P"] == 25
    assert run("analytic", "invariants", carlitz_file, "-P", "0")[0] == 2


def test_output_is_deterministic(carlitz_file):
    cmd = [sys.executable, "-m", "tmotif", "frob", "table", str(carlitz_file), "--max-deg", "4"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
