import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affnorm.cli import (ComponentBlock, FractionBlock, OutputDocument, execute, main,
                         parse_polynomial, parse_session, render)
from affnorm.errors import SyntaxErrorWithPosition
from affnorm.polyring import MonomialOrder, PolyRing, format_polynomial

from conftest import polynomials

SEXTIC = "ring R = QQ[x,y,z]; ideal I = x^6 - z^6 - y^2*z^4; normalize I;"
PLANES = "ring R = QQ[x,y,z];\nideal I = (x-y)*(x-z)*(y-z);\nnormalize I;\n"


def run(text, **options):
    s = parse_session(text)
    s.options = options
    return execute(s)


def test_parse_sextic_surface():
    s = parse_session(SEXTIC)
    assert s.ring.names == ("x", "y", "z")
    assert s.command == "normalize" and s.target == "I"
    x, y, z = s.ring.gens()
    assert s.ideals["I"].gens == [x ** 6 - z ** 6 - y ** 2 * z ** 4]


def test_parse_rationals_comments_and_order():
    s = parse_session("# header\nring S = QQ[a, b] order lex;  // trailing\n"
                      "ideal J = 3/4*a^2 - b/2, (a + b)^2;\ngb J;")
    a, b = s.ring.gens()
    assert s.ring.order == MonomialOrder.lex()
    assert s.ideals["J"].gens[0] == a ** 2 * Fraction(3, 4) - b * Fraction(1, 2)


@pytest.mark.parametrize("text, message, line, column", [
    ("ideal I = x;", "no ring declared", 1, 1),
    ("ring R = QQ[x]; ideal I = y;", "unknown variable y", 1, 27),
    ("ring R = QQ[x];\nring S = QQ[y];", "duplicate ring", 2, 1),
    ("ring R = QQ[x];\nideal I = x +* x;\ngb I;", "unexpected", 2, 14),
    ("ring R = QQ[x];\nideal I = 2x;", "expected", 2, 12),
    ("ring R = QQ[x]; ideal I = x; gb J;", "unknown ideal", 1, 33),
    ("ring R = QQ[x]; ideal I = x/x; gb I;", "division", 1, 29),
])
def test_parse_errors(text, message, line, column):
    with pytest.raises(SyntaxErrorWithPosition) as info:
        parse_session(text)
    assert message in str(info.value)
    assert (info.value.line, info.value.column) == (line, column)


def test_execute_sextic_surface():
    doc = run(SEXTIC)
    (c,) = doc.components
    assert len(c.relations) == 4
    assert len(c.variables) - 3 == 2
    assert {(f.num, f.den) for f in c.fractions} >= {("x^2", "z"), ("x^3", "z^2")}


def test_execute_three_planes():
    doc = run(PLANES)
    assert len(doc.components) == 3
    for c in doc.components:
        S = PolyRing(c.variables)
        rels = [parse_polynomial(r, S) for r in c.relations]
        assert all(r.total_degree() == 1 for r in rels)
        assert len(c.variables) - len(rels) == 2


def test_execute_closure_echoes_principal():
    doc = run("ring R = QQ[x,y]; ideal I = x^3; closure I;")
    assert doc.ideal == ["x^3"]


def test_execute_gb_radical_blowup():
    assert run("ring R = QQ[x,y]; ideal I = x^2 - y, x*y; gb I;").ideal == ["y^2", "x*y", "x^2 - y"]
    assert run("ring R = QQ[x,y]; ideal I = x^2, y^3; radical I;").ideal == ["y", "x"]
    doc = run("ring R = QQ[x,y]; ideal I = x^2, y^3; blowup I;")
    (c,) = doc.components
    assert c.relations == ["y^3*Y1 - x^2*Y2"]
    assert c.degrees[-1] == [3, 1]


def test_render_examples():
    doc = OutputDocument("normalize I", ["x"])
    doc.components = [ComponentBlock(["x"], None, [], [], [FractionBlock("x^3", "z^2")])]
    text = render(doc)
    assert "relations: 0" in text
    assert "x^3/z^2" in text


def test_json_round_trip_and_determinism():
    a = run(SEXTIC)
    b = run(SEXTIC)
    ja, jb = render(a, "json", timings=False), render(b, "json", timings=False)
    assert ja == jb
    back = OutputDocument.from_dict(json.loads(render(a, "json")))
    assert back == a
    assert set(json.loads(ja)["components"][0]) == {"variables", "degrees", "relations",
                                                    "normap", "fractions"}


def test_printed_relations_reparse():
    doc = run(SEXTIC)
    (c,) = doc.components
    S = PolyRing(c.variables)
    for r in c.relations:
        assert format_polynomial(parse_polynomial(r, S)) == r


R3 = PolyRing("xyz")
R1 = PolyRing("t")


@settings(max_examples=60)
@given(st.sampled_from([R1, R3]).flatmap(
    lambda R: polynomials(R, 6, 6, (-50, 50)).map(lambda f: (R, f))), st.integers(1, 9))
def test_print_parse_round_trip(pair, den):
    R, f = pair
    f = f * Fraction(1, den)
    assert parse_polynomial(format_polynomial(f), R) == f


def _write(tmp_path, text):
    p = tmp_path / "s.txt"
    p.write_text(text)
    return str(p)


def test_main_success_and_json(tmp_path, capsys):
    path = _write(tmp_path, "ring R = QQ[x,y]; ideal I = x^3 - y^2; normalize I;")
    assert main([path, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "timings" not in doc
    assert doc["components"][0]["fractions"][0] == {"num": "y", "den": "x"}
    assert main([path, "--time"]) == 0
    assert "timings:" in capsys.readouterr().out


def test_main_exit_codes(tmp_path, capsys):
    assert main([_write(tmp_path, "ring R = QQ[x]; ideal I = y; gb I;"), "--json"]) == 2
    err = json.loads(capsys.readouterr().out)["error"]
    assert err["exit_code"] == 2 and (err["line"], err["column"]) == (1, 27)
    assert main([_write(tmp_path, SEXTIC), "--max-iter", "1"]) == 3
    assert main([_write(tmp_path, "ring R = QQ[x,y]; ideal I = x^2; normalize I;")]) == 4
    assert main([_write(tmp_path, "ring R = QQ[x,y,z]; ideal I = x^2*y - z^3, "
                                  "x*y^2 - z^2*x + y^3; gb I;"), "--degree-cap", "4"]) == 3
