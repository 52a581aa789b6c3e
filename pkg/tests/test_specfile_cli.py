"""Curve specification files, builtins, and the command-line interface."""

import json

import pytest

from tanglecurves.model import OrderedMatching, reduce_slope
from tanglecurves.specfile import (
    ParseError,
    builtin_curve,
    parse_curvespec,
    print_curvespec,
)
from tanglecurves.cli import main


PRETZEL_TEXT = """\
rational 1/2
special 1 0/1 4 1
special 1 0/1 2 3
matching (1->2)(4->3)
"""


def test_parse_pretzel_text():
    m = parse_curvespec(PRETZEL_TEXT)
    assert len(m.components) == 3
    kinds = [c.kind for c in m.components]
    assert kinds == ["rational", "special", "special"]
    assert m.matching == OrderedMatching((1, 2), (4, 3))


def test_parse_q_infinity():
    m = parse_curvespec("rational 1/0\nmatching (1->2)(3->4)\n")
    assert m.components[0].slope == reduce_slope(1, 0)


def test_parse_rejects_zero_length_special():
    with pytest.raises(ParseError) as err:
        parse_curvespec("special 0 0/1 4 1")
    assert "positive" in str(err.value)


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse_curvespec("banana 1/2")
    with pytest.raises(ParseError):
        parse_curvespec("rational one/two")


def test_parse_print_round_trip():
    cases = [
        PRETZEL_TEXT,
        "rational 1/0 ls=10;11\nmatching (1->2)(3->4)\n",
        "rational -3/2 offset=1,0,-1,0:1/2\nmatching (1->2)(3->4)\n",
    ]
    for text in cases:
        m = parse_curvespec(text)
        again = parse_curvespec(print_curvespec(m))
        assert again == m
    pret = builtin_curve("pretzel:2,-3")
    assert parse_curvespec(print_curvespec(pret)) == pret


def test_builtins():
    q0 = builtin_curve("rational:0/1")
    assert q0.components[0].slope == reduce_slope(0, 1)
    q = builtin_curve("rational:5/3")
    assert q.components[0].slope == reduce_slope(5, 3)
    pret = builtin_curve("pretzel:2,-3")
    assert pret.validate() == []
    names = sorted(c.name() for c in pret.components)
    assert names == ["r(1/2)", "s1(0/1;1,4)", "s1(0/1;2,3)"]
    with pytest.raises(Exception):
        builtin_curve("pretzel:9,9")


# -- CLI ---------------------------------------------------------------------

def test_cli_hfk_trefoil(capsys):
    code = main(["hfk", "rational:-3/1", "rational:0/1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "dimension 3" in out
    assert "PositiveStaircase" in out or "NegativeStaircase" in out


def test_cli_hfk_json_matches_table(capsys):
    code = main(["--format", "json", "hfk", "rational:-3/1", "rational:0/1"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    gens_json = sorted((g["alex"], g["delta"]) for g in report["generators"])
    code = main(["hfk", "rational:-3/1", "rational:0/1"])
    table = capsys.readouterr().out
    rows = [line.split() for line in table.splitlines()
            if line.startswith("  ") and line.strip()
            and line.strip()[0] in "-0123456789"]
    gens_table = sorted((r[0], r[1]) for r in rows if len(r) >= 2)
    assert gens_json == gens_table


def test_cli_split_check(capsys):
    assert main(["split-check", "pretzel:2,-3"]) == 0
    assert "not split" in capsys.readouterr().out
    assert main(["split-check", "rational:0/1"]) == 0
    assert capsys.readouterr().out.strip() == "split"


def test_cli_lspace_check_with_certificate(capsys):
    code = main(["--format", "json", "--certificate", "lspace-check",
                 "pretzel:2,-3", "rational:1/-3"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"]["status"] in ("PositiveStaircase",
                                           "NegativeStaircase")
    assert report["verdict"]["obstructed"] is False


def test_cli_exit_codes(capsys):
    assert main(["hfk", "rational:bad", "rational:0/1"]) == 1
    capsys.readouterr()
    # same-slope gluing is a link: validation failure
    assert main(["hfk", "rational:5/2", "rational:1/0"]) == 2
    capsys.readouterr()


def test_cli_verify_lemmas_small(capsys):
    code = main(["verify-lemmas", "--alpha-max", "2", "--n-max", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "all cases pass" in out
    assert "FAIL" not in out


def test_cli_pair_table(capsys):
    code = main(["pair", "rational:0/1", "rational:1/0"])
    out = capsys.readouterr().out
    assert code == 0
    assert "dimension 2" in out


def test_cli_strict_validation(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("rational 0/1\nrational 0/1\nmatching (1->4)(2->3)\n")
    assert main(["split-check", str(bad)]) == 0      # warnings only
    capsys.readouterr()
    assert main(["--strict", "split-check", str(bad)]) == 2
    capsys.readouterr()
