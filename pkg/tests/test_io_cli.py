import json
import subprocess
import sys
from io import StringIO

import pytest

from torslat.cli import main
from torslat.errors import ParseError, ValidationError
from torslat.lattice_io import (emit_dot, emit_json, fixtures_dir, load_lattice, parse_document,
                                read_document, save_document)
from torslat.poset_core import LabelledHasse, chain

LATTICE_FIXTURES = ["weak_s4", "cambrian_s4_contracted", "cambrian_s4_quotient",
                    "tors_three_vertex", "tors_three_vertex_factor"]


def run(*argv):
    out = StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def small_doc(**extra):
    doc = {"format_version": 1,
           "elements": [{"id": 0}, {"id": 1}, {"id": 2}],
           "covers": [{"upper": 1, "lower": 0}, {"upper": 2, "lower": 1}]}
    doc.update(extra)
    return doc


@pytest.mark.parametrize("name", LATTICE_FIXTURES)
def test_fixture_round_trip_is_exact(name, tmp_path):
    src = fixtures_dir() / f"{name}.json"
    doc = read_document(src)
    out = tmp_path / "again.json"
    save_document(out, doc)
    assert out.read_text() == src.read_text()


def test_load_lattice_kinds():
    assert isinstance(load_lattice("tors_three_vertex"), LabelledHasse)
    assert load_lattice("weak_s4").n_elements == 24


def test_emit_and_parse_weak_order(s4):
    doc = parse_document(json.loads(emit_json(s4)))
    assert doc.labelled is not None
    assert {c: str(s4.labels[c]) for c in s4.lattice.covers} == doc.labelled.labels


def test_parse_minimal():
    doc = parse_document(small_doc())
    assert doc.lattice.n_elements == 3 and doc.labelled is None and doc.highlight is None


@pytest.mark.parametrize("bad", [
    small_doc(format_version=2),
    small_doc(colour="red"),
    small_doc(covers=[{"upper": 1, "lower": 0}, {"upper": 1, "lower": 0}]),
    small_doc(covers=[{"upper": 1, "lower": 0, "label": "a"}, {"upper": 2, "lower": 1}]),
    small_doc(covers=[{"upper": 1, "lower": 0, "highlight": "yes"}]),
    small_doc(covers=[{"upper": 1, "lower": 7}]),
    small_doc(elements=[{"id": 0}, {"id": 0}]),
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_document(bad)


def test_validation_errors():
    with pytest.raises(ValidationError):
        parse_document(small_doc(covers=[{"upper": 1, "lower": 0}, {"upper": 2, "lower": 0}]))
    with pytest.raises(ValidationError):
        parse_document(small_doc(covers=[{"upper": 1, "lower": 0}, {"upper": 2, "lower": 1},
                                         {"upper": 0, "lower": 2}]))


def test_malformed_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{")
    with pytest.raises(ParseError):
        read_document(p)


def test_dot_output():
    doc = read_document("cambrian_s4_contracted")
    text = emit_dot(doc.lattice, doc.highlight)
    assert text == emit_dot(doc.lattice, doc.highlight)
    assert text.count("[label=") == 24
    assert text.count(" -> ") == 36
    assert text.count("black:invis:black") == 11
    assert text.count("rank=same") == 7


def test_dot_labels():
    text = emit_dot(LabelledHasse(chain(2), {(1, 0): 'a "b"'}))
    assert 'label="a \\"b\\""' in text


def test_cli_weak_order():
    code, out = run("weak-order", "3")
    assert code == 0
    assert out.startswith("S4: 24 elements, 36 arrows, 11 join-irreducibles, 11 meet-irreducibles")
    code, out = run("weak-order", "2", "--json")
    assert code == 0 and parse_document(json.loads(out)).lattice.n_elements == 6
    code, out = run("weak-order", "2", "--dot", "--labels")
    assert code == 0 and out.count(" -> ") == 6 and 'label="1>2"' in out


def test_cli_size_limit():
    code, _ = run("weak-order", "7")
    assert code == 1


def test_cli_congruence():
    code, out = run("congruence", "weak:3", "--contract", "2314->2134,1423->1243", "--quotient")
    rep = json.loads(out)
    assert code == 0 and rep["classes"] == 14 and len(rep["contracted"]) == 11
    assert len(rep["quotient"]["elements"]) == 14
    code, out = run("congruence", "tors_three_vertex", "--contract", "cb", "--report")
    rep = json.loads(out)
    assert code == 0 and rep["contracted_labels"] == ["acb", "cb"]
    code, out = run("congruence", "weak:2", "--contract", "ji:213")
    assert code == 0 and json.loads(out)["classes"] == 2


def test_cli_congruence_usage_errors():
    assert run("congruence", "weak:2", "--contract", "999->0")[0] == 2
    assert run("congruence", "weak:2", "--contract", "ji:321")[0] == 2
    assert run("congruence", "no_such_file", "--contract", "0->1")[0] == 2
    assert run("congruence", "weak:x", "--contract", "0->1")[0] == 2


def test_cli_cambrian():
    code, out = run("cambrian", "3", "--orientation", "10", "--verify", "--bicambrian")
    rep = json.loads(out)
    assert code == 0 and rep["coxeter_element"] == "s2s1s3" and rep["quotient_size"] == 14
    assert rep["sublattice"] and rep["bicambrian"] == {
        "quotient_size": 20, "hasse_regular": True, "degree": 3, "degree_histogram": None}
    code, out = run("cambrian", "2", "--orientation", "1", "--bottoms")
    assert code == 0 and len(out.split()) == 5
    assert run("cambrian", "3", "--orientation", "1")[0] == 2


def test_cli_bricks_and_algcon():
    code, out = run("bricks", "3")
    assert code == 0 and len(out.split()) == 11
    code, out = run("bricks", "2", "--forcing")
    assert code == 0 and len(out.splitlines()) == 4
    code, out = run("algcon", "3")
    assert code == 0 and json.loads(out)["ideals"] == 38


def test_cli_check():
    code, out = run("check", "tors_three_vertex", "--all", "--sample", "50")
    rep = json.loads(out)
    assert code == 0 and rep["semidistributive"] and rep["polygonal"] and rep["label_consistent"]
    assert rep["sampled_identities"]


def test_cli_check_failure(tmp_path):
    m3 = {"format_version": 1, "elements": [{"id": k} for k in range(5)],
          "covers": [{"upper": a, "lower": 0} for a in (1, 2, 3)] + [{"upper": 4, "lower": a} for a in (1, 2, 3)]}
    p = tmp_path / "m3.json"
    p.write_text(json.dumps(m3))
    code, out = run("check", str(p), "--semidistributive")
    assert code == 1 and not json.loads(out)["semidistributive"]


def test_cli_json_diff_on_invalid_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(small_doc(covers=[{"upper": 1, "lower": 0}, {"upper": 2, "lower": 0}])))
    code, out = run("--json-diff", "check", str(p))
    assert code == 1 and json.loads(out)["error"] == "ValidationError"


def test_cli_fixtures_verify():
    code, out = run("fixtures", "verify")
    assert code == 0 and out.count("PASS") == 6


def test_cli_usage():
    assert run()[0] == 2
    assert run("weak-order")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "torslat", "weak-order", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("S2: 2 elements")
