import json

import pytest

from orbihh.builtins import builtin
from orbihh.cli import EXIT_CAP, EXIT_PARSE, EXIT_VERIFY, InputError, Report, main, parse_input, run

MINUS_ONE = """{
  "name": "minus one",
  "cyclotomic_order": 1,
  "dimension": 2,
  "generators": [[["-1", "0"], ["0", "-1"]]],
  "symplectic_form": "standard"
}"""

CYCLIC3 = {
    "name": "c3",
    "cyclotomic_order": 3,
    "dimension": 2,
    "generators": [[["z", "0"], ["0", "z^2"]]],
    "symplectic_form": [["0", "1"], ["-1", "0"]],
    "options": {"maxdeg": 4, "seed": 3, "trials": 2},
}


def test_parse_minimal_document_applies_defaults():
    spec = parse_input(MINUS_ONE)
    assert len(spec.generators) == 1
    assert (spec.cap, spec.maxdeg, spec.trials, spec.seed) == (5000, 10, 50, 0)
    assert spec.symplectic_form is not None


def test_parse_from_file(tmp_path):
    path = tmp_path / "c3.json"
    path.write_text(json.dumps(CYCLIC3, indent=2))
    spec = parse_input(str(path))
    assert spec.maxdeg == 4 and spec.seed == 3 and spec.trials == 2
    assert spec.generators[0] == builtin("cyclic:3").generators[0]


def test_bad_scalar_reports_field():
    doc = json.loads(MINUS_ONE)
    doc["generators"][0][1][1] = "0.5*z"
    with pytest.raises(InputError) as err:
        parse_input(json.dumps(doc, indent=2))
    assert err.value.field == "generators[0][1][1]"
    assert err.value.line is not None


def test_missing_dimension():
    doc = json.loads(MINUS_ONE)
    del doc["dimension"]
    with pytest.raises(InputError) as err:
        parse_input(json.dumps(doc))
    assert err.value.field == "dimension"


def test_json_syntax_error_has_line():
    with pytest.raises(InputError) as err:
        parse_input('{\n  "name": "x",\n  "dimension": 2,,\n}')
    assert err.value.line == 3


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda d: d.update(dimension=3), "generators[0]"),
        (lambda d: d.update(cyclotomic_order=0), "cyclotomic_order"),
        (lambda d: d.update(dimension=True), "dimension"),
        (lambda d: d.update(colour="red"), "colour"),
        (lambda d: d.update(options={"trials": 0}), "options.trials"),
        (lambda d: d.update(options={"speed": 1}), "options.speed"),
        (lambda d: d.update(symplectic_form="fancy"), "symplectic_form"),
        (lambda d: d.update(generators=[]), "generators"),
        (lambda d: d["generators"][0][0].__setitem__(0, 1.5), "generators[0][0][0]"),
    ],
)
def test_schema_violations(mutate, field):
    doc = json.loads(MINUS_ONE)
    mutate(doc)
    with pytest.raises(InputError) as err:
        parse_input(json.dumps(doc, indent=2))
    assert err.value.field == field


def test_report_round_trip_and_determinism():
    spec = parse_input(json.dumps(CYCLIC3))
    a = run("all", spec).to_json()
    b = run("all", parse_input(json.dumps(CYCLIC3))).to_json()
    assert a == b
    assert Report.from_json(a).to_json() == a


def test_report_contents_minus_one():
    data = run("compute", parse_input(MINUS_ONE)).data
    assert data["group"]["order"] == 2
    assert data["dimensions"]["invariant"] == [1, 0, 2]
    assert data["dimensions"]["orbifold"] == [1, 0, 1]
    assert [r["square"] for r in data["lambda"]] == ["1", "4"]
    assert all(isinstance(r["approx"], float) for r in data["lambda"])


def test_cocycle_report_s3():
    data = run("cocycle", builtin("sym_n:3")).data
    entry = next(r for r in data["cocycle"] if (r["g"], r["h"]) == ("(12)", "(23)"))
    assert entry["value"] == "3/4"
    assert entry["approx"] == pytest.approx(0.75)


def test_molien_report():
    data = run("molien", builtin("minus_one:2")).data
    assert data["molien"]["series"]["0"][:5] == [1, 0, 3, 0, 5]


def test_main_verify_exit_zero(capsys):
    assert main(["verify", "--builtin", "sym_n:3", "--trials", "3"]) == 0
    assert "overall: PASS" in capsys.readouterr().out


def test_main_fault_injection_exits_4(capsys):
    assert main(["verify", "--builtin", "sym_n:3", "--trials", "1", "--inject-fault", "sa"]) == EXIT_VERIFY
    assert "overall: FAIL" in capsys.readouterr().out


def test_main_fault_injection_without_nontrivial_pairs(capsys):
    assert main(["verify", "--builtin", "reflection", "--trials", "1", "--inject-fault", "sa"]) == EXIT_VERIFY


def test_main_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x", "cyclotomic_order": 1, "dimension": 1, "generators": [[["0.5"]]]}')
    assert main(["compute", "--input", str(bad)]) == EXIT_PARSE
    assert main(["compute", "--builtin", "nope"]) == EXIT_PARSE
    assert main(["compute", "--builtin", "cyclic:7", "--cap", "3"]) == EXIT_CAP
    assert main(["cocycle", "--builtin", "reflection"]) == EXIT_PARSE
    assert main(["compute", "--input", str(tmp_path / "missing.json")]) == EXIT_PARSE
    err = capsys.readouterr().err
    assert "generators[0][0][0]" in err


def test_main_writes_json_and_csv(tmp_path, capsys):
    js, cs = tmp_path / "r.json", tmp_path / "r.csv"
    assert main(["all", "--builtin", "cyclic:4", "--trials", "1", "--maxdeg", "3", "--json", str(js), "--csv", str(cs)]) == 0
    data = json.loads(js.read_text())
    assert data["molien"]["maxdeg"] == 3
    assert data["verification"]["passed"]
    lines = cs.read_text().splitlines()
    assert lines[0] == "table,key,exact,approx"
    assert any(line.startswith("verification,") for line in lines)


def test_main_json_to_stdout(capsys):
    assert main(["compute", "--builtin", "minus_one:2", "--json", "-"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["name"] == "minus_one:2"


def test_same_seed_same_bytes(capsys):
    main(["verify", "--builtin", "cyclic:3", "--trials", "2", "--seed", "5", "--json", "-"])
    first = capsys.readouterr().out
    main(["verify", "--builtin", "cyclic:3", "--trials", "2", "--seed", "5", "--json", "-"])
    assert capsys.readouterr().out == first
