import json
from pathlib import Path

import pytest

from sysrep.cli import main
from sysrep.errors import InvalidDocument
from sysrep.io import canonical_json, load_document, parse_document, validate_report

FIXTURES = Path(__file__).parent / "fixtures"


def write(tmp_path, obj, name="doc.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    report = json.loads(out) if out else None
    if report is not None:
        validate_report(report)
        assert out == canonical_json(report) + "\n"
    return code, report, err


FIB = {"field": {"kind": "prime", "p": 2}, "matrix": [[1, 1], [1, 0]]}


def test_analyze_fibonacci(tmp_path, capsys):
    code, r, _ = run_json(capsys, "analyze", write(tmp_path, FIB))
    assert code == 0
    assert r["factors"]["minimal_polynomial"]["poly"] == [1, 1, 1]
    assert r["period"]["T"] == 3
    assert r["orbit_census"]["cycles"] == {"1": 1, "3": 1}


def test_analyze_identity(tmp_path, capsys):
    doc = {"field": {"kind": "prime", "p": 3}, "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}
    code, r, _ = run_json(capsys, "analyze", write(tmp_path, doc))
    assert code == 0
    assert r["factors"]["minimal_polynomial"]["poly"] == [2, 1]  # x - 1
    assert r["factors"]["characteristic_polynomial"]["factors"] == [{"factor": [2, 1], "multiplicity": 3}]
    assert r["period"]["T"] == 1
    assert r["orbit_census"]["cycles"] == {"1": 27}


def test_analyze_text_default(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze", write(tmp_path, FIB))
    assert code == 0
    assert "minimal polynomial: x^2 + x + 1" in out and "period T: 3" in out


def test_analyze_rational(tmp_path, capsys):
    doc = {"field": {"kind": "rational"}, "matrix": [[1, 1], [0, 1]]}
    code, r, _ = run_json(capsys, "analyze", write(tmp_path, doc))
    assert code == 0
    assert r["period"]["finite"] is False and r["orbit_census"] is None


@pytest.mark.parametrize(
    "text,fragment",
    [
        ('{"field": {"kind": "prime", "p": 2}, "matrix": [[1, 1], [1]]}', "matrix[1]"),
        ('{"field": {"kind": "prime", "p": 2},\n "matrix": [[1, 1], [1, 0]', ":2:"),
        ('{"field": {"kind": "prime", "p": 4}, "matrix": [[1]]}', "field"),
        ('{"field": {"kind": "prime", "p": 5}, "matrix": [["x"]]}', "matrix[0][0]"),
        ('{"field": {"kind": "prime", "p": 5}, "group": {"kind": "cyclic"}, "matrix": [[1]]}', "group"),
    ],
)
def test_invalid_documents_exit_2(tmp_path, capsys, text, fragment):
    code, out, err = run(capsys, "analyze", write(tmp_path, text))
    assert code == 2 and out == "" and fragment in err


def test_missing_file_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 2


def test_singular_integer_group_exit_4(tmp_path, capsys):
    doc = {"field": {"kind": "prime", "p": 2}, "matrix": [[1, 1], [1, 1]]}
    code, _, err = run(capsys, "analyze", write(tmp_path, doc))
    assert code == 4 and "SingularMatrix" in err


def test_singular_semigroup_is_fine(tmp_path, capsys):
    doc = {"field": {"kind": "prime", "p": 2}, "group": {"kind": "naturals"}, "matrix": [[1, 1], [1, 1]]}
    code, r, _ = run_json(capsys, "analyze", write(tmp_path, doc))
    assert code == 0 and r["period"]["finite"] is False


def test_orbits_guard_exit_3(tmp_path, capsys):
    doc = {"field": {"kind": "prime", "p": 3}, "matrix": [[int(i == j) for j in range(13)] for i in range(13)]}
    path = write(tmp_path, doc)
    code, r, _ = run_json(capsys, "orbits", path)
    assert code == 0 and r["enumeration"] == "skipped"
    code, _, err = run(capsys, "orbits", path, "--enumerate")
    assert code == 3 and "StateSpaceTooLarge" in err


def test_max_states_hard_cap(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["orbits", write(tmp_path, FIB), "--max-states", str(10**8)])
    assert exc.value.code == 2


def test_orbits_over_q_exit_4(capsys):
    code, _, err = run(capsys, "orbits", str(FIXTURES / "rotation_q.json"))
    assert code == 4


def test_extension_too_large_exit_3(tmp_path, capsys):
    # companion of an irreducible of degree 31 over F_2 needs GF(2^31)
    cs = [1, 0, 0, 1] + [0] * 27 + [1]  # x^31 + x^3 + 1
    n = 31
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = cs[i] % 2
    code, _, err = run(capsys, "decompose", write(tmp_path, {"field": {"kind": "prime", "p": 2}, "matrix": rows}), "--split")
    assert code == 3 and "ExtensionTooLarge" in err


def test_simulate(tmp_path, capsys):
    path = write(tmp_path, FIB)
    code, r, _ = run_json(capsys, "simulate", path, "--x0", "0,0", "--steps", "3")
    assert all(row["x"] == [0, 0] for row in r["trajectory"])
    code, r, _ = run_json(capsys, "simulate", path, "--x0", "1,0", "--steps", "4")
    xs = [row["x"] for row in r["trajectory"]]
    assert len(xs) == 5 and xs[3] == xs[0] and xs[1] != xs[0]
    code, r, _ = run_json(capsys, "simulate", path, "--x0", "[1, 0]", "--steps", "0")
    assert [row["x"] for row in r["trajectory"]] == [[1, 0]]
    code, r, _ = run_json(capsys, "simulate", path, "--x0", "1,0", "--steps", "-3")
    assert [row["t"] for row in r["trajectory"]] == [0, -1, -2, -3]
    assert r["trajectory"][3]["x"] == [1, 0]


def test_simulate_cyclic_annotation(capsys):
    code, r, _ = run_json(capsys, "simulate", str(FIXTURES / "rotation_f3.json"), "--x0", "1,0", "--steps", "5")
    assert [row["t_mod_T"] for row in r["trajectory"]] == [0, 1, 2, 3, 0, 1]
    assert r["trajectory"][4]["x"] == [1, 0]


def test_simulate_semigroup_negative_exit_4(tmp_path, capsys):
    doc = {"field": {"kind": "prime", "p": 2}, "group": {"kind": "naturals"}, "matrix": [[1, 1], [1, 1]]}
    code, out, _ = run(capsys, "simulate", write(tmp_path, doc), "--x0", "1,0", "--steps", "-1")
    assert code == 4 and out == ""


def test_simulate_bad_x0_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "simulate", write(tmp_path, FIB), "--x0", "1,0,1")
    assert code == 2 and "--x0" in err


@pytest.mark.parametrize("name", ["fibonacci_f2", "rotation_f3", "identity_f5", "mixed_f7", "rotation_q"])
def test_verify_fixtures_pass(capsys, name):
    code, r, _ = run_json(capsys, "verify", str(FIXTURES / f"{name}.json"), "--trials", "64")
    assert code == 0 and r["passed"]


def test_verify_census_skipped(tmp_path, capsys):
    doc = {"field": {"kind": "prime", "p": 3}, "matrix": [[int(i == j) for j in range(13)] for i in range(13)]}
    code, r, _ = run_json(capsys, "verify", write(tmp_path, doc), "--trials", "16")
    statuses = {s["suite"]: s["status"] for s in r["suites"]}
    assert code == 0 and statuses["census_equivalence"] == "skipped"
    assert statuses["homomorphism"] == "pass"


def test_verify_regression(tmp_path, capsys):
    doc = str(FIXTURES / "mixed_f7.json")
    code, report, _ = run_json(capsys, "analyze", doc)
    good = write(tmp_path, report, "good.json")
    code, r, _ = run_json(capsys, "verify", doc, "--report", good)
    assert code == 0 and r["passed"]
    report["period"]["T"] += 1
    bad = write(tmp_path, report, "bad.json")
    code, r, _ = run_json(capsys, "verify", doc, "--report", bad)
    assert code == 1 and r["counterexample"] == {"path": ".period.T"}
    garbage = write(tmp_path, "{not json", "garbage.json")
    code, r, _ = run_json(capsys, "verify", doc, "--report", garbage)
    assert code == 1


def test_factors_and_decompose(capsys):
    code, r, _ = run_json(capsys, "factors", str(FIXTURES / "mixed_f7.json"))
    assert code == 0
    mult = {tuple(f["factor"]): f["multiplicity"] for f in r["factors"]["characteristic_polynomial"]["factors"]}
    assert mult == {(1, 0, 1): 1, (4, 1): 2}  # (x^2 + 1)(x - 3)^2
    code, r, _ = run_json(capsys, "decompose", str(FIXTURES / "rotation_f3.json"), "--split")
    assert code == 0 and r["eigenspaces"]["split"]
    assert r["eigenspaces"]["field"] == {"kind": "extension", "p": 3, "modulus": [1, 0, 1]}


def test_determinism_in_process(capsys):
    outs = {run(capsys, "analyze", str(FIXTURES / "mixed_f7.json"), "--json")[1] for _ in range(2)}
    assert len(outs) == 1


def test_seed_override_changes_echo(capsys):
    _, r, _ = run_json(capsys, "factors", str(FIXTURES / "fibonacci_f2.json"), "--seed", "99")
    assert r["input"]["seed"] == 99


def test_parse_document_defaults():
    doc = parse_document({"field": {"kind": "rational"}, "matrix": [["1/2"]]})
    assert doc.group.kind == "integers" and doc.seed == 0
    with pytest.raises(InvalidDocument):
        parse_document({"field": {"kind": "rational"}, "matrix": [["1/0"]]})
    assert load_document(FIXTURES / "rotation_f3.json").group.T == 4
