import copy
import json
import random
import sys

import pytest

from cli import build_parser, main
from src.homkernel.config import DEFAULT_CONFIG
from src.homkernel.errors import ParseError, TypeMismatch, UndeclaredIdentifier
from src.homkernel.fields import FieldDescriptor
from src.homkernel.reporting import emit
from src.homkernel.script import EXIT_FAILURE, EXIT_OK, EXIT_PARSE_ERROR, EXIT_RUNTIME_ERROR, parse_script, run_file, run_text

R0 = "ring R = GF(32003)[x,y] / (x^2, x*y);\n"


def config(**kernel):
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    cfg["kernel"].update(kernel)
    return cfg


def run(text, **kernel):
    return run_text(text, config(**kernel), source="test.hk")


def statuses(document):
    return [record["status"] for record in document["records"]]


def test_parse_ring_declaration():
    script = parse_script(R0 + "ring W = QQ[s,t] weights (1, 2);\n")
    ring = script.rings["R"]
    assert ring.variables == ("x", "y")
    assert len(ring.quotient) == 2
    assert script.statements[0].text == "ring R = GF(32003)[x,y] / (x^2, x*y);"
    assert script.rings["W"].weights == (1, 2)
    assert script.rings["W"].field.tag == "qq"


def test_empty_script_has_no_statements():
    assert parse_script("").statements == []
    assert parse_script("# only a comment\n").statements == []


def test_undeclared_identifier_position():
    with pytest.raises(UndeclaredIdentifier) as excinfo:
        parse_script("ring R = GF(32003)[x,y];\nprint length(Q);")
    assert (excinfo.value.line, excinfo.value.column) == (2, 14)


def test_unknown_statement_lists_expected_keywords():
    with pytest.raises(ParseError) as excinfo:
        parse_script("foo;")
    assert "ring" in excinfo.value.expected
    assert "search" in excinfo.value.expected


def test_type_mismatches():
    with pytest.raises(TypeMismatch):
        parse_script("ring R = GF(12)[x];")
    with pytest.raises(TypeMismatch):
        parse_script(R0 + "ideal I = (y) in R;\nprint length(I);")
    with pytest.raises(TypeMismatch):
        parse_script(R0 + "ideal I = (y) in R;\nideal I = (x) in R;")
    with pytest.raises(TypeMismatch):
        parse_script(R0 + "search mpowers(R, 2, family cyclic deg 2) expect violation;")
    with pytest.raises(TypeMismatch):
        parse_script(R0 + "ring A = GF(32003)[x,y];\nassert equal((x) in R, (x) in A);")
    with pytest.raises(UndeclaredIdentifier):
        parse_script(R0 + "ideal I = (z) in R;")


def test_field_override_replaces_declared_field():
    script = parse_script(R0, FieldDescriptor.rationals())
    assert script.rings["R"].field.tag == "qq"
    document = run_text(R0, config(), field_override=FieldDescriptor.rationals())
    assert document["field"] == "qq"


def test_burch_script_passes():
    document = run(R0 + "ideal I = (y^2) in R;\ncheck burch(I);\nassert not burch((y) in R);\n")
    assert statuses(document) == ["ok", "ok", "pass", "pass"]
    assert document["exit_code"] == EXIT_OK
    assert document["passed"]
    assert set(document["records"][2]["result"]["m_colon"]) == {"x^2", "x*y", "y^2"}


def test_failed_assert_does_not_abort():
    document = run(R0 + "assert length(quotient(R, (y) in R)) == 3;\nassert length(residue(R)) == 1;\n")
    assert statuses(document) == ["ok", "fail", "pass"]
    assert document["records"][1]["result"] == {"length": 2}
    assert document["exit_code"] == EXIT_FAILURE


def test_runtime_error_marks_dependents():
    document = run(R0 + "module M = coker R twists (0) [[x + y^2]];\nprint length(M);\nprint length(residue(R));\n")
    assert statuses(document) == ["ok", "error", "error", "ok"]
    assert "InhomogeneousInput" in document["records"][1]["error"]
    assert "unavailable" in document["records"][2]["error"]
    assert document["exit_code"] == EXIT_RUNTIME_ERROR


def test_parse_error_document():
    document = run_text(R0 + "print length(Q);", config())
    assert document["exit_code"] == EXIT_PARSE_ERROR
    record = document["records"][0]
    assert record["kind"] == "parse"
    assert (record["line"], record["column"]) == (2, 14)


def test_searches_report_witnesses():
    document = run(
        R0
        + "module M = quotient(R, (y) in R);\n"
        + "search lichtenbaum(M, family cyclic deg 3) expect violation;\n"
        + "search lichtenbaum(M, family [quotient(R, (x) in R)]);\n"
        + "search lichtenbaum(residue(R), family cyclic deg 3) expect violation;\n"
    )
    assert statuses(document) == ["ok", "ok", "pass", "ok", "fail"]
    first = document["records"][2]["result"]
    assert first["witness"]["module"] == "R/(x)"
    assert first["witness"]["subject"] == "M"
    assert first["verified"] is True
    assert document["records"][3]["result"]["witness"]["module"] == "quotient(R, (x) in R)"
    assert document["records"][4]["result"]["witness"]["kind"] == "exhausted"


def test_torrigid_and_mpowers_searches():
    document = run(
        "ring S = GF(32003)[x] / (x^2);\n"
        + "search torrigid(residue(S), family cyclic deg 2, imax 3) expect exhausted;\n"
        + R0
        + "search mpowers(R, 2, family cyclic deg 3);\n"
    )
    assert statuses(document) == ["ok", "pass", "ok", "ok"]
    assert document["records"][1]["result"]["witness"]["bounds"]["imax"] == 3
    scan = document["records"][3]["result"]["scan"]
    assert [entry["n"] for entry in scan] == [1, 2]
    assert scan[1]["witness"]["module"] == "R/(x)"


def test_structural_asserts_and_prints():
    document = run(
        R0
        + "ring A = GF(32003)[x,y];\n"
        + "assert hilbert(quotient(R, (y) in R), 3) == (1, 1, 0, 0);\n"
        + "assert betti(resolve(quotient(R, (y) in R), 3)) == (1, 1, 1, 2);\n"
        + "assert kdepth(coker A twists (0) []) == 2;\n"
        + "assert length(coker R twists (0) []) == infinite;\n"
        + "assert free(coker A twists (1, 0) [[1, x]]);\n"
        + "assert zero(tor(1, quotient(R, (y) in R), quotient(R, (x) in R)));\n"
        + "assert equal(colon((0) in R, (y) in R), (x) in R);\n"
        + "print betti(resolve(residue(A), 2));\n"
        + "print ass((x^2, x*y) in A);\n"
        + "print pd(quotient(A, (x) in A));\n"
    )
    assert statuses(document) == ["ok", "ok"] + ["pass"] * 7 + ["ok"] * 3
    assert document["records"][9]["result"]["betti"]["totals"] == [1, 2, 1]
    assert document["records"][10]["result"]["ass"] == [["x"], ["x", "y"]]
    assert document["records"][11]["result"]["pd"] == 1


def test_checks():
    document = run(
        R0
        + "ring A = GF(32003)[x,y];\n"
        + "check cor55(quotient(A, (x) in A), quotient(A, (x^2, x*y) in A));\n"
        + "check regular(coker R twists (0) [], (y));\n"
        + "check artinrees(quotient(R, (x) in R), (y), 2);\n"
        + "check burchsharp((y^2) in R, family [quotient(R, (x) in R)], 1, 3);\n"
    )
    assert statuses(document) == ["ok", "ok", "pass", "fail", "pass", "pass"]
    assert document["records"][3]["result"]["step"] == 1


def test_timings_are_opt_in():
    assert "elapsed_sec" not in run(R0)["records"][0]
    timed = run(R0, report_timings=True)
    assert "elapsed_sec" in timed["records"][0]
    assert "elapsed_sec" in timed


def test_emit_text_and_json():
    document = run(R0 + "ring A = GF(32003)[x,y];\nideal I = (y^2) in R;\ncheck burch(I);\nprint betti(resolve(residue(A), 2));\n")
    assert json.loads(emit(document, "json")) == document
    text = emit(document, "text").decode("utf-8")
    assert "[4:1] PASS check burch(I);" in text
    assert "total: 1 2 1" in text
    assert text.rstrip().endswith("PASS (exit 0)")
    with pytest.raises(ValueError):
        emit(document, "xml")


def test_cli_parser():
    parser = build_parser()
    args = parser.parse_args(["run", "example.hk", "--json", "--field", "qq", "--res-bound", "4"])
    assert (args.command, args.file, args.json, args.field, args.res_bound) == ("run", "example.hk", True, "qq", 4)
    args = parser.parse_args(["reproduce", "all", "--no-journal"])
    assert args.example_id == "all" and args.no_journal
    assert parser.parse_args(["history"]).limit == 20


VOCABULARY = (
    "ring R = GF QQ k ( ) [ ] { } , ; / + - * ^ == 0 1 2 3 7 x y z R M I N "
    "module ideal assert check print search quotient residue coker twists in tor ext hom "
    "hilbert betti resolve length zero free equal lichtenbaum mpowers family cyclic deg gens "
    "expect violation exhausted burch artinrees not infinite ? @ $ \" #"
).split()


def test_random_token_soup_only_raises_parse_errors():
    rng = random.Random(2024)
    for trial in range(400):
        tokens = [rng.choice(VOCABULARY) for _ in range(rng.randint(1, 14))]
        text = (R0 if trial % 2 else "") + " ".join(tokens)
        try:
            parse_script(text)
        except ParseError:
            pass


def test_statement_text_survives_form_feeds():
    script = parse_script("ring R = GF(7)[x];\x0cideal I = (x) in R;\n")
    assert script.statements[1].text == "ideal I = (x) in R;"


def test_k_field_follows_the_configured_default():
    assert parse_script("ring R = k[x,y];").rings["R"].field.tag == "gf32003"
    script = parse_script("ring R = k[x,y];", default_field=FieldDescriptor.rationals())
    assert script.rings["R"].field.tag == "qq"
    document = run("ring R = k[x,y];\nring S = GF(7)[t];\n", default_field="qq")
    assert document["records"][0]["result"]["ring"] == "QQ[x,y]"
    assert document["records"][1]["result"]["ring"] == "GF(7)[t]"


def test_cyclic_family_without_degree_uses_configured_bound():
    text = R0 + "module M = quotient(R, (y) in R);\nsearch lichtenbaum(M, family cyclic) expect violation;\n"
    document = run(text, family_max_degree=2)
    assert statuses(document) == ["ok", "ok", "pass"]
    witness = document["records"][2]["result"]["witness"]
    assert witness["module"] == "R/(x)"
    assert witness["bounds"]["max_degree"] == 2
    assert run(text)["records"][2]["result"]["witness"]["bounds"]["max_degree"] == 3


def test_run_file_reports_undecodable_bytes(tmp_path):
    path = tmp_path / "bad.hk"
    path.write_bytes(b"\xff\xfe print")
    document = run_file(str(path), config())
    assert document["exit_code"] == EXIT_PARSE_ERROR
    record = document["records"][0]
    assert record["kind"] == "parse"
    assert (record["line"], record["column"]) == (1, 1)
    assert "0xff" in record["error"]
    path.write_bytes(R0.encode("utf-8") + b"print length(\xc3(;")
    assert run_file(str(path), config())["records"][0]["line"] == 2


def test_run_file_reports_missing_files(tmp_path):
    document = run_file(str(tmp_path / "missing.hk"), config())
    assert document["exit_code"] == EXIT_PARSE_ERROR
    assert document["records"][0]["kind"] == "parse"
    assert "cannot read script" in document["records"][0]["error"]
    good = tmp_path / "good.hk"
    good.write_text(R0 + "check burch((y^2) in R);\n", encoding="utf-8")
    assert run_file(str(good), config())["exit_code"] == EXIT_OK


def clear_env(monkeypatch):
    for name in ("HOMKERNEL_FIELD", "HOMKERNEL_RES_BOUND", "HOMKERNEL_DB_PATH", "HOMKERNEL_LOG_LEVEL"):
        monkeypatch.setenv(name, "")


def test_cli_run_on_invalid_utf8_exits_with_parse_error(tmp_path, monkeypatch, capsys):
    clear_env(monkeypatch)
    bad = tmp_path / "bad.hk"
    bad.write_bytes(b"\xff\xfe print")
    monkeypatch.setattr(sys, "argv", ["cli.py", "--config", str(tmp_path / "missing.json"), "run", str(bad), "--json"])
    with pytest.raises(SystemExit) as exit_info:
        main()
    assert exit_info.value.code == EXIT_PARSE_ERROR
    document = json.loads(capsys.readouterr().out)
    assert document["records"][0]["kind"] == "parse"
    assert document["exit_code"] == EXIT_PARSE_ERROR
