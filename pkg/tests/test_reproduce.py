import copy
import json

import pytest

from src.homkernel.config import DEFAULT_CONFIG, FIELD_CHOICES, load_config
from src.homkernel.errors import UnknownExampleId
from src.homkernel.journal import ReproduceJournal
from src.homkernel.reporting import emit
from src.homkernel.reproduce import REGISTRY, reproduce


EXAMPLE_IDS = [
    "burch-y2",
    "lichtenbaum-R0-yR",
    "quasi-R0-y2",
    "syz2-length",
    "prop20-witness",
    "kx-x4-torrigid",
    "kx-x2-rigid",
    "toric-e1",
    "qs-artinrees",
    "cor26-ann",
    "fact11-koszul",
    "kdepth-table",
    "ext-erigid",
    "nonCM-toric-depth",
    "mpowers-depth-zero",
    "syz-infinite-length",
]


def test_registry_lists_every_example():
    assert list(REGISTRY) == EXAMPLE_IDS
    assert all(case.description for case in REGISTRY.values())


def test_unknown_example_id():
    with pytest.raises(UnknownExampleId):
        reproduce("no-such-example", copy.deepcopy(DEFAULT_CONFIG))


@pytest.mark.parametrize("example_id", EXAMPLE_IDS)
def test_examples_pass_over_both_fields(example_id):
    result = reproduce(example_id, copy.deepcopy(DEFAULT_CONFIG))
    failures = [
        (run["field"], record["line"], record["statement"], record.get("error"))
        for run in result["runs"]
        for record in run["records"]
        if record["status"] not in ("ok", "pass")
    ]
    assert failures == []
    assert result["passed"]
    assert result["exit_code"] == 0
    assert [run["field"] for run in result["runs"]] == ["gf32003", "qq"]


def test_reproduce_is_journaled(tmp_path):
    journal = ReproduceJournal(str(tmp_path / "journal" / "runs.db"))
    result = reproduce("burch-y2", copy.deepcopy(DEFAULT_CONFIG), journal)
    runs = journal.recent_runs()
    assert [(run["example_id"], run["field"], run["passed"]) for run in runs] == [
        ("burch-y2", "qq", True),
        ("burch-y2", "gf32003", True),
    ]
    assert runs[0]["failures"] == []
    assert journal.stats()["total_runs"] == 2
    text = emit(result, "text").decode("utf-8")
    assert text.startswith("== burch-y2:")
    assert json.loads(emit(result, "json"))["example_id"] == "burch-y2"


def test_journal_stats(tmp_path):
    journal = ReproduceJournal(str(tmp_path / "runs.db"))
    assert journal.stats() == {"total_runs": 0, "passed": 0, "failed": 0, "pass_rate": 0.0}
    first = journal.record_run("syz2-length", "gf32003", True, elapsed_sec=0.5)
    second = journal.record_run("syz2-length", "qq", False, ["6:1 fail assert length(syzygy(N, 2)) == 1;"])
    assert second > first
    latest = journal.recent_runs(limit=1)
    assert len(latest) == 1
    assert latest[0]["passed"] is False
    assert latest[0]["failures"] == ["6:1 fail assert length(syzygy(N, 2)) == 1;"]
    stats = journal.stats()
    assert (stats["passed"], stats["failed"], stats["pass_rate"]) == (1, 1, 50.0)


def search_records(result):
    return [
        record
        for run in result["runs"]
        for record in run["records"]
        if record["statement"].startswith("search lichtenbaum")
    ]


def test_square_of_maximal_ideal_witness_is_the_coordinate_line():
    result = reproduce("prop20-witness", copy.deepcopy(DEFAULT_CONFIG))
    records = search_records(result)
    assert len(records) == 4
    assert all(record["result"]["witness"]["module"] == "R/(x)" for record in records)


def test_quasi_case_separates_the_two_properties():
    result = reproduce("quasi-R0-y2", copy.deepcopy(DEFAULT_CONFIG))
    for run in result["runs"]:
        kinds = [
            record["result"]["witness"]["kind"]
            for record in run["records"]
            if record["statement"].startswith("search")
        ]
        assert kinds == ["exhausted", "lichtenbaum-violation"]


def clear_env(monkeypatch):
    for name in ("HOMKERNEL_FIELD", "HOMKERNEL_RES_BOUND", "HOMKERNEL_DB_PATH", "HOMKERNEL_LOG_LEVEL"):
        monkeypatch.setenv(name, "")


def test_config_defaults_and_file_merge(tmp_path, monkeypatch):
    clear_env(monkeypatch)
    assert load_config(str(tmp_path / "missing.json")) == DEFAULT_CONFIG
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"kernel": {"resolution_bound": 3}}))
    merged = load_config(str(path))
    assert merged["kernel"]["resolution_bound"] == 3
    assert merged["kernel"]["hilbert_prefix"] == DEFAULT_CONFIG["kernel"]["hilbert_prefix"]
    assert DEFAULT_CONFIG["kernel"]["resolution_bound"] == 6


def test_config_env_overrides(tmp_path, monkeypatch):
    clear_env(monkeypatch)
    monkeypatch.setenv("HOMKERNEL_FIELD", "QQ")
    monkeypatch.setenv("HOMKERNEL_RES_BOUND", "4")
    monkeypatch.setenv("HOMKERNEL_DB_PATH", str(tmp_path / "x.db"))
    monkeypatch.setenv("HOMKERNEL_LOG_LEVEL", "debug")
    cfg = load_config(str(tmp_path / "missing.json"))
    assert cfg["kernel"]["default_field"] == "qq"
    assert cfg["kernel"]["default_field"] in FIELD_CHOICES
    assert cfg["kernel"]["resolution_bound"] == 4
    assert cfg["database_path"] == str(tmp_path / "x.db")
    assert cfg["logging"]["level"] == "DEBUG"
    monkeypatch.setenv("HOMKERNEL_FIELD", "gf7")
    with pytest.raises(ValueError):
        load_config(str(tmp_path / "missing.json"))
