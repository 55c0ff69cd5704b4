import csv
import io
import json

import pytest

from nivat2d.config_io import dumps, loads
from nivat2d.corpus import checkerboard
from nivat2d.geometry import parse_shape
from nivat2d.verifier import (CampaignError, CampaignReport, CampaignSpec, build_configuration, emit_report,
                              profile_csv, report_json, run_campaign, workers_from_env)


def spec(corpus, checks=None, **scales):
    d = {"corpus": corpus, "scales": scales, "seed": 1}
    if checks:
        d["checks"] = checks
    return CampaignSpec.from_json(d)


def test_checkerboard_census():
    rep = run_campaign(spec([{"name": "c", "generator": {"name": "checkerboard"}}], ["expansivity-census"],
                            radius=4))
    (check,) = rep.entries[0].checks
    assert check.passed and check.data["count"] == 0


def test_fibonacci_census():
    rep = run_campaign(spec([{"name": "f", "generator": {"name": "fibonacci_lift", "length": 200},
                              "expect_lines": 1}], ["expansivity-census"], radius=6))
    (check,) = rep.entries[0].checks
    assert check.passed and check.data["lines"] == [[0, 1]]
    assert sorted(map(tuple, check.data["orientations"][0]["witnessed"])) == [(0, -1), (0, 1)]


def test_tm2d_profile(oracles):
    rep = run_campaign(spec([{"name": "tm", "generator": {"name": "tm2d", "iterations": 8}, "aperiodic": True,
                              "stability": True}], ["profile"], profile_n_max=12))
    (check,) = rep.entries[0].checks
    assert check.passed
    assert check.data["k3"] == oracles["tm2d_k3"]["8"] == check.data["k3_enlarged"]


def test_every_check_passes_on_small_corpus(tmp_path):
    s = spec([{"name": "checker", "generator": {"name": "checkerboard"}},
              {"name": "rand", "generator": {"name": "random_periodic", "count": 3}},
              {"name": "cfg", "inline": {"alphabet": ["a", "b"], "kind": "periodic", "grid": [["a", "b", "b"]]}}],
             lemma_trials=10)
    rep = run_campaign(s)
    assert len(rep.entries) == 5 and rep.passed
    assert [e.name for e in rep.entries] == ["checker", "rand[0]", "rand[1]", "rand[2]", "cfg"]
    files = emit_report(rep, tmp_path)
    names = {p.name for p in files}
    assert {"profiles.csv", "summary.csv", "report.json", "profiles.svg", "shapes.svg"} <= names


def test_input_errors_are_reported_per_entry(tmp_path):
    s = spec([{"name": "gone", "path": str(tmp_path / "missing.cfg")},
              {"name": "ok", "generator": {"name": "constant"}}], ["profile"])
    rep = run_campaign(s)
    assert rep.entries[0].error.startswith("input")
    assert rep.entries[1].passed and not rep.passed


def test_spec_errors():
    with pytest.raises(CampaignError, match="corpus"):
        CampaignSpec.from_json({})
    with pytest.raises(CampaignError, match="unknown check"):
        spec([], ["bogus"])
    with pytest.raises(CampaignError, match="exactly one"):
        spec([{"name": "x"}])
    with pytest.raises(CampaignError, match="unknown generator"):
        build_configuration(spec([{"generator": {"name": "nope"}}]).corpus[0])


def test_path_entries_resolve_against_campaign_dir(tmp_path):
    (tmp_path / "c.cfg").write_text(dumps(checkerboard()))
    (tmp_path / "camp.json").write_text(json.dumps({"corpus": [{"name": "c", "path": "c.cfg"}]}))
    s = CampaignSpec.load(tmp_path / "camp.json")
    assert build_configuration(s.corpus[0], s.base_dir) == checkerboard()


def test_empty_campaign_emits_valid_files(tmp_path):
    rep = CampaignReport([])
    emit_report(rep, tmp_path)
    assert (tmp_path / "profiles.csv").read_text() == "entry,n,k,P,bound,D,exhaustive\n"
    assert json.loads((tmp_path / "report.json").read_text()) == {"entries": [], "passed": True}
    assert (tmp_path / "profiles.svg").read_text().startswith("<svg")


def test_single_profile_row():
    rep = run_campaign(spec([{"name": "c", "generator": {"name": "constant"}}], ["profile"], profile_n_max=1))
    rows = list(csv.reader(io.StringIO(profile_csv(rep))))
    assert rows[0] == ["entry", "n", "k", "P", "bound", "D", "exhaustive"]
    assert rows[1:] == [["c", "1", "2", "1", "2", "-1", "true"], ["c", "1", "3", "1", "3", "-2", "true"]]


def test_census_json_parse_emit_fixpoint():
    rep = run_campaign(spec([{"name": "f", "generator": {"name": "fibonacci_lift"}, "expect_lines": 1}],
                            ["expansivity-census"], radius=4))
    text = report_json(rep)
    assert json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n" == text


def test_emitted_files_reparse(tmp_path):
    s = spec([{"name": "checker", "generator": {"name": "checkerboard"}},
              {"name": "tm", "generator": {"name": "tm2d", "iterations": 3}}], lemma_trials=5)
    rep = run_campaign(s)
    emit_report(rep, tmp_path, ["csv"])
    for e in rep.entries:
        stem = f"{e.index:03d}-{e.name}"
        assert loads((tmp_path / "configs" / f"{stem}.cfg").read_text()) == e.config
        for j, (_, shape) in enumerate(e.shapes):
            assert parse_shape((tmp_path / "shapes" / f"{stem}-{j}.shape").read_text()) == shape


def test_unknown_format(tmp_path):
    with pytest.raises(CampaignError):
        emit_report(CampaignReport([]), tmp_path, ["pdf"])


def test_workers_from_env(monkeypatch):
    monkeypatch.setenv("NIVAT_WORKERS", "3")
    assert workers_from_env() == 3
    monkeypatch.setenv("NIVAT_WORKERS", "lots")
    assert workers_from_env() == 1


def test_worker_count_does_not_change_output():
    s = spec([{"name": "r", "generator": {"name": "random_periodic", "count": 4}}], lemma_trials=8)
    assert report_json(run_campaign(s, workers=1)) == report_json(run_campaign(s, workers=4))
