import json
import os

import pytest

from qstarlab.cli import main
from qstarlab.scenarios import (ConfigError, SCENARIOS, list_catalog,
                                parse_config, run_scenario, write_outcome)


def test_catalog_covers_all_examples():
    assert sorted(SCENARIOS) == ["ex-2.6-1", "ex-2.6-2", "ex-2.6-3",
                                 "ex-3.2-1", "ex-3.2-2", "ex-3.8-1",
                                 "ex-3.8-2"]
    assert len(list_catalog()) == 7
    assert len(list_catalog("ccr-lab")) == 1
    assert len(list_catalog("function-lab")) == 3
    assert list_catalog("nonexistent") == []


def test_every_scenario_passes():
    for sid, scenario in sorted(SCENARIOS.items()):
        outcome = run_scenario(scenario, seed=0)
        assert outcome.passed, (sid, outcome.details)
        assert outcome.scenario_id == sid


def test_config_operation_parameter_errors(tmp_path):
    from qstarlab.serialize import nested_to_complex

    bad_cases = [
        {"module": "forms", "operation": "closability_probe",
         "parameters": {"context": "nowhere"}},
        {"module": "forms", "operation": "closability_probe",
         "parameters": {"context": "lp", "family": "nope"}},
        {"module": "op-topologies", "operation": "extend_by_closure",
         "parameters": {"topology": "norm"}},
        {"module": "op-topologies", "operation": "extend_by_closure",
         "parameters": {"target": "mystery"}},
        {"module": "gns", "operation": "gns_construct",
         "parameters": {"algebra": "m5"}},
        {"module": "gns", "operation": "gns_construct",
         "parameters": {"algebra": "z4", "state": "corner"}},
    ]
    for entry in bad_cases:
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"scenarios": [entry]}))
        assert main(["--out-dir", str(tmp_path / "o"), "run", str(cfg)]) == 2
    with pytest.raises(ValueError, match="leaves"):
        nested_to_complex([1.0, 2.0, 3.0])


def test_parse_config_validation():
    good = {"scenarios": [{"module": "gns", "operation": "gns_construct",
                           "parameters": {"algebra": "m2", "state": "trace"}}]}
    scenarios = parse_config(good)
    assert scenarios[0].module == "gns"
    with pytest.raises(ConfigError, match="scenarios"):
        parse_config({})
    with pytest.raises(ConfigError, match=r"scenarios\[0\].*missing"):
        parse_config({"scenarios": [{"module": "gns"}]})
    with pytest.raises(ConfigError, match=r"scenarios\[0\].*unknown operation"):
        parse_config({"scenarios": [{"module": "gns", "operation": "nope"}]})
    with pytest.raises(ConfigError, match="unknown parameters"):
        parse_config({"scenarios": [{"module": "gns",
                                     "operation": "gns_construct",
                                     "parameters": {"bogus": 1}}]})


def test_gns_operation_via_config(tmp_path):
    cfg = {"scenarios": [{"id": "demo", "module": "gns",
                          "operation": "gns_construct",
                          "parameters": {"algebra": "m2", "state": "corner"}}]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out_dir = tmp_path / "out"
    assert main(["--out-dir", str(out_dir), "run", str(path)]) == 0
    payload = json.loads((out_dir / "demo.json").read_text())
    assert payload["passed"] is True
    assert payload["details"]["rank"] == 2


def test_lemma24_operation(tmp_path):
    cfg = {"scenarios": [{"id": "lemma", "module": "forms",
                          "operation": "check_lemma24",
                          "parameters": {"truncation": 32}}]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out_dir = tmp_path / "out"
    assert main(["--out-dir", str(out_dir), "run", str(path)]) == 0
    payload = json.loads((out_dir / "lemma.json").read_text())
    assert payload["details"]["agree"] is True
    assert payload["details"]["counterexamples"] == []


def test_output_path_override(tmp_path):
    cfg = {"scenarios": [{"id": "demo", "module": "gns",
                          "operation": "gns_construct",
                          "parameters": {"algebra": "m2", "state": "trace"},
                          "output_path": "nested/m2_trace"}]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out_dir = tmp_path / "out"
    assert main(["--out-dir", str(out_dir), "run", str(path)]) == 0
    assert (out_dir / "nested" / "m2_trace.json").exists()
    with pytest.raises(ConfigError, match="output_path"):
        parse_config({"scenarios": [{"module": "gns",
                                     "operation": "gns_construct",
                                     "output_path": "/abs/path"}]})


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", str(bad)]) == 2
    missing = tmp_path / "missing.json"
    assert main(["run", str(missing)]) == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"scenarios": [
        {"module": "gns", "operation": "frobnicate"}]}))
    assert main(["run", str(wrong)]) == 2
    err = capsys.readouterr().err
    assert "scenarios[0]" in err
    assert main(["replicate", "ex-9.9-9"]) == 2


def test_cli_empty_scenario_list(tmp_path):
    cfg = tmp_path / "empty.json"
    cfg.write_text(json.dumps({"scenarios": []}))
    out_dir = tmp_path / "out"
    assert main(["--out-dir", str(out_dir), "run", str(cfg)]) == 0
    assert not out_dir.exists() or not os.listdir(out_dir)


def test_cli_list_machine_readable(capsys):
    assert main(["list", "--machine"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload) == 7
    assert {entry["id"] for entry in payload} == set(SCENARIOS)
    assert main(["list", "--module", "ccr-lab"]) == 0
    assert "ex-3.2-2" in capsys.readouterr().out


def test_cli_replicate_single(tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert main(["--out-dir", str(out_dir), "replicate", "ex-2.6-2"]) == 0
    assert "ex-2.6-2: pass" in capsys.readouterr().out
    assert (out_dir / "ex-2.6-2.json").exists()
    assert (out_dir / "ex-2.6-2__classification.csv").exists()


def test_write_outcome_json_embeds_tables(tmp_path):
    outcome = run_scenario(SCENARIOS["ex-2.6-2"], seed=0)
    written = write_outcome(outcome, str(tmp_path), fmt="json")
    assert len(written) == 1
    payload = json.loads((tmp_path / "ex-2.6-2.json").read_text())
    assert "classification" in payload["tables"]
    assert payload["tables"]["classification"]["header"] == ["p", "r", "s",
                                                             "tag"]


def test_outputs_deterministic(tmp_path):
    outcome1 = run_scenario(SCENARIOS["ex-2.6-3"], seed=0)
    outcome2 = run_scenario(SCENARIOS["ex-2.6-3"], seed=0)
    dir1, dir2 = tmp_path / "a", tmp_path / "b"
    files1 = write_outcome(outcome1, str(dir1))
    files2 = write_outcome(outcome2, str(dir2))
    assert [os.path.basename(f) for f in files1] \
        == [os.path.basename(f) for f in files2]
    for f1, f2 in zip(files1, files2):
        assert open(f1, "rb").read() == open(f2, "rb").read()


def test_jobs_flag_same_results(tmp_path):
    out1, out2 = tmp_path / "serial", tmp_path / "parallel"
    assert main(["--out-dir", str(out1), "replicate", "ex-2.6-1"]) == 0
    assert main(["--out-dir", str(out2), "--jobs", "2",
                 "replicate", "ex-2.6-1"]) == 0
    names = sorted(os.listdir(out1))
    assert names == sorted(os.listdir(out2))
    for name in names:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
