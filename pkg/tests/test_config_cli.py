import copy
import csv
import json

import pytest

from codeplan import fixture_names, fixture_path
from codeplan.cli import EXIT_NO_ADMISSIBLE, EXIT_OK, EXIT_ORACLE, EXIT_SCHEMA, main
from codeplan.config import SchemaError, load_scenario, scenario_from_dict, validate_document
from codeplan.oracle import SyntheticOracle
from codeplan.report import table_skeleton
from codeplan.search import Bootstrap


def base_doc():
    return {
        "scenario_id": "tiny",
        "local": {"blocks": [{"a": 0, "c": 1e-3}, {"a": 0, "c": 2e-3}, {"a": 0, "c": 1e-3}],
                  "batch_size": 4, "base_accuracy": 0.9},
        "host": {"blocks": [{"a": 0, "c": 1e-4}], "batch_size": 4},
        "links": {"entry": {"a": 0, "c": 0}, "exit": {"a": 0, "c": 0}, "skip": {"a": 0, "c": 0}},
        "s": 2,
        "oracle": {"type": "synthetic", "base": 0.85, "alpha": 0.2, "beta": 0.1},
    }


def write(tmp_path, doc, name="sc.json"):
    fname = tmp_path / name
    fname.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(fname)


def run(*argv):
    return main([str(a) for a in argv])


class TestConfig:
    def test_minimal_document(self):
        bundle = scenario_from_dict(base_doc())
        assert bundle.scenario.s == 2
        assert bundle.scenario.n_f == 100
        assert bundle.search.bootstrap is Bootstrap.FIRST_ADMISSIBLE
        assert isinstance(bundle.oracle, SyntheticOracle)

    def test_unknown_key_named(self):
        doc = base_doc()
        doc["links"]["entry"]["latency"] = 3
        with pytest.raises(SchemaError, match=r"\$\.links\.entry\.latency"):
            validate_document(doc)

    def test_unknown_top_level_key(self):
        doc = base_doc()
        doc["hosts"] = {}
        with pytest.raises(SchemaError, match=r"\$\.hosts"):
            validate_document(doc)

    def test_wrong_type_located(self):
        doc = base_doc()
        doc["local"]["batch_size"] = "32"
        with pytest.raises(SchemaError, match=r"\$\.local\.batch_size"):
            validate_document(doc)

    def test_oracle_branch_error(self):
        doc = base_doc()
        doc["oracle"] = {"type": "external"}
        with pytest.raises(SchemaError, match="command"):
            validate_document(doc)

    def test_s_above_batch(self):
        doc = base_doc()
        doc["s"] = 5
        with pytest.raises(SchemaError):
            scenario_from_dict(doc)

    def test_malformed_json_location(self, tmp_path):
        fname = write(tmp_path, '{\n  "s": 2,\n  oops\n}')
        with pytest.raises(SchemaError, match=r"sc\.json:3:3"):
            load_scenario(fname)

    def test_table_file_relative_to_scenario(self, tmp_path):
        (tmp_path / "acc.json").write_text(json.dumps({"entries": [], "default": 0.4}))
        doc = base_doc()
        doc["oracle"] = {"type": "table", "file": "acc.json"}
        bundle = load_scenario(write(tmp_path, doc))
        assert bundle.oracle.default == 0.4

    def test_seed_override(self):
        doc = base_doc()
        doc["oracle"].update(sigma=0.1, seed=1)
        assert scenario_from_dict(doc, seed=9).oracle.seed == 9
        assert scenario_from_dict(doc).oracle.seed == 1

    @pytest.mark.parametrize("name", fixture_names())
    def test_fixtures_load(self, name):
        bundle = load_scenario(fixture_path(name))
        assert bundle.scenario.scenario_id == name


class TestCli:
    def test_enumerate_exp4(self, tmp_path):
        assert run("enumerate", "--scenario", fixture_path("exp4"), "--out", tmp_path, "--jobs", 4) == EXIT_OK
        rep = json.loads((tmp_path / "report.json").read_text())
        assert rep["n_paths"] == 330
        rows = list(csv.DictReader((tmp_path / "paths.csv").open()))
        assert len(rows) == 330
        assert rep["n_admissible"] == sum(r["admissible"] == "True" for r in rows)

    def test_jobs_do_not_change_output(self, tmp_path):
        run("enumerate", "--scenario", fixture_path("exp4"), "--out", tmp_path / "a", "--jobs", 1)
        run("enumerate", "--scenario", fixture_path("exp4"), "--out", tmp_path / "b", "--jobs", 8)
        assert (tmp_path / "a/report.json").read_bytes() == (tmp_path / "b/report.json").read_bytes()

    def test_search_and_brute_force(self, tmp_path):
        assert run("search", "--scenario", fixture_path("exp4"), "--out", tmp_path / "c") == EXIT_OK
        assert run("search", "--scenario", fixture_path("exp4"), "--out", tmp_path / "b", "--brute-force") == EXIT_OK
        code = json.loads((tmp_path / "c/report.json").read_text())
        bf = json.loads((tmp_path / "b/report.json").read_text())
        assert code["best"]["r_p"] == bf["best"]["r_p"] == [0, 1, 4, 5]
        assert code["mode"] == "code" and bf["mode"] == "brute_force"
        assert len(code["trace"]) == code["stages_run"]
        assert (tmp_path / "c/trace.csv").exists()

    def test_no_admissible_exit_code(self, tmp_path, capsys):
        doc = base_doc()
        doc["links"]["skip"] = {"a": 1.0, "c": 0}
        doc["links"]["entry"] = {"a": 1.0, "c": 0}
        assert run("search", "--scenario", write(tmp_path, doc), "--out", tmp_path / "o") == EXIT_NO_ADMISSIBLE
        assert "beats the original" in capsys.readouterr().err

    def test_schema_exit_code(self, tmp_path):
        assert run("search", "--scenario", write(tmp_path, "{ nope"), "--out", tmp_path / "o") == EXIT_SCHEMA
        assert run("search", "--scenario", tmp_path / "missing.json", "--out", tmp_path / "o") == EXIT_SCHEMA

    def test_oracle_exit_code(self, tmp_path, capsys):
        doc = base_doc()
        doc["oracle"] = {"type": "table", "entries": []}
        assert run("search", "--scenario", write(tmp_path, doc), "--out", tmp_path / "o") == EXIT_ORACLE
        # the first admissible path is the one that misses
        assert "cross[0,0,0,2]" in capsys.readouterr().err

    def test_simulate_path(self, tmp_path):
        argv = ["simulate", "--scenario", fixture_path("exp4"), "--out", tmp_path, "--path", "0,1,4,5"]
        assert run(*argv) == EXIT_OK
        rep = json.loads((tmp_path / "report.json").read_text())
        assert rep["path"]["r_p"] == [0, 1, 4, 5]
        assert rep["rel_error"] <= 0.02
        assert (tmp_path / "sim.csv").exists()

    def test_simulate_baseline(self, tmp_path):
        assert run("simulate", "--scenario", fixture_path("exp1_imagenet"), "--out", tmp_path) == EXIT_OK
        rep = json.loads((tmp_path / "report.json").read_text())
        assert rep["path"] is None
        assert rep["rel_error"] <= 0.02

    def test_simulate_bad_path(self, tmp_path, capsys):
        argv = ["simulate", "--scenario", fixture_path("exp4"), "--out", tmp_path, "--path", "3,1,1,2"]
        assert run(*argv) == EXIT_SCHEMA
        assert "lout < lin" in capsys.readouterr().err

    def test_external_oracle_via_cli(self, tmp_path, stub_script):
        cmd = stub_script(
            """
            import json, sys
            for line in sys.stdin:
                req = json.loads(line)
                print(json.dumps({"accuracy": 0.9 if req["kind"] == "cross" else 0.5}), flush=True)
            """
        )
        doc = base_doc()
        doc["oracle"] = {"type": "external", "command": cmd, "timeout": 30}
        assert run("search", "--scenario", write(tmp_path, doc), "--out", tmp_path / "o") == EXIT_OK
        rep = json.loads((tmp_path / "o/report.json").read_text())
        assert rep["best"]["kind"] == "cross"


def test_table_skeleton_round_trip(tmp_path):
    run("enumerate", "--scenario", fixture_path("exp4"), "--out", tmp_path)
    enum = json.loads((tmp_path / "report.json").read_text())
    skeleton = table_skeleton(enum, accuracy=0.5)
    doc = copy.deepcopy(load_scenario(fixture_path("exp4")).raw)
    doc["oracle"] = {"type": "table", "entries": skeleton}
    bundle = scenario_from_dict(doc)
    assert len(bundle.oracle.entries) == 330
    for row in enum["paths"]:
        path = bundle.scenario.path_from_vector(row["r_p"])
        assert bundle.oracle.evaluate(path, bundle.scenario) == 0.5
