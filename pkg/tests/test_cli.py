import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from zetareg import cli_reporter
from zetareg.cli_reporter import (ConfigError, SuiteConfig, emit_tables, main, parse_config_text,
                                  run)
from zetareg.fock_rep import PaddingError

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "report-schema.json").read_text())
TABLE_SCHEMA = {**{k: v for k, v in SCHEMA.items() if k in ("$schema", "$defs")},
                "$ref": "#/$defs/table"}


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


class TestRun:
    def test_zeta_suite(self, capsys):
        code = main(["run", "--suites", "zeta"])
        out = capsys.readouterr().out
        assert code == 0
        assert "-1/12" in out and out.splitlines()[-1].endswith("0 failed")

    def test_unknown_suite_is_usage_error(self, capsys):
        assert main(["run", "--suites", "nonexistent"]) == 2
        assert "nonexistent" in capsys.readouterr().err

    def test_bad_flag_value(self, capsys):
        assert main(["run", "--suites", "zeta", "--max-weight", "0"]) == 2

    def test_json_validates_and_is_deterministic(self, capsys):
        code, first = run_json(capsys, "run", "--suites", "zeta,iterates")
        _, second = run_json(capsys, "run", "--suites", "zeta,iterates")
        assert code == 0
        jsonschema.validate(first, SCHEMA)
        assert first["schemaVersion"] == 1
        assert strip_timing(first) == strip_timing(second)

    def test_internal_inconsistency_exits_3(self, monkeypatch, capsys):
        def boom(cfg):
            raise PaddingError("block beyond window")
        monkeypatch.setitem(cli_reporter.SUITE_RUNNERS, "zeta", boom)
        assert main(["run", "--suites", "zeta", "--workers", "1"]) == 3
        assert "PaddingError" in capsys.readouterr().err

    def test_failing_check_gives_nonzero_exit(self, monkeypatch):
        from zetareg.cli_reporter import Check
        monkeypatch.setitem(cli_reporter.SUITE_RUNNERS, "zeta",
                            lambda cfg: [Check("forced", "forced failure", False, {})])
        _, code = run(SuiteConfig(suites=("zeta",), workers=1))
        assert code == 1

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "zetareg", "zeta-table", "--n", "2"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and "-1/12" in proc.stdout


class TestConfig:
    def test_parse(self):
        cfg = parse_config_text("max-weight = 3\nmoduli = 3, 4  # comment\njson = true\n")
        assert cfg == {"max_weight": 3, "moduli": (3, 4), "output_format": "json"}

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config_text("colour = blue\n")

    def test_flags_override_file(self, tmp_path, capsys):
        path = tmp_path / "zr.cfg"
        path.write_text("suites = zeta\nmax-weight = 3\nseed = 7\n")
        code, report = run_json(capsys, "run", "--config", str(path), "--max-weight", "2")
        assert code == 0
        assert report["config"]["maxWeight"] == 2
        assert report["config"]["seed"] == 7
        assert [b["suite"] for b in report["suites"]] == ["zeta"]

    def test_missing_file(self, capsys):
        assert main(["run", "--config", "/nonexistent/zr.cfg"]) == 2


class TestTables:
    def test_zeta_rows(self):
        t = emit_tables("zeta", n=5)
        assert t["rows"] == [["-1", "-1/12"], ["-2", "0"], ["-3", "1/120"], ["-4", "0"],
                             ["-5", "-1/252"]]

    def test_l_values_mod_4(self):
        rows = emit_tables("l-values", modulus=4)["rows"]
        assert [r[1:] for r in rows if r[2] == "1"] == [["odd", "1", "1/2"]]

    def test_eisenstein(self):
        t = emit_tables("eisenstein", k=2, order=3)
        assert t["rows"][0][-1] == "-1/24 + q + 3*q^2 + 4*q^3 + O(q^4)"

    def test_json_mirrors_text(self, capsys):
        code, table = run_json(capsys, "zeta-table", "--n", "3")
        assert code == 0 and table == emit_tables("zeta", n=3)
        jsonschema.validate(table, TABLE_SCHEMA)

    def test_approx_column_is_extra(self):
        t = emit_tables("zeta", n=1, with_approx=True)
        assert t["columns"][-1] == "approx" and t["rows"][0][1] == "-1/12"


class TestSubcommands:
    def test_verify_commutators_ss0(self, capsys):
        code = main(["verify-commutators", "--family", "ss0", "--r", "1", "--s", "1",
                     "--m-range", "2", "--max-weight", "3"])
        assert code == 0
        assert "FAIL" not in capsys.readouterr().out

    def test_fock_dims(self, capsys):
        code, table = run_json(capsys, "fock-dims", "--max-weight", "2")
        assert code == 0
        jsonschema.validate(table, TABLE_SCHEMA)
