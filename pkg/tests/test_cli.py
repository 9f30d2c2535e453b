import json

import pytest

from smoothlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestCorpusCommand:
    def test_lists_entries(self, capsys):
        code, out = run(capsys, "corpus")
        assert code == 0
        payload = json.loads(out)
        assert len(payload["entries"]) >= 8

    def test_csv_format(self, capsys):
        code, out = run(capsys, "corpus", "--format", "csv")
        assert code == 0
        assert out.splitlines()[0].startswith("name,")


class TestModulusCommand:
    def test_plane_wave_value(self, capsys):
        code, out = run(
            capsys, "modulus", "planewave", "--alpha", "1", "--p", "inf",
            "--delta", "0.5", "--quick",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(0.4948, abs=1e-3)

    def test_curve_schema(self, capsys):
        code, out = run(
            capsys, "curve", "gaussian", "--alpha", "1", "--p", "2", "--quick"
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload["deltas"]) == len(payload["values"])


class TestVerifyCommand:
    def test_single_check_passes(self, capsys):
        code, out = run(
            capsys, "verify", "P1a", "--entry", "gaussian", "--alpha", "1",
            "--p", "2", "--quick",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["verdict"] == "pass"

    def test_hypothesis_error_exits_2(self, capsys):
        code, _ = run(
            capsys, "verify", "P1d", "--entry", "gaussian", "--alpha", "1",
            "--p", "2", "--quick",
        )
        assert code == 2

    def test_unknown_property_exits_2(self, capsys):
        code, _ = run(capsys, "verify", "P99", "--quick")
        assert code == 2

    def test_inf_exponent_spelled_out(self, capsys):
        code, out = run(
            capsys, "verify", "P1a", "--entry", "gaussian", "--alpha", "1",
            "--p", "inf", "--quick",
        )
        assert code == 0
        assert json.loads(out)["params"]["p"] == "inf"

    def test_csv_rows(self, capsys):
        code, out = run(
            capsys, "verify", "P1a", "--entry", "gaussian", "--alpha", "1",
            "--p", "2", "--quick", "--format", "csv",
        )
        assert code == 0
        header = out.splitlines()[0]
        assert "ratio" in header and "property_id" in header


class TestVerifyAllCommand:
    def test_quick_run(self, capsys, tmp_path):
        artifact = tmp_path / "report.json"
        code, out = run(capsys, "verify-all", "--quick", "--output", str(artifact))
        assert code == 0
        assert out == ""  # the one artifact went to the file
        payload = json.loads(artifact.read_text())
        assert payload["summary"]["all_pass"]


class TestConfigMerging:
    def test_config_file_with_flag_override(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"quick": True, "n_quad": 48}))
        code, out = run(
            capsys, "verify", "P1a", "--entry", "gaussian", "--alpha", "1",
            "--p", "2", "--config", str(cfg),
        )
        assert code == 0
        assert json.loads(out)["verdict"] == "pass"

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "out.json"
        code, out = run(
            capsys, "modulus", "planewave", "--alpha", "1", "--p", "inf",
            "--delta", "0.5", "--quick", "--output", str(target),
        )
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["value"] > 0
