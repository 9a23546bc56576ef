"""CLI: subcommands, formats, exit codes, reproducibility."""

import json

import pytest

from qgharm import cli


def run_capture(capsys, argv):
    code = cli.run(argv)
    return code, capsys.readouterr().out


class TestDims:
    def test_csv_table(self, capsys):
        code, out = run_capture(capsys, ["dims", "--group", "oplus:3", "--kmax", "10"])
        assert code == 0
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert lines[0] == '"k","n_k","s_k","b_k"'
        row3 = lines[4].split(",")
        assert row3[0] == "3" and row3[1] == "21"

    def test_json_document(self, capsys):
        code, out = run_capture(
            capsys, ["dims", "--group", "splus:4", "--kmax", "3", "--format", "json"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["header"]["version"]
        assert doc["report"]["rows"][3][1] == 7

    def test_header_block_present(self, capsys):
        _, out = run_capture(capsys, ["dims", "--group", "zd:2", "--kmax", "2"])
        assert out.startswith("# command: qgharm dims")
        assert any(l.startswith("# version:") for l in out.splitlines())


class TestGrowthFusionNorm:
    def test_growth(self, capsys):
        code, out = run_capture(
            capsys, ["growth", "--group", "oplus:2", "--kmax", "120", "--format", "json"]
        )
        assert code == 0
        assert 2.8 <= json.loads(out)["report"]["gamma_hat"] <= 3.2

    def test_fusion(self, capsys):
        code, out = run_capture(
            capsys, ["fusion", "--group", "oplus:3", "--a", "2", "--b", "3", "--format", "json"]
        )
        assert code == 0
        labels = [t[0] for t in json.loads(out)["report"]["terms"]]
        assert labels == ["1", "3", "5"]

    def test_norm_of_central_file(self, tmp_path, capsys):
        doc = {"group": "oplus:3", "coeffs": [{"k": 0, "re": 1.0, "im": 0.0}, {"k": 1, "re": 0.5, "im": 0.0}]}
        path = tmp_path / "f.json"
        path.write_text(json.dumps(doc))
        code, out = run_capture(
            capsys, ["norm", "--coeffs", str(path), "--side", "plancherel", "--format", "json"]
        )
        assert code == 0
        assert json.loads(out)["report"]["value"] == pytest.approx(5**0.5 / 2)

    def test_fgnorm(self, tmp_path, capsys):
        doc = {"N": 2, "terms": [{"word": "a", "re": 1.0, "im": 0.0}, {"word": "A", "re": 1.0, "im": 0.0}]}
        path = tmp_path / "f.json"
        path.write_text(json.dumps(doc))
        code, out = run_capture(
            capsys, ["fgnorm", "--terms", str(path), "--m", "8", "--format", "json"]
        )
        assert code == 0
        rep = json.loads(out)["report"]
        assert rep["truncated_norm"] <= rep["haagerup_bound"]
        assert rep["truncated_norm"] == pytest.approx(2.0, abs=0.1)


class TestScansAndBatteries:
    def test_scan_ultra_expected_bounded(self, capsys):
        code, _ = run_capture(
            capsys,
            ["scan-ultra", "--group", "fdual:2", "--s", "3", "--points", "60", "--format", "json"],
        )
        assert code == 0

    def test_scan_ultra_unexpected_verdict_exits_one(self, capsys):
        code, _ = run_capture(
            capsys,
            ["scan-ultra", "--group", "fdual:2", "--s", "2.5", "--expect", "bounded"],
        )
        assert code == 1

    def test_rd_degree(self, capsys):
        code, out = run_capture(
            capsys,
            ["rd-degree", "--group", "oplus:3", "--s", "1.4,1.6", "--format", "json"],
        )
        assert code == 0
        verdicts = [v["verdict"] for v in json.loads(out)["report"]["verdicts"]]
        assert verdicts == ["divergent", "convergent"]

    def test_verify_hy_battery(self, capsys):
        code, out = run_capture(
            capsys,
            ["verify", "hy", "--group", "oplus:3", "--p", "1.3333", "--trials", "10",
             "--seed", "7", "--format", "json"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["header"]["seed"] == 7
        assert doc["report"]["verdict"] == "holds"

    def test_verify_exponents(self, capsys):
        code, out = run_capture(capsys, ["verify", "exponents", "--format", "json"])
        assert code == 0
        assert all(c["ok"] for c in json.loads(out)["report"]["checks"])

    def test_verify_hl_battery(self, capsys):
        code, out = run_capture(
            capsys,
            ["verify", "hl", "--group", "oplus:3", "--p", "1.3333", "--mmax", "20",
             "--format", "json"],
        )
        assert code == 0
        assert json.loads(out)["report"]["verdict"] == "bounded"

    def test_scan_sharpness_quick(self, capsys):
        code, out = run_capture(
            capsys,
            ["scan-sharpness", "--group", "oplus:2", "--s", "0.7", "--mmin", "20",
             "--mmax", "120", "--q-mmax", "0", "--format", "json"],
        )
        assert code == 0
        assert json.loads(out)["report"]["verdict"] == "divergent"


class TestExitCodesAndDeterminism:
    def test_unknown_group_is_usage_error(self, capsys):
        code, _ = run_capture(capsys, ["dims", "--group", "bogus:3"])
        assert code == 2

    def test_unknown_flag_is_usage_error(self, capsys):
        assert cli.run(["dims", "--group", "oplus:3", "--nope"]) == 2

    def test_missing_file_is_usage_error(self, capsys):
        code, _ = run_capture(capsys, ["norm", "--coeffs", "/nonexistent.json"])
        assert code == 2

    def test_seeded_battery_reruns_byte_identical(self, tmp_path):
        path = tmp_path / "report.json"
        argv = ["verify", "hy", "--group", "oplus:3", "--p", "1.5", "--trials", "8",
                "--seed", "11", "--format", "json", "--output", str(path)]
        assert cli.run(argv) == 0
        first = path.read_bytes()
        assert cli.run(argv) == 0
        assert path.read_bytes() == first

    def test_csv_rerun_byte_identical(self, tmp_path):
        path = tmp_path / "report.csv"
        argv = ["dims", "--group", "oplus:4", "--kmax", "20", "--output", str(path)]
        cli.run(argv)
        first = path.read_bytes()
        cli.run(argv)
        assert path.read_bytes() == first

    def test_reports_identical_across_output_paths(self, tmp_path):
        # the output destination is not part of the report's identity
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        base = ["verify", "hy", "--group", "oplus:3", "--p", "1.5", "--trials", "6",
                "--seed", "3", "--format", "json"]
        assert cli.run(base + ["--output", str(a)]) == 0
        assert cli.run(base + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
