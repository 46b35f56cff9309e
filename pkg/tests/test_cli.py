import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from quantdesk.cli import main

MANIFEST = str(Path("data/synthetic/manifest.json").resolve())
CSV = str(Path("data/synthetic/syn_trend_up.csv").resolve())


@pytest.fixture
def runner():
    return CliRunner()


class TestBench:
    def test_small_run_writes_artifacts(self, runner, tmp_path):
        out = tmp_path / "results"
        result = runner.invoke(
            main,
            [
                "bench",
                "--manifest", MANIFEST,
                "--seed", "42",
                "--methods", "random,linreg",
                "--out", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        assert (out / "summary.txt").exists()
        payload = json.loads((out / "results.json").read_text())
        assert payload["seed"] == 42
        assert {r["method"] for r in payload["rows"]} == {"random", "linreg"}
        assert "Acc a" in result.output

    def test_determinism_between_invocations(self, runner, tmp_path):
        args = [
            "bench", "--manifest", MANIFEST, "--seed", "7",
            "--methods", "random,linreg",
        ]
        a = runner.invoke(main, args + ["--out", str(tmp_path / "a")])
        b = runner.invoke(main, args + ["--out", str(tmp_path / "b")])
        assert a.exit_code == b.exit_code == 0
        assert (tmp_path / "a" / "summary.txt").read_bytes() == (
            tmp_path / "b" / "summary.txt"
        ).read_bytes()
        assert (tmp_path / "a" / "results.json").read_bytes() == (
            tmp_path / "b" / "results.json"
        ).read_bytes()

    def test_missing_csv_noted_but_exit_zero(self, runner, tmp_path):
        manifest = tmp_path / "m.json"
        manifest.write_text(
            json.dumps(
                {
                    "assets": [
                        {
                            "symbol": "SYN_TREND_UP",
                            "timeframe": "1h",
                            "csv": str(Path(CSV)),
                            "count": 10,
                            "length": 100,
                            "holdout": 3,
                            "seed": 3,
                        },
                        {
                            "symbol": "MISSING",
                            "timeframe": "1h",
                            "csv": "not-there.csv",
                            "count": 10,
                            "length": 100,
                            "holdout": 3,
                            "seed": 4,
                        },
                    ]
                }
            )
        )
        result = runner.invoke(
            main,
            [
                "bench", "--manifest", str(manifest), "--methods", "random",
                "--out", str(tmp_path / "out"),
            ],
        )
        assert result.exit_code == 0, result.output
        assert "skipped MISSING" in result.output

    def test_unknown_methods_usage_error(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "bench", "--manifest", MANIFEST, "--methods", "none",
                "--out", str(tmp_path / "o"),
            ],
        )
        assert result.exit_code == 2

    def test_unreadable_manifest_runtime_error(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "bench", "--manifest", str(tmp_path / "nope.json"),
                "--out", str(tmp_path / "o"),
            ],
        )
        assert result.exit_code == 1
        assert "unreadable manifest" in result.output


class TestAnalyze:
    def test_analyze_prints_sections(self, runner):
        result = runner.invoke(
            main, ["analyze", "--csv", CSV, "--at", "500"]
        )
        assert result.exit_code == 0, result.output
        for section in ("== Indicators ==", "== Trend ==", "== Pattern ==", "== Decision =="):
            assert section in result.output
        assert ("LONG" in result.output) or ("SHORT" in result.output)
        assert "entry=" in result.output

    def test_analyze_missing_file(self, runner):
        result = runner.invoke(
            main, ["analyze", "--csv", "ghost.csv"]
        )
        assert result.exit_code == 1

    def test_analyze_llm_without_credentials_warns(self, runner, monkeypatch):
        for var in ("QUANTDESK_LLM_ENDPOINT", "QUANTDESK_LLM_MODEL"):
            monkeypatch.delenv(var, raising=False)
        result = runner.invoke(
            main,
            ["analyze", "--csv", CSV, "--at", "500", "--backend", "llm"],
        )
        assert result.exit_code == 0
        assert "warning:" in result.output


class TestCaseStudy:
    def test_defaults_emit_ten_rows_and_summary(self, runner):
        result = runner.invoke(main, ["case-study", "--csv", CSV])
        assert result.exit_code == 0, result.output
        rows = [
            line for line in result.output.splitlines()
            if line.startswith("window")
        ]
        assert len(rows) == 10
        assert "/10 (" in result.output.splitlines()[-1]

    def test_too_short_series(self, runner, tmp_path):
        rows = ["timestamp,open,high,low,close"]
        for i in range(50):
            rows.append(f"{3600 * (i + 1)},100,100.1,99.9,100")
        p = tmp_path / "short.csv"
        p.write_text("\n".join(rows) + "\n")
        result = runner.invoke(main, ["case-study", "--csv", str(p)])
        assert result.exit_code == 1
