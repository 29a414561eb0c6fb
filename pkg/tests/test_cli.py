"""CLI driver: configuration validation, suites, determinism, reports."""

import json
import subprocess
import sys

import pytest

from padicops.cli import CheckReport, RunConfig, run_suite
from padicops.errors import ConfigInvalid


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "padicops.cli", *args],
        capture_output=True,
        text=True,
    )


class TestRunConfig:
    def test_divisibility_violation(self):
        with pytest.raises(ConfigInvalid, match="8 does not divide"):
            RunConfig(p=5, l=2, k=3)

    def test_j_defaults_to_k(self):
        config = RunConfig(p=5, l=2, k=2)
        assert config.j == 2

    def test_nonprime_rejected(self):
        with pytest.raises(ConfigInvalid):
            RunConfig(p=9)

    def test_derived_rng_streams_are_stable(self):
        config = RunConfig(p=3, seed=7)
        assert config.rng("a").random() == config.rng("a").random()
        assert config.rng("a").random() != config.rng("b").random()


class TestRunSuite:
    def test_crossed_suite_passes_at_free_config(self):
        config = RunConfig(p=5, l=2, k=2, j=2)
        reports = run_suite(config, "crossed")
        assert reports
        assert all(r.status == "pass" for r in reports)

    def test_reports_sorted_by_check_id(self):
        config = RunConfig(p=3, l=2, k=1)
        reports = run_suite(config, "baer")
        ids = [r.check_id for r in reports]
        assert ids == sorted(ids)

    def test_unknown_suite_rejected(self):
        with pytest.raises(ConfigInvalid):
            run_suite(RunConfig(), "bogus")

    def test_serialization_omits_timing(self):
        report = CheckReport("x", {}, "pass", {}, wall_time_ms=12.5)
        assert "wall_time" not in json.dumps(report.as_dict())


class TestCommandLine:
    def test_golden_run_all_suites(self, tmp_path):
        out = tmp_path / "report.json"
        proc = run_cli(
            "--p", "3", "--l", "2", "--k", "1", "--suite", "all", "--out", str(out)
        )
        assert proc.returncode == 0, proc.stderr
        reports = json.loads(out.read_text())
        assert all(r["status"] == "pass" for r in reports)
        assert len(reports) == 15

    def test_byte_identical_reports(self, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            proc = run_cli(
                "--p", "3", "--suite", "fourier", "--seed", "11", "--out", str(out)
            )
            assert proc.returncode == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_invalid_config_exit_code(self):
        proc = run_cli("--p", "5", "--l", "2", "--k", "3")
        assert proc.returncode == 2
        assert "8 does not divide" in proc.stderr

    def test_custom_matrix_input(self, tmp_path):
        payload = tmp_path / "input.json"
        payload.write_text(
            json.dumps(
                {
                    "matrix": [
                        ["5", "5", "0"],
                        ["0", "5", "0"],
                        ["0", "0", "1"],
                    ],
                    "q_roots": ["1", "5"],
                }
            )
        )
        proc = run_cli(
            "--p", "5", "--suite", "mihara", "--input", str(payload)
        )
        assert proc.returncode == 0
        reports = json.loads(proc.stdout)
        custom = [
            r for r in reports if r["check_id"] == "mihara.custom_matrix_norm_identity"
        ]
        assert custom and custom[0]["detail"]["identity_holds"] is False
