import json
from dataclasses import replace
from pathlib import Path

import pytest

from flextab.backend import MockBackend
from flextab.cli import (ConfigError, MissingStageError, RunConfig,
                         cmd_analyze, cmd_collect, cmd_evaluate, cmd_ingest,
                         cmd_predict, cmd_reason, cmd_train, main,
                         parse_config_file)
from flextab.formats import CANONICAL_FORMATS, TabularFormat


class TestRunConfig:
    def test_formats_parse_from_string(self):
        config = RunConfig(formats="markdown,dict")
        assert config.formats == (TabularFormat.MARKDOWN, TabularFormat.DICT)

    def test_duplicate_formats_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig(formats="dict,dict")

    def test_fixed_pipeline_needs_format(self):
        with pytest.raises(ConfigError):
            RunConfig(pipeline="fixed_format")

    def test_unknown_pipeline_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig(pipeline="bogus")

    def test_flat_round_trip(self):
        config = RunConfig(dataset="d.jsonl", pipeline="self_consistency",
                           format="dict", n_samples=3, lr=0.1, seed=5)
        assert RunConfig.from_flat(config.to_flat()) == config

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("# comment\n\ndataset = d.jsonl\nseed = 4\n"
                        "formats = markdown, database\n")
        config = RunConfig.from_flat(parse_config_file(path))
        assert config.dataset == "d.jsonl"
        assert config.seed == 4
        assert config.formats == (TabularFormat.MARKDOWN,
                                  TabularFormat.DATABASE)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig.from_flat({"mystery": "1"})

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("just words\n")
        with pytest.raises(ConfigError, match="key = value"):
            parse_config_file(path)


def _base_config(planted_files, run_dir, **over):
    defaults = dict(
        dataset=str(planted_files / "dataset.jsonl"), backend="mock",
        mock_fixture=str(planted_files / "fixture.jsonl"),
        pipeline="vote", run_dir=str(run_dir), workers=4)
    defaults.update(over)
    return RunConfig(**defaults)


def _planted_fraction(planted_files, fmt=None):
    rows = [json.loads(l) for l in
            open(planted_files / "matrix.jsonl", encoding="utf-8")]
    if fmt is None:
        return sum(any(r["correct"].values()) for r in rows) / len(rows)
    return sum(r["correct"][fmt] for r in rows) / len(rows)


class TestStageChain:
    def test_ingest(self, planted_files, tmp_path):
        config = _base_config(planted_files, tmp_path / "run")
        assert cmd_ingest(config) == 60
        assert (tmp_path / "run" / "instances.jsonl").is_file()
        assert (tmp_path / "run" / "config.snapshot").is_file()

    def test_fixed_format_accuracy_matches_planted_matrix(
            self, planted_files, tmp_path):
        for fmt in ("markdown", "database"):
            config = _base_config(planted_files, tmp_path / f"run_{fmt}",
                                  pipeline="fixed_format", format=fmt)
            record = cmd_reason(config)
            assert record.metrics["accuracy"] == pytest.approx(
                _planted_fraction(planted_files, fmt))

    def test_oracle_pipeline_matches_any_format_solve(
            self, planted_files, tmp_path):
        config = _base_config(planted_files, tmp_path / "run",
                              pipeline="oracle")
        record = cmd_reason(config)
        assert record.metrics["accuracy"] == pytest.approx(
            _planted_fraction(planted_files))

    def test_full_chain_with_classifier(self, planted_files, tmp_path):
        run_dir = tmp_path / "run"
        config = _base_config(planted_files, run_dir)
        vote_record = cmd_reason(config)

        records = cmd_collect(config)
        assert len(records) == 60
        assert (run_dir / "labels.jsonl").is_file()

        cmd_train(replace(config, epochs=60))
        assert (run_dir / "model.bin").is_file()

        predictions = cmd_predict(config)
        assert set(predictions) == {r.instance_id for r in records}
        assert (run_dir / "predictions.jsonl").is_file()

        single = cmd_reason(replace(config, pipeline="single"))
        best_fixed = max(
            _planted_fraction(planted_files, f.value)
            for f in CANONICAL_FORMATS)
        assert single.metrics["accuracy"] > best_fixed
        assert vote_record.metrics["accuracy"] >= 0.0  # persisted earlier

        metrics = cmd_evaluate(config)
        for fmt in CANONICAL_FORMATS:
            assert metrics["per_format_accuracy"][fmt.value] == pytest.approx(
                _planted_fraction(planted_files, fmt.value))
        assert metrics["oracle_accuracy"] == pytest.approx(
            _planted_fraction(planted_files))

        report = cmd_analyze(config)
        assert report["oracle"] == pytest.approx(
            _planted_fraction(planted_files))
        assert (run_dir / "report.json").is_file()
        assert (run_dir / "report.txt").is_file()

    def test_self_consistency_runs_samples(self, planted_files, tmp_path):
        config = _base_config(planted_files, tmp_path / "run",
                              pipeline="self_consistency", format="dict",
                              n_samples=5)
        backend = MockBackend(fixture_path=config.mock_fixture)
        record = cmd_reason(config, backend=backend)
        assert backend.completion_count == 60 * 5
        assert record.metrics["accuracy"] == pytest.approx(
            _planted_fraction(planted_files, "dict"))

    def test_missing_stage_errors(self, planted_files, tmp_path):
        config = _base_config(planted_files, tmp_path / "empty")
        with pytest.raises(MissingStageError):
            cmd_collect(config)
        with pytest.raises(MissingStageError):
            cmd_train(config)
        with pytest.raises(MissingStageError):
            cmd_predict(config)
        with pytest.raises(MissingStageError):
            cmd_reason(replace(config, pipeline="single"))


class TestDeterminismAndResume:
    def _run_files(self, run_dir: Path) -> dict[str, bytes]:
        out = {}
        for path in sorted(run_dir.rglob("*")):
            if path.is_file():
                out[str(path.relative_to(run_dir))] = path.read_bytes()
        return out

    def test_repeat_runs_are_byte_identical(self, planted_files, tmp_path):
        snapshots = []
        for name in ("a", "b"):
            config = _base_config(planted_files, tmp_path / name)
            cmd_reason(config)
            files = self._run_files(tmp_path / name)
            del files["config.snapshot"]  # differs in run_dir path
            snapshots.append(files)
        assert snapshots[0] == snapshots[1]

    def test_rerun_of_completed_stage_changes_nothing(
            self, planted_files, tmp_path):
        config = _base_config(planted_files, tmp_path / "run")
        cmd_reason(config)
        before = self._run_files(tmp_path / "run")
        backend = MockBackend(fixture_path=config.mock_fixture)
        cmd_reason(config, backend=backend)
        assert backend.call_count == 0
        assert self._run_files(tmp_path / "run") == before

    def test_resume_issues_only_missing_calls(self, planted_files, tmp_path):
        config = _base_config(planted_files, tmp_path / "run",
                              pipeline="fixed_format", format="markdown")
        cmd_reason(config)
        outcomes_path = tmp_path / "run" / "outcomes" / "markdown.jsonl"
        complete = outcomes_path.read_bytes()
        lines = complete.decode().splitlines(keepends=True)
        outcomes_path.write_text("".join(lines[:40]), encoding="utf-8")

        backend = MockBackend(fixture_path=config.mock_fixture)
        cmd_reason(config, backend=backend)
        assert backend.call_count == 60 - 40
        assert outcomes_path.read_bytes() == complete


class TestMainEntry:
    def test_subcommand_round_trip(self, planted_files, tmp_path, capsys):
        conf = tmp_path / "run.conf"
        run_dir = tmp_path / "run"
        conf.write_text(
            f"dataset = {planted_files / 'dataset.jsonl'}\n"
            f"mock_fixture = {planted_files / 'fixture.jsonl'}\n"
            "backend = mock\npipeline = vote\n"
            f"run_dir = {run_dir}\n")
        assert main(["--config", str(conf), "ingest"]) == 0
        assert main(["--config", str(conf), "reason"]) == 0
        assert main(["--config", str(conf), "collect"]) == 0
        assert main(["--config", str(conf), "train", "--epochs", "40"]) == 0
        assert main(["--config", str(conf), "predict"]) == 0
        assert main(["--config", str(conf), "evaluate"]) == 0
        assert main(["--config", str(conf), "analyze"]) == 0
        out = capsys.readouterr().out
        assert "vote accuracy" in out
        assert (run_dir / "report.txt").is_file()

    def test_error_exit_code(self, tmp_path, capsys):
        assert main(["--run-dir", str(tmp_path / "x"), "collect",
                     "--dataset", str(tmp_path / "missing.jsonl")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_chi_square_across_run_dirs(self, planted_files, tmp_path):
        # Two "models": the planted fixture run and a second run dir made
        # by copying outcomes (identical counts → statistic 0).
        import shutil

        config = _base_config(planted_files, tmp_path / "m1")
        cmd_reason(config)
        shutil.copytree(tmp_path / "m1", tmp_path / "m2")
        report = cmd_analyze(config,
                             extra_run_dirs=[str(tmp_path / "m2")])
        assert report["chi_square"]["statistic"] == pytest.approx(0.0)
        assert report["chi_square"]["dof"] == 4
