"""End-to-end orchestration with persistent, resumable run directories.

Run directory layout:
    config.snapshot           effective flat key=value config
    instances.jsonl           normalized dataset copy (ingest)
    outcomes/<format>.jsonl   one reasoning outcome per line
    answers.jsonl             final per-instance answers for the pipeline
    labels.jsonl              collected label vectors (collect)
    model.bin                 trained classifier (train)
    predictions.jsonl         predicted format per instance (predict)
    metrics.json              accuracies (reason / evaluate)
    report.json, report.txt   analysis report (analyze)
"""

from __future__ import annotations

import argparse
import json
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional, Sequence

from . import analysis as analysis_mod
from . import classifier as classifier_mod
from .backend import (Backend, BackendError, GenerationRequest, HTTPBackend,
                      MockBackend, DEFAULT_SAMPLING_N, DEFAULT_TEMPERATURE)
from .core import (DatasetError, Instance, MetricError, dump_dataset,
                   load_dataset)
from .execution import (DEFAULT_EXEC_TIMEOUT, DEFAULT_RUNNER_CMD, OutcomeError,
                        ReasoningOutcome, resolve)
from .formats import CANONICAL_FORMATS, TabularFormat
from .prompting import build_prompt, load_builtin_templates, load_templates
from .vote import Ballot, self_consistency, vote

PIPELINES = ("fixed_format", "self_consistency", "vote", "single", "oracle")


class ConfigError(ValueError):
    pass


class MissingStageError(RuntimeError):
    """A command needs an artifact that a prior stage has not produced."""


@dataclass
class RunConfig:
    dataset: str = ""
    task: str = "qa"
    backend: str = "mock"  # "mock" | "http"
    mock_fixture: str = ""
    base_url: str = ""
    model: str = ""
    formats: tuple[TabularFormat, ...] = CANONICAL_FORMATS
    pipeline: str = "vote"
    format: str = ""  # fixed_format / self_consistency target
    decoding: str = "greedy"
    temperature: float = DEFAULT_TEMPERATURE
    n_samples: int = DEFAULT_SAMPLING_N
    max_tokens: int = 512
    demo_mode: str = "per_format"
    template_dir: str = ""
    tie_rule: str = "max"
    exec_timeout: float = DEFAULT_EXEC_TIMEOUT
    runner_cmd: str = ""
    workers: int = 4
    seed: int = 0
    k: int = 0  # 0 = default half-rule label filter
    epochs: int = 300
    lr: float = 0.5
    batch_size: int = 32
    l2: float = 1e-4
    run_dir: str = "run"

    def __post_init__(self):
        if isinstance(self.formats, str):
            names = [f.strip() for f in self.formats.split(",") if f.strip()]
            self.formats = tuple(TabularFormat(n) for n in names)
        else:
            self.formats = tuple(TabularFormat(f) for f in self.formats)
        if not self.formats:
            raise ConfigError("candidate formats must be non-empty")
        if len(set(self.formats)) != len(self.formats):
            raise ConfigError("candidate formats contain duplicates")
        if self.pipeline not in PIPELINES:
            raise ConfigError(f"unknown pipeline {self.pipeline!r}")
        if self.pipeline in ("fixed_format", "self_consistency") and not self.format:
            raise ConfigError(f"pipeline {self.pipeline} needs format=<name>")

    @property
    def target_format(self) -> Optional[TabularFormat]:
        return TabularFormat(self.format) if self.format else None

    def to_flat(self) -> dict[str, str]:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "formats":
                value = ",".join(fmt.value for fmt in value)
            out[f.name] = str(value)
        return out

    @classmethod
    def from_flat(cls, flat: dict[str, str]) -> "RunConfig":
        kwargs = {}
        type_map = {f.name: f.type for f in fields(cls)}
        for key, value in flat.items():
            if key not in type_map:
                raise ConfigError(f"unknown config key {key!r}")
            if key in ("temperature", "exec_timeout", "lr", "l2"):
                kwargs[key] = float(value)
            elif key in ("n_samples", "max_tokens", "workers", "seed", "k",
                         "epochs", "batch_size"):
                kwargs[key] = int(value)
            else:
                kwargs[key] = value
        return cls(**kwargs)


def parse_config_file(path: str | Path) -> dict[str, str]:
    flat = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        flat[key.strip()] = value.strip()
    return flat


def write_snapshot(config: RunConfig, run_dir: Path) -> None:
    flat = config.to_flat()
    text = "".join(f"{k} = {flat[k]}\n" for k in sorted(flat))
    (run_dir / "config.snapshot").write_text(text, encoding="utf-8")


def make_backend(config: RunConfig) -> Backend:
    if config.backend == "mock":
        fixture = config.mock_fixture or None
        return MockBackend(fixture_path=fixture, seed=config.seed)
    if config.backend == "http":
        if not config.base_url or not config.model:
            raise ConfigError("http backend needs base_url and model")
        return HTTPBackend(base_url=config.base_url, model=config.model)
    raise ConfigError(f"unknown backend {config.backend!r}")


def _runner_cmd(config: RunConfig) -> Sequence[str]:
    if config.runner_cmd:
        return config.runner_cmd.split()
    return DEFAULT_RUNNER_CMD


def _load_demo_set(config: RunConfig):
    if config.template_dir:
        return load_templates(config.template_dir)
    return load_builtin_templates(config.demo_mode)


# ------------------------------------------------------------- outcome store

def outcomes_path(run_dir: Path, fmt: TabularFormat) -> Path:
    return run_dir / "outcomes" / f"{fmt.value}.jsonl"


def load_outcomes(run_dir: Path, fmt: TabularFormat) -> dict[tuple[str, int], ReasoningOutcome]:
    path = outcomes_path(run_dir, fmt)
    out: dict[tuple[str, int], ReasoningOutcome] = {}
    if not path.is_file():
        return out
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                outcome = ReasoningOutcome.from_record(json.loads(line))
                out[(outcome.instance_id, outcome.sample_index)] = outcome
    return out


def _finalize_outcomes(run_dir: Path, fmt: TabularFormat,
                       outcomes: dict[tuple[str, int], ReasoningOutcome],
                       order: dict[str, int]) -> None:
    # Rewrite sorted by dataset order so worker scheduling never affects
    # persisted bytes.
    path = outcomes_path(run_dir, fmt)
    items = sorted(outcomes.values(),
                   key=lambda o: (order.get(o.instance_id, 1 << 30),
                                  o.sample_index))
    with open(path, "w", encoding="utf-8") as fh:
        for outcome in items:
            fh.write(json.dumps(outcome.to_record(), ensure_ascii=False,
                                sort_keys=True) + "\n")


# ------------------------------------------------------------------- reason

@dataclass
class RunRecord:
    config: RunConfig
    outcomes: dict[TabularFormat, dict[tuple[str, int], ReasoningOutcome]]
    answers: dict[str, Optional[str]]
    metrics: dict


def _request_for(config: RunConfig, prompt: str, instance: Instance,
                 fmt: TabularFormat, sampled: bool) -> GenerationRequest:
    metadata = {"instance_id": instance.id, "format": fmt.value}
    if sampled:
        return GenerationRequest(prompt=prompt, decoding="sample",
                                 temperature=config.temperature,
                                 n_samples=config.n_samples,
                                 max_tokens=config.max_tokens,
                                 metadata=metadata)
    return GenerationRequest(prompt=prompt, decoding="greedy",
                             max_tokens=config.max_tokens, metadata=metadata)


def _needed_formats(config: RunConfig, instances: Sequence[Instance],
                    run_dir: Path) -> tuple[dict[TabularFormat, list[Instance]],
                                            dict[str, TabularFormat]]:
    """Formats to reason with per instance, plus the single-pipeline
    instance-to-format assignment (empty for other pipelines)."""
    if config.pipeline in ("fixed_format", "self_consistency"):
        fmt = config.target_format
        if fmt not in config.formats:
            raise ConfigError(f"format {fmt.value} not among candidates")
        return {fmt: list(instances)}, {}
    if config.pipeline in ("vote", "oracle"):
        return {fmt: list(instances) for fmt in config.formats}, {}
    # single: one predicted format per instance
    model_path = run_dir / "model.bin"
    if not model_path.is_file():
        raise MissingStageError(
            "pipeline 'single' needs model.bin; run the train stage first")
    clf = classifier_mod.FormatClassifier.load(model_path)
    needed: dict[TabularFormat, list[Instance]] = {}
    assigned: dict[str, TabularFormat] = {}
    for inst in instances:
        fmt = classifier_mod.predict_format(clf, inst)
        needed.setdefault(fmt, []).append(inst)
        assigned[inst.id] = fmt
    return needed, assigned


def cmd_reason(config: RunConfig, backend: Optional[Backend] = None) -> RunRecord:
    run_dir = Path(config.run_dir)
    (run_dir / "outcomes").mkdir(parents=True, exist_ok=True)
    write_snapshot(config, run_dir)

    instances = load_dataset(config.dataset, config.task)
    order = {inst.id: i for i, inst in enumerate(instances)}
    demo_set = _load_demo_set(config)
    backend = backend or make_backend(config)
    runner_cmd = _runner_cmd(config)
    sampled = (config.pipeline == "self_consistency"
               or (config.pipeline != "fixed_format" and config.decoding == "sample"))
    n_per = config.n_samples if sampled else 1

    needed, assigned = _needed_formats(config, instances, run_dir)
    all_outcomes: dict[TabularFormat, dict[tuple[str, int], ReasoningOutcome]] = {}
    backend_failure: list[BaseException] = []

    for fmt, fmt_instances in needed.items():
        existing = load_outcomes(run_dir, fmt)
        missing = [inst for inst in fmt_instances
                   if any((inst.id, s) not in existing for s in range(n_per))]
        path = outcomes_path(run_dir, fmt)
        lock = threading.Lock()
        template = demo_set.get(fmt, config.task)

        def work(inst: Instance, fmt=fmt, template=template):
            prompt = build_prompt(inst, fmt, template)
            request = _request_for(config, prompt, inst, fmt, sampled)
            try:
                completions = backend.generate(request)
            except BackendError as exc:
                backend_failure.append(exc)
                outcomes = [
                    ReasoningOutcome(
                        instance_id=inst.id, format=fmt, sample_index=s,
                        raw_text="", mean_logprob=0.0, answer=None,
                        error=OutcomeError("backend", str(exc)))
                    for s in range(request.n_samples)]
            else:
                outcomes = [
                    resolve(inst, fmt, completion, sample_index=s,
                            timeout=config.exec_timeout, runner_cmd=runner_cmd)
                    for s, completion in enumerate(completions)]
            with lock:
                with open(path, "a", encoding="utf-8") as fh:
                    for outcome in outcomes:
                        existing[(outcome.instance_id, outcome.sample_index)] = outcome
                        fh.write(json.dumps(outcome.to_record(),
                                            ensure_ascii=False,
                                            sort_keys=True) + "\n")

        if missing:
            with ThreadPoolExecutor(max_workers=max(1, config.workers)) as pool:
                list(pool.map(work, missing))
        _finalize_outcomes(run_dir, fmt, existing, order)
        all_outcomes[fmt] = existing

    answers = compute_final_answers(config, instances, all_outcomes, assigned)
    gold = {inst.id: inst for inst in instances}
    try:
        acc = sum(
            1 for iid, ans in answers.items()
            if ans is not None and ans in gold[iid].gold_answers
        ) / len(answers)
    except ZeroDivisionError:
        raise MetricError("empty dataset") from None
    metrics = {"pipeline": config.pipeline, "accuracy": acc,
               "n_instances": len(answers)}

    with open(run_dir / "answers.jsonl", "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps({"instance_id": inst.id,
                                 "answer": answers[inst.id]},
                                ensure_ascii=False, sort_keys=True) + "\n")
    (run_dir / "metrics.json").write_text(
        json.dumps(metrics, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    record = RunRecord(config=config, outcomes=all_outcomes,
                       answers=answers, metrics=metrics)
    if backend_failure:
        raise BackendError(
            f"{len(backend_failure)} instances failed at the backend; "
            f"partial run persisted in {run_dir}")
    return record


def compute_final_answers(config: RunConfig, instances: Sequence[Instance],
                          outcomes: dict[TabularFormat, dict[tuple[str, int], ReasoningOutcome]],
                          assigned: Optional[dict[str, TabularFormat]] = None,
                          ) -> dict[str, Optional[str]]:
    answers: dict[str, Optional[str]] = {}
    for inst in instances:
        if config.pipeline == "fixed_format":
            outcome = outcomes[config.target_format].get((inst.id, 0))
            answers[inst.id] = outcome.answer if outcome and outcome.ok else None
        elif config.pipeline == "self_consistency":
            per = outcomes[config.target_format]
            ballot_outcomes = [per[(inst.id, s)] for s in range(config.n_samples)
                               if (inst.id, s) in per]
            answers[inst.id] = (self_consistency(Ballot(tuple(ballot_outcomes)),
                                                 tie_rule=config.tie_rule)
                                if ballot_outcomes else None)
        elif config.pipeline in ("vote", "single", "oracle"):
            if config.pipeline == "single":
                fmt = (assigned or {}).get(inst.id)
                outcome = outcomes.get(fmt, {}).get((inst.id, 0)) if fmt else None
                answers[inst.id] = outcome.answer if outcome and outcome.ok else None
            elif config.pipeline == "oracle":
                ok = [o for fmt in config.formats
                      for o in [outcomes[fmt].get((inst.id, 0))]
                      if o is not None and o.ok and o.answer in inst.gold_answers]
                answers[inst.id] = ok[0].answer if ok else None
            else:
                ballot_outcomes = []
                for fmt in config.formats:
                    per = outcomes[fmt]
                    if config.decoding == "sample":
                        ballot_outcomes.extend(
                            per[(inst.id, s)] for s in range(config.n_samples)
                            if (inst.id, s) in per)
                    elif (inst.id, 0) in per:
                        ballot_outcomes.append(per[(inst.id, 0)])
                answers[inst.id] = (vote(Ballot(tuple(ballot_outcomes)),
                                         tie_rule=config.tie_rule)
                                    if ballot_outcomes else None)
    return answers


# ------------------------------------------------------------- other stages

def cmd_ingest(config: RunConfig) -> int:
    run_dir = Path(config.run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    instances = load_dataset(config.dataset, config.task)
    dump_dataset(instances, run_dir / "instances.jsonl")
    write_snapshot(config, run_dir)
    return len(instances)


def cmd_collect(config: RunConfig) -> list[classifier_mod.LabelRecord]:
    run_dir = Path(config.run_dir)
    instances = load_dataset(config.dataset, config.task)
    per_format = {}
    for fmt in CANONICAL_FORMATS:
        loaded = load_outcomes(run_dir, fmt)
        if not loaded:
            raise MissingStageError(
                f"collect needs outcomes/{fmt.value}.jsonl; "
                "run an all-formats reason stage first")
        per_format[fmt] = {iid: o for (iid, s), o in loaded.items() if s == 0}
    records = classifier_mod.collect_labels(instances, per_format)
    with open(run_dir / "labels.jsonl", "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps({"instance_id": record.instance_id,
                                 "labels": list(record.labels)},
                                sort_keys=True) + "\n")
    return records


def _load_label_records(config: RunConfig) -> list[classifier_mod.LabelRecord]:
    run_dir = Path(config.run_dir)
    labels_path = run_dir / "labels.jsonl"
    if not labels_path.is_file():
        raise MissingStageError("labels.jsonl missing; run the collect stage first")
    instances = {inst.id: inst for inst in load_dataset(config.dataset, config.task)}
    records = []
    with open(labels_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            inst = instances.get(rec["instance_id"])
            if inst is None:
                raise MissingStageError(
                    f"label record {rec['instance_id']!r} has no dataset instance")
            records.append(classifier_mod.LabelRecord(
                instance_id=rec["instance_id"],
                features=classifier_mod.featurize(inst),
                labels=tuple(rec["labels"])))
    return records


def cmd_train(config: RunConfig) -> classifier_mod.FormatClassifier:
    records = _load_label_records(config)
    filtered = classifier_mod.filter_training(
        records, k=config.k if config.k > 0 else None)
    train_config = classifier_mod.TrainConfig(
        learning_rate=config.lr, epochs=config.epochs,
        batch_size=config.batch_size, seed=config.seed,
        max_label_threshold=config.k if config.k > 0 else 2, l2=config.l2)
    clf = classifier_mod.train(filtered, train_config)
    clf.save(Path(config.run_dir) / "model.bin")
    return clf


def cmd_predict(config: RunConfig) -> dict[str, TabularFormat]:
    run_dir = Path(config.run_dir)
    model_path = run_dir / "model.bin"
    if not model_path.is_file():
        raise MissingStageError("model.bin missing; run the train stage first")
    clf = classifier_mod.FormatClassifier.load(model_path)
    instances = load_dataset(config.dataset, config.task)
    predictions = {}
    with open(run_dir / "predictions.jsonl", "w", encoding="utf-8") as fh:
        for inst in instances:
            fmt = classifier_mod.predict_format(clf, inst)
            predictions[inst.id] = fmt
            fh.write(json.dumps({"instance_id": inst.id, "format": fmt.value},
                                sort_keys=True) + "\n")
    return predictions


def build_correctness_matrix(config: RunConfig,
                             run_dir: Path) -> analysis_mod.CorrectnessMatrix:
    instances = load_dataset(config.dataset, config.task)
    grid = []
    per_format = {}
    for fmt in CANONICAL_FORMATS:
        loaded = load_outcomes(run_dir, fmt)
        if not loaded:
            raise MissingStageError(
                f"analyze needs outcomes/{fmt.value}.jsonl for every format")
        per_format[fmt] = {iid: o for (iid, s), o in loaded.items() if s == 0}
    for inst in instances:
        row = []
        for fmt in CANONICAL_FORMATS:
            outcome = per_format[fmt].get(inst.id)
            row.append(bool(outcome and outcome.ok
                            and outcome.answer in inst.gold_answers))
        grid.append(tuple(row))
    return analysis_mod.CorrectnessMatrix(
        instance_ids=tuple(inst.id for inst in instances),
        formats=CANONICAL_FORMATS, grid=tuple(grid))


def cmd_evaluate(config: RunConfig) -> dict:
    run_dir = Path(config.run_dir)
    matrix = build_correctness_matrix(config, run_dir)
    metrics = {
        "per_format_accuracy": {f.value: a for f, a
                                in matrix.per_format_accuracy().items()},
        "oracle_accuracy": analysis_mod.oracle_accuracy(matrix),
    }
    answers_path = run_dir / "answers.jsonl"
    if answers_path.is_file():
        instances = {i.id: i for i in load_dataset(config.dataset, config.task)}
        total = hits = 0
        with open(answers_path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                inst = instances[rec["instance_id"]]
                total += 1
                if rec["answer"] is not None and rec["answer"] in inst.gold_answers:
                    hits += 1
        metrics["pipeline"] = config.pipeline
        metrics["accuracy"] = hits / total if total else 0.0
    (run_dir / "metrics.json").write_text(
        json.dumps(metrics, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return metrics


def cmd_analyze(config: RunConfig,
                extra_run_dirs: Sequence[str] = (),
                chi2_expectation: str = "paper") -> dict:
    run_dir = Path(config.run_dir)
    matrix = build_correctness_matrix(config, run_dir)

    chi = None
    run_dirs = [run_dir] + [Path(d) for d in extra_run_dirs]
    if len(run_dirs) >= 2:
        counts = []
        for rd in run_dirs:
            m = build_correctness_matrix(replace(config, run_dir=str(rd)), rd)
            counts.append([len(m.solved_set(f)) for f in CANONICAL_FORMATS])
        chi = analysis_mod.chi_square(counts, expectation=chi2_expectation)

    proportions = None
    labels_path = run_dir / "labels.jsonl"
    if labels_path.is_file():
        records = _load_label_records(config)
        try:
            proportions = analysis_mod.label_proportions(records)
        except MetricError:
            proportions = None

    method_accuracy = None
    metrics_path = run_dir / "metrics.json"
    if metrics_path.is_file():
        metrics = json.loads(metrics_path.read_text(encoding="utf-8"))
        if "accuracy" in metrics and "pipeline" in metrics:
            method_accuracy = {metrics["pipeline"]: metrics["accuracy"]}

    report = analysis_mod.build_report(
        matrix=matrix, method_accuracy=method_accuracy, chi=chi,
        proportions=proportions)
    analysis_mod.emit_report(report, run_dir / "report.json",
                             run_dir / "report.txt")
    return report


# ----------------------------------------------------------------- CLI shell

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flextab",
        description="Per-instance tabular format selection and voting for "
                    "LLM table reasoning")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--run-dir", dest="run_dir")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ingest", help="validate the dataset into the run dir")

    reason = sub.add_parser("reason", help="run a reasoning pipeline")
    reason.add_argument("--pipeline", choices=PIPELINES)
    reason.add_argument("--format", help="target format for fixed pipelines")
    reason.add_argument("--exec-timeout-secs", type=float, dest="exec_timeout")

    sub.add_parser("collect", help="collect label vectors from an all-formats run")

    train = sub.add_parser("train", help="train the format classifier")
    train.add_argument("--k", type=int, help="max label count kept in training")
    train.add_argument("--epochs", type=int)
    train.add_argument("--lr", type=float)

    sub.add_parser("predict", help="predict a format per instance")
    sub.add_parser("evaluate", help="compute accuracies from persisted outcomes")

    analyze = sub.add_parser("analyze", help="emit the analysis report")
    analyze.add_argument("--extra-run-dir", action="append", default=[],
                         help="additional run dirs (other models) for chi-square")
    analyze.add_argument("--chi2-expectation", choices=analysis_mod.CHI2_EXPECTATIONS,
                         default="paper")

    for p in sub.choices.values():
        p.add_argument("--dataset")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    flat = parse_config_file(args.config) if args.config else {}
    config = RunConfig.from_flat(flat)
    overrides = {}
    for key in ("run_dir", "seed", "workers", "dataset", "pipeline", "format",
                "exec_timeout", "k", "epochs", "lr"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if overrides:
        config = replace(config, **overrides)
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "ingest":
            n = cmd_ingest(config)
            print(f"ingested {n} instances into {config.run_dir}")
        elif args.command == "reason":
            record = cmd_reason(config)
            print(f"{config.pipeline} accuracy: {record.metrics['accuracy']:.4f} "
                  f"over {record.metrics['n_instances']} instances")
        elif args.command == "collect":
            records = cmd_collect(config)
            print(f"collected {len(records)} label records")
        elif args.command == "train":
            cmd_train(config)
            print(f"model written to {config.run_dir}/model.bin")
        elif args.command == "predict":
            predictions = cmd_predict(config)
            print(f"predicted formats for {len(predictions)} instances")
        elif args.command == "evaluate":
            metrics = cmd_evaluate(config)
            print(json.dumps(metrics, indent=2, sort_keys=True))
        elif args.command == "analyze":
            cmd_analyze(config, extra_run_dirs=args.extra_run_dir,
                        chi2_expectation=args.chi2_expectation)
            print(f"report written to {config.run_dir}/report.json")
    except (ConfigError, MissingStageError, MetricError, DatasetError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
