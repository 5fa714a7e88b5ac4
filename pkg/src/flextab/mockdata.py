"""Synthetic planted datasets for desk-scale runs and tests.

Generates instances, a planted per-format correctness matrix, and the
matching mock-backend fixture. Half the instances form a separable
subset: exactly one format is correct and the question carries a token
naming it, so a working classifier must recover it.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .core import Instance, Table, canonicalize_answer
from .formats import CANONICAL_FORMATS, TabularFormat

PLANTED_RATES = {
    TabularFormat.MARKDOWN: 0.60,
    TabularFormat.DICT: 0.55,
    TabularFormat.LIST: 0.50,
    TabularFormat.PANDAS: 0.45,
    TabularFormat.DATABASE: 0.40,
}

_FILLER = ("which", "value", "holds", "for", "the", "row", "named", "total",
           "score", "season", "team", "player", "year", "result")


@dataclass(frozen=True)
class PlantedRun:
    instances: tuple[Instance, ...]
    correctness: dict[str, dict[TabularFormat, bool]]
    fixture_records: tuple[dict, ...]

    @property
    def separable_ids(self) -> list[str]:
        return [iid for iid, row in self.correctness.items()
                if sum(row.values()) == 1 and iid.startswith("sep_")]


def _make_table(rng: random.Random, index: int) -> Table:
    n_rows = rng.randint(2, 4)
    rows = tuple(
        (f"item{index}_{r}", str(rng.randint(0, 99)), str(1990 + r))
        for r in range(n_rows))
    return Table(header=("name", "score", "year"), rows=rows)


def generate_planted_run(n_instances: int = 200, seed: int = 7,
                         n_samples: int = 5) -> PlantedRun:
    rng = random.Random(seed)
    instances = []
    correctness: dict[str, dict[TabularFormat, bool]] = {}
    records = []
    n_separable = n_instances // 2

    for i in range(n_instances):
        separable = i < n_separable
        if separable:
            target = CANONICAL_FORMATS[i % len(CANONICAL_FORMATS)]
            iid = f"sep_{i:03d}"
            question = (f"{target.value}signal " +
                        " ".join(rng.sample(_FILLER, 5)) + "?")
            row = {fmt: fmt is target for fmt in CANONICAL_FORMATS}
        else:
            iid = f"gen_{i:03d}"
            question = " ".join(rng.sample(_FILLER, 6)) + "?"
            row = {fmt: rng.random() < PLANTED_RATES[fmt]
                   for fmt in CANONICAL_FORMATS}
        gold = canonicalize_answer(f"ans{i}")
        instances.append(Instance(
            id=iid, question=question, table=_make_table(rng, i),
            gold_answers=(gold,), task="qa"))
        correctness[iid] = row

        for fmt in CANONICAL_FORMATS:
            answer = gold if row[fmt] else f"wrong {fmt.value} {i}"
            for s in range(n_samples):
                logprob = round(-rng.uniform(0.01, 2.0), 4)
                rec = {
                    "instance_id": iid,
                    "format": fmt.value,
                    "sample_index": s,
                    "mean_logprob": logprob,
                }
                if fmt is TabularFormat.MARKDOWN:
                    rec["text"] = (f"Looking at the table, "
                                   f"so the answer is: {answer}")
                else:
                    rec["text"] = f"# planted completion for {fmt.value}"
                    rec["answer"] = answer
                records.append(rec)

    return PlantedRun(instances=tuple(instances), correctness=correctness,
                      fixture_records=tuple(records))


def write_planted_run(run: PlantedRun, dataset_path: str | Path,
                      fixture_path: str | Path,
                      matrix_path: str | Path | None = None) -> None:
    from .core import dump_dataset

    dump_dataset(run.instances, dataset_path)
    with open(fixture_path, "w", encoding="utf-8") as fh:
        for rec in run.fixture_records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    if matrix_path is not None:
        with open(matrix_path, "w", encoding="utf-8") as fh:
            for iid, row in run.correctness.items():
                fh.write(json.dumps(
                    {"instance_id": iid,
                     "correct": {f.value: row[f] for f in CANONICAL_FORMATS}})
                    + "\n")
