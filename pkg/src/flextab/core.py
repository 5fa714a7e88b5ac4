"""Canonical data model, dataset ingestion, and exact-match scoring."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .formats import sanitize_column

TASK_QA = "qa"
TASK_VERIFICATION = "verification"
TASKS = (TASK_QA, TASK_VERIFICATION)

_TRUTHY = {"true", "yes", "1"}
_FALSY = {"false", "no", "0"}
_THOUSANDS = re.compile(r"(?<=\d),(?=\d)")
_NUMBER = re.compile(r"[+-]?\d+(\.\d+)?")


class DatasetError(ValueError):
    """Malformed dataset file; carries the 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralError(DatasetError):
    """Record violates a table/instance invariant."""


class MetricError(ValueError):
    """A metric was requested over an empty input."""


@dataclass(frozen=True)
class Table:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "header", tuple(self.header))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        if not self.header:
            raise StructuralError("table header is empty")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.header):
                raise StructuralError(
                    f"row {i} has {len(row)} cells, expected {len(self.header)}")
        sanitized = [sanitize_column(c, i) for i, c in enumerate(self.header)]
        if len(set(sanitized)) != len(sanitized):
            raise StructuralError(
                f"duplicate column names after sanitization: {sanitized}")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.header)

    def column(self, index: int) -> tuple[str, ...]:
        return tuple(row[index] for row in self.rows)


@dataclass(frozen=True)
class Instance:
    id: str
    question: str
    table: Table
    gold_answers: tuple[str, ...]
    task: str = TASK_QA

    def __post_init__(self):
        object.__setattr__(self, "gold_answers", tuple(self.gold_answers))
        if self.task not in TASKS:
            raise StructuralError(f"unknown task {self.task!r}")
        if not self.gold_answers:
            raise StructuralError(f"instance {self.id!r} has no gold answers")
        if self.task == TASK_VERIFICATION:
            bad = [a for a in self.gold_answers if a not in ("true", "false")]
            if bad:
                raise StructuralError(
                    f"instance {self.id!r}: verification answers must be "
                    f"true/false, got {bad}")


@dataclass(frozen=True)
class Answer:
    raw: str
    canonical: str

    @classmethod
    def of(cls, raw: str, task: str = TASK_QA) -> "Answer":
        return cls(raw=raw, canonical=canonicalize_answer(raw, task))


def _canonical_number(s: str) -> Optional[str]:
    stripped = _THOUSANDS.sub("", s)
    if not _NUMBER.fullmatch(stripped):
        return None
    try:
        d = Decimal(stripped).normalize()
    except InvalidOperation:  # pragma: no cover - regex should prevent this
        return None
    out = format(d, "f")
    if out == "-0":
        out = "0"
    return out


def canonicalize_answer(raw: str, task: str = TASK_QA) -> str:
    """Normalize an answer string for exact-match comparison.

    Lowercase, trim, drop one trailing period, collapse internal
    whitespace; a string that is wholly numeric (after stripping thousands
    separators) becomes its shortest decimal rendering. Verification
    answers additionally map truthy/falsy variants to "true"/"false".
    """
    s = raw.strip().lower()
    # Iterate so the normal form is a fixed point ("a.." and "a." agree).
    while s.endswith("."):
        s = s[:-1].rstrip()
    s = re.sub(r"\s+", " ", s)
    num = _canonical_number(s)
    if num is not None:
        s = num
    if task == TASK_VERIFICATION:
        if s in _TRUTHY:
            s = "true"
        elif s in _FALSY:
            s = "false"
    return s


def exact_match(predicted: Answer | str, gold_answers: Sequence[str],
                task: str = TASK_QA) -> bool:
    """True iff the canonicalized prediction equals any gold answer."""
    if isinstance(predicted, Answer):
        canon = canonicalize_answer(predicted.canonical, task)
    else:
        canon = canonicalize_answer(predicted, task)
    return canon in gold_answers


def accuracy(outcomes: Sequence[tuple[Optional[Answer | str], Sequence[str]]],
             task: str = TASK_QA) -> float:
    """Fraction of exact matches; None (errors) count as mismatches."""
    if not outcomes:
        raise MetricError("accuracy over an empty outcome list is undefined")
    hits = sum(
        1 for pred, gold in outcomes
        if pred is not None and exact_match(pred, gold, task)
    )
    return hits / len(outcomes)


def _dedupe_header(header: Sequence[str]) -> list[str]:
    # Duplicate names after sanitization get _2, _3, ... suffixes so that
    # Dict keys and SQL columns stay unique.
    out: list[str] = []
    seen: dict[str, int] = {}
    for i, name in enumerate(header):
        key = sanitize_column(name, i)
        if key not in seen:
            seen[key] = 1
            out.append(name)
            continue
        while True:
            seen[key] += 1
            candidate = f"{name}_{seen[key]}"
            ckey = sanitize_column(candidate, i)
            if ckey not in seen:
                seen[ckey] = 1
                out.append(candidate)
                break
    return out


def _parse_record(obj: dict, line: int, default_task: str) -> Instance:
    def need(key, kind):
        if key not in obj:
            raise DatasetError(f"missing field {key!r}", line)
        val = obj[key]
        if not isinstance(val, kind):
            raise DatasetError(f"field {key!r} has wrong type", line)
        return val

    iid = need("id", str)
    question = need("question", str)
    table_obj = need("table", dict)
    answers = need("answers", list)
    task = obj.get("task", default_task)
    header = table_obj.get("header")
    rows = table_obj.get("rows")
    if not isinstance(header, list) or not all(isinstance(h, str) for h in header):
        raise DatasetError("table.header must be a string array", line)
    if not isinstance(rows, list):
        raise DatasetError("table.rows must be an array of string arrays", line)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(c, str) for c in row):
            raise DatasetError(f"table.rows[{i}] must be a string array", line)
    try:
        table = Table(header=tuple(_dedupe_header(header)),
                      rows=tuple(tuple(r) for r in rows))
        gold = tuple(canonicalize_answer(a, task) for a in answers)
        return Instance(id=iid, question=question, table=table,
                        gold_answers=gold, task=task)
    except StructuralError as exc:
        raise StructuralError(str(exc), line) from exc


def load_dataset(path: str | Path, task: str = TASK_QA) -> list[Instance]:
    """Load line-delimited instance records; fails fast on the first bad line."""
    instances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"invalid record: {exc.msg}", lineno) from exc
            if not isinstance(obj, dict):
                raise DatasetError("record is not an object", lineno)
            instances.append(_parse_record(obj, lineno, task))
    return instances


def instance_to_record(instance: Instance) -> dict:
    return {
        "id": instance.id,
        "question": instance.question,
        "table": {"header": list(instance.table.header),
                  "rows": [list(r) for r in instance.table.rows]},
        "answers": list(instance.gold_answers),
        "task": instance.task,
    }


def dump_dataset(instances: Iterable[Instance], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(instance_to_record(inst), ensure_ascii=False) + "\n")
