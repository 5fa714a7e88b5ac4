"""Turning raw completions into answers.

Markdown completions are parsed for the "so the answer is:" marker,
Dict/List/Pandas programs run in the one-shot sandbox runner subprocess,
and Database completions execute as SQL against an in-memory sqlite
table. `resolve` never raises: everything folds into a ReasoningOutcome.
"""

from __future__ import annotations

import json
import re
import sqlite3
import subprocess
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .backend import Completion
from .core import Answer, Instance, Table, canonicalize_answer
from .formats import (SQL_TABLE_NAME, TabularFormat, infer_sql_type,
                      sanitize_column)

ANSWER_MARKER = "so the answer is:"

DEFAULT_EXEC_TIMEOUT = 10.0

#: Command that launches one sandbox-runner process per program execution.
DEFAULT_RUNNER_CMD = (sys.executable, "-m", "pyrunner")

_THOUSANDS = re.compile(r"(?<=\d),(?=\d)")
_FENCE = re.compile(r"^\s*```[\w+-]*\s*\n(.*?)\n?\s*```", re.DOTALL | re.MULTILINE)

ERROR_KINDS = ("extract", "syntax", "runtime", "timeout", "backend")


@dataclass(frozen=True)
class OutcomeError:
    kind: str
    detail: str


@dataclass(frozen=True)
class ReasoningOutcome:
    instance_id: str
    format: TabularFormat
    sample_index: int
    raw_text: str
    mean_logprob: float
    answer: Optional[str] = None  # canonical form
    error: Optional[OutcomeError] = None

    def __post_init__(self):
        if (self.answer is None) == (self.error is None):
            raise ValueError("exactly one of answer/error must be present")

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_record(self) -> dict:
        rec = {
            "instance_id": self.instance_id,
            "format": self.format.value,
            "sample_index": self.sample_index,
            "raw_text": self.raw_text,
            "mean_logprob": self.mean_logprob,
        }
        if self.error is None:
            rec["answer"] = self.answer
        else:
            rec["error"] = {"kind": self.error.kind, "detail": self.error.detail}
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "ReasoningOutcome":
        err = rec.get("error")
        return cls(
            instance_id=rec["instance_id"],
            format=TabularFormat(rec["format"]),
            sample_index=int(rec["sample_index"]),
            raw_text=rec.get("raw_text", ""),
            mean_logprob=float(rec.get("mean_logprob", 0.0)),
            answer=rec.get("answer"),
            error=OutcomeError(err["kind"], err.get("detail", "")) if err else None,
        )


class ExtractError(ValueError):
    pass


def strip_code_fences(text: str) -> str:
    """Unwrap the first markdown code fence, if any."""
    m = _FENCE.search(text)
    return m.group(1) if m else text


def extract_cot_answer(text: str) -> Answer:
    """Take the substring after the last answer marker, trimmed."""
    pos = text.rfind(ANSWER_MARKER)
    if pos < 0:
        raise ExtractError(f"answer marker {ANSWER_MARKER!r} not found")
    raw = text[pos + len(ANSWER_MARKER):].strip()
    return Answer.of(raw)


def _stringify_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and value == int(value):
        return str(int(value))
    return str(value)


def _render_sql_rows(rows: Sequence[Sequence]) -> str:
    cells = [_stringify_cell(c) for row in rows for c in row]
    return ", ".join(c for c in cells if c != "")


def build_sqlite(table: Table, conn: Optional[sqlite3.Connection] = None) -> sqlite3.Connection:
    """Load the table into an in-memory sqlite database named `information`.

    Numeric columns are typed per `infer_sql_type`; thousands separators
    are stripped and "-"/empty cells load as NULL in int/real columns.
    """
    conn = conn or sqlite3.connect(":memory:")
    names = [sanitize_column(c, i) for i, c in enumerate(table.header)]
    columns = [table.column(i) for i in range(table.n_cols)]
    types = [infer_sql_type(col) for col in columns]
    sql_types = {"int": "INTEGER", "real": "REAL", "text": "TEXT"}
    decls = ", ".join(f'"{n}" {sql_types[t]}' for n, t in zip(names, types))
    conn.execute(f"CREATE TABLE {SQL_TABLE_NAME} ({decls})")
    placeholders = ", ".join("?" for _ in names)
    for row in table.rows:
        values = []
        for cell, typ in zip(row, types):
            if typ in ("int", "real") and cell.strip() in ("", "-"):
                values.append(None)
            elif typ == "int":
                values.append(int(_THOUSANDS.sub("", cell.strip())))
            elif typ == "real":
                values.append(float(_THOUSANDS.sub("", cell.strip())))
            else:
                values.append(cell)
        conn.execute(f"INSERT INTO {SQL_TABLE_NAME} VALUES ({placeholders})", values)
    conn.commit()
    return conn


def run_sql(table: Table, sql: str, timeout: float = DEFAULT_EXEC_TIMEOUT) -> Answer:
    """Execute one read-only SELECT against the in-memory table.

    Raises OutcomeError wrapped in ExecutionFailure-style exceptions via
    the caller; here plain exceptions are mapped by `resolve`.
    """
    conn = build_sqlite(table)
    deadline = time.monotonic() + timeout
    conn.set_progress_handler(
        lambda: 1 if time.monotonic() > deadline else 0, 1000)
    conn.execute("PRAGMA query_only = ON")
    try:
        cursor = conn.execute(sql)
        rows = cursor.fetchall()
    except sqlite3.OperationalError as exc:
        if "interrupted" in str(exc):
            raise TimeoutError(f"query exceeded {timeout}s") from exc
        raise
    finally:
        conn.close()
    if not rows:
        raise ExtractError("query returned no rows")
    if len(rows[0]) == 1 and len(rows) > 1:
        text = ", ".join(_stringify_cell(r[0]) for r in rows)
    else:
        text = _render_sql_rows(rows)
    if text == "":
        raise ExtractError("query returned only NULLs")
    return Answer.of(text)


def normalize_sql(completion_text: str) -> str:
    """Prefix the completion with SELECT unless it is already a full query."""
    text = strip_code_fences(completion_text).strip()
    if text.lower().startswith(("select", "with")):
        return text
    return "SELECT " + text


def normalize_program(completion_text: str) -> str:
    """Ensure the program defines solver; completions may be the bare body."""
    code = strip_code_fences(completion_text)
    if "def solver" in code:
        return code
    body = "\n".join("    " + line if line.strip() else line
                     for line in code.splitlines())
    return "def solver(table):\n" + body


def run_program(table: Table, format: TabularFormat, code: str,
                timeout: float = DEFAULT_EXEC_TIMEOUT,
                runner_cmd: Sequence[str] = DEFAULT_RUNNER_CMD) -> ReasoningOutcome | Answer:
    """Dispatch a solver program to a fresh runner subprocess.

    Returns an Answer on success; raises otherwise (callers go through
    `resolve`, which maps exceptions onto outcome errors).
    """
    request = {
        "format": format.value,
        "table": {"header": list(table.header),
                  "rows": [list(r) for r in table.rows]},
        "code": code,
    }
    try:
        proc = subprocess.run(
            list(runner_cmd),
            input=json.dumps(request) + "\n",
            capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired as exc:
        raise TimeoutError(f"program execution exceeded {timeout}s") from exc
    except OSError as exc:
        raise RuntimeError(f"runner could not be launched: {exc}") from exc
    if proc.returncode != 0:
        raise RuntimeError(
            f"runner exited with status {proc.returncode}: {proc.stderr.strip()[:500]}")
    try:
        response = json.loads(proc.stdout.strip().splitlines()[-1])
    except (ValueError, IndexError) as exc:
        raise RuntimeError(f"runner wrote malformed response: {proc.stdout[:200]!r}") from exc
    if response.get("ok"):
        return Answer.of(str(response["answer"]))
    kind = response.get("error_kind", "runtime")
    message = response.get("message", "program failed")
    if kind == "syntax":
        raise SyntaxError(message)
    raise RuntimeError(message)


def resolve(instance: Instance, format: TabularFormat, completion: Completion,
            sample_index: int = 0, *, timeout: float = DEFAULT_EXEC_TIMEOUT,
            runner_cmd: Sequence[str] = DEFAULT_RUNNER_CMD) -> ReasoningOutcome:
    """Produce a well-formed outcome for any completion; never raises."""

    def outcome(answer=None, error=None):
        return ReasoningOutcome(
            instance_id=instance.id, format=format, sample_index=sample_index,
            raw_text=completion.text, mean_logprob=completion.mean_logprob,
            answer=answer, error=error)

    try:
        if completion.resolved_error is not None:
            kind = completion.resolved_error
            if kind not in ERROR_KINDS:
                kind = "backend"
            return outcome(error=OutcomeError(kind, "scripted error"))
        if completion.resolved_answer is not None:
            raw = completion.resolved_answer
        elif format is TabularFormat.MARKDOWN:
            raw = extract_cot_answer(completion.text).raw
        elif format is TabularFormat.DATABASE:
            raw = run_sql(instance.table, normalize_sql(completion.text),
                          timeout=timeout).raw
        else:
            raw = run_program(instance.table, format,
                              normalize_program(completion.text),
                              timeout=timeout, runner_cmd=runner_cmd).raw
        return outcome(answer=canonicalize_answer(raw, instance.task))
    except ExtractError as exc:
        return outcome(error=OutcomeError("extract", str(exc)))
    except SyntaxError as exc:
        return outcome(error=OutcomeError("syntax", str(exc)))
    except TimeoutError as exc:
        return outcome(error=OutcomeError("timeout", str(exc)))
    except sqlite3.Error as exc:
        parse_failure = isinstance(exc, sqlite3.OperationalError) and (
            "syntax error" in str(exc) or "incomplete input" in str(exc))
        return outcome(error=OutcomeError(
            "syntax" if parse_failure else "runtime", str(exc)))
    except Exception as exc:  # noqa: BLE001 - contract: fold, never raise
        return outcome(error=OutcomeError("runtime", str(exc)))
