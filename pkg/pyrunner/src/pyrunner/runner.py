"""Single-request execution of an untrusted ``solver`` program.

Protocol: one JSON object per line on stdin →

    {"format": "dict" | "list" | "pandas",
     "table": {"header": [...], "rows": [[...], ...]},
     "code": "def solver(table): ..."}

one JSON object on stdout →

    {"ok": true, "answer": "..."}                       on success
    {"ok": false, "error_kind": "syntax" | "runtime",
     "message": "..."}                                  on program failure

Program failures still exit 0; only protocol violations (malformed or
missing request) exit nonzero. Nothing but the response line is written
to stdout — the program's own prints are diverted to stderr. The caller
is responsible for wall-clock timeouts (it kills the process); a wedged
interpreter cannot be trusted to time itself.

The sandbox is a best-effort, desk-scale restriction: a curated builtins
allowlist plus an import hook that admits only the dataframe stack, and
only for pandas-format requests. It is not an OS-level boundary.
"""

from __future__ import annotations

import contextlib
import json
import sys
from typing import Any

FORMATS = ("dict", "list", "pandas")

# Imports admitted for pandas-format requests (top-level module names).
PANDAS_IMPORTS = frozenset({"pandas", "numpy"})

_SAFE_BUILTIN_NAMES = (
    "abs", "all", "any", "bool", "dict", "divmod", "enumerate", "filter",
    "float", "frozenset", "getattr", "hasattr", "int", "isinstance",
    "issubclass", "iter", "len", "list", "map", "max", "min", "next", "pow",
    "print", "range", "repr", "reversed", "round", "set", "slice", "sorted",
    "str", "sum", "tuple", "zip",
    # exception types the generated programs may reasonably touch
    "ArithmeticError", "AttributeError", "Exception", "IndexError",
    "KeyError", "LookupError", "StopIteration", "TypeError", "ValueError",
    "ZeroDivisionError",
)


class ProtocolError(ValueError):
    """The request itself is malformed; maps to a nonzero exit."""


def _guarded_import(allowed: frozenset[str]):
    def guard(name, globals=None, locals=None, fromlist=(), level=0):
        root = name.split(".")[0]
        if level == 0 and root in allowed:
            return __import__(name, globals, locals, fromlist, level)
        raise ImportError(f"import of {name!r} is blocked in the sandbox")

    return guard


def _restricted_builtins(format: str) -> dict[str, Any]:
    source = __builtins__ if isinstance(__builtins__, dict) else vars(__builtins__)
    table = {name: source[name] for name in _SAFE_BUILTIN_NAMES}
    allowed = PANDAS_IMPORTS if format == "pandas" else frozenset()
    table["__import__"] = _guarded_import(allowed)
    return table


def _materialize_table(format: str, header: list[str], rows: list[list[str]]):
    if format == "dict":
        return [dict(zip(header, row)) for row in rows]
    if format == "list":
        return [list(header)] + [list(row) for row in rows]
    import pandas as pd

    return pd.DataFrame([list(row) for row in rows], columns=list(header))


def _stringify(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ", ".join(_stringify(v) for v in value)
    return str(value)


def _parse_request(line: str) -> tuple[str, list[str], list[list[str]], str]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"request is not valid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ProtocolError("request must be a JSON object")
    format = obj.get("format")
    if format not in FORMATS:
        raise ProtocolError(f"format must be one of {FORMATS}, got {format!r}")
    table = obj.get("table")
    if not isinstance(table, dict):
        raise ProtocolError("table must be an object with header and rows")
    header, rows = table.get("header"), table.get("rows")
    if not isinstance(header, list) or not header or \
            not all(isinstance(h, str) for h in header):
        raise ProtocolError("table.header must be a non-empty string array")
    if not isinstance(rows, list) or not all(
            isinstance(r, list) and len(r) == len(header) for r in rows):
        raise ProtocolError("table.rows must be arrays matching the header width")
    code = obj.get("code")
    if not isinstance(code, str) or not code.strip():
        raise ProtocolError("code must be a non-empty string")
    return format, header, rows, code


def execute(line: str) -> dict:
    """Run one request; returns the response object. Raises ProtocolError
    only for malformed requests."""
    format, header, rows, code = _parse_request(line)

    def failure(kind: str, message: str) -> dict:
        return {"ok": False, "error_kind": kind, "message": message}

    try:
        compiled = compile(code, "<solver>", "exec")
    except SyntaxError as exc:
        return failure("syntax", f"{exc.msg} (line {exc.lineno})")

    namespace: dict[str, Any] = {"__builtins__": _restricted_builtins(format)}
    # The solver's own prints must not corrupt the protocol stream.
    with contextlib.redirect_stdout(sys.stderr):
        try:
            table = _materialize_table(format, header, rows)
            exec(compiled, namespace)  # noqa: S102 - the runner's entire purpose
            solver = namespace.get("solver")
            if not callable(solver):
                return failure("runtime", "program defines no solver function")
            result = solver(table)
        except BaseException as exc:  # noqa: BLE001 - fold everything
            return failure("runtime", f"{type(exc).__name__}: {exc}")
    if result is None:
        return failure("runtime", "solver returned nothing")
    return {"ok": True, "answer": _stringify(result)}


def main() -> int:
    line = sys.stdin.readline()
    if not line.strip():
        print("error: empty request", file=sys.stderr)
        return 2
    try:
        response = execute(line)
    except ProtocolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(json.dumps(response, ensure_ascii=False,
                                sort_keys=True) + "\n")
    sys.stdout.flush()
    return 0
