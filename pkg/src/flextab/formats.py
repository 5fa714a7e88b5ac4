"""The five tabular formats and their exact text renderings.

Each serializer is a pure function of the table: equal inputs give
byte-equal payloads, which is what the golden-file tests pin down.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Optional, Sequence

if TYPE_CHECKING:
    from .core import Table


class TabularFormat(str, Enum):
    MARKDOWN = "markdown"
    DICT = "dict"
    LIST = "list"
    PANDAS = "pandas"
    DATABASE = "database"

    @property
    def display_name(self) -> str:
        return {"markdown": "Markdown", "dict": "Dict", "list": "List",
                "pandas": "Pandas", "database": "Database"}[self.value]

    @property
    def canonical_index(self) -> int:
        return CANONICAL_FORMATS.index(self)


# Stable canonical order used for tie-breaking and label-vector indexing.
CANONICAL_FORMATS: tuple[TabularFormat, ...] = (
    TabularFormat.MARKDOWN,
    TabularFormat.DICT,
    TabularFormat.LIST,
    TabularFormat.PANDAS,
    TabularFormat.DATABASE,
)

# Number of values listed per column in the Database comment block before
# the listing is cut with an ellipsis.
DB_COMMENT_VALUE_CUT = 10

SQL_TABLE_NAME = "information"

_THOUSANDS = re.compile(r"(?<=\d),(?=\d)")
_INT = re.compile(r"[+-]?\d+")
_REAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)")


@dataclass(frozen=True)
class SerializedTable:
    format: TabularFormat
    text: str
    sanitized_header: Optional[tuple[str, ...]] = None


def sanitize_column(name: str, index: int = 0) -> str:
    """Reduce a column name to a lowercase SQL-safe identifier."""
    s = re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")
    if not s:
        return f"col_{index}"
    if s[0].isdigit():
        s = "_" + s
    return s


def infer_sql_type(column_values: Sequence[str]) -> str:
    """Pick int/real/text for a column; "-" and empty cells are ignored."""
    seen = [_THOUSANDS.sub("", v.strip()) for v in column_values
            if v.strip() not in ("", "-")]
    if not seen:
        return "text"
    if all(_INT.fullmatch(v) for v in seen):
        return "int"
    if all(_REAL.fullmatch(v) for v in seen):
        return "real"
    return "text"


def _quote(cell: str) -> str:
    # Python/JSON-style double-quoted literal; escapes quotes, backslashes
    # and newlines.
    return json.dumps(cell, ensure_ascii=False)


def _markdown(table: Table) -> str:
    lines = ["| " + " | ".join(table.header) + " |"]
    lines.append("|" + "|".join(":---" for _ in table.header) + "|")
    for row in table.rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


def _dict(table: Table) -> str:
    blocks = []
    for row in table.rows:
        body = ",\n".join(
            f'        {_quote(col)}: {_quote(cell)}'
            for col, cell in zip(table.header, row)
        )
        blocks.append("    {\n" + body + "\n    }")
    return "[\n" + ",\n".join(blocks) + "\n]"


def _list_literal(items: Sequence[str], indent: str) -> str:
    inner = ",\n".join(f"{indent}    {_quote(v)}" for v in items)
    return f"{indent}[\n{inner}\n{indent}]"


def _list(table: Table) -> str:
    blocks = [_list_literal(table.header, "    ")]
    blocks.extend(_list_literal(row, "    ") for row in table.rows)
    return "[\n" + ",\n".join(blocks) + "\n]"


def _pandas(table: Table) -> str:
    rows = ",\n".join(_list_literal(row, "    ") for row in table.rows)
    cols = ",\n".join(f"    {_quote(c)}" for c in table.header)
    return f"pd.DataFrame([\n{rows}\n], columns = [\n{cols}\n]\n)"


def _database(table: Table) -> tuple[str, tuple[str, ...]]:
    names = tuple(sanitize_column(c, i) for i, c in enumerate(table.header))
    columns = [list(col) for col in zip(*table.rows)] if table.rows else [[] for _ in names]
    types = [infer_sql_type(col) for col in columns]
    decls = [f"{n} {t}" for n, t in zip(names, types)]
    decl_body = " ,\n".join(decls)
    lines = [f"CREATE TABLE {SQL_TABLE_NAME} (", decl_body, ");", "/*",
             "Columns and instances in each column :"]
    for name, col in zip(names, columns):
        listed = ", ".join(col[:DB_COMMENT_VALUE_CUT])
        if len(col) > DB_COMMENT_VALUE_CUT:
            listed += ", ..."
        lines.append(f"{name}: {listed} ;")
    lines.append("*/")
    return "\n".join(lines), names


def serialize(table: Table, format: TabularFormat) -> SerializedTable:
    """Render the table as the exact text payload for one format."""
    if format is TabularFormat.MARKDOWN:
        return SerializedTable(format, _markdown(table))
    if format is TabularFormat.DICT:
        return SerializedTable(format, _dict(table))
    if format is TabularFormat.LIST:
        return SerializedTable(format, _list(table))
    if format is TabularFormat.PANDAS:
        return SerializedTable(format, _pandas(table))
    if format is TabularFormat.DATABASE:
        text, names = _database(table)
        return SerializedTable(format, text, sanitized_header=names)
    raise ValueError(f"unknown tabular format: {format!r}")
