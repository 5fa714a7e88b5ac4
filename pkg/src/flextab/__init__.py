"""Flexible tabular formats for LLM table reasoning.

Serializes tables into five textual formats, drives a pluggable LLM
backend, executes/extracts answers, aggregates them by voting, and trains
a per-format classifier to pick the single best format per instance.
"""

from .core import Answer, Instance, Table, accuracy, canonicalize_answer, exact_match, load_dataset
from .formats import CANONICAL_FORMATS, TabularFormat, SerializedTable, serialize

__all__ = [
    "Answer",
    "Instance",
    "Table",
    "accuracy",
    "canonicalize_answer",
    "exact_match",
    "load_dataset",
    "CANONICAL_FORMATS",
    "TabularFormat",
    "SerializedTable",
    "serialize",
]

__version__ = "0.1.0"
