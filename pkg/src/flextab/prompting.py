"""Prompt assembly from template data files.

Templates are plain-text transcriptions shipped under
``flextab/templates/<mode>/``, one file per (format, task), with
``<table>`` and ``<utterance>`` placeholders and a one-line header
comment naming format, task, and shot count.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .core import Instance, TASKS
from .formats import CANONICAL_FORMATS, TabularFormat, serialize

TABLE_PLACEHOLDER = "<table>"
UTTERANCE_PLACEHOLDER = "<utterance>"

MODES = ("per_format", "unified")

_HEADER = re.compile(
    r"^#\s*format=(?P<format>\w+)\s+task=(?P<task>\w+)\s+shots=(?P<shots>\d+)\s*$")


class TemplateError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    format: TabularFormat
    task: str
    shots: int
    body: str

    def __post_init__(self):
        for placeholder in (TABLE_PLACEHOLDER, UTTERANCE_PLACEHOLDER):
            if placeholder not in self.body:
                raise TemplateError(
                    f"template {self.format.value}/{self.task} is missing "
                    f"placeholder {placeholder!r}")

    @property
    def demonstrations(self) -> list[str]:
        # Demo blocks are delimited by "---" lines; the final block holds
        # the placeholders and is not a demonstration.
        blocks = re.split(r"^---$", self.body, flags=re.MULTILINE)
        return [b for b in blocks[1:-1] if b.strip()]


@dataclass(frozen=True)
class DemoSet:
    mode: str
    templates: dict[tuple[TabularFormat, str], PromptTemplate]

    def get(self, format: TabularFormat, task: str) -> PromptTemplate:
        try:
            return self.templates[(format, task)]
        except KeyError:
            raise ConfigurationError(
                f"no template for ({format.value}, {task})") from None


def parse_template(text: str) -> PromptTemplate:
    first, _, body = text.partition("\n")
    m = _HEADER.match(first.strip())
    if not m:
        raise TemplateError(
            f"template header line malformed: {first[:80]!r}")
    return PromptTemplate(
        format=TabularFormat(m.group("format")),
        task=m.group("task"),
        shots=int(m.group("shots")),
        body=body)


def load_templates(directory: str | Path) -> DemoSet:
    """Load all 5x2 templates for one mode; error names missing pairs."""
    directory = Path(directory)
    templates = {}
    missing = []
    for fmt in CANONICAL_FORMATS:
        for task in TASKS:
            path = directory / f"{fmt.value}_{task}.txt"
            if not path.is_file():
                missing.append((fmt.value, task))
                continue
            template = parse_template(path.read_text(encoding="utf-8"))
            if template.format is not fmt or template.task != task:
                raise TemplateError(
                    f"{path.name}: header names ({template.format.value}, "
                    f"{template.task}), expected ({fmt.value}, {task})")
            templates[(fmt, task)] = template
    if missing:
        raise ConfigurationError(f"missing template files for: {missing}")
    return DemoSet(mode=directory.name, templates=templates)


def builtin_template_dir(mode: str = "per_format") -> Path:
    if mode not in MODES:
        raise ConfigurationError(f"unknown demonstration mode {mode!r}")
    return Path(resources.files("flextab") / "templates" / mode)


def load_builtin_templates(mode: str = "per_format") -> DemoSet:
    return load_templates(builtin_template_dir(mode))


def build_prompt(instance: Instance, format: TabularFormat,
                 template: PromptTemplate) -> str:
    """Substitute the serialized table and question into the template."""
    if template.format is not format:
        raise TemplateError(
            f"template is for {template.format.value}, requested {format.value}")
    payload = serialize(instance.table, format).text
    prompt = template.body.replace(TABLE_PLACEHOLDER, payload, 1)
    return prompt.replace(UTTERANCE_PLACEHOLDER, instance.question, 1)
