"""Diagnostics over per-format correctness: overlap, unique solves,
oracle bound, chi-square across models, label proportions, and the
report emitter."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.stats import chi2 as chi2_dist

from .classifier import LabelRecord
from .core import MetricError
from .formats import CANONICAL_FORMATS, TabularFormat

REPORT_VERSION = 1

CHI2_EXPECTATIONS = ("paper", "contingency")


class DegenerateInputError(ValueError):
    pass


@dataclass(frozen=True)
class CorrectnessMatrix:
    """Complete instance x format boolean grid."""

    instance_ids: tuple[str, ...]
    formats: tuple[TabularFormat, ...]
    grid: tuple[tuple[bool, ...], ...]  # row per instance

    def __post_init__(self):
        for iid, row in zip(self.instance_ids, self.grid):
            if len(row) != len(self.formats):
                raise ValueError(f"incomplete row for instance {iid!r}")
        if len(self.grid) != len(self.instance_ids):
            raise ValueError("grid/instance count mismatch")

    def solved_set(self, fmt: TabularFormat) -> set[str]:
        j = self.formats.index(fmt)
        return {iid for iid, row in zip(self.instance_ids, self.grid) if row[j]}

    def per_format_accuracy(self) -> dict[TabularFormat, float]:
        n = len(self.instance_ids)
        if n == 0:
            raise MetricError("empty correctness matrix")
        return {fmt: len(self.solved_set(fmt)) / n for fmt in self.formats}


def overlap_matrix(matrix: CorrectnessMatrix) -> dict[str, dict[str, Optional[float]]]:
    """cell[v][h] = |S_v ∩ S_h| / |S_h|; None where S_h is empty."""
    solved = {fmt: matrix.solved_set(fmt) for fmt in matrix.formats}
    out: dict[str, dict[str, Optional[float]]] = {}
    for v in matrix.formats:
        out[v.value] = {}
        for h in matrix.formats:
            if not solved[h]:
                out[v.value][h.value] = None
            else:
                out[v.value][h.value] = len(solved[v] & solved[h]) / len(solved[h])
    return out


def unique_solve_share(matrix: CorrectnessMatrix) -> dict[str, Optional[float]]:
    """Share of a format's solved instances that no other format solves."""
    solved = {fmt: matrix.solved_set(fmt) for fmt in matrix.formats}
    out: dict[str, Optional[float]] = {}
    for fmt in matrix.formats:
        if not solved[fmt]:
            out[fmt.value] = None
            continue
        others = set().union(*(solved[g] for g in matrix.formats if g is not fmt))
        out[fmt.value] = len(solved[fmt] - others) / len(solved[fmt])
    return out


def oracle_accuracy(matrix: CorrectnessMatrix) -> float:
    """Fraction of instances solved by at least one format."""
    if not matrix.instance_ids:
        raise MetricError("oracle accuracy over an empty matrix is undefined")
    return sum(1 for row in matrix.grid if any(row)) / len(matrix.instance_ids)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    expectation: str = "paper"


def chi_square(correct_counts: Sequence[Sequence[float]],
               expectation: str = "paper") -> ChiSquareResult:
    """X² over a models x formats table of correct counts.

    "paper" expectation: E for each format is its mean correct count
    across models, replicated down the column. "contingency" is the
    standard row·col/total expectation.
    """
    if expectation not in CHI2_EXPECTATIONS:
        raise ValueError(f"unknown expectation rule {expectation!r}")
    observed = np.asarray(correct_counts, dtype=np.float64)
    if observed.ndim != 2 or min(observed.shape) < 1:
        raise DegenerateInputError("counts must form a 2-D table")
    n_models, n_formats = observed.shape
    if expectation == "paper":
        expected = np.tile(observed.mean(axis=0), (n_models, 1))
    else:
        total = observed.sum()
        if total <= 0:
            raise DegenerateInputError("all-zero contingency table")
        expected = np.outer(observed.sum(axis=1), observed.sum(axis=0)) / total
    if np.any(expected <= 0):
        raise DegenerateInputError("expected frequency of zero")
    statistic = float(((observed - expected) ** 2 / expected).sum())
    dof = (n_models - 1) * (n_formats - 1)
    if dof < 1:
        raise DegenerateInputError("chi-square needs at least 2 models and 2 formats")
    p_value = float(chi2_dist.sf(statistic, dof))
    return ChiSquareResult(statistic=statistic, dof=dof, p_value=p_value,
                           expectation=expectation)


def label_proportions(records: Sequence[LabelRecord]) -> dict[str, float]:
    """Per-format share of all labels over all records; sums to one."""
    totals = np.zeros(len(CANONICAL_FORMATS))
    for record in records:
        totals += np.array(record.labels, dtype=np.float64)
    grand = totals.sum()
    if grand <= 0:
        raise MetricError("no labels present; proportions undefined")
    return {fmt.value: float(v / grand)
            for fmt, v in zip(CANONICAL_FORMATS, totals)}


def _fmt_cell(value) -> str:
    if value is None:
        return "-"
    return f"{value:.4f}"


def render_text_report(report: dict) -> str:
    """Fixed-width text tables mirroring the per-format/method layout."""
    lines = ["format accuracy", "=" * 40]
    acc = report.get("accuracy") or {}
    per_format = acc.get("per_format") or {}
    if per_format:
        for name, value in per_format.items():
            lines.append(f"{name:<12} {_fmt_cell(value):>10}")
    else:
        lines.append("no data")
    lines += ["", "methods", "=" * 40]
    methods = acc.get("methods") or {}
    if methods:
        for name, value in methods.items():
            lines.append(f"{name:<12} {_fmt_cell(value):>10}")
    else:
        lines.append("no data")
    if report.get("delta") is not None:
        lines.append(f"{'delta':<12} {_fmt_cell(report['delta']):>10}")
    lines += ["", "oracle", "=" * 40,
              _fmt_cell(report.get("oracle")), ""]

    lines += ["overlap matrix (row=vertical, col=horizontal)", "=" * 40]
    overlap = report.get("overlap")
    if overlap:
        names = list(overlap)
        lines.append(" " * 12 + "".join(f"{n[:10]:>11}" for n in names))
        for v in names:
            lines.append(f"{v:<12}" + "".join(
                f"{_fmt_cell(overlap[v][h]):>11}" for h in names))
    else:
        lines.append("no data")

    lines += ["", "unique-solve share", "=" * 40]
    unique = report.get("unique_share")
    if unique:
        for name, value in unique.items():
            lines.append(f"{name:<12} {_fmt_cell(value):>10}")
    else:
        lines.append("no data")

    lines += ["", "chi-square", "=" * 40]
    chi = report.get("chi_square")
    if chi:
        lines.append(f"statistic    {chi['statistic']:.6f}")
        lines.append(f"dof          {chi['dof']}")
        lines.append(f"p_value      {chi['p_value']:.6g}")
        lines.append(f"significant at 0.05: {chi['p_value'] < 0.05}")
    else:
        lines.append("no data")

    lines += ["", "label proportions", "=" * 40]
    props = report.get("label_proportions")
    if props:
        for name, value in props.items():
            lines.append(f"{name:<12} {_fmt_cell(value):>10}")
    else:
        lines.append("no data")
    return "\n".join(lines) + "\n"


def build_report(matrix: Optional[CorrectnessMatrix] = None,
                 method_accuracy: Optional[Mapping[str, float]] = None,
                 chi: Optional[ChiSquareResult] = None,
                 proportions: Optional[Mapping[str, float]] = None) -> dict:
    report = {
        "version": REPORT_VERSION,
        "accuracy": {"per_format": None, "methods": None},
        "overlap": None,
        "unique_share": None,
        "oracle": None,
        "chi_square": None,
        "label_proportions": None,
        "delta": None,
    }
    if matrix is not None and matrix.instance_ids:
        per_format = {f.value: a for f, a in matrix.per_format_accuracy().items()}
        report["accuracy"]["per_format"] = per_format
        report["overlap"] = overlap_matrix(matrix)
        report["unique_share"] = unique_solve_share(matrix)
        report["oracle"] = oracle_accuracy(matrix)
        if method_accuracy:
            best_fixed = max(per_format.values())
            best_method = max(method_accuracy.values())
            report["delta"] = best_method - best_fixed
    if method_accuracy:
        report["accuracy"]["methods"] = dict(method_accuracy)
    if chi is not None:
        report["chi_square"] = {
            "statistic": chi.statistic, "dof": chi.dof,
            "p_value": chi.p_value, "expectation": chi.expectation,
        }
    if proportions is not None:
        report["label_proportions"] = dict(proportions)
    return report


def emit_report(report: dict, json_path: str | Path, text_path: str | Path) -> None:
    """Write the machine-readable and text renderings; byte-deterministic."""
    payload = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    Path(json_path).write_text(payload, encoding="utf-8")
    Path(text_path).write_text(render_text_report(report), encoding="utf-8")
