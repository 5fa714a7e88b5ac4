"""Plurality voting over per-format answers, with log-probability tie-break.

The same aggregation rule serves two pipelines: voting across formats
(one greedy completion per format) and self-consistency within a single
format (n sampled completions). Error outcomes abstain; they are not a
shared "error" answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .execution import ReasoningOutcome

TIE_RULES = ("max", "mean")


class BallotError(ValueError):
    pass


@dataclass(frozen=True)
class Ballot:
    outcomes: tuple[ReasoningOutcome, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if not self.outcomes:
            raise BallotError("ballot is empty")
        keys = [(o.format, o.sample_index) for o in self.outcomes]
        if len(set(keys)) != len(keys):
            raise BallotError("duplicate (format, sample_index) in ballot")


def vote(ballot: Ballot, tie_rule: str = "max") -> Optional[str]:
    """Most-voted answer; ties by log probability, then canonical format order.

    Returns None (abstain) when every outcome is an error.
    """
    if tie_rule not in TIE_RULES:
        raise BallotError(f"unknown tie rule {tie_rule!r}")
    groups: dict[str, list[ReasoningOutcome]] = {}
    for outcome in ballot.outcomes:
        if outcome.ok:
            groups.setdefault(outcome.answer, []).append(outcome)
    if not groups:
        return None

    def score(answer: str):
        supporters = groups[answer]
        logprobs = [o.mean_logprob for o in supporters]
        tiebreak = max(logprobs) if tie_rule == "max" else sum(logprobs) / len(logprobs)
        order = min((o.format.canonical_index, o.sample_index) for o in supporters)
        return (-len(supporters), -tiebreak, order)

    return min(groups, key=score)


def self_consistency(ballot: Ballot, tie_rule: str = "max") -> Optional[str]:
    """Aggregate n samples of one format with the same voting rule."""
    formats = {o.format for o in ballot.outcomes}
    if len(formats) != 1:
        raise BallotError("self-consistency ballot must hold a single format")
    return vote(ballot, tie_rule=tie_rule)


def ballot_of(outcomes: Sequence[ReasoningOutcome]) -> Ballot:
    return Ballot(outcomes=tuple(outcomes))
