import itertools

import pytest
from hypothesis import given, settings, strategies as st

from flextab.execution import OutcomeError, ReasoningOutcome
from flextab.formats import CANONICAL_FORMATS, TabularFormat
from flextab.vote import Ballot, BallotError, self_consistency, vote


def _ok(fmt, sample, answer, logprob):
    return ReasoningOutcome(instance_id="i", format=fmt, sample_index=sample,
                            raw_text="", mean_logprob=logprob, answer=answer)


def _err(fmt, sample, kind="runtime"):
    return ReasoningOutcome(instance_id="i", format=fmt, sample_index=sample,
                            raw_text="", mean_logprob=-9.0,
                            error=OutcomeError(kind, "x"))


def oracle_vote(outcomes, tie_rule="max"):
    """Independent brute-force plurality + logprob + canonical-order rule."""
    groups = {}
    for o in outcomes:
        if o.ok:
            groups.setdefault(o.answer, []).append(o)
    if not groups:
        return None
    top = max(len(v) for v in groups.values())
    tied = [a for a, v in groups.items() if len(v) == top]
    if len(tied) > 1:
        def tb(a):
            lps = [o.mean_logprob for o in groups[a]]
            return max(lps) if tie_rule == "max" else sum(lps) / len(lps)
        best = max(tb(a) for a in tied)
        tied = [a for a in tied if tb(a) == best]
    if len(tied) > 1:
        def order(a):
            return min((o.format.canonical_index, o.sample_index)
                       for o in groups[a])
        tied = [min(tied, key=order)]
    return tied[0]


class TestVoteBasics:
    def test_plurality_wins(self):
        ballot = Ballot((
            _ok(TabularFormat.MARKDOWN, 0, "a", -2.0),
            _ok(TabularFormat.DICT, 0, "b", -0.1),
            _ok(TabularFormat.LIST, 0, "a", -3.0),
        ))
        assert vote(ballot) == "a"

    def test_tie_broken_by_logprob(self):
        ballot = Ballot((
            _ok(TabularFormat.MARKDOWN, 0, "a", -2.0),
            _ok(TabularFormat.DICT, 0, "b", -0.1),
        ))
        assert vote(ballot) == "b"

    def test_exact_tie_falls_to_canonical_order(self):
        ballot = Ballot((
            _ok(TabularFormat.DICT, 0, "b", -1.0),
            _ok(TabularFormat.MARKDOWN, 0, "a", -1.0),
        ))
        assert vote(ballot) == "a"

    def test_errors_abstain_not_vote(self):
        ballot = Ballot((
            _err(TabularFormat.MARKDOWN, 0),
            _err(TabularFormat.DICT, 0),
            _ok(TabularFormat.DATABASE, 0, "z", -5.0),
        ))
        assert vote(ballot) == "z"

    def test_all_errors_abstain(self):
        ballot = Ballot(tuple(_err(f, 0) for f in CANONICAL_FORMATS))
        assert vote(ballot) is None

    def test_mean_rule_differs_from_max(self):
        # group a: logprobs -0.1, -5.0 (max -0.1, mean -2.55)
        # group b: logprobs -1.0, -1.0 (max -1.0, mean -1.0)
        ballot = Ballot((
            _ok(TabularFormat.MARKDOWN, 0, "a", -0.1),
            _ok(TabularFormat.DICT, 0, "a", -5.0),
            _ok(TabularFormat.LIST, 0, "b", -1.0),
            _ok(TabularFormat.PANDAS, 0, "b", -1.0),
        ))
        assert vote(ballot, tie_rule="max") == "a"
        assert vote(ballot, tie_rule="mean") == "b"

    def test_empty_ballot_rejected(self):
        with pytest.raises(BallotError):
            Ballot(())

    def test_duplicate_slot_rejected(self):
        with pytest.raises(BallotError):
            Ballot((_ok(TabularFormat.DICT, 0, "a", -1.0),
                    _ok(TabularFormat.DICT, 0, "b", -1.0)))

    def test_unknown_tie_rule(self):
        with pytest.raises(BallotError):
            vote(Ballot((_ok(TabularFormat.DICT, 0, "a", -1.0),)), tie_rule="x")


class TestSelfConsistency:
    def test_single_format_required(self):
        mixed = Ballot((_ok(TabularFormat.DICT, 0, "a", -1.0),
                        _ok(TabularFormat.LIST, 0, "a", -1.0)))
        with pytest.raises(BallotError):
            self_consistency(mixed)

    def test_majority_of_samples(self):
        ballot = Ballot(tuple(
            _ok(TabularFormat.DICT, s, "a" if s < 3 else "b", -1.0)
            for s in range(5)))
        assert self_consistency(ballot) == "a"


class TestVoteAgainstOracle:
    def test_exhaustive_small_ballots(self):
        # All answer assignments over <=5 slots from a 3-answer alphabet,
        # crossed with exact-tie and distinct logprob patterns.
        answers = ("a", "b", "c")
        logprob_sets = [
            (-1.0, -1.0, -1.0, -1.0, -1.0),  # fully tied
            (-0.1, -0.2, -0.3, -0.4, -0.5),
            (-2.0, -0.5, -2.0, -0.5, -1.0),
        ]
        for n in (1, 2, 3, 5):
            formats = CANONICAL_FORMATS[:n]
            for assignment in itertools.product(answers, repeat=n):
                for lps in logprob_sets:
                    outcomes = tuple(
                        _ok(f, 0, a, lp) for f, a, lp
                        in zip(formats, assignment, lps))
                    for rule in ("max", "mean"):
                        assert vote(Ballot(outcomes), rule) == \
                            oracle_vote(outcomes, rule), (assignment, lps, rule)

    @given(st.lists(
        st.tuples(st.integers(0, 4), st.integers(0, 3),
                  st.sampled_from(["a", "b", "c", None]),
                  st.integers(-40, 0)),
        min_size=1, max_size=12, unique_by=lambda t: (t[0], t[1])),
        st.sampled_from(["max", "mean"]))
    @settings(max_examples=300)
    def test_random_ballots(self, slots, rule):
        outcomes = tuple(
            _err(CANONICAL_FORMATS[f], s) if a is None
            else _ok(CANONICAL_FORMATS[f], s, a, lp / 10.0)
            for f, s, a, lp in slots)
        assert vote(Ballot(outcomes), rule) == oracle_vote(outcomes, rule)

    @given(st.lists(st.sampled_from(["a", "b"]), min_size=1, max_size=5))
    def test_winner_always_has_max_count(self, assignment):
        outcomes = tuple(_ok(CANONICAL_FORMATS[i], 0, a, -1.0 - i)
                         for i, a in enumerate(assignment))
        winner = vote(Ballot(outcomes))
        counts = {a: assignment.count(a) for a in set(assignment)}
        assert counts[winner] == max(counts.values())
