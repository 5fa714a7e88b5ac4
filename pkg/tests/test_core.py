import json

import pytest
from hypothesis import given, strategies as st

from flextab.core import (Answer, DatasetError, Instance, MetricError,
                          StructuralError, Table, accuracy,
                          canonicalize_answer, dump_dataset, exact_match,
                          load_dataset)


class TestCanonicalize:
    # expected strings written out by hand from the normalization
    # rules before implementation.
    @pytest.mark.parametrize("raw,expected", [
        ("  Hello World  ", "hello world"),
        ("Paris.", "paris"),
        ("Paris. ", "paris"),
        ("a   b\tc", "a b c"),
        ("1,370", "1370"),
        ("3.50", "3.5"),
        ("007", "7"),
        ("-0", "0"),
        ("70.500", "70.5"),
        ("1,204", "1204"),
        ("1,370 lb (635 kg)", "1,370 lb (635 kg)"),  # not wholly numeric
        ("", ""),
        ("...", ""),  # trailing periods strip to the fixed point
        ("7.5.", "7.5"),
    ])
    def test_qa(self, raw, expected):
        assert canonicalize_answer(raw) == expected

    @pytest.mark.parametrize("raw,expected", [
        ("TRUE", "true"),
        ("Yes", "true"),
        ("1", "true"),
        ("no", "false"),
        ("0", "false"),
        ("False.", "false"),
        ("maybe", "maybe"),
    ])
    def test_verification(self, raw, expected):
        assert canonicalize_answer(raw, task="verification") == expected

    @given(st.text(max_size=60))
    def test_idempotent(self, s):
        once = canonicalize_answer(s)
        assert canonicalize_answer(once) == once

    @given(st.text(max_size=60))
    def test_idempotent_verification(self, s):
        once = canonicalize_answer(s, task="verification")
        assert canonicalize_answer(once, task="verification") == once


class TestExactMatch:
    def test_matches_any_gold(self):
        assert exact_match("JACK Nicklaus ", ("jack nicklaus", "nicklaus"))

    def test_numeric_forms_unify(self):
        assert exact_match("1,370.0", ("1370",))

    def test_answer_object(self):
        assert exact_match(Answer.of("12."), ("12",))

    def test_mismatch(self):
        assert not exact_match("11", ("12",))


class TestAccuracy:
    def test_counts_errors_as_wrong(self):
        outcomes = [("12", ("12",)), (None, ("12",)), ("13", ("12",))]
        assert accuracy(outcomes) == pytest.approx(1 / 3)

    def test_empty_raises(self):
        with pytest.raises(MetricError):
            accuracy([])


class TestTable:
    def test_ragged_row_rejected(self):
        with pytest.raises(StructuralError):
            Table(header=("a", "b"), rows=(("1",),))

    def test_empty_header_rejected(self):
        with pytest.raises(StructuralError):
            Table(header=(), rows=())

    def test_sanitized_collision_rejected(self):
        with pytest.raises(StructuralError):
            Table(header=("Top 5", "top_5"), rows=())


class TestInstance:
    def test_verification_gold_restricted(self, golden_table):
        with pytest.raises(StructuralError):
            Instance(id="x", question="q", table=golden_table,
                     gold_answers=("maybe",), task="verification")

    def test_no_gold_rejected(self, golden_table):
        with pytest.raises(StructuralError):
            Instance(id="x", question="q", table=golden_table, gold_answers=())


def _record(i=0, **over):
    rec = {
        "id": f"inst_{i}",
        "question": "how many wins?",
        "table": {"header": ["a", "b"], "rows": [["1", "2"]]},
        "answers": ["3"],
    }
    rec.update(over)
    return rec


class TestLoadDataset:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "d.jsonl"
        with open(path, "w") as fh:
            for i in range(3):
                fh.write(json.dumps(_record(i)) + "\n")
        instances = load_dataset(path)
        assert [inst.id for inst in instances] == ["inst_0", "inst_1", "inst_2"]
        out = tmp_path / "copy.jsonl"
        dump_dataset(instances, out)
        assert load_dataset(out) == instances

    def test_gold_answers_canonicalized_on_load(self, tmp_path):
        path = tmp_path / "d.jsonl"
        path.write_text(json.dumps(_record(answers=["1,204", "Big Win."])) + "\n")
        (inst,) = load_dataset(path)
        assert inst.gold_answers == ("1204", "big win")

    def test_error_carries_line_number(self, tmp_path):
        path = tmp_path / "d.jsonl"
        path.write_text(json.dumps(_record()) + "\n" + "{broken\n")
        with pytest.raises(DatasetError, match="line 2"):
            load_dataset(path)

    def test_missing_field_fails_fast(self, tmp_path):
        rec = _record()
        del rec["question"]
        path = tmp_path / "d.jsonl"
        path.write_text(json.dumps(rec) + "\n")
        with pytest.raises(DatasetError, match="question"):
            load_dataset(path)

    def test_structural_error_line(self, tmp_path):
        rec = _record()
        rec["table"]["rows"] = [["only-one-cell"]]
        path = tmp_path / "d.jsonl"
        path.write_text(json.dumps(rec) + "\n")
        with pytest.raises(DatasetError, match="line 1"):
            load_dataset(path)

    def test_duplicate_headers_deduped(self, tmp_path):
        rec = _record()
        rec["table"] = {"header": ["score", "Score"], "rows": [["1", "2"]]}
        path = tmp_path / "d.jsonl"
        path.write_text(json.dumps(rec) + "\n")
        (inst,) = load_dataset(path)
        assert inst.table.header == ("score", "Score_2")
