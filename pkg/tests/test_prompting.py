import pytest

from flextab.formats import CANONICAL_FORMATS, TabularFormat, serialize
from flextab.prompting import (ConfigurationError, DemoSet, TemplateError,
                               build_prompt, load_builtin_templates,
                               parse_template)

HEADER = "# format=markdown task=qa shots=1\n"
BODY = ("Here is a demo.\n---\ndemo block\n---\n"
        "Read the table below.\n<table>\nquestion: <utterance>\n")


class TestParseTemplate:
    def test_fields(self):
        t = parse_template(HEADER + BODY)
        assert t.format is TabularFormat.MARKDOWN
        assert t.task == "qa"
        assert t.shots == 1
        assert t.demonstrations == ["\ndemo block\n"]

    def test_malformed_header(self):
        with pytest.raises(TemplateError, match="header"):
            parse_template("not a header\n" + BODY)

    def test_missing_placeholder(self):
        with pytest.raises(TemplateError, match="<table>"):
            parse_template(HEADER + "question: <utterance>\n")
        with pytest.raises(TemplateError, match="<utterance>"):
            parse_template(HEADER + "table: <table>\n")


class TestBuiltinTemplates:
    @pytest.mark.parametrize("mode", ["per_format", "unified"])
    def test_all_pairs_present(self, mode):
        demo_set = load_builtin_templates(mode)
        for fmt in CANONICAL_FORMATS:
            for task in ("qa", "verification"):
                t = demo_set.get(fmt, task)
                assert t.format is fmt and t.task == task
                assert t.shots >= 1

    def test_unknown_mode(self):
        with pytest.raises(ConfigurationError):
            load_builtin_templates("nonexistent")

    def test_missing_pair_reported(self):
        demo_set = load_builtin_templates()
        with pytest.raises(ConfigurationError, match="markdown"):
            DemoSet(mode="x", templates={}).get(TabularFormat.MARKDOWN, "qa")

    def test_modes_differ_only_in_database_qa(self):
        per = load_builtin_templates("per_format")
        uni = load_builtin_templates("unified")
        for fmt in CANONICAL_FORMATS:
            for task in ("qa", "verification"):
                same = per.get(fmt, task).body == uni.get(fmt, task).body
                expect_same = not (fmt is TabularFormat.DATABASE and task == "qa")
                assert same == expect_same, (fmt, task)


class TestBuildPrompt:
    def test_substitution(self, simple_instance):
        demo_set = load_builtin_templates()
        for fmt in CANONICAL_FORMATS:
            prompt = build_prompt(simple_instance, fmt, demo_set.get(fmt, "qa"))
            assert serialize(simple_instance.table, fmt).text in prompt
            assert simple_instance.question in prompt
            assert "<table>" not in prompt
            assert "<utterance>" not in prompt

    def test_format_mismatch(self, simple_instance):
        demo_set = load_builtin_templates()
        with pytest.raises(TemplateError):
            build_prompt(simple_instance, TabularFormat.DICT,
                         demo_set.get(TabularFormat.LIST, "qa"))

    def test_markdown_templates_teach_the_marker(self):
        demo_set = load_builtin_templates()
        for task in ("qa", "verification"):
            assert "so the answer is:" in demo_set.get(
                TabularFormat.MARKDOWN, task).body
