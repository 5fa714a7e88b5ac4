"""Live program-execution path through the installed sandbox runner.

The acceptance gate never needs these (program outcomes arrive
pre-resolved from the mock fixture); this module only runs when the
runner package is installed alongside.
"""

import importlib.util

import pytest

from flextab.backend import Completion
from flextab.core import Instance, Table
from flextab.execution import resolve
from flextab.formats import TabularFormat

pytestmark = pytest.mark.skipif(
    importlib.util.find_spec("pyrunner") is None,
    reason="sandbox runner not installed")

TABLE = Table(header=("name", "wins"), rows=(("a", "3"), ("b", "4")))
INSTANCE = Instance(id="i", question="total wins?", table=TABLE,
                    gold_answers=("7",))


class TestLiveRunner:
    def test_dict_program(self):
        code = ("def solver(table):\n"
                "    return sum(int(r['wins']) for r in table)")
        outcome = resolve(INSTANCE, TabularFormat.DICT, Completion(text=code))
        assert outcome.ok and outcome.answer == "7"

    def test_list_program_bare_body_normalized(self):
        outcome = resolve(INSTANCE, TabularFormat.LIST, Completion(
            text="return int(table[1][1]) + int(table[2][1])"))
        assert outcome.ok and outcome.answer == "7"

    def test_pandas_program(self):
        code = ("def solver(table):\n"
                "    return int(table['wins'].astype(int).sum())")
        outcome = resolve(INSTANCE, TabularFormat.PANDAS, Completion(text=code))
        assert outcome.ok and outcome.answer == "7"

    def test_fenced_program(self):
        outcome = resolve(INSTANCE, TabularFormat.DICT, Completion(
            text="```python\ndef solver(table):\n    return len(table)\n```"))
        assert outcome.ok and outcome.answer == "2"

    def test_runtime_error_folds(self):
        outcome = resolve(INSTANCE, TabularFormat.DICT, Completion(
            text="def solver(table):\n    return 1 / 0"))
        assert not outcome.ok and outcome.error.kind == "runtime"

    def test_syntax_error_folds(self):
        outcome = resolve(INSTANCE, TabularFormat.DICT, Completion(
            text="def solver(table:\n    oops"))
        assert not outcome.ok and outcome.error.kind == "syntax"

    def test_infinite_loop_times_out(self):
        outcome = resolve(INSTANCE, TabularFormat.DICT, Completion(
            text="def solver(table):\n    while True:\n        pass"),
            timeout=1.0)
        assert not outcome.ok and outcome.error.kind == "timeout"
