import pytest

from flextab.core import Instance, Table
from flextab.mockdata import generate_planted_run

# Shared table exercised by the serializer golden files: a column name
# needing sanitization ("Top 5"), a thousands separator, a "-" cell, and
# mixed int/real/text columns.
GOLDEN_TABLE = Table(
    header=("Player", "Top 5", "Wins", "Avg Score"),
    rows=(
        ("tom watson", "12", "3", "70.5"),
        ("arnold palmer", "10", "-", "69.93"),
        ("jack nicklaus", "1,204", "7", "71"),
    ),
)


@pytest.fixture
def golden_table() -> Table:
    return GOLDEN_TABLE


@pytest.fixture
def simple_instance(golden_table) -> Instance:
    return Instance(id="golf_1", question="who had the most wins?",
                    table=golden_table, gold_answers=("jack nicklaus",))


@pytest.fixture(scope="session")
def planted_run():
    return generate_planted_run(n_instances=60, seed=11, n_samples=5)


@pytest.fixture(scope="session")
def planted_files(planted_run, tmp_path_factory):
    from flextab.mockdata import write_planted_run

    root = tmp_path_factory.mktemp("planted")
    write_planted_run(planted_run, root / "dataset.jsonl",
                      root / "fixture.jsonl", root / "matrix.jsonl")
    return root
