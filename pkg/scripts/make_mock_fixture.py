#!/usr/bin/env python3
"""Generate the planted synthetic dataset + mock backend fixture.

Writes three files into the output directory:
    dataset.jsonl   line-delimited instances
    fixture.jsonl   mock backend completion records
    matrix.jsonl    planted per-format correctness (ground truth for checks)
"""

import argparse
from pathlib import Path

from flextab.mockdata import generate_planted_run, write_planted_run


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="mock_run", help="output directory")
    parser.add_argument("--n", type=int, default=200, help="instance count")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--samples", type=int, default=5,
                        help="scripted samples per (instance, format)")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    run = generate_planted_run(n_instances=args.n, seed=args.seed,
                               n_samples=args.samples)
    write_planted_run(run, out / "dataset.jsonl", out / "fixture.jsonl",
                      out / "matrix.jsonl")
    print(f"wrote {len(run.instances)} instances and "
          f"{len(run.fixture_records)} fixture records to {out}")


if __name__ == "__main__":
    main()
