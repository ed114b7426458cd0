"""Run every property suite over a corpus and print a one-line-per-suite table.

Builds the corpus first when the directory is missing. Exit status is the
number of suites with failures, so 0 means a fully green board.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from logicwb.checks import CORPUS_REQUIRED, SUITES, load_corpus_dir

SUBDIR = {
    "unravel-invariance": "modal",
    "bisim-invariance": "modal",
    "char-formula": "trees",
    "ra-relativize": "ra",
    "ra2fo": "ra",
    "distance-depth": "guarded",
    "gf-unravel": "guarded",
    "axioms-K": "frames",
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--corpus", default="corpus", help="corpus root directory")
    parser.add_argument("--seed", type=int, default=2024)
    args = parser.parse_args(argv)

    root = Path(args.corpus)
    if not root.is_dir():
        sys.path.insert(0, str(Path(__file__).resolve().parent))
        import make_corpus

        counts = make_corpus.build(root, args.seed)
        total = sum(counts.values())
        print(f"built corpus at {root} ({total} structures)", file=sys.stderr)

    bad = 0
    for name, suite in SUITES.items():
        sub = SUBDIR.get(name)
        corpus = load_corpus_dir(str(root / sub)) if sub else []
        if not corpus and name in CORPUS_REQUIRED:
            print(f"{name:20s} SKIP  empty corpus {root / sub}")
            bad += 1
            continue
        report = suite(corpus, seed=args.seed)
        mark = "ok  " if not report.failures else "FAIL"
        print(
            f"{name:20s} {mark}  {report.cases:6d} cases  "
            f"{len(report.failures):3d} failures  {report.elapsed_ms:6d} ms"
        )
        bad += bool(report.failures)
    return bad


if __name__ == "__main__":
    raise SystemExit(main())
