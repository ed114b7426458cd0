"""Generate the structure corpus the check suites run against.

Writes one subdirectory per structure family:

  modal/    pointed Kripke models, single point, letters p q s
  ra/       plain structures with binary names R S T
  guarded/  pointed structures with one or two points, names P Q / R S
  trees/    every 2-letter tree with at most 3 nodes, plus a few larger ones
  frames/   bimodal frames, half of them legal, half controls
  orders/   the strict linear orders on 3 and 4 elements

Deterministic for a fixed seed; rerunning overwrites in place.
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

from logicwb.generators import (
    enumerate_trees,
    linear_order,
    random_k_pointed,
    random_pointed,
    random_structure,
)
from logicwb.structures import PointedStructure, dump_structure


def _write(path: Path, doc: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(doc, encoding="utf-8")


def build(out: Path, seed: int) -> dict[str, int]:
    counts = {}

    rng = random.Random(seed)
    for i in range(30):
        if i % 5 == 4:
            ps = random_k_pointed(rng, 8, ("p", "q", "s"))
        else:
            ps = random_pointed(rng, 8, ("p", "q", "s"))
        _write(out / "modal" / f"m{i:03d}.json", dump_structure(ps))
    counts["modal"] = 30

    rng = random.Random(seed + 1)
    for i in range(20):
        m = random_structure(rng, 5, (), ("R", "S", "T"), density=0.3)
        _write(out / "ra" / f"r{i:03d}.json", dump_structure(m))
    counts["ra"] = 20

    rng = random.Random(seed + 2)
    for i in range(25):
        size = 5 if i % 2 == 0 else 7
        st = random_structure(rng, size, ("P", "Q"), ("R", "S"), density=0.3)
        k = 2 if (i % 3 == 0 and len(st.domain) >= 2) else 1
        points = tuple(rng.sample(st.domain, k))
        _write(
            out / "guarded" / f"g{i:03d}.json",
            dump_structure(PointedStructure(st, points)),
        )
    counts["guarded"] = 25

    trees = enumerate_trees(3, ("p", "q")) + enumerate_trees(5, ("p", "q"))[-8:]
    for i, t in enumerate(trees):
        _write(out / "trees" / f"t{i:04d}.json", dump_structure(t))
    counts["trees"] = len(trees)

    rng = random.Random(seed + 3)
    for i in range(30):
        if i % 2 == 0:
            frame = random_k_pointed(rng, 4, ()).structure
        else:
            frame = random_structure(rng, 4, (), ("R", "Rb"), density=0.4)
        _write(out / "frames" / f"f{i:03d}.json", dump_structure(frame))
    counts["frames"] = 30

    _write(out / "orders" / "lin3.json", dump_structure(linear_order(3)))
    _write(out / "orders" / "lin4.json", dump_structure(linear_order(4)))
    counts["orders"] = 2
    return counts


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="corpus", help="output directory")
    parser.add_argument("--seed", type=int, default=2024, help="generator seed")
    args = parser.parse_args(argv)
    counts = build(Path(args.out), args.seed)
    for family, n in sorted(counts.items()):
        print(f"{family}: {n} files")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
