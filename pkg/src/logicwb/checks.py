"""Property suites replaying the workbench's finitely checkable laws.

Each suite runs a fixed contract over corpus structures and seeded random
formulas and returns a CheckReport.  Failures carry the per-case seed and a
textual reproduction of the inputs, so any red case can be replayed exactly.
The CLI `check` command and the acceptance tests both call these functions.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from logicwb.structures import (
    ACCESS,
    ACCESS_B,
    LogicError,
    PointedStructure,
    PreconditionError,
    Structure,
    induced,
    is_frame_K,
    isomorphic,
    load_pointed,
    load_structure,
)
from logicwb.syntax import (
    BinAtom,
    Eq,
    Exists,
    FoFormula,
    Forall,
    UnAtom,
    Vocabulary,
    children,
    depth_gf,
    depth_modal,
    print_fo,
    print_modal,
    print_ra,
)
from logicwb.semantics import SemanticsMode, eval_fo, eval_modal, eval_ra
from logicwb.equivalence import bisimilar, pebble_equiv
from logicwb.transforms import (
    cut_guarded,
    gf_unravel_bin,
    gml_char_formula,
    guarded_dist,
    ra_relativize,
    ra_to_fo3,
    unravel,
)
from logicwb.decision import (
    bounded_model_search,
    frame_axioms_valid_on_K,
    sat_bullet,
)
from logicwb.generators import (
    duplicate_node_pair,
    enumerate_bimodal_frames,
    enumerate_trees,
    linear_order,
    random_gf_bin,
    random_modal,
    random_ra,
    random_structure,
)


@dataclass(frozen=True)
class CheckFailure:
    index: int
    seed: int
    input: str
    expected: str
    got: str


@dataclass
class CheckReport:
    suite: str
    cases: int = 0
    failures: list[CheckFailure] = field(default_factory=list)
    elapsed_ms: int = 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": [
                {
                    "index": f.index,
                    "seed": f.seed,
                    "input": f.input,
                    "expected": f.expected,
                    "got": f.got,
                }
                for f in self.failures
            ],
            "elapsed_ms": self.elapsed_ms,
        }


def _case_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


class _Run:
    """Bookkeeping shared by all suites: case counter, clock, failures."""

    def __init__(self, suite: str) -> None:
        self.report = CheckReport(suite)
        self._t0 = time.monotonic()

    def record(self, seed: int, input_text: str, expected, got) -> None:
        self.report.cases += 1
        if expected != got:
            self.report.failures.append(
                CheckFailure(
                    self.report.cases - 1, seed, input_text, repr(expected), repr(got)
                )
            )

    def done(self) -> CheckReport:
        self.report.elapsed_ms = int((time.monotonic() - self._t0) * 1000)
        return self.report


def load_corpus_dir(path: str) -> list[tuple[str, str]]:
    """All .json documents in a directory, sorted by file name."""
    base = Path(path)
    if not base.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {path}")
    out = [
        (p.name, p.read_text(encoding="utf-8")) for p in sorted(base.glob("*.json"))
    ]
    return out


def _pointed_corpus(corpus: list[tuple[str, str]]) -> list[tuple[str, PointedStructure]]:
    out = []
    for name, text in corpus:
        try:
            out.append((name, load_pointed(text)))
        except Exception:
            continue
    return out


def _plain_corpus(corpus: list[tuple[str, str]]) -> list[tuple[str, Structure]]:
    out = []
    for name, text in corpus:
        try:
            out.append((name, load_structure(text)))
        except Exception:
            continue
    return out


def _need(entries: list, what: str) -> None:
    if not entries:
        raise PreconditionError(f"corpus has no usable {what}")


# --- suites ---------------------------------------------------------------------


def suite_unravel_invariance(
    corpus: list[tuple[str, str]], seed: int, cases: int = 200
) -> CheckReport:
    """Graded formulas cannot tell a model from its unraveling at their depth."""
    run = _Run("unravel-invariance")
    models = [
        (name, ps) for name, ps in _pointed_corpus(corpus) if len(ps.points) == 1
    ]
    _need(models, "single-pointed structures")
    for i in range(cases):
        cseed = _case_seed(seed, i)
        rng = random.Random(cseed)
        name, m = models[i % len(models)]
        f = random_modal(rng, 3, ("p", "q", "s"), max_grade=3)
        before = eval_modal(m, f)
        after = eval_modal(unravel(m, depth_modal(f)), f)
        run.record(cseed, f"{name} ; {print_modal(f)}", before, after)
    return run.done()


def suite_bisim_invariance(
    corpus: list[tuple[str, str]], seed: int, cases: int = 200
) -> CheckReport:
    """Plain modal formulas agree across constructed bisimilar pairs, and the
    bullet modality is exhibited escaping that invariance in quasi semantics."""
    run = _Run("bisim-invariance")
    models = [
        (name, ps) for name, ps in _pointed_corpus(corpus) if len(ps.points) == 1
    ]
    _need(models, "single-pointed structures")
    for i in range(cases):
        cseed = _case_seed(seed, i)
        rng = random.Random(cseed)
        name, base = models[i % len(models)]
        left, right = duplicate_node_pair(rng, base)
        if rng.random() < 0.5:
            left, right = duplicate_node_pair(rng, right)[1], left
        f = random_modal(rng, 3, ("p", "q", "s"))
        label = f"{name} twin ; {print_modal(f)}"
        if not bisimilar(left, right).equivalent:
            run.record(cseed, label, "constructed pair bisimilar", "not bisimilar")
            continue
        run.record(cseed, label, eval_modal(left, f), eval_modal(right, f))
    # fixed pair: R-bisimilar quasi-models that the bullet distinguishes
    from logicwb.structures import ACCESS_B
    from logicwb.syntax import parse_modal

    loop = PointedStructure(
        Structure(
            ("w",),
            {"p": frozenset({"w"})},
            {ACCESS: frozenset({("w", "w")}), ACCESS_B: frozenset({("w", "w")})},
        ),
        ("w",),
    )
    cycle = PointedStructure(
        Structure(
            ("u", "v"),
            {"p": frozenset({"u", "v"})},
            {ACCESS: frozenset({("u", "v"), ("v", "u")}), ACCESS_B: frozenset()},
        ),
        ("u",),
    )
    bullet_p = parse_modal("*p")
    run.record(
        seed,
        "loop-with-reflexive-bullet vs two-cycle ; bisimilar",
        True,
        bisimilar(loop, cycle).equivalent,
    )
    run.record(
        seed,
        "loop-with-reflexive-bullet vs two-cycle ; *p disagrees in quasi mode",
        True,
        eval_modal(loop, bullet_p, SemanticsMode.QUASI)
        != eval_modal(cycle, bullet_p, SemanticsMode.QUASI),
    )
    return run.done()


def suite_char_formula(
    corpus: list[tuple[str, str]], seed: int, cases: int = 2000
) -> CheckReport:
    """Characteristic formulas hold exactly on their own isomorphism class.

    Soundness is exhaustive over every 2-letter tree with at most 5 nodes.
    Completeness (distinct classes get falsified) is exhaustive over the
    3-node 2-letter and 5-node letter-free families, and sampled over
    `cases` seeded pairs from the full 5-node 2-letter family; the full
    ordered grid is out of desk-scale reach.
    """
    run = _Run("char-formula")
    letters = ("p", "q")
    vocab = Vocabulary(unary=letters, binary=(ACCESS,))
    trees = enumerate_trees(5, letters)
    formulas = [gml_char_formula(t, vocab) for t in trees]
    for i, (t, psi) in enumerate(zip(trees, formulas)):
        run.record(seed, f"tree#{i} sound", True, eval_modal(t, psi))
    small = enumerate_trees(3, letters)
    small_psi = [gml_char_formula(t, vocab) for t in small]
    for i, t in enumerate(small):
        for j, psi in enumerate(small_psi):
            run.record(
                seed, f"small tree#{i} vs formula#{j}", i == j, eval_modal(t, psi)
            )
    bare_vocab = Vocabulary(unary=(), binary=(ACCESS,))
    bare = enumerate_trees(5, ())
    bare_psi = [gml_char_formula(t, bare_vocab) for t in bare]
    for i, t in enumerate(bare):
        for j, psi in enumerate(bare_psi):
            run.record(
                seed, f"bare tree#{i} vs formula#{j}", i == j, eval_modal(t, psi)
            )
    rng = random.Random(seed)
    for k in range(cases):
        i = rng.randrange(len(trees))
        j = rng.randrange(len(trees))
        run.record(
            _case_seed(seed, k),
            f"sampled tree#{i} vs formula#{j}",
            i == j,
            eval_modal(trees[i], formulas[j]),
        )
    for name, t in _pointed_corpus(corpus):
        try:
            psi = gml_char_formula(t, Vocabulary(tuple(sorted(t.structure.unary)), (ACCESS,)))
        except LogicError:
            continue
        run.record(seed, f"{name} sound", True, eval_modal(t, psi))
    return run.done()


def suite_ra_relativize(
    corpus: list[tuple[str, str]], seed: int, cases: int = 300
) -> CheckReport:
    """Relativised terms evaluate like plain terms on the restricted model."""
    run = _Run("ra-relativize")
    models = _plain_corpus(corpus)
    usable = [
        (name, m, tuple(sorted(r for r in m.binary if m.rel(r))))
        for name, m in models
    ]
    usable = [(name, m, rs) for name, m, rs in usable if rs]
    _need(usable, "structures with a non-empty binary relation")
    for i in range(cases):
        cseed = _case_seed(seed, i)
        rng = random.Random(cseed)
        name, m, rels = usable[i % len(usable)]
        r = rng.choice(rels)
        term = random_ra(rng, 6, tuple(sorted(m.binary)))
        lhs = eval_ra(m, ra_relativize(term, r))
        dom = {a for a, _ in m.rel(r)}
        rhs = eval_ra(induced(m, dom), term)
        run.record(cseed, f"{name} ; dom({r}) ; {print_ra(term)}", sorted(rhs), sorted(lhs))
    return run.done()


def _fo_all_vars(f: FoFormula) -> set[str]:
    if isinstance(f, UnAtom):
        return {f.var}
    if isinstance(f, BinAtom):
        return {f.left, f.right}
    if isinstance(f, Eq):
        return {f.left, f.right}
    out = set()
    if isinstance(f, (Exists, Forall)):
        out.add(f.var)
    for sub in children(f):
        out |= _fo_all_vars(sub)
    return out


def suite_ra2fo(
    corpus: list[tuple[str, str]], seed: int, cases: int = 300
) -> CheckReport:
    """The three-variable translation agrees with algebraic evaluation pointwise."""
    run = _Run("ra2fo")
    models = [(name, m) for name, m in _plain_corpus(corpus) if m.binary]
    _need(models, "structures with binary relations")
    for i in range(cases):
        cseed = _case_seed(seed, i)
        rng = random.Random(cseed)
        name, m = models[i % len(models)]
        term = random_ra(rng, 6, tuple(sorted(m.binary)))
        f = ra_to_fo3(term)
        label = f"{name} ; {print_ra(term)}"
        used = _fo_all_vars(f)
        if not used <= {"x", "y", "z"}:
            run.record(cseed, label, "vars within x,y,z", f"extra vars {sorted(used)}")
            continue
        pairs = eval_ra(m, term)
        mismatch = None
        for a in m.domain:
            for b in m.domain:
                via_fo = eval_fo(m, {"x": a, "y": b}, f)
                if via_fo != ((a, b) in pairs):
                    mismatch = (a, b, via_fo)
                    break
            if mismatch:
                break
        run.record(cseed, label, None, mismatch)
    return run.done()


def _gf_case(
    rng: random.Random, m: PointedStructure
) -> tuple[FoFormula, dict[str, str]]:
    live = ("x",) if len(m.points) == 1 else ("x", "y")
    unary = tuple(sorted(m.structure.unary))
    binary = tuple(sorted(m.structure.binary)) or (ACCESS,)
    f = random_gf_bin(rng, 2, unary, binary, live)
    assignment = dict(zip(live, m.points))
    return f, assignment


def suite_distance_depth(
    corpus: list[tuple[str, str]], seed: int, cases: int = 200
) -> CheckReport:
    """Guarded formulas only see nodes within guarded distance of their depth."""
    run = _Run("distance-depth")
    models = _pointed_corpus(corpus)
    _need(models, "pointed structures")
    for i in range(cases):
        cseed = _case_seed(seed, i)
        rng = random.Random(cseed)
        name, m = models[i % len(models)]
        f, assignment = _gf_case(rng, m)
        before = eval_fo(m.structure, assignment, f)
        after = eval_fo(cut_guarded(m, depth_gf(f)).structure, assignment, f)
        run.record(cseed, f"{name} ; {print_fo(f)}", before, after)
    return run.done()


def suite_gf_unravel(
    corpus: list[tuple[str, str]], seed: int, cases: int = 100
) -> CheckReport:
    """Guarded unraveling: tree distance equals true distance and guarded
    formulas within the truncation depth cannot see the difference."""
    run = _Run("gf-unravel")
    models = [
        (name, ps)
        for name, ps in _pointed_corpus(corpus)
        if len(ps.structure.domain) <= 5
    ]
    _need(models, "pointed structures of at most 5 nodes")
    for i in range(cases):
        cseed = _case_seed(seed, i)
        rng = random.Random(cseed)
        name, m = models[i % len(models)]
        u = gf_unravel_bin(m, 3)
        bad = [
            node
            for node in u.structure.domain
            if guarded_dist(u.structure, u.points, node) != node.count("/")
        ]
        run.record(cseed, f"{name} ; distance=depth", [], bad)
        f, assignment = _gf_case(rng, m)
        source = eval_fo(m.structure, assignment, f)
        image = dict(zip(assignment, u.points))
        unraveled = eval_fo(u.structure, image, f)
        run.record(cseed, f"{name} ; {print_fo(f)}", source, unraveled)
    return run.done()


def suite_reduction_equisat(
    corpus: list[tuple[str, str]], seed: int, cases: int = 150
) -> CheckReport:
    """The bullet elimination preserves satisfiability both ways at desk scale:
    verdicts are cross-checked against bounded quasi-model search, and every
    claimed witness model-checks."""
    run = _Run("reduction-equisat")
    for i in range(cases):
        cseed = _case_seed(seed, i)
        rng = random.Random(cseed)
        f = random_modal(rng, 2, ("p", "q"), bullets=True)
        label = print_modal(f)
        verdict = sat_bullet(f)
        if verdict.satisfiable:
            w = verdict.witness
            ok = (
                w is not None
                and is_frame_K(w.structure)
                and eval_modal(w, f, SemanticsMode.QUASI)
            )
            run.record(cseed, f"{label} ; witness verifies", True, bool(ok))
        else:
            bounded = bounded_model_search(f, SemanticsMode.QUASI, 4)
            run.record(
                cseed,
                f"{label} ; unsat confirmed by bounded search",
                False,
                bounded.satisfiable,
            )
    return run.done()


def suite_axioms_k(
    corpus: list[tuple[str, str]], seed: int, cases: int = 0
) -> CheckReport:
    """The two bullet axioms are frame-valid exactly on the legal frames,
    exhaustively over every bimodal frame with at most 3 nodes."""
    run = _Run("axioms-K")
    index = 0
    for frame in enumerate_bimodal_frames(3):
        got = frame_axioms_valid_on_K(frame, 3)
        expected = is_frame_K(frame)
        if expected != got:
            run.report.failures.append(
                CheckFailure(
                    index,
                    seed,
                    f"frame R={sorted(frame.rel(ACCESS))} Rb={sorted(frame.rel(ACCESS_B))}",
                    repr(expected),
                    repr(got),
                )
            )
        index += 1
        run.report.cases += 1
    for name, frame in _plain_corpus(corpus):
        run.record(
            seed, f"{name} ; axioms valid iff legal frame",
            is_frame_K(frame),
            frame_axioms_valid_on_K(frame, max(len(frame.domain), 3)),
        )
    return run.done()


def suite_pebble_vs_iso(
    corpus: list[tuple[str, str]], seed: int, cases: int = 100
) -> CheckReport:
    """Pebble equivalence is antitone in the pebble count, matches isomorphism
    once the count reaches the domain size, and 3 pebbles tell the 3-element
    linear order from the 4-element one."""
    run = _Run("pebble-vs-iso")
    for i in range(cases):
        cseed = _case_seed(seed, i)
        rng = random.Random(cseed)
        m = random_structure(rng, 5, ("P",), (ACCESS,))
        n = random_structure(rng, 5, ("P",), (ACCESS,))
        answers = [pebble_equiv(m, n, k).equivalent for k in (1, 2, 3, 4)]
        monotone = all(not answers[k + 1] or answers[k] for k in range(3))
        run.record(cseed, f"antitone ; ks={answers}", True, monotone)
    for i in range(cases):
        cseed = _case_seed(seed, cases + i)
        rng = random.Random(cseed)
        size = rng.randint(1, 6)
        m = _sized_random(rng, size)
        if rng.random() < 0.5:
            n = _permuted_copy(rng, m)
        else:
            n = _sized_random(rng, size)
        got = pebble_equiv(m, n, size).equivalent
        run.record(cseed, f"k=|domain|={size} matches isomorphism", isomorphic(m, n), got)
    run.record(
        seed,
        "linear order 3 vs 4 at k=3",
        False,
        pebble_equiv(linear_order(3), linear_order(4), 3).equivalent,
    )
    return run.done()


def _sized_random(rng: random.Random, size: int) -> Structure:
    nodes = tuple(f"w{i}" for i in range(size))
    un = {"P": frozenset(x for x in nodes if rng.random() < 0.5)}
    bi = {
        ACCESS: frozenset(
            (a, b) for a in nodes for b in nodes if rng.random() < 0.3
        )
    }
    return Structure(domain=nodes, unary=un, binary=bi)


def _permuted_copy(rng: random.Random, m: Structure) -> Structure:
    names = [f"v{i}" for i in range(len(m.domain))]
    rng.shuffle(names)
    ren = dict(zip(m.domain, names))
    return Structure(
        domain=tuple(sorted(names)),
        unary={p: frozenset(ren[x] for x in ext) for p, ext in m.unary.items()},
        binary={
            r: frozenset((ren[a], ren[b]) for a, b in ext)
            for r, ext in m.binary.items()
        },
    )


SUITES = {
    "unravel-invariance": suite_unravel_invariance,
    "bisim-invariance": suite_bisim_invariance,
    "char-formula": suite_char_formula,
    "ra-relativize": suite_ra_relativize,
    "ra2fo": suite_ra2fo,
    "distance-depth": suite_distance_depth,
    "gf-unravel": suite_gf_unravel,
    "reduction-equisat": suite_reduction_equisat,
    "axioms-K": suite_axioms_k,
    "pebble-vs-iso": suite_pebble_vs_iso,
}

# suites that refuse to run without corpus structures
CORPUS_REQUIRED = frozenset(
    {
        "unravel-invariance",
        "bisim-invariance",
        "ra-relativize",
        "ra2fo",
        "distance-depth",
        "gf-unravel",
    }
)
