"""Equivalence checkers: bisimulation games, counting bisimulation, pebble games,
and the guarded back-and-forth game for binary vocabularies.

Every checker runs as a greatest-fixpoint deletion over an explicitly
enumerated position set.  Position universes are exponential in the pebble
count, which is acceptable at the intended scale (k <= 4, domains <= 10 or so).
A name absent from one structure is the empty relation there, so checkers
always range over the union of the two structures' vocabularies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from logicwb.structures import (
    ACCESS,
    PointedStructure,
    PreconditionError,
    Structure,
    isomorphic,
    successors,
)


@dataclass(frozen=True)
class PartialMap:
    """Finite injective map between node ids, stored as a set of pairs."""

    pairs: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        lefts = {a for a, _ in self.pairs}
        rights = {b for _, b in self.pairs}
        if len(lefts) != len(self.pairs) or len(rights) != len(self.pairs):
            raise PreconditionError("partial map is not injective")

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(a for a, _ in self.pairs)

    @property
    def image(self) -> frozenset[str]:
        return frozenset(b for _, b in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def apply(self, a: str) -> str:
        for x, y in self.pairs:
            if x == a:
                return y
        raise KeyError(a)

    def extend(self, a: str, b: str) -> "PartialMap":
        return PartialMap(self.pairs | {(a, b)})


@dataclass(frozen=True)
class GameResult:
    """Outcome of an equivalence game.

    When equivalent, the witness carries the winning object (a relation, a
    partition, or a family of partial maps, depending on the game).  Notes
    collect diagnostics such as the distinguishing round of a bounded game or
    points excluded from guardedness.
    """

    equivalent: bool
    witness: object | None = None
    notes: tuple[str, ...] = field(default=())


def _unary_names(m: Structure, n: Structure) -> tuple[str, ...]:
    return tuple(sorted(set(m.unary) | set(n.unary)))


def _binary_names(m: Structure, n: Structure) -> tuple[str, ...]:
    return tuple(sorted(set(m.binary) | set(n.binary)))


def is_partial_iso(m: Structure, n: Structure, pm: PartialMap) -> bool:
    """Whether a map preserves and reflects all facts among its domain."""
    for name in _unary_names(m, n):
        left, right = m.pred(name), n.pred(name)
        for a, b in pm.pairs:
            if (a in left) != (b in right):
                return False
    for name in _binary_names(m, n):
        left, right = m.rel(name), n.rel(name)
        for a1, b1 in pm.pairs:
            for a2, b2 in pm.pairs:
                if ((a1, a2) in left) != ((b1, b2) in right):
                    return False
    return True


def _atomic_harmony(m: Structure, n: Structure) -> set[tuple[str, str]]:
    names = _unary_names(m, n)
    profile_m = {w: tuple(w in m.pred(p) for p in names) for w in m.domain}
    profile_n = {v: tuple(v in n.pred(p) for p in names) for v in n.domain}
    return {
        (w, v)
        for w in m.domain
        for v in n.domain
        if profile_m[w] == profile_n[v]
    }


def _refine_once(
    z: set[tuple[str, str]],
    succ_m: dict[str, tuple[str, ...]],
    succ_n: dict[str, tuple[str, ...]],
) -> set[tuple[str, str]]:
    out = set()
    for w, v in z:
        zig = all(any((w2, v2) in z for v2 in succ_n[v]) for w2 in succ_m[w])
        zag = all(any((w2, v2) in z for w2 in succ_m[w]) for v2 in succ_n[v])
        if zig and zag:
            out.add((w, v))
    return out


def bisimilar(m: PointedStructure, n: PointedStructure) -> GameResult:
    """Greatest bisimulation between two pointed structures.

    Computed as the fixpoint of zig/zag refinement on the full product,
    seeded by atomic harmony.
    """
    w, v = m.point, n.point
    succ_m = successors(m.structure, ACCESS)
    succ_n = successors(n.structure, ACCESS)
    z = _atomic_harmony(m.structure, n.structure)
    while True:
        z2 = _refine_once(z, succ_m, succ_n)
        if z2 == z:
            break
        z = z2
    if (w, v) in z:
        return GameResult(True, frozenset(z))
    return GameResult(False, None)


def bisimilar_depth(m: PointedStructure, n: PointedStructure, k: int) -> GameResult:
    """Whether the duplicator survives k rounds of the bisimulation game."""
    if k < 0:
        raise PreconditionError("round count must be non-negative")
    w, v = m.point, n.point
    succ_m = successors(m.structure, ACCESS)
    succ_n = successors(n.structure, ACCESS)
    z = _atomic_harmony(m.structure, n.structure)
    if (w, v) not in z:
        return GameResult(False, None, ("distinguished at round 0",))
    for i in range(1, k + 1):
        z = _refine_once(z, succ_m, succ_n)
        if (w, v) not in z:
            return GameResult(False, None, (f"distinguished at round {i}",))
    return GameResult(True, frozenset(z))


def counting_bisimilar(m: PointedStructure, n: PointedStructure) -> GameResult:
    """Partition refinement where matched blocks need equal successor counts.

    Runs on the tagged disjoint union of the two structures; equivalent iff
    the two points land in the same stable block.
    """
    w, v = m.point, n.point
    nodes = [("m", x) for x in m.structure.domain] + [("n", x) for x in n.structure.domain]
    names = _unary_names(m.structure, n.structure)
    succ = {}
    for side, st in (("m", m.structure), ("n", n.structure)):
        table = successors(st, ACCESS)
        for x in st.domain:
            succ[(side, x)] = tuple((side, y) for y in table[x])

    def atom_profile(node: tuple[str, str]) -> tuple[bool, ...]:
        side, x = node
        st = m.structure if side == "m" else n.structure
        return tuple(x in st.pred(p) for p in names)

    block_of = {}
    profiles = sorted({atom_profile(node) for node in nodes})
    for node in nodes:
        block_of[node] = profiles.index(atom_profile(node))
    while True:
        signatures = {}
        for node in nodes:
            counts: dict[int, int] = {}
            for s in succ[node]:
                counts[block_of[s]] = counts.get(block_of[s], 0) + 1
            signatures[node] = (block_of[node], tuple(sorted(counts.items())))
        distinct = sorted(set(signatures.values()))
        new_block = {node: distinct.index(signatures[node]) for node in nodes}
        if new_block == block_of:
            break
        block_of = new_block
    if block_of[("m", w)] != block_of[("n", v)]:
        return GameResult(False, None)
    blocks: dict[int, set[tuple[str, str]]] = {}
    for node, b in block_of.items():
        blocks.setdefault(b, set()).add(node)
    witness = tuple(frozenset(blocks[b]) for b in sorted(blocks))
    return GameResult(True, witness)


def _all_partial_isos(m: Structure, n: Structure, k: int) -> set[PartialMap]:
    out = {PartialMap(frozenset())}
    for size in range(1, k + 1):
        for dom in combinations(m.domain, size):
            for ran in permutations(n.domain, size):
                pm = PartialMap(frozenset(zip(dom, ran)))
                if is_partial_iso(m, n, pm):
                    out.add(pm)
    return out


def pebble_equiv(m: Structure, n: Structure, k: int) -> GameResult:
    """k-pebble potential isomorphism via greatest-fixpoint deletion.

    Starts from every partial isomorphism of size <= k.  A map smaller than k
    must extend within the surviving family to any requested element on either
    side; supersets of deleted maps are deleted too, so the surviving set is
    downward closed and forms the winning family itself.  Equivalent iff the
    empty map survives.
    """
    if k < 1:
        raise PreconditionError("pebble count must be at least 1")
    alive = _all_partial_isos(m, n, k)
    changed = True
    while changed:
        changed = False
        doomed = set()
        for pm in alive:
            if len(pm) >= k:
                continue
            dom, img = pm.domain, pm.image
            forth = all(
                a in dom
                or any(b not in img and pm.extend(a, b) in alive for b in n.domain)
                for a in m.domain
            )
            back = forth and all(
                b in img
                or any(a not in dom and pm.extend(a, b) in alive for a in m.domain)
                for b in n.domain
            )
            if not (forth and back):
                doomed.add(pm)
        if doomed:
            alive = {
                pm for pm in alive
                if not any(pm.pairs >= d.pairs for d in doomed)
            }
            changed = True
    if PartialMap(frozenset()) in alive:
        return GameResult(True, frozenset(alive))
    return GameResult(False, None)


def potential_iso(m: Structure, n: Structure) -> bool:
    """Back-and-forth equivalence; on finite structures this is isomorphism."""
    return isomorphic(m, n)


def _guarded_pairs(m: Structure) -> set[frozenset[str]]:
    out = set()
    for rel in m.binary.values():
        for a, b in rel:
            if a != b:
                out.add(frozenset((a, b)))
    return out


def _binary_occurring(m: Structure) -> set[str]:
    out = set()
    for rel in m.binary.values():
        for a, b in rel:
            out.add(a)
            out.add(b)
    return out


def gf_bin_bisimilar(m: PointedStructure, n: PointedStructure) -> GameResult:
    """Guarded back-and-forth equivalence for binary vocabularies.

    Positions are partial isomorphisms between guarded sets: pairs covered by
    some binary atom, and singletons that occur in some binary tuple.  The
    rooted tuple map is admitted as a position regardless of guardedness.
    Back-and-forth obligations apply only between positions whose domains
    overlap, and deletion runs to the greatest fixpoint; equivalent iff the
    rooted map survives.  Isolated nodes (in no binary tuple) yield no
    singleton positions; their presence is reported in the notes.
    """
    if len(m.points) != len(n.points):
        raise PreconditionError("point tuples differ in length")
    root = PartialMap(frozenset(zip(m.points, n.points)))
    notes = []
    for side, st in (("left", m.structure), ("right", n.structure)):
        isolated = sorted(set(st.domain) - _binary_occurring(st))
        if isolated:
            notes.append(
                f"{side} structure has isolated nodes not treated as guarded: "
                + ", ".join(isolated)
            )
    if len(root) != len(set(m.points)) or not is_partial_iso(m.structure, n.structure, root):
        return GameResult(False, None, tuple(notes) + ("rooted map is not a partial isomorphism",))

    def guarded_sets(st: Structure, roots: tuple[str, ...]) -> list[frozenset[str]]:
        sets = {frozenset((a,)) for a in _binary_occurring(st)}
        sets |= {frozenset((r,)) for r in roots}
        sets |= _guarded_pairs(st)
        return sorted(sets, key=lambda s: (len(s), tuple(sorted(s))))

    sets_m = guarded_sets(m.structure, m.points)
    sets_n = guarded_sets(n.structure, n.points)

    positions = {root}
    for dom in sets_m:
        dom_t = tuple(sorted(dom))
        for ran in sets_n:
            if len(ran) != len(dom):
                continue
            for image in permutations(sorted(ran)):
                pm = PartialMap(frozenset(zip(dom_t, image)))
                if is_partial_iso(m.structure, n.structure, pm):
                    positions.add(pm)

    by_dom: dict[frozenset[str], set[PartialMap]] = {}
    by_ran: dict[frozenset[str], set[PartialMap]] = {}
    for pm in positions:
        by_dom.setdefault(pm.domain, set()).add(pm)
        by_ran.setdefault(pm.image, set()).add(pm)

    alive = set(positions)
    changed = True
    while changed:
        changed = False
        for pm in sorted(alive, key=lambda p: tuple(sorted(p.pairs))):
            ok = True
            for target in sets_m:
                if not (pm.domain & target):
                    continue
                candidates = by_dom.get(target, set()) & alive
                if not any(
                    all(g.apply(a) == pm.apply(a) for a in pm.domain & target)
                    for g in candidates
                ):
                    ok = False
                    break
            if ok:
                for target in sets_n:
                    if not (pm.image & target):
                        continue
                    candidates = by_ran.get(target, set()) & alive
                    inverse = {b: a for a, b in pm.pairs}
                    if not any(
                        all(
                            {a for a, bb in g.pairs if bb == b} == {inverse[b]}
                            for b in pm.image & target
                        )
                        for g in candidates
                    ):
                        ok = False
                        break
            if not ok:
                alive.discard(pm)
                changed = True
    if root in alive:
        return GameResult(True, frozenset(alive), tuple(notes))
    return GameResult(False, None, tuple(notes))
