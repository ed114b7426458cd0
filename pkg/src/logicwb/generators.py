"""Seeded samplers and exhaustive enumerators for structures and formulas.

Everything here is deterministic given the caller's random.Random instance,
so any failing case is reproducible from (seed, index).  Formula samplers
draw uniformly over the grammar productions available at the current depth
budget; the budget shrinks on every production, which bounds both nesting
depth and formula size.
"""

from __future__ import annotations

import random

from logicwb.structures import (
    ACCESS,
    ACCESS_B,
    PointedStructure,
    Structure,
)
from logicwb.syntax import (
    And,
    BinAtom,
    Bot,
    Box,
    BoxDualGeq,
    Bullet,
    BulletDual,
    Diamond,
    DiamondGeq,
    Eq,
    Exists,
    FoAnd,
    FoFormula,
    FoImplies,
    FoNot,
    FoOr,
    Forall,
    Implies,
    ModalFormula,
    Not,
    Or,
    Prop,
    RaAtom,
    RaComp,
    RaConv,
    RaDiff,
    RaId,
    RaMeet,
    RaTerm,
    RaTop,
    Top,
    UnAtom,
    VARIABLES,
)


def random_structure(
    rng: random.Random,
    max_nodes: int,
    unary: tuple[str, ...],
    binary: tuple[str, ...] = (ACCESS,),
    density: float = 0.35,
) -> Structure:
    n = rng.randint(1, max_nodes)
    nodes = tuple(f"w{i}" for i in range(n))
    un = {
        p: frozenset(x for x in nodes if rng.random() < 0.5) for p in unary
    }
    bi = {
        r: frozenset(
            (a, b) for a in nodes for b in nodes if rng.random() < density
        )
        for r in binary
    }
    return Structure(domain=nodes, unary=un, binary=bi)


def random_pointed(
    rng: random.Random,
    max_nodes: int,
    unary: tuple[str, ...],
    binary: tuple[str, ...] = (ACCESS,),
    density: float = 0.35,
) -> PointedStructure:
    st = random_structure(rng, max_nodes, unary, binary, density)
    return PointedStructure(st, (rng.choice(st.domain),))


def random_k_pointed(
    rng: random.Random, max_nodes: int, unary: tuple[str, ...], density: float = 0.35
) -> PointedStructure:
    """Random legal two-relation structure: Rb inside R, Rb-targets reflexive."""
    st = random_structure(rng, max_nodes, unary, (ACCESS,), density)
    r = set(st.rel(ACCESS))
    rb = {e for e in r if rng.random() < 0.5}
    r |= {(b, b) for (_, b) in rb}
    binary = {ACCESS: frozenset(r), ACCESS_B: frozenset(rb)}
    out = Structure(domain=st.domain, unary=st.unary, binary=binary)
    return PointedStructure(out, (rng.choice(out.domain),))


def random_modal(
    rng: random.Random,
    depth: int,
    letters: tuple[str, ...],
    max_grade: int = 0,
    bullets: bool = False,
) -> ModalFormula:
    """Uniform-production sampler for the modal family.

    max_grade > 0 admits the counting modalities; bullets admits the bullet
    pair.  The depth budget shrinks on every production.
    """
    atoms: list = [lambda: Prop(rng.choice(letters)), Top, Bot]
    if depth <= 0:
        return rng.choice(atoms)()
    productions: list = atoms + [
        lambda: Not(random_modal(rng, depth - 1, letters, max_grade, bullets)),
        lambda: And(
            random_modal(rng, depth - 1, letters, max_grade, bullets),
            random_modal(rng, depth - 1, letters, max_grade, bullets),
        ),
        lambda: Or(
            random_modal(rng, depth - 1, letters, max_grade, bullets),
            random_modal(rng, depth - 1, letters, max_grade, bullets),
        ),
        lambda: Implies(
            random_modal(rng, depth - 1, letters, max_grade, bullets),
            random_modal(rng, depth - 1, letters, max_grade, bullets),
        ),
        lambda: Diamond(random_modal(rng, depth - 1, letters, max_grade, bullets)),
        lambda: Box(random_modal(rng, depth - 1, letters, max_grade, bullets)),
    ]
    if max_grade > 0:
        productions.append(
            lambda: DiamondGeq(
                rng.randint(0, max_grade),
                random_modal(rng, depth - 1, letters, max_grade, bullets),
            )
        )
        productions.append(
            lambda: BoxDualGeq(
                rng.randint(0, max_grade),
                random_modal(rng, depth - 1, letters, max_grade, bullets),
            )
        )
    if bullets:
        productions.append(
            lambda: Bullet(random_modal(rng, depth - 1, letters, max_grade, bullets))
        )
        productions.append(
            lambda: BulletDual(
                random_modal(rng, depth - 1, letters, max_grade, bullets)
            )
        )
    return rng.choice(productions)()


def random_ra(rng: random.Random, budget: int, names: tuple[str, ...]) -> RaTerm:
    leaves: list = [lambda: RaAtom(rng.choice(names)), RaId, RaTop]
    if budget <= 1:
        return rng.choice(leaves)()
    left = (budget - 1) // 2 + 1
    right = max((budget - 1) // 2, 1)
    productions: list = leaves + [
        lambda: RaConv(random_ra(rng, budget - 1, names)),
        lambda: RaMeet(random_ra(rng, left, names), random_ra(rng, right, names)),
        lambda: RaDiff(random_ra(rng, left, names), random_ra(rng, right, names)),
        lambda: RaComp(random_ra(rng, left, names), random_ra(rng, right, names)),
    ]
    return rng.choice(productions)()


def random_gf_bin(
    rng: random.Random,
    depth: int,
    unary: tuple[str, ...],
    binary: tuple[str, ...],
    live: tuple[str, ...] = ("x",),
) -> FoFormula:
    """Sampler for guarded formulas over binary guards.

    live holds the variables currently in scope (one or two); every quantifier
    introduces a fresh variable guarded together with one live variable, and
    its body sees exactly those two.
    """

    def atom() -> FoFormula:
        kinds = []
        if unary:
            kinds.append(lambda: UnAtom(rng.choice(unary), rng.choice(live)))
        kinds.append(
            lambda: BinAtom(rng.choice(binary), rng.choice(live), rng.choice(live))
        )
        kinds.append(lambda: Eq(rng.choice(live), rng.choice(live)))
        return rng.choice(kinds)()

    if depth <= 0:
        return atom()
    productions: list = [
        atom,
        lambda: FoNot(random_gf_bin(rng, depth - 1, unary, binary, live)),
        lambda: FoAnd(
            random_gf_bin(rng, depth - 1, unary, binary, live),
            random_gf_bin(rng, depth - 1, unary, binary, live),
        ),
        lambda: FoOr(
            random_gf_bin(rng, depth - 1, unary, binary, live),
            random_gf_bin(rng, depth - 1, unary, binary, live),
        ),
        lambda: FoImplies(
            random_gf_bin(rng, depth - 1, unary, binary, live),
            random_gf_bin(rng, depth - 1, unary, binary, live),
        ),
    ]

    def quantifier() -> FoFormula:
        pivot = rng.choice(live)
        fresh = rng.choice([v for v in VARIABLES if v not in (pivot,) and v not in live])
        guard = (
            BinAtom(rng.choice(binary), fresh, pivot)
            if rng.random() < 0.5
            else BinAtom(rng.choice(binary), pivot, fresh)
        )
        body = random_gf_bin(rng, depth - 1, unary, binary, (fresh, pivot))
        ctor = Exists if rng.random() < 0.5 else Forall
        return ctor(fresh, guard, body)

    productions.append(quantifier)
    productions.append(quantifier)
    return rng.choice(productions)()


def duplicate_node_pair(
    rng: random.Random, base: PointedStructure
) -> tuple[PointedStructure, PointedStructure]:
    """A bisimilar pair: the base and the base with one node duplicated.

    The copy keeps the original's letters and successor targets; each edge
    into the original is mirrored onto the copy with probability one half.
    """
    st = base.structure
    v = rng.choice(st.domain)
    copy = v + "'"
    while copy in st.node_set():
        copy += "'"
    unary = {
        p: ext | ({copy} if v in ext else set()) for p, ext in st.unary.items()
    }
    edges = set(st.rel(ACCESS))
    for a, b in list(edges):
        if a == v:
            edges.add((copy, b))
        if b == v and rng.random() < 0.5:
            edges.add((a, copy))
    binary = dict(st.binary)
    binary[ACCESS] = frozenset(edges)
    twin = Structure(
        domain=st.domain + (copy,),
        unary={p: frozenset(ext) for p, ext in unary.items()},
        binary=binary,
    )
    return base, PointedStructure(twin, base.points)


def _color_sets(letters: tuple[str, ...]) -> list[frozenset[str]]:
    out = [frozenset()]
    for p in letters:
        out = [c for c in out] + [c | {p} for c in out]
    return sorted(out, key=lambda c: tuple(sorted(c)))


# canonical encoding: (color index, tuple of child encodings, sorted)
_TreeCode = tuple


def _codes_of_size(n: int, colors: int, cache: dict) -> list[_TreeCode]:
    if n in cache:
        return cache[n]
    out = []
    if n == 1:
        out = [(c, ()) for c in range(colors)]
    else:
        smaller = []
        for k in range(1, n):
            smaller.extend((k, code) for code in _codes_of_size(k, colors, cache))

        def fills(remaining: int, start: int) -> list[tuple[_TreeCode, ...]]:
            if remaining == 0:
                return [()]
            result = []
            for i in range(start, len(smaller)):
                k, code = smaller[i]
                if k > remaining:
                    continue
                for rest in fills(remaining - k, i):
                    result.append((code,) + rest)
            return result

        for c in range(colors):
            for children in fills(n - 1, 0):
                out.append((c, tuple(sorted(children))))
        out = sorted(set(out))
    cache[n] = out
    return out


def enumerate_trees(
    max_nodes: int, letters: tuple[str, ...]
) -> list[PointedStructure]:
    """All rooted unordered trees with at most max_nodes nodes, each node
    colored by a subset of the letters, one representative per isomorphism
    class, in a deterministic order."""
    colors = _color_sets(letters)
    cache: dict = {}
    codes = []
    for n in range(1, max_nodes + 1):
        codes.extend(_codes_of_size(n, len(colors), cache))
    out = []
    for code in codes:
        names: list[str] = []
        unary: dict[str, set[str]] = {p: set() for p in letters}
        edges: set[tuple[str, str]] = set()

        def build(node: _TreeCode) -> str:
            name = f"v{len(names)}"
            names.append(name)
            for p in colors[node[0]]:
                unary[p].add(name)
            for child in node[1]:
                edges.add((name, build(child)))
            return name

        root = build(code)
        st = Structure(
            domain=tuple(names),
            unary={p: frozenset(ext) for p, ext in unary.items()},
            binary={ACCESS: frozenset(edges)},
        )
        out.append(PointedStructure(st, (root,)))
    return out


def enumerate_bimodal_frames(max_nodes: int):
    """Every frame with both relations over 1..max_nodes named nodes."""
    for n in range(1, max_nodes + 1):
        nodes = tuple(f"w{i}" for i in range(n))
        bits = n * n
        for r_mask in range(1 << bits):
            r = frozenset(
                (nodes[u], nodes[v])
                for u in range(n)
                for v in range(n)
                if r_mask >> (u * n + v) & 1
            )
            for rb_mask in range(1 << bits):
                rb = frozenset(
                    (nodes[u], nodes[v])
                    for u in range(n)
                    for v in range(n)
                    if rb_mask >> (u * n + v) & 1
                )
                yield Structure(
                    domain=nodes, unary={}, binary={ACCESS: r, ACCESS_B: rb}
                )


def linear_order(n: int, name: str = "lt") -> Structure:
    """Strict linear order on n nodes: transitive, irreflexive."""
    nodes = tuple(f"w{i}" for i in range(n))
    rel = frozenset(
        (nodes[i], nodes[j]) for i in range(n) for j in range(n) if i < j
    )
    return Structure(domain=nodes, unary={}, binary={name: rel})
