"""Model and formula constructions: unravelings, characteristic formulas,
subtree extraction, relativisation, the three-variable translation, and
guarded distance with its cut.

All constructions are deterministic: node names are derived from source ids
with percent-escaping of separator characters, and iteration follows domain
order, so repeated runs produce byte-identical structures.
"""

from __future__ import annotations

import math
from collections import deque

from logicwb.structures import (
    ACCESS,
    PointedStructure,
    PreconditionError,
    Structure,
    induced,
    is_tree,
    isomorphic,
    successors,
)
from logicwb.syntax import (
    And,
    BinAtom,
    Diamond,
    DiamondGeq,
    Eq,
    Exists,
    FoAnd,
    FoFormula,
    FoNot,
    ModalFormula,
    Not,
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
    VARIABLES,
    Vocabulary,
    print_modal,
    size,
)


def _esc(s: str) -> str:
    """Escape path-separator characters so joined names stay unambiguous."""
    return (
        s.replace("%", "%25").replace("/", "%2F").replace(":", "%3A").replace("+", "%2B")
    )


def _conj(parts: list[ModalFormula]) -> ModalFormula:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def unravel(m: PointedStructure, depth: int) -> PointedStructure:
    """Depth-truncated tree unraveling along the accessibility relation.

    Nodes are the accessibility paths from the point, of at most ``depth``
    steps, named by slash-joining the visited ids.  Unary facts come from the
    last element of each path; the only binary relation in the output is the
    accessibility relation itself.
    """
    if depth < 0:
        raise PreconditionError("depth must be non-negative")
    w = m.point
    st = m.structure
    succ = successors(st, ACCESS)
    root = (w,)
    order = [root]
    edges = []
    frontier = [root]
    for _ in range(depth):
        nxt = []
        for path in frontier:
            for v in succ[path[-1]]:
                child = path + (v,)
                order.append(child)
                edges.append((path, child))
                nxt.append(child)
        frontier = nxt
    name = {path: "/".join(_esc(x) for x in path) for path in order}
    unary = {
        p: frozenset(name[path] for path in order if path[-1] in ext)
        for p, ext in st.unary.items()
    }
    out = Structure(
        domain=tuple(name[path] for path in order),
        unary=unary,
        binary={ACCESS: frozenset((name[a], name[b]) for a, b in edges)},
    )
    return PointedStructure(out, (name[root],))


def _tree_root(st: Structure) -> str:
    targets = {b for (_, b) in st.rel(ACCESS)}
    roots = [x for x in st.domain if x not in targets]
    if len(roots) != 1:
        raise PreconditionError("the structure has no unique root")
    return roots[0]


def _descendant_subtree(st: Structure, node: str) -> Structure:
    succ = successors(st, ACCESS)
    seen = [node]
    queue = deque([node])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in seen:
                seen.append(v)
                queue.append(v)
    return induced(st, seen)


def gml_char_formula(t: PointedStructure, vocab: Vocabulary) -> ModalFormula:
    """Characteristic graded formula of a finite pointed tree.

    True at the root of a tree over the given vocabulary exactly when that
    tree is isomorphic to ``t``.  Leaves assert their full literal profile and
    the absence of successors; internal nodes pin, per isomorphism class of
    child subtrees, the exact number of children in the class, and bound the
    total child count.
    """
    st = t.structure
    if not is_tree(t):
        raise PreconditionError("characteristic formulas need a tree rooted at its point")
    if not set(st.unary) <= set(vocab.unary):
        raise PreconditionError("vocabulary must cover the tree's unary names")
    succ = successors(st, ACCESS)

    def formula_for(node: str) -> ModalFormula:
        literals: list[ModalFormula] = [
            Prop(p) if node in st.pred(p) else Not(Prop(p)) for p in vocab.unary
        ]
        children = succ[node]
        if not children:
            return _conj(literals + [Not(Diamond(Top()))])
        classes: list[tuple[Structure, str, int]] = []
        for c in children:
            sub = _descendant_subtree(st, c)
            for i, (rep, _, count) in enumerate(classes):
                if isomorphic(rep, sub):
                    classes[i] = (rep, classes[i][1], count + 1)
                    break
            else:
                classes.append((sub, c, 1))
        parts = list(literals)
        formulas = [(formula_for(rep_node), count) for (_, rep_node, count) in classes]
        for psi, count in sorted(formulas, key=lambda fc: (size(fc[0]), print_modal(fc[0]))):
            parts.append(DiamondGeq(count, psi))
            parts.append(Not(DiamondGeq(count + 1, psi)))
        parts.append(Not(DiamondGeq(len(children) + 1, Top())))
        return _conj(parts)

    return formula_for(t.point)


def add_copies(
    m: PointedStructure, v: str, t: PointedStructure, count: int
) -> PointedStructure:
    """Attach fresh disjoint copies of a tree below an existing tree node."""
    if not is_tree(m) or not is_tree(t):
        raise PreconditionError("both structures must be trees rooted at their points")
    if v not in m.structure.node_set():
        raise PreconditionError(f"{v!r} is not a node of the host tree")
    if count == 0:
        return m
    base = "copy"
    while any(x.startswith(base) for x in m.structure.domain):
        base += "_"
    troot = _tree_root(t.structure)
    domain = list(m.structure.domain)
    unary = {p: set(ext) for p, ext in m.structure.unary.items()}
    binary = {r: set(ext) for r, ext in m.structure.binary.items()}
    binary.setdefault(ACCESS, set())
    for i in range(count):
        fresh = {u: f"{base}{i}:{u}" for u in t.structure.domain}
        domain.extend(fresh[u] for u in t.structure.domain)
        for p, ext in t.structure.unary.items():
            unary.setdefault(p, set()).update(fresh[u] for u in ext)
        for r, ext in t.structure.binary.items():
            binary.setdefault(r, set()).update((fresh[a], fresh[b]) for a, b in ext)
        binary[ACCESS].add((v, fresh[troot]))
    out = Structure(
        domain=tuple(domain),
        unary={p: frozenset(ext) for p, ext in unary.items()},
        binary={r: frozenset(ext) for r, ext in binary.items()},
    )
    return PointedStructure(out, m.points)


def subtree(t: PointedStructure, p: str) -> PointedStructure:
    """Largest all-p subtree around the point.

    Walks upward from the point while parents satisfy p to find the subtree's
    root, then takes every descendant reachable through p-nodes.  The point is
    preserved and need not be the resulting root.
    """
    st = t.structure
    # the point marks a node anywhere in the tree, so root the check separately
    if not is_tree(PointedStructure(st, (_tree_root(st),))):
        raise PreconditionError("subtree extraction is defined for trees only")
    n = t.point
    sat = st.pred(p)
    if n not in sat:
        raise PreconditionError("the point must satisfy the predicate")
    parent = {b: a for (a, b) in st.rel(ACCESS)}
    top = n
    while top in parent and parent[top] in sat:
        top = parent[top]
    succ = successors(st, ACCESS)
    keep = [top]
    queue = deque([top])
    while queue:
        u = queue.popleft()
        for child in succ[u]:
            if child in sat and child not in keep:
                keep.append(child)
                queue.append(child)
    return PointedStructure(induced(st, keep), t.points)


def ra_relativize(t: RaTerm, r: str) -> RaTerm:
    """Relativise a term to the domain of a named relation.

    Every atomic subterm (atoms, identity, top) is intersected with the
    square over that domain, computed inside the algebra itself as
    R;top;R~ (pairs of elements with outgoing R-edges).
    """
    square = RaComp(RaAtom(r), RaComp(RaTop(), RaConv(RaAtom(r))))

    def walk(term: RaTerm) -> RaTerm:
        if isinstance(term, (RaAtom, RaId, RaTop)):
            return RaMeet(term, square)
        if isinstance(term, RaMeet):
            return RaMeet(walk(term.left), walk(term.right))
        if isinstance(term, RaDiff):
            return RaDiff(walk(term.left), walk(term.right))
        if isinstance(term, RaComp):
            return RaComp(walk(term.left), walk(term.right))
        if isinstance(term, RaConv):
            return RaConv(walk(term.sub))
        raise PreconditionError(f"not a relation-algebra term: {type(term).__name__}")

    return walk(t)


def ra_to_fo3(t: RaTerm) -> FoFormula:
    """Translate a term to a first-order formula over the variables x, y, z.

    The result has free variables x and y and holds of a pair exactly when
    the pair is in the term's relation.  Composition quantifies the one
    variable not currently in use, so three variables always suffice.
    """

    def tr(term: RaTerm, u: str, v: str) -> FoFormula:
        if isinstance(term, RaAtom):
            return BinAtom(term.name, u, v)
        if isinstance(term, RaId):
            return Eq(u, v)
        if isinstance(term, RaTop):
            return Eq(u, u)
        if isinstance(term, RaMeet):
            return FoAnd(tr(term.left, u, v), tr(term.right, u, v))
        if isinstance(term, RaDiff):
            return FoAnd(tr(term.left, u, v), FoNot(tr(term.right, u, v)))
        if isinstance(term, RaConv):
            return tr(term.sub, v, u)
        if isinstance(term, RaComp):
            w = next(x for x in VARIABLES if x not in (u, v))
            return Exists(w, None, FoAnd(tr(term.left, u, w), tr(term.right, w, v)))
        raise PreconditionError(f"not a relation-algebra term: {type(term).__name__}")

    return tr(t, VARIABLES[0], VARIABLES[1])


def _guarded_adjacent(m: Structure) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {x: set() for x in m.domain}
    for rel in m.binary.values():
        for a, b in rel:
            if a != b:
                adj[a].add(b)
                adj[b].add(a)
    return adj


def guarded_dist(m: Structure, svec: tuple[str, ...], t: str) -> int | float:
    """Least number of guarded-pair steps from the tuple to a node, or infinity."""
    if not svec:
        raise PreconditionError("the source tuple must be non-empty")
    nodes = m.node_set()
    for s in svec:
        if s not in nodes:
            raise PreconditionError(f"{s!r} is not a node")
    if t not in nodes:
        raise PreconditionError(f"{t!r} is not a node")
    adj = _guarded_adjacent(m)
    dist = {s: 0 for s in svec}
    queue = deque(svec)
    while queue:
        u = queue.popleft()
        if u == t:
            return dist[u]
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist.get(t, math.inf)


def cut_guarded(m: PointedStructure, n: int) -> PointedStructure:
    """Induced substructure on the nodes within guarded distance n of the points."""
    if n < 0:
        raise PreconditionError("distance bound must be non-negative")
    keep = [
        x
        for x in m.structure.domain
        if guarded_dist(m.structure, m.points, x) <= n
    ]
    return PointedStructure(induced(m.structure, keep), m.points)


def _guarded_pair_set(m: Structure) -> set[frozenset[str]]:
    out = set()
    for rel in m.binary.values():
        for a, b in rel:
            if a != b:
                out.add(frozenset((a, b)))
    return out


def gf_unravel_bin(m: PointedStructure, depth: int) -> PointedStructure:
    """Depth-truncated guarded unraveling for binary vocabularies.

    Each unraveling step extends a guarded path by a two-element guarded set
    that carries over exactly one element of the previous set and introduces
    one object from outside it.  A path's node stands for the object it
    introduced; an object carried along is identified with the node that
    introduced its current streak, so binary facts land only between a new
    node and the node owning the carried element (plus the facts inside the
    initial set, and loops, which every copy of a looped object keeps).
    """
    if depth < 0:
        raise PreconditionError("depth must be non-negative")
    st = m.structure
    pairs = _guarded_pair_set(st)
    initial = tuple(dict.fromkeys(m.points))

    domain: list[str] = []
    unary: dict[str, set[str]] = {p: set() for p in st.unary}
    binary: dict[str, set[tuple[str, str]]] = {r: set() for r in st.binary}

    def add_node(name: str, element: str) -> None:
        domain.append(name)
        for p, ext in st.unary.items():
            if element in ext:
                unary[p].add(name)
        for r, ext in st.binary.items():
            if (element, element) in ext:
                binary[r].add((name, name))

    init_name = {d: _esc(d) for d in initial}
    for d in initial:
        add_node(init_name[d], d)
    if len(initial) == 2:
        a, b = initial
        for r, ext in st.binary.items():
            if (a, b) in ext:
                binary[r].add((init_name[a], init_name[b]))
            if (b, a) in ext:
                binary[r].add((init_name[b], init_name[a]))

    path_label = "+".join(sorted(_esc(d) for d in initial))
    # frontier entries: (path name, current set, eligible carries).  Only the
    # element a step introduced may be carried into the next set; every
    # initial element counts as introduced by the first set.
    frontier = [(path_label, frozenset(initial), {d: init_name[d] for d in initial})]
    for _ in range(depth):
        nxt = []
        for pname, current, carriers in frontier:
            steps = []
            for carry in sorted(carriers):
                for other in sorted(st.domain):
                    if other not in current and frozenset((carry, other)) in pairs:
                        steps.append((carry, other))
            for carry, new in steps:
                child_pname = f"{pname}/{_esc(carry)}:{_esc(new)}"
                add_node(child_pname, new)
                u = carriers[carry]
                for r, ext in st.binary.items():
                    if (carry, new) in ext:
                        binary[r].add((u, child_pname))
                    if (new, carry) in ext:
                        binary[r].add((child_pname, u))
                nxt.append(
                    (child_pname, frozenset((carry, new)), {new: child_pname})
                )
        frontier = nxt

    out = Structure(
        domain=tuple(domain),
        unary={p: frozenset(ext) for p, ext in unary.items()},
        binary={r: frozenset(ext) for r, ext in binary.items()},
    )
    return PointedStructure(out, tuple(init_name[d] for d in m.points))
