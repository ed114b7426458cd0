"""Satisfiability procedures and frame validity checks.

sat_basic_modal is a depth-first tableau for basic modal logic.  sat_bullet
reduces the bullet language to basic modal logic by the star translation with
depth-indexed guard conjuncts, then rebuilds and verifies a two-relation
witness.  bounded_model_search is the independent brute-force oracle: it
enumerates small structures outright (no tableau, no reduction) with a
numpy-vectorized sweep over valuations and second-relation choices.  Every
satisfiable answer carries a witness that has been model-checked inside the
operation before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from logicwb.structures import (
    ACCESS,
    ACCESS_B,
    LogicError,
    PointedStructure,
    PreconditionError,
    Structure,
    is_frame_K,
)
from logicwb.semantics import SemanticsMode, eval_modal
from logicwb.syntax import (
    And,
    Bot,
    Box,
    BoxB,
    BoxDualGeq,
    Bullet,
    BulletDual,
    Diamond,
    DiamondB,
    DiamondGeq,
    Implies,
    ModalFormula,
    Not,
    Or,
    Prop,
    Top,
    depth_modal,
    print_modal,
    size,
    subformulas,
    vocabulary_of,
)


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: PointedStructure | None = None


_ML_ONLY = (Prop, Top, Bot, Not, And, Or, Implies, Diamond, Box)
_ML_BULLET = _ML_ONLY + (Bullet, BulletDual)


def _require_fragment(f: ModalFormula, allowed: tuple, label: str) -> None:
    for g in subformulas(f):
        if not isinstance(g, allowed):
            raise PreconditionError(f"{type(g).__name__} is outside {label}")


def _key(f: ModalFormula) -> tuple[int, str]:
    return (size(f), print_modal(f))


def _nnf(f: ModalFormula, positive: bool = True) -> ModalFormula:
    if isinstance(f, Prop):
        return f if positive else Not(f)
    if isinstance(f, Top):
        return Top() if positive else Bot()
    if isinstance(f, Bot):
        return Bot() if positive else Top()
    if isinstance(f, Not):
        return _nnf(f.sub, not positive)
    if isinstance(f, And):
        ctor = And if positive else Or
        return ctor(_nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Or):
        ctor = Or if positive else And
        return ctor(_nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Implies):
        if positive:
            return Or(_nnf(f.left, False), _nnf(f.right, True))
        return And(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Diamond):
        ctor = Diamond if positive else Box
        return ctor(_nnf(f.sub, positive))
    if isinstance(f, Box):
        ctor = Box if positive else Diamond
        return ctor(_nnf(f.sub, positive))
    raise PreconditionError(f"{type(f).__name__} has no negation normal form here")


# tableau models: (true letters, child models)
_Model = tuple[frozenset[str], tuple]


def _tableau(fs: frozenset, memo: dict) -> _Model | None:
    if fs in memo:
        return memo[fs]
    result = _expand(fs, memo)
    memo[fs] = result
    return result


def _expand(fs: frozenset, memo: dict) -> _Model | None:
    work = set(fs)
    while True:
        if any(isinstance(g, Bot) for g in work):
            return None
        tops = [g for g in work if isinstance(g, Top)]
        ands = [g for g in work if isinstance(g, And)]
        if not tops and not ands:
            break
        for g in tops:
            work.discard(g)
        for g in ands:
            work.discard(g)
            work.add(g.left)
            work.add(g.right)
    fs = frozenset(work)
    ors = sorted((g for g in fs if isinstance(g, Or)), key=_key)
    if ors:
        g = ors[0]
        left = _tableau((fs - {g}) | {g.left}, memo)
        if left is not None:
            return left
        return _tableau((fs - {g}) | {g.right}, memo)
    positives = {g.name for g in fs if isinstance(g, Prop)}
    negatives = {g.sub.name for g in fs if isinstance(g, Not)}
    if positives & negatives:
        return None
    boxes = {g.sub for g in fs if isinstance(g, Box)}
    children = []
    for g in sorted((g for g in fs if isinstance(g, Diamond)), key=_key):
        child = _tableau(frozenset({g.sub} | boxes), memo)
        if child is None:
            return None
        children.append(child)
    return (frozenset(positives), tuple(children))


def _model_to_structure(model: _Model) -> PointedStructure:
    names: list[str] = []
    letters: dict[str, set[str]] = {}
    edges: set[tuple[str, str]] = set()

    def build(node: _Model) -> str:
        name = f"n{len(names)}"
        names.append(name)
        for p in node[0]:
            letters.setdefault(p, set()).add(name)
        for child in node[1]:
            edges.add((name, build(child)))
        return name

    root = build(model)
    st = Structure(
        domain=tuple(names),
        unary={p: frozenset(ext) for p, ext in sorted(letters.items())},
        binary={ACCESS: frozenset(edges)},
    )
    return PointedStructure(st, (root,))


def sat_basic_modal(f: ModalFormula) -> SatResult:
    """Tableau satisfiability for basic modal logic, with a verified witness."""
    _require_fragment(f, _ML_ONLY, "basic modal logic")
    model = _tableau(frozenset({_nnf(f)}), {})
    if model is None:
        return SatResult(False, None)
    witness = _model_to_structure(model)
    if not eval_modal(witness, f, SemanticsMode.INTENDED):
        raise LogicError("tableau produced a witness that fails model checking")
    return SatResult(True, witness)


def _fresh_letter(f: ModalFormula) -> str:
    used = set(vocabulary_of(f).unary)
    candidates = ["_r"] + [f"_r{i}" for i in range(len(used) + 1)]
    for name in candidates:
        if name not in used:
            return name
    raise LogicError("unreachable: fresh letter exhausted")


def _star(f: ModalFormula, r: str) -> ModalFormula:
    if isinstance(f, (Prop, Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(_star(f.sub, r))
    if isinstance(f, And):
        return And(_star(f.left, r), _star(f.right, r))
    if isinstance(f, Or):
        return Or(_star(f.left, r), _star(f.right, r))
    if isinstance(f, Implies):
        return Implies(_star(f.left, r), _star(f.right, r))
    if isinstance(f, Diamond):
        return Diamond(_star(f.sub, r))
    if isinstance(f, Box):
        return Box(_star(f.sub, r))
    if isinstance(f, Bullet):
        return Diamond(And(Prop(r), _star(f.sub, r)))
    if isinstance(f, BulletDual):
        return Not(Diamond(And(Prop(r), Not(_star(f.sub, r)))))
    raise PreconditionError(f"{type(f).__name__} is outside the bullet language")


def _boxes(f: ModalFormula, k: int) -> ModalFormula:
    for _ in range(k):
        f = Box(f)
    return f


def reduce_bullet(f: ModalFormula) -> ModalFormula:
    """Star translation of a bullet formula into basic modal logic.

    Bullets become diamonds onto a fresh marker letter; depth-indexed guard
    conjuncts assert that, within the formula's modal depth, any marked node
    satisfying a translated subformula also has a successor satisfying it.
    """
    _require_fragment(f, _ML_BULLET, "the bullet language")
    r = _fresh_letter(f)
    parts = [_star(f, r)]
    depth = depth_modal(f)
    subs = sorted(subformulas(f), key=_key)
    for k in range(depth + 1):
        for psi in subs:
            body = Implies(And(Prop(r), _star(psi, r)), Diamond(_star(psi, r)))
            parts.append(_boxes(body, k))
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def _reflexive_harmony(f: ModalFormula, r: str) -> list[ModalFormula]:
    """Extra conjuncts forcing marked nodes to absorb their box obligations.

    A marked node that satisfies a translated box must satisfy the box's body
    as well; this is exactly what a genuine second-relation model guarantees
    (marked nodes are reflexive there), and it makes the loop-adding witness
    reconstruction below sound for box subformulas.
    """
    out = []
    for psi in sorted(subformulas(f), key=_key):
        if isinstance(psi, Box):
            out.append(
                Implies(Prop(r), Implies(_star(psi, r), _star(psi.sub, r)))
            )
    return out


def sat_bullet(f: ModalFormula) -> SatResult:
    """Satisfiability for the bullet language over two-relation frames.

    The verdict comes from the tableau on the star reduction.  The witness is
    rebuilt from a tableau model: every marked successor gets a second-relation
    edge and a reflexive loop, after which the original formula is re-checked
    in quasi mode.
    """
    _require_fragment(f, _ML_BULLET, "the bullet language")
    reduced = reduce_bullet(f)
    if not sat_basic_modal(reduced).satisfiable:
        return SatResult(False, None)
    r = _fresh_letter(f)
    harmony = _reflexive_harmony(f, r)
    goal = reduced
    if harmony:
        body = harmony[-1]
        for h in reversed(harmony[:-1]):
            body = And(h, body)
        goal = reduced
        for k in range(depth_modal(f) + 1):
            goal = And(goal, _boxes(body, k))
    base = sat_basic_modal(goal)
    if not base.satisfiable:
        raise LogicError("reduction satisfiable but harmonized reduction is not")
    tree = base.witness
    marked = tree.structure.pred(r)
    r_edges = tree.structure.rel(ACCESS)
    rb = frozenset((u, v) for (u, v) in r_edges if v in marked)
    new_r = r_edges | frozenset((v, v) for (_, v) in rb)
    unary = {p: ext for p, ext in tree.structure.unary.items() if p != r}
    witness = PointedStructure(
        Structure(
            domain=tree.structure.domain,
            unary=unary,
            binary={ACCESS: new_r, ACCESS_B: rb},
        ),
        tree.points,
    )
    if not is_frame_K(witness.structure):
        raise LogicError("reconstructed witness is not a legal two-relation frame")
    if not eval_modal(witness, f, SemanticsMode.QUASI):
        raise LogicError("reconstructed witness fails quasi-mode model checking")
    return SatResult(True, witness)


def _fold_constants(f: ModalFormula) -> ModalFormula:
    if isinstance(f, Not):
        sub = _fold_constants(f.sub)
        if isinstance(sub, Top):
            return Bot()
        if isinstance(sub, Bot):
            return Top()
        return Not(sub)
    if isinstance(f, (And, Or, Implies)):
        left = _fold_constants(f.left)
        right = _fold_constants(f.right)
        if isinstance(f, And):
            if isinstance(left, Bot) or isinstance(right, Bot):
                return Bot()
            if isinstance(left, Top):
                return right
            if isinstance(right, Top):
                return left
            return And(left, right)
        if isinstance(f, Or):
            if isinstance(left, Top) or isinstance(right, Top):
                return Top()
            if isinstance(left, Bot):
                return right
            if isinstance(right, Bot):
                return left
            return Or(left, right)
        if isinstance(left, Bot) or isinstance(right, Top):
            return Top()
        if isinstance(left, Top):
            return right
        if isinstance(right, Bot):
            return Not(left)
        return Implies(left, right)
    if isinstance(f, (Diamond, DiamondB)):
        sub = _fold_constants(f.sub)
        if isinstance(sub, Bot):
            return Bot()
        return type(f)(sub)
    if isinstance(f, (Box, BoxB)):
        sub = _fold_constants(f.sub)
        if isinstance(sub, Top):
            return Top()
        return type(f)(sub)
    if isinstance(f, DiamondGeq):
        sub = _fold_constants(f.sub)
        if f.grade == 0:
            return Top()
        if isinstance(sub, Bot):
            return Bot()
        return DiamondGeq(f.grade, sub)
    if isinstance(f, BoxDualGeq):
        sub = _fold_constants(f.sub)
        if f.grade == 0:
            return Bot()
        if isinstance(sub, Top):
            return Top()
        return BoxDualGeq(f.grade, sub)
    if isinstance(f, Bullet):
        sub = _fold_constants(f.sub)
        if isinstance(sub, Bot):
            return Bot()
        return Bullet(sub)
    if isinstance(f, BulletDual):
        sub = _fold_constants(f.sub)
        if isinstance(sub, Top):
            return Top()
        return BulletDual(sub)
    return f


def _drop_bullets(f: ModalFormula) -> ModalFormula:
    """Intended-mode elimination: bullets are false on every finite structure."""
    if isinstance(f, Bullet):
        return Bot()
    if isinstance(f, BulletDual):
        return Top()
    if isinstance(f, Not):
        return Not(_drop_bullets(f.sub))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_drop_bullets(f.left), _drop_bullets(f.right))
    if isinstance(f, (Diamond, Box)):
        return type(f)(_drop_bullets(f.sub))
    if isinstance(f, (DiamondGeq, BoxDualGeq)):
        return type(f)(f.grade, _drop_bullets(f.sub))
    return f


_RB_KINDS = (Bullet, BulletDual, DiamondB, BoxB)


def _perm_min_mask(mask: int, n: int) -> int:
    best = mask
    for perm in permutations(range(1, n)):
        table = (0,) + perm
        out = 0
        for u in range(n):
            for v in range(n):
                if mask >> (u * n + v) & 1:
                    out |= 1 << (table[u] * n + table[v])
        best = min(best, out)
    return best


def _reachable_mask(mask: int, n: int) -> bool:
    seen = {0}
    frontier = [0]
    while frontier:
        u = frontier.pop()
        for v in range(n):
            if mask >> (u * n + v) & 1 and v not in seen:
                seen.add(v)
                frontier.append(v)
    return len(seen) == n


_REP_CACHE: dict[int, "list[int] | np.ndarray"] = {}


def _relation_reps(n: int) -> "list[int] | np.ndarray":
    """Point-reachable digraphs on n nodes, canonical up to renaming non-points.

    Canonicalization is skipped at n=5, where it costs more than it saves;
    the sweep there is exhaustive over all reachable relations.
    """
    if n in _REP_CACHE:
        return _REP_CACHE[n]
    reps = []
    if n <= 4:
        for mask in range(1 << (n * n)):
            if _reachable_mask(mask, n) and _perm_min_mask(mask, n) == mask:
                reps.append(mask)
    else:
        bits = n * n
        pieces = []
        step = 1 << 22
        for lo in range(0, 1 << bits, step):
            masks = np.arange(lo, min(lo + step, 1 << bits), dtype=np.int32)
            reach = np.ones_like(masks, dtype=np.uint8)
            for _ in range(n):
                new = reach.copy()
                for u in range(n):
                    for v in range(n):
                        edge = ((masks >> (u * n + v)) & 1).astype(np.uint8)
                        new |= (((reach >> u) & 1) & edge) << v
                reach = new
            pieces.append(masks[reach == (1 << n) - 1])
        reps = np.concatenate(pieces)
    _REP_CACHE[n] = reps
    return reps


def _sweep_relation(
    f: ModalFormula,
    n: int,
    mask: int,
    letters: tuple[str, ...],
    quasi: bool,
) -> tuple[int, int, list[tuple[int, int]]] | None:
    """Search one accessibility relation for a satisfying valuation and
    second-relation choice; returns (valuation index, rb index, rb edges)."""
    succ = [[v for v in range(n) if mask >> (u * n + v) & 1] for u in range(n)]
    has_rb = quasi and any(isinstance(g, _RB_KINDS) for g in subformulas(f))
    rb_edges: list[tuple[int, int]] = []
    if has_rb:
        rb_edges = [
            (u, v) for u in range(n) for v in succ[u] if mask >> (v * n + v) & 1
        ]
    num_v = 1 << (len(letters) * n)
    num_b = 1 << len(rb_edges)
    chunk = max(1, min(num_b, max(1, (1 << 18) // max(num_v, 1))))
    a_idx = np.arange(num_v, dtype=np.int64)

    prop_arrays = {}
    for i, p in enumerate(letters):
        cols = [((a_idx >> (i * n + u)) & 1).astype(bool) for u in range(n)]
        prop_arrays[p] = np.stack(cols, axis=-1)[None, :, :]

    for start in range(0, num_b, chunk):
        b_idx = np.arange(start, min(start + chunk, num_b), dtype=np.int64)
        chosen = [
            ((b_idx >> e) & 1).astype(bool)[:, None] for e in range(len(rb_edges))
        ]
        memo: dict[ModalFormula, np.ndarray] = {}

        def ev(g: ModalFormula) -> np.ndarray:
            hit = memo.get(g)
            if hit is not None:
                return hit
            if isinstance(g, Prop):
                out = prop_arrays[g.name]
            elif isinstance(g, Top):
                out = np.ones((1, 1, n), dtype=bool)
            elif isinstance(g, Bot):
                out = np.zeros((1, 1, n), dtype=bool)
            elif isinstance(g, Not):
                out = ~ev(g.sub)
            elif isinstance(g, And):
                out = ev(g.left) & ev(g.right)
            elif isinstance(g, Or):
                out = ev(g.left) | ev(g.right)
            elif isinstance(g, Implies):
                out = ~ev(g.left) | ev(g.right)
            elif isinstance(g, (Diamond, Box, DiamondGeq, BoxDualGeq)):
                sub = ev(g.sub)
                sub = np.broadcast_to(sub, (sub.shape[0], max(sub.shape[1], 1), n))
                cols = []
                for u in range(n):
                    block = sub[:, :, succ[u]]
                    if isinstance(g, Diamond):
                        cols.append(block.any(axis=-1))
                    elif isinstance(g, Box):
                        cols.append(block.all(axis=-1))
                    elif isinstance(g, DiamondGeq):
                        cols.append(block.sum(axis=-1) >= g.grade)
                    else:
                        cols.append((~block).sum(axis=-1) < g.grade)
                out = np.stack(cols, axis=-1)
            elif isinstance(g, (Bullet, DiamondB)):
                sub = ev(g.sub)
                out = np.zeros((len(b_idx), sub.shape[1], n), dtype=bool)
                for e, (u, v) in enumerate(rb_edges):
                    out[:, :, u] |= chosen[e] & sub[:, :, v]
            elif isinstance(g, (BulletDual, BoxB)):
                sub = ev(g.sub)
                out = np.ones((len(b_idx), sub.shape[1], n), dtype=bool)
                for e, (u, v) in enumerate(rb_edges):
                    out[:, :, u] &= ~chosen[e] | sub[:, :, v]
            else:
                raise PreconditionError(f"not a modal formula: {type(g).__name__}")
            if out.shape[1] == 1 and len(letters) > 0:
                out = np.broadcast_to(out, (out.shape[0], num_v, n))
            memo[g] = out
            return out

        root = np.broadcast_to(
            ev(f), (len(b_idx), num_v, n)
        )[:, :, 0]
        hits = np.argwhere(root)
        if hits.size:
            b_off, a = int(hits[0][0]), int(hits[0][1])
            b = start + b_off
            return a, b, rb_edges
    return None


def bounded_model_search(
    f: ModalFormula, mode: SemanticsMode, max_size: int
) -> SatResult:
    """Brute-force satisfiability within a node budget.

    Enumerates point-generated structures of up to max_size nodes over the
    formula's letters (legal two-relation frames in quasi mode) and returns
    the first verified witness.  The budget is capped at 5 nodes; size-5
    sweeps are exhaustive and can take very long on unsatisfiable input.
    """
    if max_size < 1 or max_size > 5:
        raise PreconditionError("node budget must be between 1 and 5")
    if mode is SemanticsMode.INTENDED:
        for g in subformulas(f):
            if isinstance(g, (DiamondB, BoxB)):
                raise PreconditionError(
                    "the plain second-relation modalities have no intended-mode reading"
                )
        target = _fold_constants(_drop_bullets(f))
    else:
        target = _fold_constants(f)
    quasi = mode is SemanticsMode.QUASI
    if isinstance(target, Bot):
        return SatResult(False, None)
    letters = vocabulary_of(target).unary
    for n in range(1, max_size + 1):
        for mask in _relation_reps(n):
            mask = int(mask)
            found = _sweep_relation(target, n, mask, letters, quasi)
            if found is None:
                continue
            a, b, rb_edges = found
            names = tuple(f"w{i}" for i in range(n))
            unary = {
                p: frozenset(
                    names[u] for u in range(n) if a >> (i * n + u) & 1
                )
                for i, p in enumerate(letters)
            }
            r_rel = frozenset(
                (names[u], names[v])
                for u in range(n)
                for v in range(n)
                if mask >> (u * n + v) & 1
            )
            rb_rel = frozenset(
                (names[u], names[v])
                for e, (u, v) in enumerate(rb_edges)
                if b >> e & 1
            )
            binary = {ACCESS: r_rel}
            if quasi:
                binary[ACCESS_B] = rb_rel
            witness = PointedStructure(
                Structure(domain=names, unary=unary, binary=binary), (names[0],)
            )
            if not eval_modal(witness, f, mode):
                raise LogicError("search produced a witness that fails model checking")
            return SatResult(True, witness)
    return SatResult(False, None)


def frame_axioms_valid_on_K(frame: Structure, max_nodes: int) -> bool:
    """Exhaustive single-letter validity of the two bullet axioms on a frame.

    Checks, over every valuation of one letter, that a bullet successor forces
    a diamond successor and that all second-relation successors pass their own
    such test.  Accepts arbitrary two-relation frames so the correspondence
    with the frame class itself is observable in both directions.
    """
    n = len(frame.domain)
    if n > max_nodes:
        raise PreconditionError("frame exceeds the node budget")
    index = {x: i for i, x in enumerate(frame.domain)}
    r_rows = [0] * n
    rb_rows = [0] * n
    for a, b in frame.rel(ACCESS):
        r_rows[index[a]] |= 1 << index[b]
    for a, b in frame.rel(ACCESS_B):
        rb_rows[index[a]] |= 1 << index[b]
    for val in range(1 << n):
        no_diam = 0
        for v in range(n):
            if r_rows[v] & val == 0:
                no_diam |= 1 << v
        for w in range(n):
            if rb_rows[w] & val and not r_rows[w] & val:
                return False
            if rb_rows[w] & val & no_diam:
                return False
    return True
