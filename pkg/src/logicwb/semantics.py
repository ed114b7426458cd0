"""Evaluation of modal formulas, relation-algebra terms, and first-order formulas.

All evaluators are pure functions over immutable inputs; memoization caches
live per call.  Modal evaluation has two modes for the bullet operators:

* Intended: a bullet asks for infinitely many reflexive successors, which no
  finite structure can provide, so every Bullet is false (and every BulletDual
  true).  Results that shortcut this way are flagged as vacuous.  The plain
  second-relation modalities are not part of this reading and are rejected.
* Quasi: bullets and the second-relation modalities read Rb, the second
  accessibility relation, which must form a legal frame (Rb inside R with
  R-reflexive targets).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from logicwb.structures import (
    ACCESS,
    ACCESS_B,
    PointedStructure,
    PreconditionError,
    Structure,
    is_frame_K,
    successors,
)
from logicwb.syntax import (
    And,
    BinAtom,
    Bot,
    Box,
    BoxB,
    BoxDualGeq,
    Bullet,
    BulletDual,
    Diamond,
    DiamondB,
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
    free_vars,
    subformulas,
)


class SemanticsMode(enum.Enum):
    INTENDED = "intended"
    QUASI = "quasi"


def _has_bullet(f: ModalFormula) -> bool:
    return any(isinstance(g, (Bullet, BulletDual)) for g in subformulas(f))


def _has_rb_modality(f: ModalFormula) -> bool:
    return any(isinstance(g, (DiamondB, BoxB)) for g in subformulas(f))


@dataclass(frozen=True)
class ModalEvalResult:
    """Truth value plus evaluation metadata.

    ``bullet_vacuous`` marks intended-mode results that rested on the
    finite-structure shortcut for bullets.  ``trace`` maps each subformula to
    its truth at the evaluation point.
    """

    value: bool
    bullet_vacuous: bool
    trace: dict[ModalFormula, bool] | None = None


def _check_modal_pre(m: PointedStructure, f: ModalFormula, mode: SemanticsMode) -> None:
    if mode is SemanticsMode.QUASI:
        if not is_frame_K(m.structure):
            raise PreconditionError("quasi mode needs Rb inside R with reflexive targets")
    else:
        if _has_rb_modality(f):
            raise PreconditionError(
                "the plain second-relation modalities have no intended-mode reading"
            )


def _eval_modal_at(
    structure: Structure,
    f: ModalFormula,
    node: str,
    mode: SemanticsMode,
    succ_r: dict[str, tuple[str, ...]],
    succ_rb: dict[str, tuple[str, ...]],
    memo: dict,
) -> bool:
    key = (f, node)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Prop):
        value = node in structure.pred(f.name)
    elif isinstance(f, Top):
        value = True
    elif isinstance(f, Bot):
        value = False
    elif isinstance(f, Not):
        value = not _eval_modal_at(structure, f.sub, node, mode, succ_r, succ_rb, memo)
    elif isinstance(f, And):
        value = _eval_modal_at(structure, f.left, node, mode, succ_r, succ_rb, memo) and \
            _eval_modal_at(structure, f.right, node, mode, succ_r, succ_rb, memo)
    elif isinstance(f, Or):
        value = _eval_modal_at(structure, f.left, node, mode, succ_r, succ_rb, memo) or \
            _eval_modal_at(structure, f.right, node, mode, succ_r, succ_rb, memo)
    elif isinstance(f, Implies):
        value = (not _eval_modal_at(structure, f.left, node, mode, succ_r, succ_rb, memo)) or \
            _eval_modal_at(structure, f.right, node, mode, succ_r, succ_rb, memo)
    elif isinstance(f, Diamond):
        value = any(
            _eval_modal_at(structure, f.sub, v, mode, succ_r, succ_rb, memo)
            for v in succ_r[node]
        )
    elif isinstance(f, Box):
        value = all(
            _eval_modal_at(structure, f.sub, v, mode, succ_r, succ_rb, memo)
            for v in succ_r[node]
        )
    elif isinstance(f, DiamondGeq):
        count = 0
        for v in succ_r[node]:
            if _eval_modal_at(structure, f.sub, v, mode, succ_r, succ_rb, memo):
                count += 1
                if count >= f.grade:
                    break
        value = count >= f.grade
    elif isinstance(f, BoxDualGeq):
        # fewer than ``grade`` successors falsify the operand
        count = 0
        for v in succ_r[node]:
            if not _eval_modal_at(structure, f.sub, v, mode, succ_r, succ_rb, memo):
                count += 1
                if count >= f.grade:
                    break
        value = count < f.grade
    elif isinstance(f, Bullet):
        if mode is SemanticsMode.INTENDED:
            value = False  # no finite structure holds infinitely many witnesses
        else:
            value = any(
                _eval_modal_at(structure, f.sub, v, mode, succ_r, succ_rb, memo)
                for v in succ_rb[node]
            )
    elif isinstance(f, BulletDual):
        if mode is SemanticsMode.INTENDED:
            value = True
        else:
            value = all(
                _eval_modal_at(structure, f.sub, v, mode, succ_r, succ_rb, memo)
                for v in succ_rb[node]
            )
    elif isinstance(f, DiamondB):
        value = any(
            _eval_modal_at(structure, f.sub, v, mode, succ_r, succ_rb, memo)
            for v in succ_rb[node]
        )
    elif isinstance(f, BoxB):
        value = all(
            _eval_modal_at(structure, f.sub, v, mode, succ_r, succ_rb, memo)
            for v in succ_rb[node]
        )
    else:
        raise PreconditionError(f"not a modal formula: {type(f).__name__}")
    memo[key] = value
    return value


def eval_modal(
    m: PointedStructure, f: ModalFormula, mode: SemanticsMode = SemanticsMode.INTENDED
) -> bool:
    """Truth of a modal formula at the point of m."""
    _check_modal_pre(m, f, mode)
    structure = m.structure
    succ_r = successors(structure, ACCESS)
    succ_rb = successors(structure, ACCESS_B)
    return _eval_modal_at(structure, f, m.point, mode, succ_r, succ_rb, {})


def eval_modal_full(
    m: PointedStructure, f: ModalFormula, mode: SemanticsMode = SemanticsMode.INTENDED
) -> ModalEvalResult:
    """Like eval_modal, but with a subformula trace and the vacuity flag."""
    _check_modal_pre(m, f, mode)
    structure = m.structure
    succ_r = successors(structure, ACCESS)
    succ_rb = successors(structure, ACCESS_B)
    memo: dict = {}
    point = m.point
    trace = {
        g: _eval_modal_at(structure, g, point, mode, succ_r, succ_rb, memo)
        for g in subformulas(f)
    }
    vacuous = mode is SemanticsMode.INTENDED and _has_bullet(f)
    return ModalEvalResult(trace[f], vacuous, trace)


# --- relation algebra ---------------------------------------------------------


def eval_ra(m: Structure, t: RaTerm) -> frozenset[tuple[str, str]]:
    """The binary relation a term denotes over a structure.

    Identity and the absolute top are read over the whole domain.
    """
    memo: dict[RaTerm, frozenset[tuple[str, str]]] = {}

    def walk(term: RaTerm) -> frozenset[tuple[str, str]]:
        hit = memo.get(term)
        if hit is not None:
            return hit
        if isinstance(term, RaAtom):
            value = m.rel(term.name)
        elif isinstance(term, RaId):
            value = frozenset((a, a) for a in m.domain)
        elif isinstance(term, RaTop):
            value = frozenset((a, b) for a in m.domain for b in m.domain)
        elif isinstance(term, RaMeet):
            value = walk(term.left) & walk(term.right)
        elif isinstance(term, RaDiff):
            value = walk(term.left) - walk(term.right)
        elif isinstance(term, RaComp):
            right_index: dict[str, set[str]] = {}
            for b, c in walk(term.right):
                right_index.setdefault(b, set()).add(c)
            value = frozenset(
                (a, c) for a, b in walk(term.left) for c in right_index.get(b, ())
            )
        elif isinstance(term, RaConv):
            value = frozenset((b, a) for a, b in walk(term.sub))
        else:
            raise PreconditionError(f"not a relation-algebra term: {type(term).__name__}")
        memo[term] = value
        return value

    return walk(t)


def ra_equiv_top(m: Structure, t: RaTerm) -> bool:
    """Whether a term denotes the full square over the domain."""
    n = len(m.domain)
    return len(eval_ra(m, t)) == n * n


# --- first-order ----------------------------------------------------------------


def eval_fo(m: Structure, assignment: dict[str, str], f: FoFormula) -> bool:
    """Tarskian truth of a first-order formula under a variable assignment.

    The assignment must cover every free variable of f and point into the
    domain; extra bindings are allowed and ignored.
    """
    missing = free_vars(f) - set(assignment)
    if missing:
        raise PreconditionError(f"unbound free variables: {sorted(missing)}")
    nodes = m.node_set()
    for var, node in assignment.items():
        if node not in nodes:
            raise PreconditionError(f"assignment sends {var} to {node!r}, not a node")
    memo: dict = {}

    def walk(g: FoFormula, env: dict[str, str]) -> bool:
        key = (g, tuple(sorted((v, env[v]) for v in free_vars(g))))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(g, UnAtom):
            value = env[g.var] in m.pred(g.pred)
        elif isinstance(g, BinAtom):
            value = (env[g.left], env[g.right]) in m.rel(g.rel)
        elif isinstance(g, Eq):
            value = env[g.left] == env[g.right]
        elif isinstance(g, FoNot):
            value = not walk(g.sub, env)
        elif isinstance(g, FoAnd):
            value = walk(g.left, env) and walk(g.right, env)
        elif isinstance(g, FoOr):
            value = walk(g.left, env) or walk(g.right, env)
        elif isinstance(g, FoImplies):
            value = (not walk(g.left, env)) or walk(g.right, env)
        elif isinstance(g, (Exists, Forall)):
            want_one = isinstance(g, Exists)
            value = not want_one
            for d in m.domain:
                inner = dict(env)
                inner[g.var] = d
                if g.guard is not None and not walk(g.guard, inner):
                    continue
                got = walk(g.body, inner)
                if want_one and got:
                    value = True
                    break
                if not want_one and not got:
                    value = False
                    break
        else:
            raise PreconditionError(f"not a first-order formula: {type(g).__name__}")
        memo[key] = value
        return value

    return walk(f, dict(assignment))
