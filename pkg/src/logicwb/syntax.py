"""Formula syntax: ASTs, parsers, printers, and syntactic operations.

Three small languages share one namespace here.

Modal formulas cover the basic language, graded operators, the two bullet
operators and the plain second-relation modalities::

    phi ::= ident | "true" | "false" | "~" phi | phi "&" phi | phi "|" phi
          | phi "->" phi | "<>" phi | "[]" phi | "<" nat ">" phi
          | "[" nat "]" phi | "*" phi | "#" phi | "<.>" phi | "[.]" phi
          | "(" phi ")"

with precedence ``~``/modalities over ``&`` over ``|`` over ``->`` and all
binary connectives right-associative.

Relation-algebra terms::

    t ::= ident | "id" | "top" | t "&" t | t "-" t | t ";" t | t "~" | "(" t ")"

where postfix ``~`` binds tightest, then ``;``, then ``&`` and ``-`` at one
level, left-associatively.

First-order formulas over variables x, y, z::

    f ::= ident "(" var ")" | ident "(" var "," var ")" | var "=" var
        | "~" f | f "&" f | f "|" f | f "->" f | ("E"|"A") var [":" atom] "." f

Quantifier bodies extend as far right as possible; ``E`` and ``A`` are
reserved words, and a quantifier's optional guard must be a binary atom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from logicwb.structures import LogicError, PreconditionError


class ParseError(LogicError):
    """Syntax error with a character position into the input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


# --- modal formulas ---------------------------------------------------------


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Not:
    sub: "ModalFormula"


@dataclass(frozen=True)
class And:
    left: "ModalFormula"
    right: "ModalFormula"


@dataclass(frozen=True)
class Or:
    left: "ModalFormula"
    right: "ModalFormula"


@dataclass(frozen=True)
class Implies:
    left: "ModalFormula"
    right: "ModalFormula"


@dataclass(frozen=True)
class Diamond:
    sub: "ModalFormula"


@dataclass(frozen=True)
class Box:
    sub: "ModalFormula"


@dataclass(frozen=True)
class DiamondGeq:
    """At least ``grade`` successors satisfy the operand."""

    grade: int
    sub: "ModalFormula"

    def __post_init__(self):
        if self.grade < 0:
            raise PreconditionError("grades must be non-negative")


@dataclass(frozen=True)
class BoxDualGeq:
    """Dual of DiamondGeq: fewer than ``grade`` successors falsify the operand."""

    grade: int
    sub: "ModalFormula"

    def __post_init__(self):
        if self.grade < 0:
            raise PreconditionError("grades must be non-negative")


@dataclass(frozen=True)
class Bullet:
    sub: "ModalFormula"


@dataclass(frozen=True)
class BulletDual:
    sub: "ModalFormula"


@dataclass(frozen=True)
class DiamondB:
    sub: "ModalFormula"


@dataclass(frozen=True)
class BoxB:
    sub: "ModalFormula"


ModalFormula = (
    Prop | Top | Bot | Not | And | Or | Implies | Diamond | Box
    | DiamondGeq | BoxDualGeq | Bullet | BulletDual | DiamondB | BoxB
)

_MODAL_BINARY = (And, Or, Implies)
_MODAL_UNARY = (Not, Diamond, Box, DiamondGeq, BoxDualGeq, Bullet, BulletDual, DiamondB, BoxB)
_MODAL_MODALITIES = (Diamond, Box, DiamondGeq, BoxDualGeq, Bullet, BulletDual, DiamondB, BoxB)


# --- relation-algebra terms ---------------------------------------------------


@dataclass(frozen=True)
class RaAtom:
    name: str


@dataclass(frozen=True)
class RaId:
    pass


@dataclass(frozen=True)
class RaTop:
    pass


@dataclass(frozen=True)
class RaMeet:
    left: "RaTerm"
    right: "RaTerm"


@dataclass(frozen=True)
class RaDiff:
    left: "RaTerm"
    right: "RaTerm"


@dataclass(frozen=True)
class RaComp:
    left: "RaTerm"
    right: "RaTerm"


@dataclass(frozen=True)
class RaConv:
    sub: "RaTerm"


RaTerm = RaAtom | RaId | RaTop | RaMeet | RaDiff | RaComp | RaConv


# --- first-order formulas ----------------------------------------------------

VARIABLES = ("x", "y", "z")


@dataclass(frozen=True)
class UnAtom:
    pred: str
    var: str


@dataclass(frozen=True)
class BinAtom:
    rel: str
    left: str
    right: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class FoNot:
    sub: "FoFormula"


@dataclass(frozen=True)
class FoAnd:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class FoOr:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class FoImplies:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    guard: "BinAtom | None"
    body: "FoFormula"


@dataclass(frozen=True)
class Forall:
    var: str
    guard: "BinAtom | None"
    body: "FoFormula"


FoFormula = UnAtom | BinAtom | Eq | FoNot | FoAnd | FoOr | FoImplies | Exists | Forall

_FO_QUANT = (Exists, Forall)


@dataclass(frozen=True)
class Vocabulary:
    """Ordered unary and binary name lists with disjoint name sets."""

    unary: tuple[str, ...]
    binary: tuple[str, ...]

    def __post_init__(self):
        clash = set(self.unary) & set(self.binary)
        if clash:
            raise PreconditionError(f"names used at both arities: {sorted(clash)}")


# --- tokenizer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<diamond_b><\.>)
  | (?P<box_b>\[\.\])
  | (?P<diamond><>)
  | (?P<box>\[\])
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()~&|<>\[\]*\#;\-=:.,])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            tokens.append((value if kind == "punct" else kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Tokens:
    def __init__(self, text: str):
        self.items = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.items[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.items[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def done(self) -> None:
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])


# --- modal parser -------------------------------------------------------------


def parse_modal(text: str) -> ModalFormula:
    """Parse a modal formula; raises ParseError with a position on bad input."""
    toks = _Tokens(text)
    f = _modal_implies(toks)
    toks.done()
    return f


def _modal_implies(toks: _Tokens) -> ModalFormula:
    left = _modal_or(toks)
    if toks.peek()[0] == "arrow":
        toks.next()
        return Implies(left, _modal_implies(toks))
    return left


def _modal_or(toks: _Tokens) -> ModalFormula:
    left = _modal_and(toks)
    if toks.peek()[0] == "|":
        toks.next()
        return Or(left, _modal_or(toks))
    return left


def _modal_and(toks: _Tokens) -> ModalFormula:
    left = _modal_unary(toks)
    if toks.peek()[0] == "&":
        toks.next()
        return And(left, _modal_and(toks))
    return left


def _modal_unary(toks: _Tokens) -> ModalFormula:
    kind, value, pos = toks.peek()
    if kind == "~":
        toks.next()
        return Not(_modal_unary(toks))
    if kind == "diamond":
        toks.next()
        return Diamond(_modal_unary(toks))
    if kind == "box":
        toks.next()
        return Box(_modal_unary(toks))
    if kind == "*":
        toks.next()
        return Bullet(_modal_unary(toks))
    if kind == "#":
        toks.next()
        return BulletDual(_modal_unary(toks))
    if kind == "diamond_b":
        toks.next()
        return DiamondB(_modal_unary(toks))
    if kind == "box_b":
        toks.next()
        return BoxB(_modal_unary(toks))
    if kind == "<":
        toks.next()
        nat = toks.expect("nat", "a grade")
        toks.expect(">", "'>'")
        return DiamondGeq(int(nat[1]), _modal_unary(toks))
    if kind == "[":
        toks.next()
        nat = toks.expect("nat", "a grade")
        toks.expect("]", "']'")
        return BoxDualGeq(int(nat[1]), _modal_unary(toks))
    if kind == "(":
        toks.next()
        f = _modal_implies(toks)
        toks.expect(")", "')'")
        return f
    if kind == "ident":
        toks.next()
        if value == "true":
            return Top()
        if value == "false":
            return Bot()
        return Prop(value)
    raise ParseError(f"expected a formula, found {value or 'end of input'!r}", pos)


def print_modal(f: ModalFormula) -> str:
    """Render to the concrete grammar; parse_modal inverts this on every AST."""
    return _pm(f, 0)


# binding strength: -> is 1, | is 2, & is 3, unary is 4
def _pm(f: ModalFormula, level: int) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, _MODAL_UNARY):
        op = {
            Not: "~", Diamond: "<>", Box: "[]", Bullet: "*", BulletDual: "#",
            DiamondB: "<.>", BoxB: "[.]",
        }.get(type(f))
        if op is None:
            op = f"<{f.grade}>" if isinstance(f, DiamondGeq) else f"[{f.grade}]"
        return f"{op}{_pm(f.sub, 4)}"
    strength = {Implies: 1, Or: 2, And: 3}[type(f)]
    op = {Implies: "->", Or: "|", And: "&"}[type(f)]
    # right-associative: the left child needs strictly tighter binding
    text = f"{_pm(f.left, strength + 1)} {op} {_pm(f.right, strength)}"
    if strength < level:
        return f"({text})"
    return text


# --- relation-algebra parser ---------------------------------------------------


def parse_ra(text: str) -> RaTerm:
    """Parse a relation-algebra term."""
    toks = _Tokens(text)
    t = _ra_meet(toks)
    toks.done()
    return t


def _ra_meet(toks: _Tokens) -> RaTerm:
    left = _ra_comp(toks)
    while toks.peek()[0] in ("&", "-"):
        op = toks.next()[0]
        right = _ra_comp(toks)
        left = RaMeet(left, right) if op == "&" else RaDiff(left, right)
    return left


def _ra_comp(toks: _Tokens) -> RaTerm:
    left = _ra_postfix(toks)
    while toks.peek()[0] == ";":
        toks.next()
        left = RaComp(left, _ra_postfix(toks))
    return left


def _ra_postfix(toks: _Tokens) -> RaTerm:
    t = _ra_atom(toks)
    while toks.peek()[0] == "~":
        toks.next()
        t = RaConv(t)
    return t


def _ra_atom(toks: _Tokens) -> RaTerm:
    kind, value, pos = toks.next()
    if kind == "(":
        t = _ra_meet(toks)
        toks.expect(")", "')'")
        return t
    if kind == "ident":
        if value == "id":
            return RaId()
        if value == "top":
            return RaTop()
        return RaAtom(value)
    raise ParseError(f"expected a term, found {value or 'end of input'!r}", pos)


def print_ra(t: RaTerm) -> str:
    """Render to the concrete grammar; parse_ra inverts this on every AST."""
    return _pr(t, 0)


# binding strength: & and - are 1, ; is 2, postfix ~ is 3
def _pr(t: RaTerm, level: int) -> str:
    if isinstance(t, RaAtom):
        return t.name
    if isinstance(t, RaId):
        return "id"
    if isinstance(t, RaTop):
        return "top"
    if isinstance(t, RaConv):
        return f"{_pr(t.sub, 3)}~"
    if isinstance(t, RaComp):
        text = f"{_pr(t.left, 2)} ; {_pr(t.right, 3)}"
        strength = 2
    else:
        op = "&" if isinstance(t, RaMeet) else "-"
        text = f"{_pr(t.left, 1)} {op} {_pr(t.right, 2)}"
        strength = 1
    if strength < level:
        return f"({text})"
    return text


# --- first-order parser ---------------------------------------------------------


def parse_fo(text: str) -> FoFormula:
    """Parse a first-order formula over variables x, y, z."""
    toks = _Tokens(text)
    f = _fo_implies(toks)
    toks.done()
    return f


def _fo_implies(toks: _Tokens) -> FoFormula:
    left = _fo_or(toks)
    if toks.peek()[0] == "arrow":
        toks.next()
        return FoImplies(left, _fo_implies(toks))
    return left


def _fo_or(toks: _Tokens) -> FoFormula:
    left = _fo_and(toks)
    if toks.peek()[0] == "|":
        toks.next()
        return FoOr(left, _fo_or(toks))
    return left


def _fo_and(toks: _Tokens) -> FoFormula:
    left = _fo_unary(toks)
    if toks.peek()[0] == "&":
        toks.next()
        return FoAnd(left, _fo_and(toks))
    return left


def _fo_var(toks: _Tokens) -> str:
    tok = toks.expect("ident", "a variable")
    if tok[1] not in VARIABLES:
        raise ParseError(f"variables are x, y, z; found {tok[1]!r}", tok[2])
    return tok[1]


def _fo_unary(toks: _Tokens) -> FoFormula:
    kind, value, pos = toks.peek()
    if kind == "~":
        toks.next()
        return FoNot(_fo_unary(toks))
    if kind == "(":
        toks.next()
        f = _fo_implies(toks)
        toks.expect(")", "')'")
        return f
    if kind == "ident" and value in ("E", "A"):
        toks.next()
        var = _fo_var(toks)
        guard = None
        if toks.peek()[0] == ":":
            toks.next()
            gpos = toks.peek()[2]
            guard_f = _fo_atom(toks)
            if not isinstance(guard_f, BinAtom):
                raise ParseError("a guard must be a binary atom", gpos)
            guard = guard_f
        toks.expect(".", "'.'")
        body = _fo_implies(toks)  # the body extends as far right as possible
        return Exists(var, guard, body) if value == "E" else Forall(var, guard, body)
    if kind == "ident":
        return _fo_atom(toks)
    raise ParseError(f"expected a formula, found {value or 'end of input'!r}", pos)


def _fo_atom(toks: _Tokens) -> FoFormula:
    kind, value, pos = toks.next()
    if kind != "ident":
        raise ParseError(f"expected an atom, found {value or 'end of input'!r}", pos)
    if value in VARIABLES and toks.peek()[0] == "=":
        toks.next()
        return Eq(value, _fo_var(toks))
    if value in ("E", "A"):
        raise ParseError(f"{value!r} is reserved for quantifiers", pos)
    toks.expect("(", "'('")
    v1 = _fo_var(toks)
    if toks.peek()[0] == ",":
        toks.next()
        v2 = _fo_var(toks)
        toks.expect(")", "')'")
        return BinAtom(value, v1, v2)
    toks.expect(")", "')'")
    return UnAtom(value, v1)


def print_fo(f: FoFormula) -> str:
    """Render to the concrete grammar; parse_fo inverts this on every AST."""
    return _pf(f, 0, top=True)


def _pf(f: FoFormula, level: int, top: bool = False) -> str:
    if isinstance(f, UnAtom):
        return f"{f.pred}({f.var})"
    if isinstance(f, BinAtom):
        return f"{f.rel}({f.left}, {f.right})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, FoNot):
        return f"~{_pf(f.sub, 4)}"
    if isinstance(f, _FO_QUANT):
        q = "E" if isinstance(f, Exists) else "A"
        guard = f" : {_pf(f.guard, 0)}" if f.guard is not None else ""
        text = f"{q} {f.var}{guard} . {_pf(f.body, 0, top=True)}"
        # the body is maximal-extent, so anything but a whole-formula or
        # body position must parenthesize
        return text if top else f"({text})"
    strength = {FoImplies: 1, FoOr: 2, FoAnd: 3}[type(f)]
    op = {FoImplies: "->", FoOr: "|", FoAnd: "&"}[type(f)]
    text = f"{_pf(f.left, strength + 1)} {op} {_pf(f.right, strength)}"
    if strength < level:
        return f"({text})"
    return text


# --- syntactic operations -------------------------------------------------------


def children(f) -> tuple:
    """Immediate subformulas or subterms of any AST node."""
    if isinstance(f, (Not, Diamond, Box, Bullet, BulletDual, DiamondB, BoxB, RaConv, FoNot)):
        return (f.sub,)
    if isinstance(f, (DiamondGeq, BoxDualGeq)):
        return (f.sub,)
    if isinstance(f, (And, Or, Implies, RaMeet, RaDiff, RaComp, FoAnd, FoOr, FoImplies)):
        return (f.left, f.right)
    if isinstance(f, _FO_QUANT):
        return (f.guard, f.body) if f.guard is not None else (f.body,)
    return ()


def size(f) -> int:
    """Number of AST nodes."""
    return 1 + sum(size(c) for c in children(f))


def subformulas(f: ModalFormula) -> frozenset[ModalFormula]:
    """All subformulas of a modal formula, deduplicated structurally."""
    out = {f}
    for c in children(f):
        out |= subformulas(c)
    return frozenset(out)


def _collect_names(f, unary: list[str], binary: list[str]) -> None:
    if isinstance(f, Prop) and f.name not in unary:
        unary.append(f.name)
    elif isinstance(f, RaAtom) and f.name not in binary:
        binary.append(f.name)
    elif isinstance(f, UnAtom) and f.pred not in unary:
        unary.append(f.pred)
    elif isinstance(f, BinAtom) and f.rel not in binary:
        binary.append(f.rel)
    for c in children(f):
        _collect_names(c, unary, binary)


def vocabulary_of(f) -> Vocabulary:
    """Predicate names of a formula or term, in first-occurrence order.

    Raises when one name occurs at both arities, since such a formula has no
    well-formed vocabulary.
    """
    unary: list[str] = []
    binary: list[str] = []
    _collect_names(f, unary, binary)
    return Vocabulary(tuple(unary), tuple(binary))


def rename(f, mapping: dict[str, str]):
    """Rename predicate names throughout; the map must preserve arities.

    A map that makes a renamed unary name collide with a renamed binary name
    is rejected.
    """
    vocab = vocabulary_of(f)
    new_unary = {mapping.get(u, u) for u in vocab.unary}
    new_binary = {mapping.get(b, b) for b in vocab.binary}
    if new_unary & new_binary:
        raise PreconditionError("renaming makes a unary name collide with a binary name")

    def walk(g):
        if isinstance(g, Prop):
            return Prop(mapping.get(g.name, g.name))
        if isinstance(g, RaAtom):
            return RaAtom(mapping.get(g.name, g.name))
        if isinstance(g, UnAtom):
            return UnAtom(mapping.get(g.pred, g.pred), g.var)
        if isinstance(g, BinAtom):
            return BinAtom(mapping.get(g.rel, g.rel), g.left, g.right)
        if isinstance(g, (Top, Bot, RaId, RaTop, Eq)):
            return g
        if isinstance(g, (DiamondGeq, BoxDualGeq)):
            return type(g)(g.grade, walk(g.sub))
        if isinstance(g, _FO_QUANT):
            guard = walk(g.guard) if g.guard is not None else None
            return type(g)(g.var, guard, walk(g.body))
        if hasattr(g, "sub"):
            return type(g)(walk(g.sub))
        return type(g)(walk(g.left), walk(g.right))

    return walk(f)


def substitute(f: ModalFormula, p: str, g: ModalFormula) -> ModalFormula:
    """Replace every occurrence of the letter p in a modal formula by g."""
    if isinstance(f, Prop):
        return g if f.name == p else f
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, (DiamondGeq, BoxDualGeq)):
        return type(f)(f.grade, substitute(f.sub, p, g))
    if isinstance(f, _MODAL_BINARY):
        return type(f)(substitute(f.left, p, g), substitute(f.right, p, g))
    return type(f)(substitute(f.sub, p, g))


def relativize_modal(f: ModalFormula, p: str) -> ModalFormula:
    """Relativize a modal formula to the extension of p.

    The result holds at w exactly when w satisfies p and f holds at w inside
    the submodel induced by p.  Diamond-like operators guard their operand
    with p; box-like duals weaken theirs to an implication from p.
    """

    def walk(g: ModalFormula) -> ModalFormula:
        if isinstance(g, (Prop, Top, Bot)):
            return g
        if isinstance(g, Not):
            return Not(walk(g.sub))
        if isinstance(g, _MODAL_BINARY):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, (Diamond, Bullet, DiamondB)):
            return type(g)(And(Prop(p), walk(g.sub)))
        if isinstance(g, DiamondGeq):
            return DiamondGeq(g.grade, And(Prop(p), walk(g.sub)))
        if isinstance(g, (Box, BulletDual, BoxB)):
            return type(g)(Implies(Prop(p), walk(g.sub)))
        if isinstance(g, BoxDualGeq):
            return BoxDualGeq(g.grade, Implies(Prop(p), walk(g.sub)))
        raise PreconditionError(f"cannot relativize {type(g).__name__}")

    return And(Prop(p), walk(f))


def depth_modal(f: ModalFormula) -> int:
    """Maximum nesting of modal operators; grades and bullets count one each."""
    step = 1 if isinstance(f, _MODAL_MODALITIES) else 0
    return step + max((depth_modal(c) for c in children(f)), default=0)


def depth_gf(f: FoFormula) -> int:
    """Quantifier nesting depth; atoms are 0 and each quantifier adds one."""
    if isinstance(f, (UnAtom, BinAtom, Eq)):
        return 0
    if isinstance(f, _FO_QUANT):
        return 1 + depth_gf(f.body)
    return max(depth_gf(c) for c in children(f))


def free_vars(f: FoFormula) -> frozenset[str]:
    """Free variables of a first-order formula."""
    if isinstance(f, UnAtom):
        return frozenset({f.var})
    if isinstance(f, BinAtom):
        return frozenset({f.left, f.right})
    if isinstance(f, Eq):
        return frozenset({f.left, f.right})
    if isinstance(f, _FO_QUANT):
        inner = free_vars(f.body)
        if f.guard is not None:
            inner |= free_vars(f.guard)
        return inner - {f.var}
    return frozenset().union(*(free_vars(c) for c in children(f)))


def is_gf_bin(f: FoFormula) -> bool:
    """Membership in the binary guarded fragment.

    Every quantifier must carry a binary guard over two distinct variables,
    one of them the quantified variable; the body's free variables must stay
    within the quantified variable and the guard's other variable; and the
    whole formula must keep at least one free variable.  Unary and equality
    guards are unrepresentable as guards and quantifiers without a guard are
    rejected here.
    """
    if not free_vars(f):
        return False

    def ok(g: FoFormula) -> bool:
        if isinstance(g, (UnAtom, BinAtom, Eq)):
            return True
        if isinstance(g, _FO_QUANT):
            guard = g.guard
            if guard is None or guard.left == guard.right or g.var not in (guard.left, guard.right):
                return False
            other = guard.right if guard.left == g.var else guard.left
            if not (free_vars(g.body) <= {g.var, other}):
                return False
            return ok(g.body)
        return all(ok(c) for c in children(g))

    return ok(f)
