"""Parsers, printers, and syntactic operations for the three languages."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logicwb.structures import PreconditionError
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
    FoImplies,
    FoNot,
    FoOr,
    Forall,
    Implies,
    Not,
    Or,
    ParseError,
    Prop,
    RaAtom,
    RaComp,
    RaConv,
    RaDiff,
    RaId,
    RaMeet,
    RaTop,
    Top,
    UnAtom,
    depth_gf,
    depth_modal,
    free_vars,
    is_gf_bin,
    parse_fo,
    parse_modal,
    parse_ra,
    print_fo,
    print_modal,
    print_ra,
    relativize_modal,
    rename,
    size,
    subformulas,
    substitute,
    vocabulary_of,
)

# --- strategies -------------------------------------------------------------

letters = st.sampled_from(["p", "q", "r", "s1"])
rel_names = st.sampled_from(["R", "S", "T"])
variables = st.sampled_from(["x", "y", "z"])


def modal_formulas():
    leaves = st.one_of(letters.map(Prop), st.just(Top()), st.just(Bot()))

    def extend(sub):
        unary = st.one_of(
            sub.map(Not), sub.map(Diamond), sub.map(Box), sub.map(Bullet),
            sub.map(BulletDual), sub.map(DiamondB), sub.map(BoxB),
            st.tuples(st.integers(0, 4), sub).map(lambda t: DiamondGeq(*t)),
            st.tuples(st.integers(0, 4), sub).map(lambda t: BoxDualGeq(*t)),
        )
        binary = st.tuples(sub, sub).map(lambda t: And(*t)) | st.tuples(sub, sub).map(
            lambda t: Or(*t)
        ) | st.tuples(sub, sub).map(lambda t: Implies(*t))
        return unary | binary

    return st.recursive(leaves, extend, max_leaves=12)


def ra_terms():
    leaves = st.one_of(rel_names.map(RaAtom), st.just(RaId()), st.just(RaTop()))

    def extend(sub):
        return st.one_of(
            sub.map(RaConv),
            st.tuples(sub, sub).map(lambda t: RaMeet(*t)),
            st.tuples(sub, sub).map(lambda t: RaDiff(*t)),
            st.tuples(sub, sub).map(lambda t: RaComp(*t)),
        )

    return st.recursive(leaves, extend, max_leaves=12)


def fo_formulas():
    atoms = st.one_of(
        st.tuples(st.sampled_from(["P", "Q"]), variables).map(lambda t: UnAtom(*t)),
        st.tuples(rel_names, variables, variables).map(lambda t: BinAtom(*t)),
        st.tuples(variables, variables).map(lambda t: Eq(*t)),
    )

    def extend(sub):
        guards = st.one_of(
            st.none(),
            st.tuples(rel_names, variables, variables).map(lambda t: BinAtom(*t)),
        )
        quant = st.tuples(st.sampled_from([Exists, Forall]), variables, guards, sub).map(
            lambda t: t[0](t[1], t[2], t[3])
        )
        return st.one_of(
            sub.map(FoNot),
            st.tuples(sub, sub).map(lambda t: FoAnd(*t)),
            st.tuples(sub, sub).map(lambda t: FoOr(*t)),
            st.tuples(sub, sub).map(lambda t: FoImplies(*t)),
            quant,
        )

    return st.recursive(atoms, extend, max_leaves=10)


# --- parsing examples -------------------------------------------------------


def test_parse_modal_examples():
    assert parse_modal("<>p & ~q") == And(Diamond(Prop("p")), Not(Prop("q")))
    assert parse_modal("<2>p") == DiamondGeq(2, Prop("p"))
    assert parse_modal("*p -> <>p") == Implies(Bullet(Prop("p")), Diamond(Prop("p")))
    assert parse_modal("#(p -> <>p)") == BulletDual(Implies(Prop("p"), Diamond(Prop("p"))))
    assert parse_modal("<.>p") == DiamondB(Prop("p"))
    assert parse_modal("[.]p") == BoxB(Prop("p"))
    assert parse_modal("[0]p") == BoxDualGeq(0, Prop("p"))
    assert parse_modal("true | false") == Or(Top(), Bot())


def test_modal_precedence_and_associativity():
    # ~ and modalities bind over &, & over |, | over ->
    assert parse_modal("~p & q") == And(Not(Prop("p")), Prop("q"))
    assert parse_modal("p | q & r") == Or(Prop("p"), And(Prop("q"), Prop("r")))
    assert parse_modal("p -> q -> r") == Implies(Prop("p"), Implies(Prop("q"), Prop("r")))
    assert parse_modal("p & q & r") == And(Prop("p"), And(Prop("q"), Prop("r")))
    assert parse_modal("<>p & q") == And(Diamond(Prop("p")), Prop("q"))


def test_parse_modal_errors_have_positions():
    with pytest.raises(ParseError) as err:
        parse_modal("p & & q")
    assert err.value.position == 4
    with pytest.raises(ParseError):
        parse_modal("<p>q")
    with pytest.raises(ParseError):
        parse_modal("p q")


def test_diamond_and_grade_one_stay_distinct():
    assert parse_modal("<>p") == Diamond(Prop("p"))
    assert parse_modal("<1>p") == DiamondGeq(1, Prop("p"))
    assert print_modal(Diamond(Prop("p"))) == "<>p"
    assert print_modal(DiamondGeq(1, Prop("p"))) == "<1>p"


def test_parse_ra_examples():
    assert parse_ra("R ; S~") == RaComp(RaAtom("R"), RaConv(RaAtom("S")))
    assert parse_ra("(R ; S)~") == RaConv(RaComp(RaAtom("R"), RaAtom("S")))
    assert parse_ra("id & top - R") == RaDiff(RaMeet(RaId(), RaTop()), RaAtom("R"))
    assert parse_ra("R ; S ; T") == RaComp(RaComp(RaAtom("R"), RaAtom("S")), RaAtom("T"))
    assert parse_ra("R & S ; T") == RaMeet(RaAtom("R"), RaComp(RaAtom("S"), RaAtom("T")))
    assert parse_ra("R~~") == RaConv(RaConv(RaAtom("R")))


def test_parse_fo_examples():
    assert parse_fo("E y : R(x,y) . P(y)") == Exists(
        "y", BinAtom("R", "x", "y"), UnAtom("P", "y")
    )
    assert parse_fo("A z . x = z") == Forall("z", None, Eq("x", "z"))
    assert parse_fo("P(x) & Q(y)") == FoAnd(UnAtom("P", "x"), UnAtom("Q", "y"))
    # the quantifier body is maximal
    assert parse_fo("E y . P(y) & Q(x)") == Exists(
        "y", None, FoAnd(UnAtom("P", "y"), UnAtom("Q", "x"))
    )


def test_parse_fo_rejects_bad_guards_and_vars():
    with pytest.raises(ParseError):
        parse_fo("E y : P(y) . P(y)")  # unary guard
    with pytest.raises(ParseError):
        parse_fo("E y : x = y . P(y)")  # equality guard
    with pytest.raises(ParseError):
        parse_fo("P(w)")  # unknown variable
    with pytest.raises(ParseError):
        parse_fo("E(x, y)")  # reserved word as predicate


# --- round trips -------------------------------------------------------------


@given(modal_formulas())
@settings(max_examples=300, deadline=None)
def test_modal_round_trip(f):
    assert parse_modal(print_modal(f)) == f


@given(ra_terms())
@settings(max_examples=300, deadline=None)
def test_ra_round_trip(t):
    assert parse_ra(print_ra(t)) == t


@given(fo_formulas())
@settings(max_examples=300, deadline=None)
def test_fo_round_trip(f):
    assert parse_fo(print_fo(f)) == f


@pytest.mark.parametrize(
    "text,parser,printer",
    [
        ("<>p & ~(q -> r)", parse_modal, print_modal),
        ("<2>(p | false) -> [3]p", parse_modal, print_modal),
        ("*~p & #(p -> <>p) | <.>q", parse_modal, print_modal),
        ("(R & S)~ ; top - id", parse_ra, print_ra),
        ("R ; (S ; T)", parse_ra, print_ra),
        ("E y : R(x,y) . ~(P(y) -> E x : S(y,x) . Q(x))", parse_fo, print_fo),
        ("x = y | ~A z : T(z,x) . P(z)", parse_fo, print_fo),
    ],
)
def test_print_after_parse_reparses_identically(text, parser, printer):
    ast = parser(text)
    assert parser(printer(ast)) == ast


# --- syntactic operations -----------------------------------------------------


def test_vocabulary_of_all_families():
    f = parse_modal("p & <>(q | p)")
    assert vocabulary_of(f).unary == ("p", "q")
    t = parse_ra("R ; S & R")
    assert vocabulary_of(t).binary == ("R", "S")
    g = parse_fo("E y : R(x,y) . P(y) & S(y,y)")
    v = vocabulary_of(g)
    assert v.unary == ("P",) and v.binary == ("R", "S")


def test_vocabulary_rejects_mixed_arity():
    g = FoAnd(UnAtom("P", "x"), BinAtom("P", "x", "y"))
    with pytest.raises(PreconditionError):
        vocabulary_of(g)


def test_rename_and_arity_guard():
    f = parse_modal("p & <>q")
    assert rename(f, {"p": "q2"}) == parse_modal("q2 & <>q")
    g = parse_fo("P(x) & R(x,y)")
    assert rename(g, {"P": "Q", "R": "S"}) == parse_fo("Q(x) & S(x,y)")
    with pytest.raises(PreconditionError):
        rename(g, {"P": "R"})


def test_substitute():
    f = parse_modal("p & <>p")
    assert substitute(f, "p", parse_modal("q | r")) == parse_modal("(q | r) & <>(q | r)")
    assert substitute(f, "p", Prop("p")) == f
    assert substitute(f, "zz", Bot()) == f


def test_relativize_modal():
    f = parse_modal("<>q")
    out = relativize_modal(f, "p")
    assert out == parse_modal("p & <>(p & q)")
    boxed = relativize_modal(parse_modal("[]q"), "p")
    assert boxed == parse_modal("p & [](p -> q)")
    graded = relativize_modal(parse_modal("<2>q & [3]q"), "p")
    assert graded == parse_modal("p & (<2>(p & q) & [3](p -> q))")
    bullet = relativize_modal(parse_modal("*q & #q"), "p")
    assert bullet == parse_modal("p & (*(p & q) & #(p -> q))")


@given(modal_formulas())
@settings(max_examples=150, deadline=None)
def test_relativize_keeps_depth_and_extends_vocab(f):
    out = relativize_modal(f, "newp")
    assert depth_modal(out) == depth_modal(f)
    assert set(vocabulary_of(out).unary) == set(vocabulary_of(f).unary) | {"newp"}


def test_depths():
    assert depth_modal(parse_modal("p & q")) == 0
    assert depth_modal(parse_modal("<>[]p")) == 2
    assert depth_modal(parse_modal("<3>p & *<>p")) == 2
    assert depth_gf(parse_fo("P(x)")) == 0
    assert depth_gf(parse_fo("E y : R(x,y) . E x : S(y,x) . P(x)")) == 2
    assert depth_gf(parse_fo("~P(x) | x = y")) == 0


@given(modal_formulas())
@settings(max_examples=150, deadline=None)
def test_subformula_count_bounded_by_size(f):
    assert len(subformulas(f)) <= size(f)
    assert f in subformulas(f)


def test_free_vars():
    assert free_vars(parse_fo("E y : R(x,y) . P(y)")) == {"x"}
    assert free_vars(parse_fo("x = y")) == {"x", "y"}
    assert free_vars(parse_fo("A x . P(x)")) == frozenset()


def test_is_gf_bin():
    assert is_gf_bin(parse_fo("E y : R(x,y) . P(y)"))
    assert is_gf_bin(parse_fo("R(x,x)"))  # quantifier-free atoms pass
    assert not is_gf_bin(parse_fo("E y . P(y)"))  # unguarded
    assert not is_gf_bin(parse_fo("E y : R(y,y) . P(y)"))  # guard vars not distinct
    assert not is_gf_bin(parse_fo("A x : R(x,x) . P(x)"))
    assert not is_gf_bin(parse_fo("A x . E y : R(x,y) . P(y)"))  # sentence, no free vars
    # body free variables must stay within the guard's pair
    assert not is_gf_bin(
        Exists("y", BinAtom("R", "x", "y"), UnAtom("P", "z"))
    )
    assert is_gf_bin(parse_fo("E y : R(x,y) . E x : S(y,x) . P(x) & S(y,x)"))


def test_gf_bin_guard_must_touch_quantified_var():
    f = Exists("z", BinAtom("R", "x", "y"), UnAtom("P", "z"))
    assert not is_gf_bin(f)
