"""Tableau satisfiability, the bullet reduction, and frame-class checks."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logicwb.decision import (
    bounded_model_search,
    frame_axioms_valid_on_K,
    reduce_bullet,
    sat_basic_modal,
    sat_bullet,
)
from logicwb.generators import random_modal
from logicwb.semantics import SemanticsMode, eval_modal
from logicwb.structures import (
    ACCESS,
    ACCESS_B,
    PointedStructure,
    PreconditionError,
    Structure,
    is_frame_K,
)
from logicwb.syntax import parse_modal, print_modal, vocabulary_of

INTENDED = SemanticsMode.INTENDED
QUASI = SemanticsMode.QUASI


def mk(domain, unary=None, binary=None):
    return Structure(
        tuple(domain),
        {k: frozenset(v) for k, v in (unary or {}).items()},
        {k: frozenset(tuple(p) for p in v) for k, v in (binary or {}).items()},
    )


# --- basic modal tableau -----------------------------------------------------


def test_sat_contradiction():
    assert not sat_basic_modal(parse_modal("p & ~p")).satisfiable


def test_sat_clash_below():
    assert not sat_basic_modal(parse_modal("<>p & []~p")).satisfiable


def test_sat_branching_witness():
    res = sat_basic_modal(parse_modal("<>p & <>~p & [](q -> p)"))
    assert res.satisfiable
    assert res.witness is not None
    assert eval_modal(res.witness, parse_modal("<>p & <>~p & [](q -> p)"))


def test_sat_rejects_graded():
    with pytest.raises(PreconditionError):
        sat_basic_modal(parse_modal("<2>p"))
    with pytest.raises(PreconditionError):
        sat_basic_modal(parse_modal("*p"))


def test_sat_top_bot():
    assert sat_basic_modal(parse_modal("true")).satisfiable
    assert not sat_basic_modal(parse_modal("false")).satisfiable
    assert sat_basic_modal(parse_modal("[]false")).satisfiable  # dead end


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_sat_witness_self_verifies(seed):
    rng = random.Random(seed)
    f = random_modal(rng, depth=2, letters=("p", "q"))
    res = sat_basic_modal(f)
    if res.satisfiable:
        assert eval_modal(res.witness, f)


@given(st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_sat_monotone_under_conjunction(seed):
    rng = random.Random(seed)
    f = random_modal(rng, depth=2, letters=("p",))
    if not sat_basic_modal(f).satisfiable:
        g = random_modal(rng, depth=1, letters=("p", "q"))
        both = parse_modal(f"({print_modal(f)}) & ({print_modal(g)})")
        assert not sat_basic_modal(both).satisfiable


# --- bullet reduction ---------------------------------------------------------


def test_reduce_bullet_free_formula():
    out = reduce_bullet(parse_modal("p"))
    assert print_modal(out) == "p & (_r & p -> <>p)"


def test_reduce_bullet_matrix():
    out = print_modal(reduce_bullet(parse_modal("*p")))
    assert "<>(_r & p)" in out


def test_reduce_bullet_freshness():
    f = parse_modal("*p & q")
    out = reduce_bullet(f)
    assert "_r" not in vocabulary_of(f).unary
    assert "_r" in vocabulary_of(out).unary


def test_reduce_bullet_dodges_taken_letter():
    f = parse_modal("_r & *p")
    out = reduce_bullet(f)
    assert "_r0" in vocabulary_of(out).unary


def test_reduce_bullet_output_is_plain_ml():
    out = reduce_bullet(parse_modal("*(p & #q)"))
    assert sat_basic_modal(out) is not None  # accepts it: no graded/bullet operators


# --- bullet satisfiability ------------------------------------------------------


def test_bullet_axiom_unsat():
    assert not sat_bullet(parse_modal("*p & ~<>p")).satisfiable


def test_bullet_sat_with_k_witness():
    res = sat_bullet(parse_modal("*p"))
    assert res.satisfiable
    w = res.witness
    assert is_frame_K(w.structure)
    assert eval_modal(w, parse_modal("*p"), QUASI)


def test_bullet_plain_contradiction():
    assert not sat_bullet(parse_modal("p & ~p")).satisfiable


def test_bullet_box_regression():
    """*[]p forces the bullet successor to satisfy []p while being reflexive."""
    res = sat_bullet(parse_modal("*[]p"))
    assert res.satisfiable
    w = res.witness
    assert is_frame_K(w.structure)
    assert eval_modal(w, parse_modal("*[]p"), QUASI)


def test_bullet_disjoint_successors():
    f = parse_modal("*p & *q & ~<>(p & q)")
    res = sat_bullet(f)
    assert res.satisfiable
    assert eval_modal(res.witness, f, QUASI)


# --- bounded search --------------------------------------------------------------


def test_bounded_diamond():
    assert bounded_model_search(parse_modal("<>p"), INTENDED, 2).satisfiable


def test_bounded_bullet_quasi():
    res = bounded_model_search(parse_modal("*p"), QUASI, 2)
    assert res.satisfiable
    assert is_frame_K(res.witness.structure)
    assert eval_modal(res.witness, parse_modal("*p"), QUASI)


def test_bounded_bullet_intended_unsat():
    # finite structures can never make a bullet true in the intended reading
    assert not bounded_model_search(parse_modal("*p"), INTENDED, 5).satisfiable


def test_bounded_budget():
    with pytest.raises(PreconditionError):
        bounded_model_search(parse_modal("p"), INTENDED, 6)


@given(st.integers(0, 100_000))
@settings(max_examples=25, deadline=None)
def test_bounded_agrees_with_tableau(seed):
    rng = random.Random(seed)
    f = random_modal(rng, depth=2, letters=("p", "q"))
    if bounded_model_search(f, INTENDED, 3).satisfiable:
        assert sat_basic_modal(f).satisfiable


@given(st.integers(0, 100_000))
@settings(max_examples=15, deadline=None)
def test_reduction_equisatisfiable(seed):
    rng = random.Random(seed)
    f = random_modal(rng, depth=2, letters=("p", "q"), bullets=True)
    res = sat_bullet(f)
    if res.satisfiable:
        assert is_frame_K(res.witness.structure)
        assert eval_modal(res.witness, f, QUASI)
    else:
        assert not bounded_model_search(f, QUASI, 3).satisfiable


# --- frame axioms ------------------------------------------------------------------


def test_axioms_hold_on_k_frames():
    frame = mk(
        ["a", "b"],
        binary={ACCESS: [("a", "b"), ("b", "b")], ACCESS_B: [("a", "b")]},
    )
    assert frame_axioms_valid_on_K(frame, 4)


def test_axioms_fail_off_k():
    bad = mk(["a", "b"], binary={ACCESS: [("a", "b")], ACCESS_B: [("a", "b")]})
    assert not frame_axioms_valid_on_K(bad, 4)


def test_axioms_vacuous_without_rb():
    frame = mk(["a", "b"], binary={ACCESS: [("a", "b")]})
    assert frame_axioms_valid_on_K(frame, 4)


def test_axioms_budget():
    frame = mk([f"w{i}" for i in range(5)], binary={ACCESS: []})
    with pytest.raises(PreconditionError):
        frame_axioms_valid_on_K(frame, 4)
