"""Bisimulation games, pebble games, and guarded bisimulation."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logicwb.equivalence import (
    bisimilar,
    bisimilar_depth,
    counting_bisimilar,
    gf_bin_bisimilar,
    pebble_equiv,
    potential_iso,
)
from logicwb.generators import linear_order, random_modal
from logicwb.semantics import SemanticsMode, eval_modal
from logicwb.structures import ACCESS, ACCESS_B, PointedStructure, Structure, isomorphic
from logicwb.syntax import parse_modal


def mk(domain, unary=None, binary=None):
    return Structure(
        tuple(domain),
        {k: frozenset(v) for k, v in (unary or {}).items()},
        {k: frozenset(tuple(p) for p in v) for k, v in (binary or {}).items()},
    )


def at(m, *ws):
    return PointedStructure(m, ws)


def chain(n, letters=None):
    ids = [f"w{i}" for i in range(n)]
    return mk(
        ids,
        {p: ns for p, ns in (letters or {}).items()},
        {ACCESS: [(ids[i], ids[i + 1]) for i in range(n - 1)]},
    )


LOOP = mk(["a"], binary={ACCESS: [("a", "a")]})
CYCLE2 = mk(["a", "b"], binary={ACCESS: [("a", "b"), ("b", "a")]})


# --- plain bisimulation --------------------------------------------------------


def test_bisimilar_reflexive():
    pm = at(chain(3, {"p": ["w1"]}), "w0")
    assert bisimilar(pm, pm).equivalent


def test_loop_bisimilar_to_cycle():
    res = bisimilar(at(LOOP, "a"), at(CYCLE2, "a"))
    assert res.equivalent
    assert res.witness  # winning relation comes back non-empty


def test_atomic_mismatch_downstream():
    m = chain(2, {"p": ["w1"]})
    n = chain(2)
    assert not bisimilar(at(m, "w0"), at(n, "w0")).equivalent


def test_depth_bounded_chains():
    three = at(chain(3), "w0")
    four = at(chain(4), "w0")
    assert bisimilar_depth(three, four, 0).equivalent
    assert bisimilar_depth(three, four, 2).equivalent
    assert not bisimilar_depth(three, four, 3).equivalent
    assert not bisimilar(three, four).equivalent


def test_depth_zero_is_atomic_harmony():
    m = chain(2, {"p": ["w0"]})
    n = mk(["v"], {"p": ["v"]})
    assert bisimilar_depth(at(m, "w0"), at(n, "v"), 0).equivalent
    assert not bisimilar_depth(at(m, "w0"), at(n, "v"), 1).equivalent


def test_bisimilar_implies_all_depths():
    l, c = at(LOOP, "a"), at(CYCLE2, "a")
    for k in range(11):
        assert bisimilar_depth(l, c, k).equivalent


# --- counting bisimulation -------------------------------------------------------


def test_counting_loop_vs_cycle():
    # one successor each, landing in a shared class
    assert counting_bisimilar(at(LOOP, "a"), at(CYCLE2, "a")).equivalent


def test_counting_distinguishes_successor_counts():
    two = mk(["a", "b", "c"], {"p": ["b", "c"]}, {ACCESS: [("a", "b"), ("a", "c")]})
    one = mk(["a", "b"], {"p": ["b"]}, {ACCESS: [("a", "b")]})
    assert not counting_bisimilar(at(two, "a"), at(one, "a")).equivalent
    assert bisimilar(at(two, "a"), at(one, "a")).equivalent


def test_counting_on_isomorphic_pair():
    m = chain(3, {"p": ["w2"]})
    n = mk(
        ["v2", "v1", "v0"],
        {"p": ["v2"]},
        {ACCESS: [("v0", "v1"), ("v1", "v2")]},
    )
    assert counting_bisimilar(at(m, "w0"), at(n, "v0")).equivalent


# --- pebble games ---------------------------------------------------------------


def test_pebble_self():
    m = chain(3)
    for k in (1, 2, 3):
        assert pebble_equiv(m, m, k).equivalent


def test_pebble_pure_sets():
    two = mk(["a", "b"])
    three = mk(["x", "y", "z"])
    assert pebble_equiv(two, three, 2).equivalent
    # size is still visible once every element can be pinned
    assert not pebble_equiv(two, three, 3).equivalent


def test_pebble_linear_orders():
    lin3 = linear_order(3)
    lin4 = linear_order(4)
    assert not pebble_equiv(lin3, lin4, 3).equivalent
    assert not pebble_equiv(lin3, lin4, 2).equivalent  # reuse counts to 4 already
    assert pebble_equiv(lin3, lin4, 1).equivalent


def test_pebble_needs_positive_k():
    with pytest.raises(Exception):
        pebble_equiv(mk(["a"]), mk(["b"]), 0)


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_pebble_antitone(data):
    n1 = data.draw(st.integers(1, 4))
    n2 = data.draw(st.integers(1, 4))
    ids1 = [f"a{i}" for i in range(n1)]
    ids2 = [f"b{i}" for i in range(n2)]
    m = mk(ids1, binary={"R": data.draw(st.sets(st.tuples(st.sampled_from(ids1), st.sampled_from(ids1)), max_size=8))})
    n = mk(ids2, binary={"R": data.draw(st.sets(st.tuples(st.sampled_from(ids2), st.sampled_from(ids2)), max_size=8))})
    results = [pebble_equiv(m, n, k).equivalent for k in (1, 2, 3, 4)]
    for lo, hi in zip(results, results[1:]):
        if hi:
            assert lo


def test_pebble_at_full_size_is_isomorphism():
    m = mk(["a", "b"], binary={"R": [("a", "b")]})
    n = mk(["x", "y"], binary={"R": [("y", "x")]})
    assert pebble_equiv(m, n, 2).equivalent == isomorphic(m, n)
    n2 = mk(["x", "y"], binary={"R": [("x", "y"), ("y", "x")]})
    assert pebble_equiv(m, n2, 2).equivalent == isomorphic(m, n2)


# --- potential isomorphism -------------------------------------------------------


def test_potential_iso():
    m = mk(["a", "b"], binary={"R": [("a", "b")]})
    n = mk(["x", "y"], binary={"R": [("y", "x")]})
    assert potential_iso(m, n)
    assert not potential_iso(m, mk(["a"]))
    assert potential_iso(mk(["a", "b"]), mk(["x", "y"]))


# --- guarded bisimulation --------------------------------------------------------


def test_gf_bin_reflexive():
    m = mk(["a", "b"], {"P": ["a"]}, {"R": [("a", "b")]})
    assert gf_bin_bisimilar(at(m, "a"), at(m, "a")).equivalent


def test_gf_bin_root_mismatch():
    m = mk(["a", "b"], {"P": ["a"]}, {"R": [("a", "b")]})
    n = mk(["a", "b"], {"P": []}, {"R": [("a", "b")]})
    res = gf_bin_bisimilar(at(m, "a"), at(n, "a"))
    assert not res.equivalent


def test_gf_bin_chain_vs_star():
    # one outgoing R-pair each and nothing else: guarded back-and-forth holds
    m = mk(["a", "b"], binary={"R": [("a", "b")]})
    n = mk(["x", "y", "z"], binary={"R": [("x", "y"), ("x", "z")]})
    assert gf_bin_bisimilar(at(m, "a"), at(n, "x")).equivalent


def test_gf_bin_chain_vs_loop_rooted():
    # the loop pair {a} is a singleton guarded set; the rooted map a->l is a
    # partial isomorphism only if loops match, and R(l,l) has no chain image
    m = mk(["a", "b"], binary={"R": [("a", "b")]})
    n = mk(["l"], binary={"R": [("l", "l")]})
    res = gf_bin_bisimilar(at(m, "a"), at(n, "l"))
    assert not res.equivalent


def test_gf_bin_pair_points():
    m = mk(["a", "b"], binary={"R": [("a", "b")]})
    n = mk(["x", "y"], binary={"R": [("x", "y")]})
    assert gf_bin_bisimilar(at(m, "a", "b"), at(n, "x", "y")).equivalent
    with pytest.raises(Exception):
        gf_bin_bisimilar(at(m, "a", "b"), at(n, "x"))


def test_gf_bin_isolated_nodes_flagged():
    m = mk(["a", "b", "i"], binary={"R": [("a", "b")]})
    n = mk(["x", "y"], binary={"R": [("x", "y")]})
    res = gf_bin_bisimilar(at(m, "a"), at(n, "x"))
    assert res.equivalent
    assert any("isolated" in note for note in res.notes)


# --- invariance properties -------------------------------------------------------


def both_dup(seed):
    """A structure next to a copy with one node split in two."""
    from logicwb.generators import duplicate_node_pair, random_pointed

    rng = random.Random(seed)
    seed_model = random_pointed(rng, max_nodes=5, unary=("p", "q"))
    return duplicate_node_pair(rng, seed_model)


@given(st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_ml_invariance(seed):
    base, twin = both_dup(seed)
    if not bisimilar(base, twin).equivalent:
        return
    rng = random.Random(seed ^ 0xB15)
    for _ in range(5):
        f = random_modal(rng, depth=3, letters=("p", "q"))
        assert eval_modal(base, f) == eval_modal(twin, f)


@given(st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_gml_invariance(seed):
    base, twin = both_dup(seed)
    if not counting_bisimilar(base, twin).equivalent:
        return
    rng = random.Random(seed ^ 0x6E4)
    for _ in range(5):
        f = random_modal(rng, depth=2, letters=("p", "q"), max_grade=3)
        assert eval_modal(base, f) == eval_modal(twin, f)


def test_bullet_breaks_bisimulation_invariance():
    """R-bisimilar pair that quasi-mode *p tells apart."""
    with_rb = mk(
        ["w"],
        {"p": ["w"]},
        {ACCESS: [("w", "w")], ACCESS_B: [("w", "w")]},
    )
    without = mk(
        ["u", "v"],
        {"p": ["u", "v"]},
        {ACCESS: [("u", "v"), ("v", "u"), ("u", "u"), ("v", "v")]},
    )
    a, b = at(with_rb, "w"), at(without, "u")
    assert bisimilar(a, b).equivalent
    f = parse_modal("*p")
    assert eval_modal(a, f, SemanticsMode.QUASI)
    assert not eval_modal(b, f, SemanticsMode.QUASI)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_counting_implies_bisimilar(seed):
    base, twin = both_dup(seed)
    if counting_bisimilar(base, twin).equivalent:
        assert bisimilar(base, twin).equivalent


def test_isomorphic_implies_counting():
    m = chain(3, {"p": ["w1"]})
    n = mk(
        ["u0", "u1", "u2"],
        {"p": ["u1"]},
        {ACCESS: [("u0", "u1"), ("u1", "u2")]},
    )
    assert isomorphic(m, n)
    assert counting_bisimilar(at(m, "w0"), at(n, "u0")).equivalent
