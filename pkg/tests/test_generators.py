"""Sampling and enumeration helpers used by the check suites."""

from __future__ import annotations

import math
import random
from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from logicwb.equivalence import bisimilar
from logicwb.generators import (
    duplicate_node_pair,
    enumerate_bimodal_frames,
    enumerate_trees,
    linear_order,
    random_gf_bin,
    random_k_pointed,
    random_modal,
    random_pointed,
    random_ra,
    random_structure,
)
from logicwb.structures import ACCESS, is_frame_K, is_tree, isomorphic
from logicwb.syntax import (
    Bullet,
    BulletDual,
    DiamondGeq,
    RaTerm,
    is_gf_bin,
    subformulas,
)


def tree_counts(up_to: int, colors: int) -> dict[int, int]:
    """Rooted unordered colored trees by node count, via the multiset recurrence.

    A tree is a colored root plus a multiset of subtrees; multisets of k
    objects drawn from c types count as C(c+k-1, k).
    """
    t = {1: colors}
    for n in range(2, up_to + 1):
        ways = [1] + [0] * (n - 1)
        for size in range(1, n):
            cnt = t[size]
            new = [0] * n
            for base, b in enumerate(ways):
                if b == 0:
                    continue
                k = 0
                while base + k * size < n:
                    new[base + k * size] += b * math.comb(cnt + k - 1, k)
                    k += 1
            ways = new
        t[n] = colors * ways[n - 1]
    return t


def test_tree_enumeration_counts():
    expected = tree_counts(5, 4)  # two letters: four colorings per node
    assert expected == {1: 4, 2: 16, 3: 104, 4: 752, 5: 5996}
    got = Counter(len(t.structure.domain) for t in enumerate_trees(5, ("p", "q")))
    assert dict(got) == expected


def test_tree_enumeration_shape_and_uniqueness():
    trees = enumerate_trees(3, ("p",))
    assert all(is_tree(t) for t in trees)
    for i, a in enumerate(trees):
        for b in trees[i + 1 :]:
            assert not isomorphic(a.structure, b.structure)


def test_tree_enumeration_deterministic():
    a = enumerate_trees(3, ("p", "q"))
    b = enumerate_trees(3, ("p", "q"))
    assert a == b


def test_frame_enumeration_counts():
    frames = list(enumerate_bimodal_frames(2))
    # every pair of relations over n nodes: 2^(2n^2)
    assert len(frames) == 2**2 + 2**8


def test_linear_order_shape():
    m = linear_order(4)
    lt = m.rel("lt")
    assert all((a, a) not in lt for a in m.domain)
    assert all(
        (a, c) in lt
        for a, b in lt
        for b2, c in lt
        if b == b2
    )
    n = len(m.domain)
    assert len(lt) == n * (n - 1) // 2


@given(st.integers(0, 100_000))
@settings(max_examples=50, deadline=None)
def test_random_k_pointed_is_k(seed):
    rng = random.Random(seed)
    pm = random_k_pointed(rng, max_nodes=6, unary=("p",))
    assert is_frame_K(pm.structure)


@given(st.integers(0, 100_000))
@settings(max_examples=50, deadline=None)
def test_random_modal_respects_fragment(seed):
    rng = random.Random(seed)
    plain = random_modal(rng, depth=3, letters=("p",))
    assert not any(
        isinstance(g, (Bullet, BulletDual, DiamondGeq)) for g in subformulas(plain)
    )
    graded = random_modal(rng, depth=2, letters=("p",), max_grade=3)
    for g in subformulas(graded):
        if isinstance(g, DiamondGeq):
            assert 0 <= g.grade <= 3


@given(st.integers(0, 100_000))
@settings(max_examples=50, deadline=None)
def test_random_gf_bin_is_guarded(seed):
    rng = random.Random(seed)
    f = random_gf_bin(rng, depth=2, unary=("P", "Q"), binary=("R", "S"))
    assert is_gf_bin(f)


@given(st.integers(0, 100_000))
@settings(max_examples=50, deadline=None)
def test_random_ra_is_term(seed):
    rng = random.Random(seed)
    t = random_ra(rng, budget=6, names=("R", "S"))
    assert isinstance(t, RaTerm)


@given(st.integers(0, 100_000))
@settings(max_examples=50, deadline=None)
def test_duplicate_node_pair_bisimilar(seed):
    rng = random.Random(seed)
    base = random_pointed(rng, max_nodes=5, unary=("p", "q"))
    left, right = duplicate_node_pair(rng, base)
    assert len(right.structure.domain) == len(left.structure.domain) + 1
    assert bisimilar(left, right).equivalent


@given(st.integers(0, 100_000))
@settings(max_examples=50, deadline=None)
def test_random_structure_bounds(seed):
    rng = random.Random(seed)
    m = random_structure(rng, max_nodes=4, unary=("p",))
    assert 1 <= len(m.domain) <= 4
    assert m.pred("p") <= m.node_set()
    assert all(a in m.node_set() and b in m.node_set() for a, b in m.rel(ACCESS))
