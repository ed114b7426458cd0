"""Acceptance gate: one test per headline property, with pinned budgets.

Each test runs the matching check suite end to end over a freshly built
corpus, requires zero failures, and enforces the suite's wall-clock budget.
Run with -v for the per-property pass/fail listing.
"""

from __future__ import annotations

import importlib.util
from pathlib import Path

import pytest

from logicwb.checks import SUITES, load_corpus_dir

SEED = 2024

BUDGET_MS = {
    "unravel-invariance": 10_000,
    "bisim-invariance": 10_000,
    "char-formula": 60_000,
    "ra-relativize": 10_000,
    "ra2fo": 20_000,
    "distance-depth": 10_000,
    "gf-unravel": 30_000,
    "reduction-equisat": 60_000,
    "axioms-K": 60_000,
    "pebble-vs-iso": 60_000,
}


def _load_corpus_builder():
    root = Path(__file__).resolve().parent.parent
    spec = importlib.util.spec_from_file_location(
        "make_corpus", root / "scripts" / "make_corpus.py"
    )
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    counts = _load_corpus_builder().build(out, SEED)
    assert all(n > 0 for n in counts.values())
    return out


def run_suite(name, corpus_dir, cases):
    sub = load_corpus_dir(str(corpus_dir)) if corpus_dir is not None else []
    report = SUITES[name](sub, seed=SEED, cases=cases)
    budget = BUDGET_MS[name]
    line = f"{name}: {report.cases} cases, {len(report.failures)} failures, {report.elapsed_ms} ms (budget {budget} ms)"
    print(("PASS " if not report.failures else "FAIL ") + line)
    assert report.failures == [], line
    assert report.elapsed_ms < budget, line
    return report


def test_gml_invariant_under_unraveling(corpus):
    report = run_suite("unravel-invariance", corpus / "modal", 200)
    assert report.cases == 200


def test_ml_invariant_under_bisimulation_and_bullet_is_not(corpus):
    report = run_suite("bisim-invariance", corpus / "modal", 200)
    assert report.cases >= 200  # the fixed bullet counterexample rides along


def test_characteristic_formulas_capture_isomorphism(corpus):
    report = run_suite("char-formula", corpus / "trees", 2000)
    # exhaustive soundness over every 2-letter tree with <= 5 nodes,
    # exhaustive completeness on the families small enough for the full grid
    assert report.cases > 10_000


def test_ra_relativization_matches_induced_submodel(corpus):
    report = run_suite("ra-relativize", corpus / "ra", 300)
    assert report.cases == 300


def test_ra_translation_stays_in_three_variables(corpus):
    report = run_suite("ra2fo", corpus / "ra", 300)
    assert report.cases == 300


def test_guarded_formulas_see_only_guarded_distance(corpus):
    report = run_suite("distance-depth", corpus / "guarded", 200)
    assert report.cases == 200


def test_guarded_unraveling_tree_distance_is_true_distance(corpus):
    report = run_suite("gf-unravel", corpus / "guarded", 100)
    assert report.cases >= 100


def test_bullet_reduction_is_equisatisfiable(corpus):
    report = run_suite("reduction-equisat", None, 150)
    assert report.cases == 150


def test_bullet_axioms_define_the_frame_class(corpus):
    report = run_suite("axioms-K", corpus / "frames", 0)
    # every bimodal frame on <= 3 nodes, both directions of the correspondence
    assert report.cases >= 2**2 + 2**8 + 2**18


def test_pebble_games_track_variable_count_and_isomorphism(corpus):
    report = run_suite("pebble-vs-iso", None, 100)
    assert report.cases >= 200  # antitone sweep plus the iso comparison pairs
