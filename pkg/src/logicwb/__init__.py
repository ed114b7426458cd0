"""Workbench for modal, graded, relation-algebraic and guarded logics on finite structures."""

from logicwb.decision import (
    SatResult,
    bounded_model_search,
    frame_axioms_valid_on_K,
    reduce_bullet,
    sat_basic_modal,
    sat_bullet,
)
from logicwb.equivalence import (
    GameResult,
    PartialMap,
    bisimilar,
    bisimilar_depth,
    counting_bisimilar,
    gf_bin_bisimilar,
    pebble_equiv,
    potential_iso,
)
from logicwb.semantics import (
    ModalEvalResult,
    SemanticsMode,
    eval_fo,
    eval_modal,
    eval_modal_full,
    eval_ra,
    ra_equiv_top,
)
from logicwb.structures import (
    ACCESS,
    ACCESS_B,
    LogicError,
    PointedStructure,
    PreconditionError,
    Structure,
    StructureError,
    cut_depth,
    dump_structure,
    generated_submodel,
    induced,
    is_frame_K,
    is_tree,
    isomorphic,
    load_pointed,
    load_structure,
    restrict,
)
from logicwb.syntax import (
    ParseError,
    Vocabulary,
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
from logicwb.transforms import (
    add_copies,
    cut_guarded,
    gf_unravel_bin,
    gml_char_formula,
    guarded_dist,
    ra_relativize,
    ra_to_fo3,
    subtree,
    unravel,
)

__all__ = [
    "ACCESS",
    "ACCESS_B",
    "GameResult",
    "LogicError",
    "ModalEvalResult",
    "ParseError",
    "PartialMap",
    "PointedStructure",
    "PreconditionError",
    "SatResult",
    "SemanticsMode",
    "Structure",
    "StructureError",
    "Vocabulary",
    "add_copies",
    "bisimilar",
    "bisimilar_depth",
    "bounded_model_search",
    "counting_bisimilar",
    "cut_depth",
    "cut_guarded",
    "depth_gf",
    "depth_modal",
    "dump_structure",
    "eval_fo",
    "eval_modal",
    "eval_modal_full",
    "eval_ra",
    "frame_axioms_valid_on_K",
    "free_vars",
    "generated_submodel",
    "gf_bin_bisimilar",
    "gf_unravel_bin",
    "gml_char_formula",
    "guarded_dist",
    "induced",
    "is_frame_K",
    "is_gf_bin",
    "is_tree",
    "isomorphic",
    "load_pointed",
    "load_structure",
    "parse_fo",
    "parse_modal",
    "parse_ra",
    "pebble_equiv",
    "potential_iso",
    "print_fo",
    "print_modal",
    "print_ra",
    "ra_equiv_top",
    "ra_relativize",
    "ra_to_fo3",
    "reduce_bullet",
    "relativize_modal",
    "rename",
    "restrict",
    "sat_basic_modal",
    "sat_bullet",
    "size",
    "subformulas",
    "substitute",
    "subtree",
    "unravel",
    "vocabulary_of",
]
