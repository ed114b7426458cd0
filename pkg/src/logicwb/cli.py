"""Command-line front end.

Subcommands: eval, sat, equiv, transform, check.  Exit codes follow the
BSD sysexits convention where it applies: 64 usage, 65 unparseable input,
66 missing file or empty corpus, 70 semantic precondition failure.  The
sat command exits 0 when satisfiable and 1 when not.  Output on stdout is
deterministic given flags, input files and --seed; progress and summaries
go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from json import JSONDecodeError
from pathlib import Path

from logicwb.structures import (
    ACCESS,
    LogicError,
    PointedStructure,
    PreconditionError,
    Structure,
    StructureError,
    cut_depth,
    dump_structure,
    generated_submodel,
    load_pointed,
    load_structure,
    restrict,
)
from logicwb.syntax import (
    ParseError,
    Vocabulary,
    parse_fo,
    parse_modal,
    parse_ra,
    print_fo,
    print_modal,
    print_ra,
    relativize_modal,
    size,
)
from logicwb.semantics import (
    SemanticsMode,
    eval_fo,
    eval_modal,
    eval_modal_full,
    eval_ra,
    ra_equiv_top,
)
from logicwb.equivalence import (
    PartialMap,
    bisimilar,
    bisimilar_depth,
    counting_bisimilar,
    gf_bin_bisimilar,
    pebble_equiv,
    potential_iso,
)
from logicwb.transforms import (
    add_copies,
    cut_guarded,
    gf_unravel_bin,
    gml_char_formula,
    ra_relativize,
    ra_to_fo3,
    subtree,
    unravel,
)
from logicwb.decision import sat_basic_modal, sat_bullet
from logicwb.checks import CORPUS_REQUIRED, SUITES, load_corpus_dir

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_SEMANTIC = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse default exits 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


class _Usage(Exception):
    pass


def _color_enabled() -> bool:
    mode = os.environ.get("LOGICWB_COLOR", "auto")
    if mode == "always":
        return True
    if mode == "never":
        return False
    return sys.stderr.isatty()


def _summary(text: str, ok: bool) -> None:
    if _color_enabled():
        code = "32" if ok else "31"
        text = f"\x1b[{code}m{text}\x1b[0m"
    print(text, file=sys.stderr)


def _read_file(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _formula_text(args) -> str:
    if getattr(args, "formula", None) is not None:
        return args.formula
    if getattr(args, "formula_file", None) is not None:
        return _read_file(args.formula_file)
    raise _Usage("a formula is required (--formula or --formula-file)")


def _mode(args) -> SemanticsMode:
    return SemanticsMode.QUASI if args.mode == "quasi" else SemanticsMode.INTENDED


def _load_any(text: str):
    """A pointed structure when the document has points, else a plain one."""
    if "points" in json.loads(text):
        return load_pointed(text)
    return load_structure(text)


def _bare(m) -> Structure:
    return m.structure if isinstance(m, PointedStructure) else m


def _load_pointed_arg(spec: str, fallback_plain: bool = False):
    """Load "file.json" or "file.json:w" or "file.json:w,v"; an explicit
    point suffix overrides points stored in the file."""
    path, sep, suffix = spec.rpartition(":")
    if not sep or "/" in suffix or suffix.endswith(".json"):
        path, suffix = spec, ""
    loaded = _load_any(_read_file(path))
    if suffix:
        return PointedStructure(_bare(loaded), tuple(suffix.split(",")))
    if not fallback_plain and not isinstance(loaded, PointedStructure):
        raise StructureError(f"{path} has no points; use {path}:w to name one")
    return loaded


def _pointed_model(args) -> PointedStructure:
    if args.model is None:
        raise _Usage("--model is required for this operation")
    loaded = _load_pointed_arg(args.model, fallback_plain=True)
    if args.point is not None:
        return PointedStructure(_bare(loaded), (args.point,))
    if getattr(args, "points", None):
        return PointedStructure(_bare(loaded), tuple(args.points.split(",")))
    if not isinstance(loaded, PointedStructure):
        raise StructureError("the model has no points; pass --point or --points")
    return loaded


def _plain_model(args) -> Structure:
    """Points in the document or a :suffix are allowed and ignored."""
    if args.model is None:
        raise _Usage("--model is required for this operation")
    return _bare(_load_pointed_arg(args.model, fallback_plain=True))


# --- eval -----------------------------------------------------------------------


def _cmd_eval(args) -> int:
    text = _formula_text(args)
    if args.logic in ("ml", "gml", "mlb"):
        f = parse_modal(text)
        m = _pointed_model(args)
        if args.explain:
            result = eval_modal_full(m, f, _mode(args))
            print("true" if result.value else "false")
            for sub in sorted(result.trace, key=lambda g: (size(g), print_modal(g))):
                print(f"  {str(result.trace[sub]).lower()}  {print_modal(sub)}")
            if result.bullet_vacuous:
                print("  note: bullet subformulas are vacuously false here")
        else:
            print("true" if eval_modal(m, f, _mode(args)) else "false")
        return 0
    if args.logic == "ra":
        t = parse_ra(text)
        m = _plain_model(args)
        if args.relation:
            pairs = eval_ra(m, t)
            index = {node: i for i, node in enumerate(m.domain)}
            ordered = sorted(pairs, key=lambda p: (index[p[0]], index[p[1]]))
            print(json.dumps([list(p) for p in ordered]))
        else:
            print("true" if ra_equiv_top(m, t) else "false")
        return 0
    f = parse_fo(text)
    m = _plain_model(args)
    assignment = {}
    if args.assign:
        for part in args.assign.split(","):
            var, eq, node = part.partition("=")
            if not eq:
                raise _Usage(f"bad --assign entry {part!r}; use x=node")
            assignment[var.strip()] = node.strip()
    print("true" if eval_fo(m, assignment, f) else "false")
    return 0


# --- sat ------------------------------------------------------------------------


def _cmd_sat(args) -> int:
    f = parse_modal(_formula_text(args))
    result = sat_bullet(f) if args.logic == "mlb" else sat_basic_modal(f)
    print("sat" if result.satisfiable else "unsat")
    if result.satisfiable and args.witness:
        Path(args.witness).write_text(dump_structure(result.witness), encoding="utf-8")
    return 0 if result.satisfiable else 1


# --- equiv ----------------------------------------------------------------------


def _witness_json(witness) -> object:
    if witness is None:
        return None
    if isinstance(witness, PartialMap):
        return sorted([a, b] for a, b in witness.pairs)
    if isinstance(witness, (frozenset, set, tuple, list)):
        return sorted(
            (_witness_json(x) for x in witness),
            key=lambda item: json.dumps(item, sort_keys=True),
        )
    if isinstance(witness, str):
        return witness
    return repr(witness)


def _cmd_equiv(args) -> int:
    plain = args.kind in ("pebble", "piso")
    left = _load_pointed_arg(args.left, fallback_plain=plain)
    right = _load_pointed_arg(args.right, fallback_plain=plain)
    if plain:
        if isinstance(left, PointedStructure):
            left = left.structure
        if isinstance(right, PointedStructure):
            right = right.structure
    if args.kind == "bisim":
        result = bisimilar(left, right)
    elif args.kind == "bisim-k":
        if args.k is None:
            raise _Usage("--k is required for bisim-k")
        result = bisimilar_depth(left, right, args.k)
    elif args.kind == "counting":
        result = counting_bisimilar(left, right)
    elif args.kind == "pebble":
        if args.k is None:
            raise _Usage("--k is required for pebble")
        result = pebble_equiv(left, right, args.k)
    elif args.kind == "gfbin":
        result = gf_bin_bisimilar(left, right)
    else:
        verdict = potential_iso(left, right)
        print("equivalent" if verdict else "distinguishable")
        return 0
    print("equivalent" if result.equivalent else "distinguishable")
    if args.witness:
        print(json.dumps(_witness_json(result.witness)))
    for note in result.notes:
        print(f"note: {note}", file=sys.stderr)
    return 0


# --- transform ------------------------------------------------------------------


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _require(value, flag: str):
    if value is None:
        raise _Usage(f"{flag} is required for this op")
    return value


def _cmd_transform(args) -> int:
    op = args.op
    if op == "unravel":
        out = unravel(_pointed_model(args), _require(args.depth, "--depth"))
        _emit(args, dump_structure(out))
    elif op == "cut":
        out = cut_depth(_pointed_model(args), _require(args.depth, "--depth"))
        _emit(args, dump_structure(out))
    elif op == "gensub":
        _emit(args, dump_structure(generated_submodel(_pointed_model(args))))
    elif op == "restrict":
        m = _plain_model(args)
        _emit(args, dump_structure(restrict(m, _require(args.pred, "--pred"))))
    elif op == "subtree":
        out = subtree(_pointed_model(args), _require(args.pred, "--pred"))
        _emit(args, dump_structure(out))
    elif op == "gf-unravel":
        out = gf_unravel_bin(_pointed_model(args), _require(args.depth, "--depth"))
        _emit(args, dump_structure(out))
    elif op == "guarded-cut":
        out = cut_guarded(_pointed_model(args), _require(args.depth, "--depth"))
        _emit(args, dump_structure(out))
    elif op == "add-copies":
        host = _pointed_model(args)
        tree = load_pointed(_read_file(_require(args.tree, "--tree")))
        out = add_copies(
            host, _require(args.at, "--at"), tree, _require(args.count, "--count")
        )
        _emit(args, dump_structure(out))
    elif op == "char-formula":
        m = _pointed_model(args)
        unary = tuple(args.vocab.split(",")) if args.vocab else tuple(sorted(m.structure.unary))
        psi = gml_char_formula(m, Vocabulary(unary=unary, binary=(ACCESS,)))
        _emit(args, print_modal(psi) + "\n")
    elif op == "ra-relativize":
        t = parse_ra(_formula_text(args))
        _emit(args, print_ra(ra_relativize(t, _require(args.rel, "--rel"))) + "\n")
    elif op == "ra2fo":
        t = parse_ra(_formula_text(args))
        _emit(args, print_fo(ra_to_fo3(t)) + "\n")
    else:  # relativize-ml
        f = parse_modal(_formula_text(args))
        _emit(args, print_modal(relativize_modal(f, _require(args.pred, "--pred"))) + "\n")
    return 0


# --- check ----------------------------------------------------------------------


def _cmd_check(args) -> int:
    corpus: list[tuple[str, str]] = []
    if args.corpus is not None:
        try:
            corpus = load_corpus_dir(args.corpus)
        except FileNotFoundError as exc:
            print(f"logicwb check: {exc}", file=sys.stderr)
            return EX_NOINPUT
        if not corpus:
            print(f"logicwb check: corpus is empty: {args.corpus}", file=sys.stderr)
            return EX_NOINPUT
    elif args.suite in CORPUS_REQUIRED:
        raise _Usage(f"suite {args.suite} needs --corpus")
    suite = SUITES[args.suite]
    kwargs = {} if args.cases is None else {"cases": args.cases}
    try:
        report = suite(corpus, args.seed, **kwargs)
    except PreconditionError as exc:
        # a corpus without a single usable structure is as good as empty
        print(f"logicwb check: {exc}", file=sys.stderr)
        return EX_NOINPUT
    print(json.dumps(report.to_json(), indent=2))
    ok = not report.failures
    _summary(
        f"suite {report.suite}: {report.cases} cases, "
        f"{len(report.failures)} failures, {report.elapsed_ms} ms",
        ok,
    )
    return 0 if ok else 1


# --- wiring ---------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="logicwb", description="finite-model logic workbench")
    commands = parser.add_subparsers(dest="command", required=True)

    p_eval = commands.add_parser("eval", help="evaluate a formula over a structure")
    p_eval.add_argument("--logic", required=True, choices=("ml", "gml", "mlb", "ra", "fo"))
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--point")
    p_eval.add_argument("--points")
    p_eval.add_argument("--formula")
    p_eval.add_argument("--formula-file")
    p_eval.add_argument("--mode", choices=("intended", "quasi"), default="intended")
    p_eval.add_argument("--explain", action="store_true")
    p_eval.add_argument("--relation", action="store_true")
    p_eval.add_argument("--assign", help="fo variable assignment, e.g. x=a,y=b")
    p_eval.set_defaults(func=_cmd_eval)

    p_sat = commands.add_parser("sat", help="decide satisfiability")
    p_sat.add_argument("--logic", required=True, choices=("ml", "mlb"))
    p_sat.add_argument("--formula")
    p_sat.add_argument("--formula-file")
    p_sat.add_argument("--witness", help="write the witness structure here when sat")
    p_sat.set_defaults(func=_cmd_sat)

    p_equiv = commands.add_parser("equiv", help="compare two structures")
    p_equiv.add_argument(
        "--kind",
        required=True,
        choices=("bisim", "bisim-k", "counting", "pebble", "piso", "gfbin"),
    )
    p_equiv.add_argument("--left", required=True, help="m.json or m.json:w")
    p_equiv.add_argument("--right", required=True)
    p_equiv.add_argument("--k", type=int)
    p_equiv.add_argument("--witness", action="store_true")
    p_equiv.set_defaults(func=_cmd_equiv)

    p_tr = commands.add_parser("transform", help="apply a model or formula transform")
    p_tr.add_argument(
        "--op",
        required=True,
        choices=(
            "unravel",
            "cut",
            "gensub",
            "restrict",
            "subtree",
            "gf-unravel",
            "guarded-cut",
            "add-copies",
            "char-formula",
            "ra-relativize",
            "ra2fo",
            "relativize-ml",
        ),
    )
    p_tr.add_argument("--model")
    p_tr.add_argument("--point")
    p_tr.add_argument("--points")
    p_tr.add_argument("--formula")
    p_tr.add_argument("--formula-file")
    p_tr.add_argument("--out")
    p_tr.add_argument("--depth", type=int)
    p_tr.add_argument("--pred")
    p_tr.add_argument("--rel")
    p_tr.add_argument("--count", type=int)
    p_tr.add_argument("--vocab", help="comma-separated unary names")
    p_tr.add_argument("--tree", help="tree structure file for add-copies")
    p_tr.add_argument("--at", help="host node for add-copies")
    p_tr.set_defaults(func=_cmd_transform)

    p_check = commands.add_parser("check", help="run a property suite")
    p_check.add_argument("--suite", required=True, choices=sorted(SUITES))
    p_check.add_argument("--corpus")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--cases", type=int)
    p_check.set_defaults(func=_cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"logicwb: usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except ParseError as exc:
        print(f"logicwb: parse error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except JSONDecodeError as exc:
        print(f"logicwb: bad JSON document: {exc}", file=sys.stderr)
        return EX_DATAERR
    except StructureError as exc:
        print(f"logicwb: bad structure document: {exc}", file=sys.stderr)
        return EX_DATAERR
    except FileNotFoundError as exc:
        print(f"logicwb: file not found: {exc.filename or exc}", file=sys.stderr)
        return EX_NOINPUT
    except IsADirectoryError as exc:
        print(f"logicwb: not a file: {exc.filename or exc}", file=sys.stderr)
        return EX_NOINPUT
    except LogicError as exc:
        print(f"logicwb: {exc}", file=sys.stderr)
        return EX_SEMANTIC


if __name__ == "__main__":
    raise SystemExit(main())
