"""Finite relational structures, their JSON encoding, and model-level operations.

A structure doubles as a Kripke model: the binary relation named ``R`` is the
accessibility relation of the modal operators, and ``Rb`` is the second
accessibility relation of bimodal frames.  Absent relation names denote the
empty relation, so every structure can be read over any vocabulary.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

ACCESS = "R"
ACCESS_B = "Rb"


class LogicError(Exception):
    """Base class for every error raised by this package."""


class StructureError(LogicError):
    """Malformed structure document or violated structure invariant."""


class PreconditionError(LogicError):
    """An operation was called outside its stated domain."""


def _check_node(structure_nodes: frozenset[str], node: str, where: str) -> None:
    if node not in structure_nodes:
        raise StructureError(f"{where} mentions {node!r}, which is not in the domain")


@dataclass(frozen=True, eq=True)
class Structure:
    """A finite structure with unary and binary relations over string node ids.

    ``domain`` keeps the input order so serialization is byte-stable.  The
    unary and binary name sets must be disjoint, and every interpreted node
    must be declared in the domain.
    """

    domain: tuple[str, ...]
    unary: dict[str, frozenset[str]] = field(default_factory=dict)
    binary: dict[str, frozenset[tuple[str, str]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.domain:
            raise StructureError("domain must be non-empty")
        seen: set[str] = set()
        for node in self.domain:
            if not isinstance(node, str) or not node:
                raise StructureError("node ids must be non-empty strings")
            if node in seen:
                raise StructureError(f"duplicate node id {node!r}")
            seen.add(node)
        nodes = frozenset(self.domain)
        clash = set(self.unary) & set(self.binary)
        if clash:
            raise StructureError(f"names used at both arities: {sorted(clash)}")
        for name, ext in self.unary.items():
            for node in ext:
                _check_node(nodes, node, f"unary {name!r}")
        for name, ext in self.binary.items():
            for pair in ext:
                if len(pair) != 2:
                    raise StructureError(f"binary {name!r} holds a non-pair {pair!r}")
                _check_node(nodes, pair[0], f"binary {name!r}")
                _check_node(nodes, pair[1], f"binary {name!r}")

    def pred(self, name: str) -> frozenset[str]:
        """Extension of a unary name; empty when the name is absent."""
        return self.unary.get(name, frozenset())

    def rel(self, name: str) -> frozenset[tuple[str, str]]:
        """Extension of a binary name; empty when the name is absent."""
        return self.binary.get(name, frozenset())

    def node_set(self) -> frozenset[str]:
        return frozenset(self.domain)


@dataclass(frozen=True, eq=True)
class PointedStructure:
    """A structure with a non-empty tuple of distinguished nodes (at most two)."""

    structure: Structure
    points: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise StructureError("points must be non-empty")
        if len(self.points) > 2:
            raise StructureError("at most two points are supported")
        nodes = self.structure.node_set()
        for p in self.points:
            _check_node(nodes, p, "points")

    @property
    def point(self) -> str:
        """The single point; an error when the structure carries a pair."""
        if len(self.points) != 1:
            raise PreconditionError("operation needs a single-pointed structure")
        return self.points[0]


def successors(m: Structure, name: str = ACCESS) -> dict[str, tuple[str, ...]]:
    """Successor lists of a binary relation, in domain order on both axes."""
    index = {node: i for i, node in enumerate(m.domain)}
    out: dict[str, list[str]] = {node: [] for node in m.domain}
    for a, b in sorted(m.rel(name), key=lambda p: (index[p[0]], index[p[1]])):
        out[a].append(b)
    return {node: tuple(vs) for node, vs in out.items()}


def _as_text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise StructureError(f"structure document is not UTF-8: {exc}") from exc
    return data


def _parse_document(data: bytes | str, *, pointed: bool) -> dict:
    try:
        doc = json.loads(_as_text(data))
    except json.JSONDecodeError as exc:
        raise StructureError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StructureError("structure document must be a JSON object")
    allowed = {"domain", "unary", "binary"} | ({"points"} if pointed else set())
    extra = set(doc) - allowed
    if extra:
        raise StructureError(f"unexpected keys: {sorted(extra)}")
    if "domain" not in doc:
        raise StructureError("missing 'domain'")
    return doc


def _structure_from_doc(doc: dict) -> Structure:
    domain = doc["domain"]
    if not isinstance(domain, list) or not all(isinstance(x, str) for x in domain):
        raise StructureError("'domain' must be a list of strings")
    unary_doc = doc.get("unary", {})
    binary_doc = doc.get("binary", {})
    if not isinstance(unary_doc, dict) or not isinstance(binary_doc, dict):
        raise StructureError("'unary' and 'binary' must be objects")
    unary: dict[str, frozenset[str]] = {}
    for name, ext in unary_doc.items():
        if not isinstance(ext, list) or not all(isinstance(x, str) for x in ext):
            raise StructureError(f"unary {name!r} must be a list of node ids")
        unary[name] = frozenset(ext)
    binary: dict[str, frozenset[tuple[str, str]]] = {}
    for name, ext in binary_doc.items():
        if not isinstance(ext, list):
            raise StructureError(f"binary {name!r} must be a list of pairs")
        pairs = set()
        for item in ext:
            if (
                not isinstance(item, list)
                or len(item) != 2
                or not all(isinstance(x, str) for x in item)
            ):
                raise StructureError(f"binary {name!r} holds a non-pair {item!r}")
            pairs.add((item[0], item[1]))
        binary[name] = frozenset(pairs)
    return Structure(tuple(domain), unary, binary)


def load_structure(data: bytes | str) -> Structure:
    """Parse a plain structure document.

    The document is a JSON object with keys ``domain`` (list of node ids),
    ``unary`` (name to list of ids) and ``binary`` (name to list of pairs).
    A ``points`` key is rejected here; use :func:`load_pointed` for it.
    """
    return _structure_from_doc(_parse_document(data, pointed=False))


def load_pointed(data: bytes | str) -> PointedStructure:
    """Parse a pointed structure document (adds a ``points`` list)."""
    doc = _parse_document(data, pointed=True)
    if "points" not in doc:
        raise StructureError("missing 'points'")
    points = doc["points"]
    if (
        not isinstance(points, list)
        or not points
        or not all(isinstance(x, str) for x in points)
    ):
        raise StructureError("'points' must be a non-empty list of node ids")
    return PointedStructure(_structure_from_doc(doc), tuple(points))


def dump_structure(m: Structure | PointedStructure) -> str:
    """Serialize to the JSON interchange format, deterministically.

    Relation names are sorted; extensions are listed in domain order, so two
    equal structures always produce byte-identical documents.
    """
    if isinstance(m, PointedStructure):
        structure, points = m.structure, m.points
    else:
        structure, points = m, None
    index = {node: i for i, node in enumerate(structure.domain)}
    doc: dict = {"domain": list(structure.domain)}
    doc["unary"] = {
        name: sorted(ext, key=index.__getitem__)
        for name, ext in sorted(structure.unary.items())
    }
    doc["binary"] = {
        name: [list(p) for p in sorted(ext, key=lambda p: (index[p[0]], index[p[1]]))]
        for name, ext in sorted(structure.binary.items())
    }
    if points is not None:
        doc["points"] = list(points)
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def induced(m: Structure, nodes: frozenset[str] | set[str]) -> Structure:
    """Induced substructure on a non-empty subset of the domain."""
    keep = set(nodes)
    missing = keep - set(m.domain)
    if missing:
        raise StructureError(f"nodes not in domain: {sorted(missing)}")
    if not keep:
        raise PreconditionError("induced substructure on the empty set")
    domain = tuple(n for n in m.domain if n in keep)
    unary = {name: ext & keep for name, ext in m.unary.items()}
    binary = {
        name: frozenset(p for p in ext if p[0] in keep and p[1] in keep)
        for name, ext in m.binary.items()
    }
    return Structure(domain, unary, binary)


def _reach(m: Structure, start: str, limit: int | None) -> dict[str, int]:
    """Nodes reachable from start via R, with their distances; limit caps depth."""
    succ = successors(m, ACCESS)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        d = dist[node]
        if limit is not None and d >= limit:
            continue
        for nxt in succ[node]:
            if nxt not in dist:
                dist[nxt] = d + 1
                queue.append(nxt)
    return dist


def generated_submodel(m: PointedStructure) -> PointedStructure:
    """Restrict to the nodes R-reachable from the point (in zero or more steps)."""
    w = m.point
    nodes = frozenset(_reach(m.structure, w, None))
    return PointedStructure(induced(m.structure, nodes), (w,))


def cut_depth(m: PointedStructure, k: int) -> PointedStructure:
    """Restrict to the nodes at R-distance at most k from the point."""
    if k < 0:
        raise PreconditionError("depth must be non-negative")
    w = m.point
    nodes = frozenset(_reach(m.structure, w, k))
    return PointedStructure(induced(m.structure, nodes), (w,))


def restrict(m: Structure, pred: str) -> Structure:
    """Induced substructure on the extension of a unary name (kept in the output)."""
    nodes = m.pred(pred)
    if not nodes:
        raise PreconditionError(f"restriction set {pred!r} is empty")
    return induced(m, nodes)


def is_tree(m: PointedStructure) -> bool:
    """True when R forms a tree rooted at the point.

    The point has no R-predecessor, every other node has exactly one, and all
    nodes are reachable from the point; together these rule out cycles.
    """
    root = m.point
    structure = m.structure
    preds: dict[str, int] = {node: 0 for node in structure.domain}
    for a, b in structure.rel(ACCESS):
        preds[b] += 1
    if preds[root] != 0:
        return False
    if any(preds[node] != 1 for node in structure.domain if node != root):
        return False
    return len(_reach(structure, root, None)) == len(structure.domain)


def is_frame_K(m: Structure) -> bool:
    """True when Rb is a subset of R and every Rb-target is R-reflexive."""
    r = m.rel(ACCESS)
    for a, b in m.rel(ACCESS_B):
        if (a, b) not in r or (b, b) not in r:
            return False
    return True


def _signature(m: Structure, names_u: tuple[str, ...], names_b: tuple[str, ...]):
    """Per-node local invariants used to prune the isomorphism search."""
    sig = {}
    for node in m.domain:
        colors = tuple(node in m.pred(p) for p in names_u)
        degs = []
        for r in names_b:
            ext = m.rel(r)
            out_d = sum(1 for p in ext if p[0] == node)
            in_d = sum(1 for p in ext if p[1] == node)
            degs.append((out_d, in_d, (node, node) in ext))
        sig[node] = (colors, tuple(degs))
    return sig


def isomorphic(m: Structure, n: Structure) -> bool:
    """Exact isomorphism test by backtracking with degree pruning.

    Compares over the union of the relation names of both sides, so an absent
    name and an empty one are interchangeable.  Meant for small structures
    (about ten nodes).
    """
    if len(m.domain) != len(n.domain):
        return False
    names_u = tuple(sorted(set(m.unary) | set(n.unary)))
    names_b = tuple(sorted(set(m.binary) | set(n.binary)))
    sig_m = _signature(m, names_u, names_b)
    sig_n = _signature(n, names_u, names_b)
    if sorted(sig_m.values()) != sorted(sig_n.values()):
        return False
    rels_m = {r: m.rel(r) for r in names_b}
    rels_n = {r: n.rel(r) for r in names_b}
    # Most-constrained-first: rare signatures early.
    from collections import Counter

    freq = Counter(sig_m.values())
    order = sorted(m.domain, key=lambda v: (freq[sig_m[v]], v))
    used: set[str] = set()
    image: dict[str, str] = {}

    def consistent(v: str, w: str) -> bool:
        for r in names_b:
            em, en = rels_m[r], rels_n[r]
            for u, x in image.items():
                if ((v, u) in em) != ((w, x) in en):
                    return False
                if ((u, v) in em) != ((x, w) in en):
                    return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in n.domain:
            if w in used or sig_n[w] != sig_m[v]:
                continue
            if not consistent(v, w):
                continue
            used.add(w)
            image[v] = w
            if extend(i + 1):
                return True
            used.discard(w)
            del image[v]
        return False

    return extend(0)
