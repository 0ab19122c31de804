"""In-memory dependency graphs.

One :class:`DepGraph` holds one sentence: nodes addressed by
``(index, copy)`` pairs, labeled gov->dep edges, a root set, and
pass-through records (comments, multiword-token spans) so documents
survive a read/write cycle untouched.

Copy nodes (``copy >= 1``) are materialized as ordinary nodes sharing the
word index of their source token; they order after it and before the next
token, mirroring the ``N.M`` ids of enhanced-dependency files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from . import _kernel
from .errors import GraphError


class NodeId(NamedTuple):
    """Node address: 1-based word index plus copy counter (0 = real token)."""

    index: int
    copy: int = 0

    def __str__(self) -> str:
        return f"{self.index}.{self.copy}" if self.copy else str(self.index)

    @classmethod
    def from_string(cls, text: str) -> "NodeId":
        if "." in text:
            a, b = text.split(".", 1)
            return cls(int(a), int(b))
        return cls(int(text), 0)


class Edge(NamedTuple):
    gov: NodeId
    dep: NodeId
    relation: str


@dataclass
class MwtSpan:
    """Multiword-token range row, kept verbatim for serialization."""

    start: int
    end: int
    form: str
    misc: str = "_"


# Attribute names with a dedicated field; everything else goes to extras.
_FIELD_ATTRS = {"word": "word", "lemma": "lemma", "tag": "tag", "pos": "tag",
                "upos": "upos", "ner": "ner"}


@dataclass
class Node:
    """One token (or copy node) and its annotations.

    ``feats`` and ``misc`` are ordered key/value pair lists; a pair with an
    empty key preserves a malformed input item verbatim.  ``raw_basic`` and
    ``raw_deps`` carry the columns of the unselected dependency layer so
    files round-trip; they are not part of the matchable attribute surface.
    """

    id: NodeId
    word: str
    lemma: str | None = None
    tag: str | None = None
    upos: str | None = None
    ner: str | None = None
    feats: list[tuple[str, str]] = field(default_factory=list)
    misc: list[tuple[str, str]] = field(default_factory=list)
    extras: dict[str, str] = field(default_factory=dict)
    raw_basic: tuple[str, str] | None = None
    raw_deps: str | None = None

    def attribute(self, key: str) -> str | None:
        """Value seen by pattern matching; None when the attribute is absent."""
        if key == "idx":
            return str(self.id)
        if key in _FIELD_ATTRS:
            return getattr(self, _FIELD_ATTRS[key])
        return self.extras.get(key)

    def copy_node(self) -> "Node":
        return Node(self.id, self.word, self.lemma, self.tag, self.upos, self.ner,
                    list(self.feats), list(self.misc), dict(self.extras),
                    self.raw_basic, self.raw_deps)


def node_from_attrs(id: NodeId, attrs: dict[str, str]) -> Node:
    """Build a node from a pattern-style attribute map; 'word' is required."""
    if "word" not in attrs:
        raise GraphError("new node needs at least a 'word' attribute")
    node = Node(id, attrs["word"])
    for key, value in attrs.items():
        if key in ("idx", "copy", "index"):
            raise GraphError(f"{key!r} cannot be set; the insertion point fixes it")
        if key == "word":
            continue
        if key in _FIELD_ATTRS:
            setattr(node, _FIELD_ATTRS[key], value)
        else:
            node.extras[key] = value
    return node


class _Snapshot:
    """Integer view of a graph at one version, shared with the kernel."""

    def __init__(self, graph: "DepGraph", core_cls):
        self.version = graph._version
        self.core_cls = core_cls
        self.ids: list[NodeId] = sorted(graph._nodes)
        self.pos = {nid: i for i, nid in enumerate(self.ids)}
        self.edges: list[Edge] = sorted(graph._edge_set)
        self.labels = sorted({e.relation for e in self.edges})
        self.label_pos = {lab: i for i, lab in enumerate(self.labels)}
        triples = [(self.pos[e.gov], self.pos[e.dep], self.label_pos[e.relation])
                   for e in self.edges]
        self.core = core_cls(len(self.ids), [nid.index for nid in self.ids], triples)
        self.root_positions = frozenset(self.pos[r] for r in graph.roots)
        self._masks: dict[object, bytes | None] = {}

    def label_mask(self, key: object, predicate) -> bytes | None:
        """Byte mask over label ids for a label predicate (cached per key)."""
        if key not in self._masks:
            self._masks[key] = bytes(1 if predicate(lab) else 0 for lab in self.labels)
        return self._masks[key]


class DepGraph:
    """Mutable dependency graph for one sentence."""

    def __init__(self, comments: Iterable[str] = ()):
        self._nodes: dict[NodeId, Node] = {}
        self._edge_set: set[Edge] = set()
        self.declared_roots: dict[NodeId, str] = {}
        self.comments: list[str] = list(comments)
        self.mwt_spans: list[MwtSpan] = []
        self.hidden_empty_rows: list[list[str]] = []  # skipped N.M rows (basic mode)
        self._version = 0
        self._snap: _Snapshot | None = None

    # -- access -------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, nid: NodeId) -> bool:
        return nid in self._nodes

    def node_ids(self) -> tuple[NodeId, ...]:
        return tuple(sorted(self._nodes))

    @property
    def nodes(self) -> tuple[Node, ...]:
        return tuple(self._nodes[nid] for nid in sorted(self._nodes))

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self._edge_set))

    def node(self, nid: NodeId) -> Node:
        try:
            return self._nodes[nid]
        except KeyError:
            raise GraphError(f"no node {nid} in graph") from None

    @property
    def roots(self) -> tuple[NodeId, ...]:
        """Nodes with no incoming edge, plus roots the source file declared."""
        with_gov = {e.dep for e in self._edge_set}
        out = {nid for nid in self._nodes if nid not in with_gov}
        out.update(nid for nid in self.declared_roots if nid in self._nodes)
        return tuple(sorted(out))

    def words(self) -> list[str]:
        """Surface words of the real tokens, in order (copy nodes excluded)."""
        return [n.word for n in self.nodes if n.id.copy == 0]

    # -- mutation -------------------------------------------------------------

    def _bump(self) -> None:
        self._version += 1
        self._snap = None

    def add_node(self, node: Node) -> None:
        if node.id.index < 1 or node.id.copy < 0:
            raise GraphError(f"illegal node id {node.id}")
        if node.id in self._nodes:
            raise GraphError(f"duplicate node id {node.id}")
        self._nodes[node.id] = node
        self._bump()

    def add_edge(self, gov: NodeId, dep: NodeId, relation: str) -> bool:
        """Add gov->dep edge; False (and no change) when it already exists."""
        self.node(gov)
        self.node(dep)
        if gov == dep:
            raise GraphError(f"self-loop edge on {gov}")
        if not relation:
            raise GraphError("empty relation label")
        edge = Edge(gov, dep, relation)
        if edge in self._edge_set:
            return False
        self._edge_set.add(edge)
        self._bump()
        return True

    def remove_edge(self, gov: NodeId, dep: NodeId, relation: str | None = None) -> int:
        """Remove gov->dep edges matching the label (all labels when None)."""
        self.node(gov)
        self.node(dep)
        doomed = {e for e in self._edge_set
                  if e.gov == gov and e.dep == dep
                  and (relation is None or e.relation == relation)}
        if doomed:
            self._edge_set -= doomed
            self._bump()
        return len(doomed)

    def _remap(self, index_map: dict[int, int]) -> dict[NodeId, NodeId]:
        """Renumber word indices; returns the applied NodeId mapping.

        The map must cover every surviving index; references to indices
        missing from it are treated as removed and dropped from the
        pass-through columns.
        """
        id_map = {}
        for nid in self._nodes:
            id_map[nid] = NodeId(index_map.get(nid.index, nid.index), nid.copy)
        new_nodes = {}
        for nid, node in self._nodes.items():
            node.id = id_map[nid]
            node.raw_basic = _remap_basic(node.raw_basic, index_map)
            node.raw_deps = _remap_deps(node.raw_deps, index_map)
            new_nodes[node.id] = node
        self._nodes = new_nodes
        self._edge_set = {Edge(id_map[e.gov], id_map[e.dep], e.relation)
                          for e in self._edge_set}
        self.declared_roots = {id_map[r]: lab for r, lab in self.declared_roots.items()
                               if r in id_map}
        for span in self.mwt_spans:
            span.start = index_map.get(span.start, span.start)
            span.end = index_map.get(span.end, span.end)
        kept_rows = []
        for cols in self.hidden_empty_rows:
            base = int(cols[0].split(".", 1)[0])
            if base != 0 and base not in index_map:
                continue
            cols[0] = f"{index_map.get(base, base)}.{cols[0].split('.', 1)[1]}"
            deps = _remap_deps(cols[8] if cols[8] != "_" else None, index_map)
            cols[8] = deps if deps is not None else "_"
            kept_rows.append(cols)
        self.hidden_empty_rows = kept_rows
        return id_map

    def insert_node(self, attrs: dict[str, str], anchor: NodeId, side: str) -> NodeId:
        """Insert a new token immediately before or after the anchor.

        Word indices at or beyond the insertion point shift up by one;
        edges, roots, and span records are renumbered to match.
        """
        self.node(anchor)
        if side not in ("before", "after"):
            raise GraphError(f"side must be 'before' or 'after', not {side!r}")
        k = anchor.index if side == "before" else anchor.index + 1
        indices = {nid.index for nid in self._nodes}
        self._remap({i: (i + 1 if i >= k else i) for i in indices})
        new_id = NodeId(k, 0)
        node = node_from_attrs(new_id, attrs)
        self._nodes[new_id] = node
        self._bump()
        return new_id

    def remove_subgraph(self, start: NodeId) -> frozenset[NodeId]:
        """Remove start and its dependents not reachable from surviving nodes.

        Remaining word indices are squeezed back to consecutive 1..n.
        Returns the removed ids (as they were before renumbering).
        """
        self.node(start)
        out_adj: dict[NodeId, list[NodeId]] = {}
        for e in self._edge_set:
            out_adj.setdefault(e.gov, []).append(e.dep)
        in_region = {start}
        stack = [start]
        while stack:
            for dep in out_adj.get(stack.pop(), ()):
                if dep not in in_region:
                    in_region.add(dep)
                    stack.append(dep)
        kept = set(self._nodes) - in_region
        stack = list(kept)
        while stack:
            for dep in out_adj.get(stack.pop(), ()):
                if dep != start and dep not in kept:
                    kept.add(dep)
                    stack.append(dep)
        removed = frozenset(set(self._nodes) - kept)
        self._nodes = {nid: n for nid, n in self._nodes.items() if nid in kept}
        self._edge_set = {e for e in self._edge_set
                          if e.gov in kept and e.dep in kept}
        self.declared_roots = {r: lab for r, lab in self.declared_roots.items()
                               if r in kept}
        self.mwt_spans = [s for s in self.mwt_spans
                          if any(s.start <= nid.index <= s.end and nid.copy == 0
                                 for nid in kept)]
        for span in self.mwt_spans:
            covered = [nid.index for nid in kept
                       if span.start <= nid.index <= span.end and nid.copy == 0]
            span.start, span.end = min(covered), max(covered)
        surviving_indices = sorted({nid.index for nid in self._nodes})
        self._remap({old: new for new, old in enumerate(surviving_indices, start=1)})
        self._bump()
        return removed

    # -- derived views ----------------------------------------------------

    def _snapshot(self) -> _Snapshot:
        core_cls = _kernel.core_class()
        if (self._snap is None or self._snap.version != self._version
                or self._snap.core_cls is not core_cls):
            self._snap = _Snapshot(self, core_cls)
        return self._snap

    def canonical_order(self) -> list[NodeId]:
        """Topological order (ties by node id) or id order if cyclic."""
        snap = self._snapshot()
        return [snap.ids[p] for p in snap.core.canonical_positions()]

    def governors(self, nid: NodeId) -> tuple[Edge, ...]:
        self.node(nid)
        return tuple(sorted(e for e in self._edge_set if e.dep == nid))

    def dependents(self, nid: NodeId) -> tuple[Edge, ...]:
        self.node(nid)
        return tuple(sorted(e for e in self._edge_set if e.gov == nid))

    def descendants(self, nid: NodeId) -> tuple[NodeId, ...]:
        self.node(nid)
        snap = self._snapshot()
        return tuple(snap.ids[p] for p in snap.core.descendants(snap.pos[nid]))

    def ancestors(self, nid: NodeId) -> tuple[NodeId, ...]:
        self.node(nid)
        snap = self._snapshot()
        return tuple(snap.ids[p] for p in snap.core.ancestors(snap.pos[nid]))

    # -- consistency ---------------------------------------------------------

    def validate(self) -> list[str]:
        """Non-fatal consistency findings (empty list = clean)."""
        issues = []
        for e in sorted(self._edge_set):
            if e.gov not in self._nodes or e.dep not in self._nodes:
                issues.append(f"edge {e} references a missing node")
            if e.gov == e.dep:
                issues.append(f"self-loop edge on {e.gov}")
        with_gov = {e.dep for e in self._edge_set}
        for r in sorted(self.declared_roots):
            if r in with_gov:
                issues.append(f"declared root {r} has acquired a governor")
        if self._nodes and not self.roots:
            issues.append("graph has nodes but no root")
        return issues

    def copy(self) -> "DepGraph":
        dup = DepGraph(self.comments)
        dup._nodes = {nid: n.copy_node() for nid, n in self._nodes.items()}
        dup._edge_set = set(self._edge_set)
        dup.declared_roots = dict(self.declared_roots)
        dup.mwt_spans = [MwtSpan(s.start, s.end, s.form, s.misc) for s in self.mwt_spans]
        dup.hidden_empty_rows = [list(r) for r in self.hidden_empty_rows]
        return dup

    def __eq__(self, other) -> bool:
        if not isinstance(other, DepGraph):
            return NotImplemented
        return (self._nodes == other._nodes
                and self._edge_set == other._edge_set
                and self.declared_roots == other.declared_roots
                and self.comments == other.comments
                and self.mwt_spans == other.mwt_spans
                and self.hidden_empty_rows == other.hidden_empty_rows)

    def __repr__(self) -> str:
        return f"<DepGraph {len(self._nodes)} nodes, {len(self._edge_set)} edges>"


def _remap_basic(raw: tuple[str, str] | None, index_map: dict[int, int]) -> tuple[str, str] | None:
    if raw is None:
        return None
    head, deprel = raw
    try:
        h = int(head)
    except ValueError:
        return raw
    if h == 0:
        return raw
    if h not in index_map:
        return None  # governor removed
    return (str(index_map[h]), deprel)


def _remap_deps(raw: str | None, index_map: dict[int, int]) -> str | None:
    if raw is None:
        return None
    kept = []
    for item in raw.split("|"):
        head, sep, rel = item.partition(":")
        parts = head.split(".", 1)
        try:
            h = int(parts[0])
        except ValueError:
            kept.append(item)
            continue
        if h != 0:
            if h not in index_map:
                continue  # head removed
            h = index_map[h]
        new_head = f"{h}.{parts[1]}" if len(parts) > 1 else str(h)
        kept.append(new_head + sep + rel)
    return "|".join(kept) if kept else None
