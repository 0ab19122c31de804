"""Pattern matching over dependency graphs.

Anchors are tried in the graph's canonical order; from each anchor the
constraints expand depth-first in the order they were written, with
candidate nodes also visited in canonical order, so the resulting match
list is the same on every run.  A match is one complete assignment of
graph nodes to the pattern's node slots; assignments that only differ in
how they were found are reported once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ._kernel import OPCODES
from .graph import DepGraph, Edge, NodeId
from .pattern import (AndExpr, IdentityTest, LabelTest, OrExpr, Pattern,
                      PatternNode, parse_pattern)


@dataclass
class Match:
    """One way the pattern fits the graph.

    ``assignment`` maps every positively matched pattern slot (numbered in
    reading order, 0 = the head) to the node filling it; it is what makes
    two matches distinct.  ``node_bindings``/``edge_bindings`` hold just
    the ``=name`` captures.
    """

    anchor: NodeId
    node_bindings: dict[str, NodeId]
    edge_bindings: dict[str, Edge]
    assignment: tuple[tuple[int, NodeId], ...] = field(default=(), repr=False)


@dataclass
class MatchSet:
    matches: list[Match] = field(default_factory=list)

    def __iter__(self):
        return iter(self.matches)

    def __len__(self) -> int:
        return len(self.matches)

    def __bool__(self) -> bool:
        return bool(self.matches)

    def __getitem__(self, i):
        return self.matches[i]


class _State:
    """Immutable search state: bindings plus the assignment so far."""

    __slots__ = ("names", "edges", "assign", "pending")

    def __init__(self, names=None, edges=None, assign=(), pending=()):
        self.names = names if names is not None else {}
        self.edges = edges if edges is not None else {}
        self.assign = assign
        self.pending = pending

    def bind_name(self, name: str, v: int) -> "_State":
        names = dict(self.names)
        names[name] = v
        return _State(names, self.edges, self.assign, self.pending)

    def bind_edge(self, name: str, eid: int) -> "_State":
        edges = dict(self.edges)
        edges[name] = eid
        return _State(self.names, edges, self.assign, self.pending)

    def add_assign(self, slot: int, v: int) -> "_State":
        return _State(self.names, self.edges, self.assign + ((slot, v),), self.pending)

    def add_pending(self, v: int, name: str, equal: bool) -> "_State":
        return _State(self.names, self.edges, self.assign,
                      self.pending + ((v, name, equal),))


class _Search:
    def __init__(self, graph: DepGraph, pattern: Pattern):
        self.graph = graph
        self.pattern = pattern
        self.snap = graph._snapshot()
        self.core = self.snap.core
        self.nodes = [graph.node(nid) for nid in self.snap.ids]

    def _mask(self, label: LabelTest | None) -> bytes | None:
        if label is None:
            return None
        return self.snap.label_mask(label.cache_key(), label.matches)

    def _desc_ok(self, desc, v: int) -> bool:
        if desc.is_root_anchor:
            ok = v in self.snap.root_positions
        else:
            node = self.nodes[v]
            ok = all(test.matches(node.attribute(test.key)) for test in desc.tests)
        return ok != desc.negated

    def match_node(self, pnode: PatternNode, v: int, state: _State):
        if not self._desc_ok(pnode.desc, v):
            return
        name = pnode.desc.name
        if name is not None:
            bound = state.names.get(name)
            if bound is not None:
                if bound != v:
                    return
            else:
                state = state.bind_name(name, v)
        state = state.add_assign(pnode.pos, v)
        yield from self._chain(pnode.constraints, 0, v, state)

    def _chain(self, constraints, i: int, v: int, state: _State):
        if i == len(constraints):
            yield state
            return
        for mid in self._one(constraints[i], v, state):
            yield from self._chain(constraints, i + 1, v, mid)

    def _one(self, constraint, v: int, state: _State):
        if isinstance(constraint, OrExpr):
            for part in constraint.parts:
                yield from self._one(part, v, state)
            return
        if isinstance(constraint, AndExpr):
            yield from self._chain(constraint.parts, 0, v, state)
            return
        if isinstance(constraint, IdentityTest):
            bound = state.names.get(constraint.name)
            if bound is None:
                yield state.add_pending(v, constraint.name, constraint.equal)
            elif (bound == v) == constraint.equal:
                yield state
            return
        # relation constraint
        opcode = OPCODES[constraint.op]
        mask = self._mask(constraint.label)
        if constraint.negated:
            hit = False
            for w in self.core.candidates(opcode, v, mask):
                for _ in self.match_node(constraint.target, w, state):
                    hit = True
                    break
                if hit:
                    break
            if not hit:
                yield state
            return
        for w in self.core.candidates(opcode, v, mask):
            for mid in self.match_node(constraint.target, w, state):
                if constraint.edge_name is None:
                    yield mid
                else:
                    for eid in self.core.witnesses(opcode, v, w, mask):
                        yield mid.bind_edge(constraint.edge_name, eid)

    def run(self, anchors: list[int]) -> MatchSet:
        out = MatchSet()
        seen = set()
        snap = self.snap
        for v in anchors:
            for state in self.match_node(self.pattern.root, v, _State()):
                ok = True
                for (pos, name, equal) in state.pending:
                    bound = state.names.get(name)
                    if bound is None or (bound == pos) != equal:
                        ok = False
                        break
                if not ok:
                    continue
                key = (frozenset(state.assign), frozenset(state.edges.items()))
                if key in seen:
                    continue
                seen.add(key)
                out.matches.append(Match(
                    anchor=snap.ids[v],
                    node_bindings={name: snap.ids[p]
                                   for name, p in sorted(state.names.items())},
                    edge_bindings={name: snap.edges[eid]
                                   for name, eid in sorted(state.edges.items())},
                    assignment=tuple(sorted((slot, snap.ids[p])
                                            for slot, p in state.assign)),
                ))
        return out


def _as_pattern(pattern: Pattern | str) -> Pattern:
    return parse_pattern(pattern) if isinstance(pattern, str) else pattern


def find_matches(graph: DepGraph, pattern: Pattern | str) -> MatchSet:
    """All distinct assignments of graph nodes satisfying the pattern."""
    search = _Search(graph, _as_pattern(pattern))
    return search.run(search.core.canonical_positions())


def matches_at(graph: DepGraph, pattern: Pattern | str, anchor: NodeId) -> MatchSet:
    """The subset of :func:`find_matches` anchored at one node."""
    graph.node(anchor)
    search = _Search(graph, _as_pattern(pattern))
    return search.run([search.snap.pos[anchor]])


def evaluate_relation(graph: DepGraph, operator: str, a: NodeId, b: NodeId,
                      label=None) -> tuple[bool, tuple[Edge, ...]]:
    """Test one relation between two nodes.

    ``label`` may be a plain string (exact match), a compiled regex
    (whole-label match), or a :class:`LabelTest`.  Returns the truth value
    and the witnessing edges (empty for word-order relations).
    """
    if operator not in OPCODES:
        raise ValueError(f"unknown relation operator {operator!r}")
    graph.node(a)
    graph.node(b)
    snap = graph._snapshot()
    if label is None:
        mask = None
    else:
        if isinstance(label, str):
            label = LabelTest(label)
        elif isinstance(label, re.Pattern):
            label = LabelTest(label.pattern, is_regex=True)
        mask = snap.label_mask(label.cache_key(), label.matches)
    opcode = OPCODES[operator]
    pa, pb = snap.pos[a], snap.pos[b]
    ok = snap.core.check(opcode, pa, pb, mask)
    witnesses = snap.core.witnesses(opcode, pa, pb, mask) if ok else []
    return ok, tuple(snap.edges[eid] for eid in witnesses)
