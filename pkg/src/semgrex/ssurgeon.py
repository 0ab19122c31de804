"""Graph rewriting driven by search patterns.

A rule file is a sequence of blank-line-separated rules.  Each rule is a
search pattern (which may span lines) followed by one edit directive per
line; ``#`` starts a comment.  Directives reference nodes and edges by the
names the pattern declares:

    {word:running}=A >nsubj ({}=B >conj {}=C)
    addEdge -gov A -dep C -reln nsubj

Available directives:

    addEdge          -gov NAME -dep NAME -reln LABEL
    removeEdge       -gov NAME -dep NAME [-reln LABEL]
    removeNamedEdge  -edge NAME
    relabelNamedEdge -edge NAME -reln LABEL
    addNode          -KEY=VALUE ... -reln LABEL -gov NAME -position POS
    removeSubgraph   -node NAME
    editNode         -node NAME -KEY=VALUE ...

``addNode`` needs at least ``-word=...``; POS is ``start``, ``end``,
``+NAME`` (immediately before NAME) or ``-NAME`` (immediately after).
``editNode`` clears an attribute when given an empty value.

Applying a rule repeats search-and-edit until no match changes the graph:
each pass runs the first match (in canonical order) whose edits change
something, then searches the rewritten graph again.  A rule that never
stops changing (say, an unguarded ``addNode``) fails once it exceeds its
iteration cap instead of looping forever.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field

from .conllu import Document
from .errors import EditError, GraphError, IterationLimitError, PatternError, RuleError
from .graph import DepGraph, Edge, NodeId
from .matcher import Match, find_matches
from .pattern import Pattern, parse_pattern


@dataclass
class Position:
    kind: str  # "start" | "end" | "before" | "after"
    name: str | None = None


@dataclass
class AddEdge:
    gov: str
    dep: str
    reln: str


@dataclass
class RemoveEdge:
    gov: str
    dep: str
    reln: str | None = None


@dataclass
class RemoveNamedEdge:
    edge: str


@dataclass
class RelabelNamedEdge:
    edge: str
    reln: str


@dataclass
class AddNode:
    attrs: dict[str, str]
    reln: str
    gov: str
    position: Position


@dataclass
class RemoveSubgraph:
    node: str


@dataclass
class EditNode:
    node: str
    assignments: dict[str, str]


EditDirective = (AddEdge | RemoveEdge | RemoveNamedEdge | RelabelNamedEdge
                 | AddNode | RemoveSubgraph | EditNode)


@dataclass
class SsurgeonRule:
    id: str
    pattern: Pattern
    edits: tuple[EditDirective, ...]
    line: int = 0


# -- rule file parsing -------------------------------------------------------

_DIRECTIVES = ("addEdge", "removeEdge", "removeNamedEdge", "relabelNamedEdge",
               "addNode", "removeSubgraph", "editNode")
_VALUE_FLAGS = ("-gov", "-dep", "-reln", "-edge", "-node", "-position")


def load_rules(path: str) -> list[SsurgeonRule]:
    with open(path, encoding="utf-8") as handle:
        return parse_rule_file(handle.read())


def parse_rule_file(text: str) -> list[SsurgeonRule]:
    rules: list[SsurgeonRule] = []
    block: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            if not stripped and block:
                rules.append(_parse_rule(block, f"rule-{len(rules) + 1}"))
                block = []
            continue
        block.append((lineno, line))
    if block:
        rules.append(_parse_rule(block, f"rule-{len(rules) + 1}"))
    return rules


def _parse_rule(block: list[tuple[int, str]], rule_id: str) -> SsurgeonRule:
    pattern_lines: list[str] = []
    directive_lines: list[tuple[int, str]] = []
    for lineno, line in block:
        first = line.split(None, 1)[0]
        if first in _DIRECTIVES or directive_lines:
            directive_lines.append((lineno, line))
        else:
            pattern_lines.append(line)
    start_line = block[0][0]
    if not pattern_lines:
        raise RuleError("rule has no search pattern", rule_id, start_line)
    if not directive_lines:
        raise RuleError("rule has no edit directives", rule_id, start_line)
    try:
        pattern = parse_pattern("\n".join(pattern_lines))
    except PatternError as exc:
        raise RuleError(f"bad pattern: {exc}", rule_id, start_line) from None
    edits = tuple(_parse_directive(lineno, line, rule_id, pattern)
                  for lineno, line in directive_lines)
    return SsurgeonRule(rule_id, pattern, edits, start_line)


def _parse_directive(lineno: int, line: str, rule_id: str,
                     pattern: Pattern) -> EditDirective:
    tokens = shlex.split(line, comments=True)
    name, args = tokens[0], tokens[1:]
    if name not in _DIRECTIVES:
        raise RuleError(f"unknown directive {name!r}", rule_id, lineno)
    flags: dict[str, str] = {}
    attrs: dict[str, str] = {}
    i = 0
    while i < len(args):
        tok = args[i]
        if tok in _VALUE_FLAGS:
            if i + 1 >= len(args):
                raise RuleError(f"flag {tok} needs a value", rule_id, lineno)
            if tok in flags:
                raise RuleError(f"flag {tok} given twice", rule_id, lineno)
            flags[tok] = args[i + 1]
            i += 2
            continue
        if tok.startswith("-") and "=" in tok:
            key, _, value = tok[1:].partition("=")
            if "-" + key in _VALUE_FLAGS:
                raise RuleError(f"flag -{key} takes a separate value", rule_id, lineno)
            if name not in ("addNode", "editNode"):
                raise RuleError(f"{name} does not take attribute settings ({tok})",
                                rule_id, lineno)
            attrs[key] = value
            i += 1
            continue
        raise RuleError(f"unknown flag {tok!r}", rule_id, lineno)

    def need(flag: str) -> str:
        if flag not in flags:
            raise RuleError(f"{name} requires {flag}", rule_id, lineno)
        return flags[flag]

    def node_name(flag: str) -> str:
        value = need(flag)
        if value not in pattern.names:
            raise RuleError(f"{name} references node name {value!r}"
                            " not declared in the pattern", rule_id, lineno)
        return value

    def edge_name(flag: str) -> str:
        value = need(flag)
        if value not in pattern.edge_names:
            raise RuleError(f"{name} references edge name {value!r}"
                            " not declared in the pattern", rule_id, lineno)
        return value

    if name == "addEdge":
        return AddEdge(node_name("-gov"), node_name("-dep"), need("-reln"))
    if name == "removeEdge":
        return RemoveEdge(node_name("-gov"), node_name("-dep"), flags.get("-reln"))
    if name == "removeNamedEdge":
        return RemoveNamedEdge(edge_name("-edge"))
    if name == "relabelNamedEdge":
        return RelabelNamedEdge(edge_name("-edge"), need("-reln"))
    if name == "addNode":
        if "word" not in attrs:
            raise RuleError("addNode needs -word=...", rule_id, lineno)
        position = _parse_position(need("-position"), pattern, rule_id, lineno)
        return AddNode(attrs, need("-reln"), node_name("-gov"), position)
    if name == "removeSubgraph":
        return RemoveSubgraph(node_name("-node"))
    if "-node" not in flags:
        raise RuleError("editNode requires -node", rule_id, lineno)
    if not attrs:
        raise RuleError("editNode needs at least one -KEY=VALUE setting",
                        rule_id, lineno)
    return EditNode(node_name("-node"), attrs)


def _parse_position(text: str, pattern: Pattern, rule_id: str, lineno: int) -> Position:
    if text in ("start", "end"):
        return Position(text)
    if text[:1] in ("+", "-") and len(text) > 1:
        name = text[1:]
        if name not in pattern.names:
            raise RuleError(f"position references node name {name!r}"
                            " not declared in the pattern", rule_id, lineno)
        return Position("before" if text[0] == "+" else "after", name)
    raise RuleError(f"bad position {text!r}; use start, end, +NAME or -NAME",
                    rule_id, lineno)


# -- edit application ---------------------------------------------------------


class _Bindings:
    """Match bindings tracked across a rule's edit list.

    Node insertion and removal renumber the sentence, so after each such
    edit every surviving binding is remapped; bindings whose node was
    removed are poisoned and later references fail loudly.
    """

    def __init__(self, match: Match):
        self.nodes: dict[str, NodeId] = dict(match.node_bindings)
        self.edges: dict[str, Edge] = dict(match.edge_bindings)
        self.consumed: set[str] = set()

    def node(self, name: str) -> NodeId:
        if name in self.consumed:
            raise EditError(f"node {name!r} was removed by an earlier edit"
                            " in the same rule")
        if name not in self.nodes:
            raise EditError(f"no node binding for name {name!r}")
        return self.nodes[name]

    def edge(self, name: str) -> Edge:
        if name in self.consumed:
            raise EditError(f"edge {name!r} was invalidated by an earlier edit"
                            " in the same rule")
        if name not in self.edges:
            raise EditError(f"no edge binding for name {name!r}")
        return self.edges[name]

    def remap(self, id_map: dict[NodeId, NodeId | None]) -> None:
        for name, nid in list(self.nodes.items()):
            new = id_map.get(nid, nid)
            if new is None:
                self.consumed.add(name)
            else:
                self.nodes[name] = new
        for name, edge in list(self.edges.items()):
            gov = id_map.get(edge.gov, edge.gov)
            dep = id_map.get(edge.dep, edge.dep)
            if gov is None or dep is None:
                self.consumed.add(name)
            else:
                self.edges[name] = Edge(gov, dep, edge.relation)


def apply_edit(graph: DepGraph, match: Match, edit: EditDirective) -> bool:
    """Apply one directive under a match's bindings; True when it changed
    the graph."""
    return _apply_one(graph, _Bindings(match), edit)


def _apply_one(graph: DepGraph, b: _Bindings, edit: EditDirective) -> bool:
    try:
        return _dispatch(graph, b, edit)
    except (EditError, GraphError) as exc:
        raise EditError(f"{type(edit).__name__}: {exc}") from None


def _dispatch(graph: DepGraph, b: _Bindings, edit: EditDirective) -> bool:
    if isinstance(edit, AddEdge):
        return graph.add_edge(b.node(edit.gov), b.node(edit.dep), edit.reln)
    if isinstance(edit, RemoveEdge):
        return graph.remove_edge(b.node(edit.gov), b.node(edit.dep), edit.reln) > 0
    if isinstance(edit, RemoveNamedEdge):
        edge = b.edge(edit.edge)
        return graph.remove_edge(edge.gov, edge.dep, edge.relation) > 0
    if isinstance(edit, RelabelNamedEdge):
        return _do_relabel(graph, b, edit)
    if isinstance(edit, AddNode):
        return _do_add_node(graph, b, edit)
    if isinstance(edit, RemoveSubgraph):
        return _do_remove_subgraph(graph, b, edit)
    return _do_edit_node(graph, b, edit)


def _do_relabel(graph: DepGraph, b: _Bindings, edit: RelabelNamedEdge) -> bool:
    edge = b.edge(edit.edge)
    if edge.relation == edit.reln:
        return False
    removed = graph.remove_edge(edge.gov, edge.dep, edge.relation)
    added = graph.add_edge(edge.gov, edge.dep, edit.reln)
    b.edges[edit.edge] = Edge(edge.gov, edge.dep, edit.reln)
    return bool(removed or added)


def _do_add_node(graph: DepGraph, b: _Bindings, edit: AddNode) -> bool:
    ids = graph.node_ids()
    if not ids:
        raise EditError("cannot add a node to an empty sentence")
    if edit.position.kind == "start":
        anchor, side = ids[0], "before"
    elif edit.position.kind == "end":
        anchor, side = ids[-1], "after"
    else:
        anchor = b.node(edit.position.name)
        side = edit.position.kind
    new_id = graph.insert_node(edit.attrs, anchor, side)
    shifted = [nid for nid in graph.node_ids() if nid != new_id]
    b.remap(dict(zip(ids, shifted)))
    graph.add_edge(b.node(edit.gov), new_id, edit.reln)
    return True


def _do_remove_subgraph(graph: DepGraph, b: _Bindings, edit: RemoveSubgraph) -> bool:
    before = graph.node_ids()
    removed = graph.remove_subgraph(b.node(edit.node))
    survivors = [nid for nid in before if nid not in removed]
    id_map: dict[NodeId, NodeId | None] = dict(zip(survivors, graph.node_ids()))
    id_map.update({nid: None for nid in removed})
    b.remap(id_map)
    return True


def _do_edit_node(graph: DepGraph, b: _Bindings, edit: EditNode) -> bool:
    node = graph.node(b.node(edit.node))
    changed = False
    for key, value in edit.assignments.items():
        if key in ("idx", "copy", "index"):
            raise EditError("node indices cannot be edited; use addNode/removeSubgraph")
        if key == "word":
            new = value if value else "_"
            changed |= node.word != new
            node.word = new
        elif key in ("lemma", "tag", "pos", "upos", "ner"):
            attr = "tag" if key == "pos" else key
            new = value if value else None
            changed |= getattr(node, attr) != new
            setattr(node, attr, new)
        elif value == "":
            changed |= node.extras.pop(key, None) is not None
        else:
            changed |= node.extras.get(key) != value
            node.extras[key] = value
    return changed


# -- rule application -------------------------------------------------------


def apply_rule(graph: DepGraph, rule: SsurgeonRule,
               max_iterations: int | None = None) -> tuple[int, int]:
    """Rewrite the graph to fixpoint; returns (iterations, total changes).

    An iteration is one search of the current graph followed by the edits
    of the first match that changes anything.  The cap defaults to
    ``10 * (node count + 10)`` so longer sentences get proportionally more
    room before a non-converging rule is reported.
    """
    cap = max_iterations if max_iterations is not None else 10 * (len(graph) + 10)
    iterations = 0
    total = 0
    while True:
        made_change = False
        for match in find_matches(graph, rule.pattern):
            bindings = _Bindings(match)
            changes_here = 0
            try:
                for edit in rule.edits:
                    if _apply_one(graph, bindings, edit):
                        changes_here += 1
            except EditError as exc:
                raise EditError(str(exc), rule_id=rule.id) from None
            if changes_here:
                total += changes_here
                made_change = True
                break
        if not made_change:
            return iterations, total
        iterations += 1
        if iterations >= cap:
            raise IterationLimitError(
                f"rule still changing the graph after {iterations} iterations;"
                " add a guard to the pattern so the rewrite can converge",
                rule_id=rule.id)


@dataclass
class RuleOutcome:
    rule_id: str
    iterations: int
    changes: int


@dataclass
class SentenceOutcome:
    sentence_index: int  # 1-based position in the document
    outcomes: list[RuleOutcome] = field(default_factory=list)


@dataclass
class EditReport:
    sentences: list[SentenceOutcome] = field(default_factory=list)

    @property
    def total_changes(self) -> int:
        return sum(o.changes for s in self.sentences for o in s.outcomes)


def apply_rules(doc: Document, rules: list[SsurgeonRule]) -> EditReport:
    """Apply every rule, in file order, to every sentence independently."""
    report = EditReport()
    for index, graph in enumerate(doc.sentences, start=1):
        outcome = SentenceOutcome(index)
        for rule in rules:
            try:
                iterations, changes = apply_rule(graph, rule)
            except RuleError as exc:
                exc.sentence_index = index
                raise
            if changes:
                outcome.outcomes.append(RuleOutcome(rule.id, iterations, changes))
        if outcome.outcomes:
            report.sentences.append(outcome)
    return report
