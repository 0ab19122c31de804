"""Search-pattern parsing, validation, and printing.

A pattern is a node description plus chained relation constraints:

    {word:running} >nsubj ({} >conj {}=C) >nsubj {}=C

Node descriptions list attribute tests in braces (``{word:/Jen.*/;tag:NNP}``,
``{}`` matches anything, ``{$}`` matches roots, a ``!`` prefix negates the
description).  Constraints pair one of sixteen relation operators with a
target node, an optional edge label (bare text for exact equality,
``/.../`` for a whole-label regex), an optional ``=name`` on the edge, and
``!`` for "no such neighbor exists".  Square brackets group constraints
with ``&``/``|``; ``==``/``!==`` compare the current node against a named
node.  Names declared with ``=name`` force later uses to bind the same
graph node.

Regular expressions anchor to the whole attribute value and are
case-sensitive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from .errors import PatternError, PatternSyntaxError

# Operator spellings, longest first so the scanner never splits ">>" or "$++".
OPERATORS = ("<++", "<--", ">++", ">--", "$++", "$--",
             "<<", ">>", "..", "--", "$+", "$-", "<", ">", ".", "-")

# Operators that walk an edge and therefore accept labels and edge names.
EDGE_OPERATORS = frozenset({"<", ">", "<<", ">>", ">++", ">--", "<++", "<--"})


@lru_cache(maxsize=512)
def _compiled(source: str) -> re.Pattern:
    return re.compile(source)


@dataclass
class AttrTest:
    key: str
    value: str
    is_regex: bool = False

    def matches(self, text: str | None) -> bool:
        if text is None:
            return False
        if self.is_regex:
            return _compiled(self.value).fullmatch(text) is not None
        return text == self.value


@dataclass
class LabelTest:
    value: str
    is_regex: bool = False

    def matches(self, label: str) -> bool:
        if self.is_regex:
            return _compiled(self.value).fullmatch(label) is not None
        return label == self.value

    def cache_key(self) -> tuple[str, str]:
        return ("regex" if self.is_regex else "exact", self.value)


@dataclass
class NodeDesc:
    tests: tuple[AttrTest, ...] = ()
    is_root_anchor: bool = False
    negated: bool = False
    name: str | None = None


@dataclass
class PatternNode:
    desc: NodeDesc
    constraints: tuple["Constraint", ...] = ()
    pos: int = field(default=-1, compare=False)


@dataclass
class RelConstraint:
    op: str
    label: LabelTest | None
    edge_name: str | None
    negated: bool
    target: PatternNode


@dataclass
class IdentityTest:
    equal: bool
    name: str


@dataclass
class OrExpr:
    parts: tuple["Constraint", ...]


@dataclass
class AndExpr:
    parts: tuple["Constraint", ...]


Constraint = Union[RelConstraint, IdentityTest, OrExpr, AndExpr]


@dataclass
class Pattern:
    root: PatternNode
    names: frozenset[str]
    edge_names: frozenset[str]
    source: str = field(default="", compare=False)
    n_positions: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return print_pattern(self)


_NAME_RE = re.compile(r"\w+")
_KEY_RE = re.compile(r"\w+")
_VALUE_RE = re.compile(r"[^\s;{}]+")
_LABEL_RE = re.compile(r"\w[\w:]*")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    # -- scanning helpers ---------------------------------------------------

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def startswith(self, token: str) -> bool:
        return self.text.startswith(token, self.pos)

    def eat(self, token: str) -> bool:
        if self.startswith(token):
            self.pos += len(token)
            return True
        return False

    def fail(self, expected: list[str]):
        found = self.text[self.pos:self.pos + 8] or "end of pattern"
        raise PatternSyntaxError(self.pos, expected, found)

    def expect(self, token: str) -> None:
        if not self.eat(token):
            self.fail([repr(token)])

    def take(self, regex: re.Pattern, what: str) -> str:
        m = regex.match(self.text, self.pos)
        if not m:
            self.fail([what])
        self.pos = m.end()
        return m.group()

    def take_regex_body(self) -> str:
        # After the opening "/": read to the closing slash; "\/" is a
        # literal slash, all other escapes pass through to the re engine.
        start = self.pos
        out = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "/":
                self.pos += 1
                body = "".join(out)
                try:
                    _compiled(body)
                except re.error as exc:
                    raise PatternError(
                        f"invalid regex at offset {start - 1}: /{body}/ ({exc})") from None
                return body
            if ch == "\\" and self.pos + 1 < len(self.text) and self.text[self.pos + 1] == "/":
                out.append("/")
                self.pos += 2
                continue
            out.append(ch)
            self.pos += 1
        self.fail(["'/'"])

    # -- grammar ------------------------------------------------------------

    def parse_node_expr(self) -> PatternNode:
        # Full form: an atom plus chained constraints, all applying to the
        # atom. Used for the pattern head and inside parentheses.
        node = self.parse_node_atom()
        constraints = list(node.constraints)
        constraints.extend(self.parse_constraints())
        return PatternNode(node.desc, tuple(constraints))

    def parse_node_atom(self) -> PatternNode:
        # Target form: constraints chain onto a node only inside its own
        # parentheses; anything after the atom belongs to the enclosing
        # head ("subsequent relations all apply to the same node").
        self.skip_ws()
        offset = self.pos
        negated = False
        if self.peek() == "!" and not self.startswith("!=="):
            negated = True
            self.pos += 1
            self.skip_ws()
        if self.eat("("):
            node = self.parse_node_expr()
            self.skip_ws()
            self.expect(")")
            desc = node.desc
            constraints = list(node.constraints)
        elif self.peek() == "{":
            desc = self.parse_node_core()
            constraints = []
        else:
            self.fail(["'{'", "'('", "'!'"])
        if negated:
            desc = NodeDesc(desc.tests, desc.is_root_anchor, not desc.negated, desc.name)
        self.skip_ws()
        if self.peek() == "=" and not self.startswith("=="):
            self.pos += 1
            name = self.take(_NAME_RE, "name")
            if desc.name is not None and desc.name != name:
                raise PatternError(
                    f"node at offset {offset} already named {desc.name!r}; cannot rename to {name!r}")
            desc = NodeDesc(desc.tests, desc.is_root_anchor, desc.negated, name)
        return PatternNode(desc, tuple(constraints))

    def parse_node_core(self) -> NodeDesc:
        self.expect("{")
        self.skip_ws()
        if self.eat("}"):
            return NodeDesc()
        if self.eat("$"):
            self.skip_ws()
            self.expect("}")
            return NodeDesc(is_root_anchor=True)
        tests = [self.parse_attr()]
        self.skip_ws()
        while self.eat(";"):
            tests.append(self.parse_attr())
            self.skip_ws()
        self.expect("}")
        return NodeDesc(tuple(tests))

    def parse_attr(self) -> AttrTest:
        self.skip_ws()
        key = self.take(_KEY_RE, "attribute name")
        self.skip_ws()
        self.expect(":")
        self.skip_ws()
        if self.eat("/"):
            return AttrTest(key, self.take_regex_body(), is_regex=True)
        return AttrTest(key, self.take(_VALUE_RE, "attribute value"))

    def at_constraint(self) -> bool:
        self.skip_ws()
        ch = self.peek()
        if not ch:
            return False
        if ch in "<>.-$[":
            return True
        if self.startswith("==") or self.startswith("!=="):
            return True
        return ch == "!" and not self.startswith("!==")

    def parse_constraints(self) -> list[Constraint]:
        out: list[Constraint] = []
        while True:
            self.skip_ws()
            ate_amp = out and self.eat("&")  # optional conjunction marker
            if ate_amp:
                self.skip_ws()
            if not self.at_constraint():
                if ate_amp:
                    self.fail(["constraint after '&'"])
                return out
            constraint = self.parse_constraint()
            if isinstance(constraint, AndExpr):  # bracket group was a plain conjunction
                out.extend(constraint.parts)
            else:
                out.append(constraint)

    def parse_constraint(self) -> Constraint:
        self.skip_ws()
        if self.eat("["):
            expr = self.parse_bool_expr()
            self.skip_ws()
            self.expect("]")
            return expr
        return self.parse_rel_or_identity()

    def parse_bool_expr(self) -> Constraint:
        branches = [self.parse_and_expr()]
        while True:
            self.skip_ws()
            if not self.eat("|"):
                break
            branches.append(self.parse_and_expr())
        if len(branches) == 1:
            return branches[0]
        flat: list[Constraint] = []
        for branch in branches:
            flat.extend(branch.parts if isinstance(branch, OrExpr) else [branch])
        return OrExpr(tuple(flat))

    def parse_and_expr(self) -> Constraint:
        parts = [self.parse_constraint()]
        while True:
            self.skip_ws()
            if self.eat("&"):
                self.skip_ws()
            elif not self.at_constraint():
                break
            parts.append(self.parse_constraint())
        if len(parts) == 1:
            return parts[0]
        flat: list[Constraint] = []
        for part in parts:
            flat.extend(part.parts if isinstance(part, AndExpr) else [part])
        return AndExpr(tuple(flat))

    def parse_rel_or_identity(self) -> Constraint:
        self.skip_ws()
        offset = self.pos
        if self.eat("!=="):
            return self.parse_identity(equal=False)
        if self.eat("=="):
            return self.parse_identity(equal=True)
        negated = False
        if self.peek() == "!":
            negated = True
            self.pos += 1
            self.skip_ws()
        op = None
        for spelling in OPERATORS:
            if self.eat(spelling):
                op = spelling
                break
        if op is None:
            self.fail(["relation operator"])
        self.skip_ws()
        label = None
        if self.eat("/"):
            label = LabelTest(self.take_regex_body(), is_regex=True)
        elif _LABEL_RE.match(self.text, self.pos):
            label = LabelTest(self.take(_LABEL_RE, "relation label"))
        if label is not None and op not in EDGE_OPERATORS:
            raise PatternError(
                f"operator {op!r} at offset {offset} is an order test and does not take a label")
        self.skip_ws()
        edge_name = None
        if self.peek() == "=" and not self.startswith("=="):
            self.pos += 1
            edge_name = self.take(_NAME_RE, "edge name")
            if op not in EDGE_OPERATORS:
                raise PatternError(
                    f"operator {op!r} at offset {offset} does not bind an edge name")
            if negated:
                raise PatternError(
                    f"negated relation at offset {offset} cannot bind edge name {edge_name!r}")
        target = self.parse_node_atom()
        return RelConstraint(op, label, edge_name, negated, target)

    def parse_identity(self, equal: bool) -> IdentityTest:
        offset = self.pos
        target = self.parse_node_atom()
        desc = target.desc
        if (desc.tests or desc.is_root_anchor or desc.negated or target.constraints
                or desc.name is None):
            raise PatternError(
                f"identity test at offset {offset} must point at a plain named node"
                " reference like {}=name")
        return IdentityTest(equal, desc.name)


def parse_pattern(text: str) -> Pattern:
    """Parse pattern text into a validated :class:`Pattern`."""
    parser = _Parser(text)
    root = parser.parse_node_expr()
    parser.skip_ws()
    if parser.pos < len(parser.text):
        parser.fail(["end of pattern"])
    names, edge_names, count = _validate(root)
    return Pattern(root, frozenset(names), frozenset(edge_names),
                   source=text, n_positions=count)


def _validate(root: PatternNode) -> tuple[set[str], set[str], int]:
    names: set[str] = set()
    edge_names: set[str] = set()
    identity_refs: set[str] = set()
    counter = 0

    def visit_node(node: PatternNode, under_negation: bool) -> None:
        nonlocal counter
        node.pos = counter
        counter += 1
        desc = node.desc
        if desc.name is not None:
            if desc.negated:
                raise PatternError(f"negated node cannot bind name {desc.name!r}")
            if under_negation:
                raise PatternError(
                    f"name {desc.name!r} is bound inside a negated constraint")
            if desc.name in edge_names:
                raise PatternError(
                    f"name {desc.name!r} is used for both a node and an edge")
            names.add(desc.name)
        for constraint in node.constraints:
            visit_constraint(constraint, node, under_negation)

    def visit_constraint(constraint: Constraint, node: PatternNode,
                         under_negation: bool) -> None:
        if isinstance(constraint, (OrExpr, AndExpr)):
            for part in constraint.parts:
                visit_constraint(part, node, under_negation)
            return
        if isinstance(constraint, IdentityTest):
            if under_negation:
                raise PatternError(
                    f"identity test referencing {constraint.name!r} appears"
                    " inside a negated constraint")
            identity_refs.add(constraint.name)
            return
        if constraint.edge_name is not None:
            if under_negation:
                raise PatternError(
                    f"edge name {constraint.edge_name!r} is bound inside a"
                    " negated constraint")
            if constraint.edge_name in edge_names:
                raise PatternError(f"edge name {constraint.edge_name!r} declared twice")
            if constraint.edge_name in names:
                raise PatternError(
                    f"name {constraint.edge_name!r} is used for both a node and an edge")
            edge_names.add(constraint.edge_name)
        visit_node(constraint.target, under_negation or constraint.negated)

    visit_node(root, False)
    missing = identity_refs - names
    if missing:
        raise PatternError(
            f"backreference to undeclared name: {', '.join(sorted(missing))}")
    conflicts = names & edge_names
    if conflicts:
        raise PatternError(
            f"name used for both a node and an edge: {', '.join(sorted(conflicts))}")
    return names, edge_names, counter


# -- printing ---------------------------------------------------------------


def print_pattern(pattern: Pattern) -> str:
    """Canonical text form; reparsing it yields a structurally equal AST."""
    return _node_text(pattern.root, as_target=False)


def _regex_text(body: str) -> str:
    return "/" + body.replace("/", "\\/") + "/"


def _node_text(node: PatternNode, as_target: bool) -> str:
    desc = node.desc
    if desc.is_root_anchor:
        core = "{$}"
    elif not desc.tests:
        core = "{}"
    else:
        core = "{" + ";".join(
            f"{t.key}:{_regex_text(t.value) if t.is_regex else t.value}"
            for t in desc.tests) + "}"
    text = ("!" if desc.negated else "") + core
    if desc.name is not None:
        text += f"={desc.name}"
    if node.constraints:
        body = text + " " + " ".join(_constraint_text(c) for c in node.constraints)
        return f"({body})" if as_target else body
    return text


def _constraint_text(constraint: Constraint) -> str:
    if isinstance(constraint, IdentityTest):
        op = "==" if constraint.equal else "!=="
        return f"{op} {{}}={constraint.name}"
    if isinstance(constraint, OrExpr):
        return "[" + " | ".join(_or_part_text(p) for p in constraint.parts) + "]"
    if isinstance(constraint, AndExpr):
        return "[" + " & ".join(_and_part_text(p) for p in constraint.parts) + "]"
    text = "!" if constraint.negated else ""
    text += constraint.op
    if constraint.label is not None:
        text += (_regex_text(constraint.label.value) if constraint.label.is_regex
                 else constraint.label.value)
    if constraint.edge_name is not None:
        text += f"={constraint.edge_name}"
    return text + " " + _node_text(constraint.target, as_target=True)


def _or_part_text(part: Constraint) -> str:
    if isinstance(part, AndExpr):
        return " & ".join(_and_part_text(p) for p in part.parts)
    return _constraint_text(part)


def _and_part_text(part: Constraint) -> str:
    # An alternation nested under a conjunction needs its own brackets.
    return _constraint_text(part)
