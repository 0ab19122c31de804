"""Search and rewrite dependency graphs.

Parse CoNLL-U treebanks into dependency graphs, query them with a compact
pattern language (node attribute tests chained by structural and word-order
relations, with named captures), and transform them with rewrite rules
built from those patterns.
"""

from ._kernel import available_backends, backend_name, set_backend
from .conllu import Document, parse_document, parse_file, serialize_document
from .errors import (ConlluError, EditError, GraphError, IterationLimitError,
                     PatternError, PatternSyntaxError, RuleError, SemgrexError)
from .graph import DepGraph, Edge, MwtSpan, Node, NodeId
from .matcher import Match, MatchSet, evaluate_relation, find_matches, matches_at
from .pattern import Pattern, parse_pattern, print_pattern
from .ssurgeon import (EditReport, SsurgeonRule, apply_edit, apply_rule,
                       apply_rules, load_rules, parse_rule_file)

__version__ = "0.1.0"

__all__ = [
    "ConlluError", "DepGraph", "Document", "Edge", "EditError", "EditReport",
    "GraphError", "IterationLimitError", "Match", "MatchSet", "MwtSpan",
    "Node", "NodeId", "Pattern", "PatternError", "PatternSyntaxError",
    "RuleError", "SemgrexError", "SsurgeonRule", "apply_edit", "apply_rule",
    "apply_rules", "available_backends", "backend_name", "evaluate_relation",
    "find_matches", "load_rules", "matches_at", "parse_document", "parse_file",
    "parse_pattern", "parse_rule_file", "print_pattern", "serialize_document",
    "set_backend",
]
