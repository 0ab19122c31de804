"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SemgrexError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(SemgrexError):
    """Illegal graph operation: unknown node, self-loop, bad serialization."""


class ConlluError(SemgrexError):
    """Malformed CoNLL-U input. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}: "
        if line is not None:
            where += f"line {line}: "
        super().__init__(where + message)


class PatternError(SemgrexError):
    """Problem with a search pattern (syntax or validation)."""


class PatternSyntaxError(PatternError):
    """Syntax error at a byte offset, with the token set that was expected."""

    def __init__(self, offset: int, expected: list[str], found: str):
        self.offset = offset
        self.expected = sorted(expected)
        self.found = found
        super().__init__(
            f"syntax error at offset {offset}: expected one of "
            f"{', '.join(self.expected)}; found {found!r}"
        )


class RuleError(SemgrexError):
    """Problem with a rewrite rule file or rule application."""

    sentence_index: int | None = None  # set when raised during document processing

    def __init__(self, message: str, rule_id: str | None = None, line: int | None = None):
        self.rule_id = rule_id
        self.line = line
        where = ""
        if rule_id is not None:
            where += f"{rule_id}: "
        if line is not None:
            where += f"line {line}: "
        super().__init__(where + message)


class EditError(RuleError):
    """An edit directive could not be applied to a matched graph."""


class IterationLimitError(RuleError):
    """A rule kept changing the graph past its iteration cap.

    Usually means an unguarded node-adding rule that re-matches its own
    output; add a negative guard to the pattern so the rewrite converges.
    """
