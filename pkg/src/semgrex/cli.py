"""Command line front end: search and rewrite CoNLL-U treebanks.

    semgrex search  -p '{} <nsubj {}' corpus.conllu
    semgrex rewrite --rules edits.rules corpus.conllu

Exit codes for search: 0 when something matched, 1 when nothing did, 2 on
any error.  Rewrite exits 0 on success (whether or not anything changed)
and 2 on error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import conllu, ssurgeon
from .errors import RuleError, SemgrexError
from .matcher import MatchSet, find_matches
from .pattern import Pattern, parse_pattern


def _read_inputs(paths: list[str], mode: str) -> list[conllu.Document]:
    if not paths or paths == ["-"]:
        return [conllu.parse_document(sys.stdin.read(), mode, source_name="<stdin>")]
    return [conllu.parse_file(path, mode) for path in paths]


def _sentence_text(graph) -> str:
    for comment in graph.comments:
        body = comment.lstrip("#").strip()
        if body.startswith("text ") or body.startswith("text="):
            return body.split("=", 1)[1].strip()
    return " ".join(graph.words())


def _load_patterns(args) -> list[Pattern]:
    sources = list(args.pattern or [])
    if args.pattern_file:
        with open(args.pattern_file, encoding="utf-8") as handle:
            block: list[str] = []
            for line in handle.read().split("\n"):
                if line.strip().startswith("#"):
                    continue
                if not line.strip():
                    if block:
                        sources.append("\n".join(block))
                        block = []
                    continue
                block.append(line)
            if block:
                sources.append("\n".join(block))
    if not sources:
        raise SemgrexError("no pattern given; use --pattern or --pattern-file")
    return [parse_pattern(src) for src in sources]


def _match_line(sent_index: int, match, words: dict) -> str:
    parts = [f"sent#{sent_index}", f"anchor={match.anchor}({words[match.anchor]})"]
    for name in sorted(match.node_bindings):
        nid = match.node_bindings[name]
        parts.append(f"{name}={nid}({words[nid]})")
    for name in sorted(match.edge_bindings):
        edge = match.edge_bindings[name]
        parts.append(f"edge {name}={edge.gov}->{edge.dep}:{edge.relation}")
    return " ".join(parts)


def _match_json(match, words: dict) -> dict:
    return {
        "anchor": {"index": str(match.anchor), "word": words[match.anchor]},
        "nodes": {name: {"index": str(nid), "word": words[nid]}
                  for name, nid in sorted(match.node_bindings.items())},
        "edges": {name: {"gov": str(e.gov), "dep": str(e.dep), "reln": e.relation}
                  for name, e in sorted(match.edge_bindings.items())},
    }


def cmd_search(args) -> int:
    try:
        patterns = _load_patterns(args)
        docs = _read_inputs(args.files, args.mode)
    except (SemgrexError, OSError) as exc:
        print(f"semgrex: {exc}", file=sys.stderr)
        return 2

    total = 0
    report = {"patterns": [p.source for p in patterns], "sentences": []}
    lines: list[str] = []
    for doc in docs:
        for sent_index, graph in enumerate(doc.sentences, start=1):
            entry = {
                "source": doc.source_name,
                "sentenceIndex": sent_index,
                "text": _sentence_text(graph),
                "matches": [],
            }
            words = {n.id: n.word for n in graph.nodes}
            for pat_index, pattern in enumerate(patterns):
                matched: MatchSet = find_matches(graph, pattern)
                for match in matched:
                    total += 1
                    lines.append(_match_line(sent_index, match, words))
                    record = _match_json(match, words)
                    record["patternIndex"] = pat_index
                    entry["matches"].append(record)
            report["sentences"].append(entry)

    if args.quiet:
        print(total)
    elif args.format == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        for line in lines:
            print(line)
    return 0 if total else 1


def cmd_rewrite(args) -> int:
    try:
        rules = ssurgeon.load_rules(args.rules)
        docs = _read_inputs(args.files, args.mode)
    except (SemgrexError, OSError) as exc:
        print(f"semgrex: {exc}", file=sys.stderr)
        return 2

    if args.in_place and (not args.files or args.files == ["-"]):
        print("semgrex: --in-place needs file arguments", file=sys.stderr)
        return 2

    outputs = []
    for doc in docs:
        try:
            report = ssurgeon.apply_rules(doc, rules)
        except RuleError as exc:
            where = (f"sentence {exc.sentence_index}: "
                     if exc.sentence_index is not None else "")
            print(f"semgrex: {doc.source_name}: {where}{exc}", file=sys.stderr)
            return 2
        except SemgrexError as exc:
            print(f"semgrex: {doc.source_name}: {exc}", file=sys.stderr)
            return 2
        if args.report:
            for sentence in report.sentences:
                for outcome in sentence.outcomes:
                    print(f"{doc.source_name}: sentence {sentence.sentence_index}:"
                          f" {outcome.rule_id}: {outcome.changes} changes"
                          f" in {outcome.iterations} iterations", file=sys.stderr)
        try:
            outputs.append(conllu.serialize_document(doc, args.mode))
        except SemgrexError as exc:
            print(f"semgrex: {doc.source_name}: {exc}", file=sys.stderr)
            return 2

    if args.in_place:
        for doc, text in zip(docs, outputs):
            with open(doc.source_name, "w", encoding="utf-8") as handle:
                handle.write(text)
    else:
        for text in outputs:
            sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semgrex",
        description="Search and rewrite dependency graphs in CoNLL-U files.")
    sub = parser.add_subparsers(dest="command", required=True)

    search = sub.add_parser("search", help="print matches of search patterns")
    search.add_argument("-p", "--pattern", action="append",
                        help="search pattern (repeatable)")
    search.add_argument("--pattern-file",
                        help="file of patterns, separated by blank lines")
    search.add_argument("--mode", choices=conllu.MODES, default="basic",
                        help="dependency layer to read (default: basic)")
    search.add_argument("--format", choices=("text", "json"), default="text")
    search.add_argument("--quiet", action="store_true",
                        help="print only the total match count")
    search.add_argument("files", nargs="*",
                        help="CoNLL-U files ('-' or none: standard input)")
    search.set_defaults(func=cmd_search)

    rewrite = sub.add_parser("rewrite", help="apply rewrite rules to a treebank")
    rewrite.add_argument("--rules", required=True, help="rewrite rule file")
    rewrite.add_argument("--mode", choices=conllu.MODES, default="basic")
    rewrite.add_argument("--report", action="store_true",
                         help="print per-sentence change counts to stderr")
    rewrite.add_argument("--in-place", action="store_true",
                         help="rewrite the input files instead of printing")
    rewrite.add_argument("files", nargs="*",
                         help="CoNLL-U files ('-' or none: standard input)")
    rewrite.set_defaults(func=cmd_rewrite)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SemgrexError as exc:
        print(f"semgrex: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
