"""CoNLL-U reading and writing.

A document is a sequence of sentence blocks, each a run of 10-column
tab-separated rows with ``#`` comment lines attached above and a blank
line after.  ``mode`` picks which dependency layer becomes the graph's
edges: ``"basic"`` reads HEAD/DEPREL (empty ``N.M`` nodes are kept only
as opaque rows), ``"enhanced"`` reads the DEPS column and materializes
empty nodes as copy nodes.  Whichever layer is not selected rides along
verbatim so that parsing and serializing a file reproduces it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConlluError, GraphError
from .graph import DepGraph, MwtSpan, Node, NodeId

MODES = ("basic", "enhanced")


@dataclass
class Document:
    sentences: list[DepGraph] = field(default_factory=list)
    source_name: str = "<string>"
    trailing_comments: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, not {mode!r}")


def parse_file(path: str, mode: str = "basic") -> Document:
    with open(path, encoding="utf-8") as handle:
        return parse_document(handle.read(), mode, source_name=path)


def parse_document(text: str, mode: str = "basic", source_name: str = "<string>") -> Document:
    _check_mode(mode)
    doc = Document(source_name=source_name)
    comments: list[str] = []
    rows: list[tuple[int, list[str]]] = []
    start_line = 1
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            if rows:
                doc.sentences.append(
                    _build_sentence(rows, comments, mode, start_line, source_name))
                comments, rows = [], []
            start_line = lineno + 1
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"expected 10 tab-separated columns, got {len(cols)}",
                              lineno, source_name)
        rows.append((lineno, cols))
    if rows:
        doc.sentences.append(_build_sentence(rows, comments, mode, start_line, source_name))
    elif comments:
        doc.trailing_comments = comments
    return doc


def _pairs(column: str) -> list[tuple[str, str]]:
    # "A=1|B=2" -> [("A","1"),("B","2")]; a piece without "=" is kept
    # losslessly under an empty key.
    if column == "_":
        return []
    out = []
    for item in column.split("|"):
        key, sep, value = item.partition("=")
        out.append((key, value) if sep else ("", item))
    return out


def _opt(column: str) -> str | None:
    return None if column == "_" else column


def _build_sentence(rows, comments, mode, start_line, source):
    graph = DepGraph(comments)
    seen_ids: set[str] = set()
    token_rows: list[tuple[int, list[str]]] = []
    empty_rows: list[tuple[int, list[str]]] = []

    for lineno, cols in rows:
        raw_id = cols[0]
        if raw_id in seen_ids:
            raise ConlluError(f"duplicate ID {raw_id}", lineno, source)
        seen_ids.add(raw_id)
        if "-" in raw_id:
            try:
                lo, hi = (int(p) for p in raw_id.split("-", 1))
            except ValueError:
                raise ConlluError(f"malformed range ID {raw_id!r}", lineno, source) from None
            graph.mwt_spans.append(MwtSpan(lo, hi, cols[1], cols[9]))
        elif "." in raw_id:
            empty_rows.append((lineno, cols))
        else:
            try:
                int(raw_id)
            except ValueError:
                raise ConlluError(f"malformed ID {raw_id!r}", lineno, source) from None
            token_rows.append((lineno, cols))

    for lineno, cols in token_rows:
        node = Node(NodeId(int(cols[0])), cols[1], lemma=_opt(cols[2]),
                    upos=_opt(cols[3]), tag=_opt(cols[4]),
                    feats=_pairs(cols[5]), misc=_pairs(cols[9]))
        _adopt_misc_ner(node)
        if mode == "basic":
            node.raw_deps = _opt(cols[8])
        else:
            node.raw_basic = (cols[6], cols[7]) if (cols[6], cols[7]) != ("_", "_") else None
        try:
            graph.add_node(node)
        except GraphError as exc:
            raise ConlluError(str(exc), lineno, source) from None

    for lineno, cols in empty_rows:
        if mode == "basic":
            graph.hidden_empty_rows.append(list(cols))
            continue
        try:
            nid = NodeId.from_string(cols[0])
        except ValueError:
            raise ConlluError(f"malformed ID {cols[0]!r}", lineno, source) from None
        node = Node(nid, cols[1], lemma=_opt(cols[2]), upos=_opt(cols[3]),
                    tag=_opt(cols[4]), feats=_pairs(cols[5]), misc=_pairs(cols[9]))
        _adopt_misc_ner(node)
        try:
            graph.add_node(node)
        except GraphError as exc:
            raise ConlluError(str(exc), lineno, source) from None

    if mode == "basic":
        for lineno, cols in token_rows:
            nid = NodeId(int(cols[0]))
            try:
                head = int(cols[6])
            except ValueError:
                raise ConlluError(f"non-integer HEAD {cols[6]!r}", lineno, source) from None
            if head == 0:
                graph.declared_roots[nid] = cols[7]
                continue
            if NodeId(head) not in graph:
                raise ConlluError(f"HEAD {head} references a missing ID", lineno, source)
            _add_parsed_edge(graph, NodeId(head), nid, cols[7], lineno, source)
    else:
        for lineno, cols in token_rows + empty_rows:
            nid = NodeId.from_string(cols[0])
            deps = cols[8]
            if deps == "_":
                continue
            for item in deps.split("|"):
                head_text, sep, rel = item.partition(":")
                if not sep:
                    raise ConlluError(f"malformed DEPS item {item!r}", lineno, source)
                try:
                    head = NodeId.from_string(head_text)
                except ValueError:
                    raise ConlluError(f"malformed DEPS head {head_text!r}",
                                      lineno, source) from None
                if head == NodeId(0):
                    if nid in graph.declared_roots:
                        raise ConlluError(f"duplicate dependency 0:{rel} on {nid}",
                                          lineno, source)
                    graph.declared_roots[nid] = rel
                    continue
                if head not in graph:
                    raise ConlluError(f"DEPS head {head_text} references a missing ID",
                                      lineno, source)
                _add_parsed_edge(graph, head, nid, rel, lineno, source)

    if len(graph) and not graph.declared_roots:
        raise ConlluError(f"sentence has no root in {mode} mode", start_line, source)
    return graph


def _add_parsed_edge(graph, gov, dep, rel, lineno, source):
    try:
        added = graph.add_edge(gov, dep, rel)
    except GraphError as exc:
        raise ConlluError(str(exc), lineno, source) from None
    if not added:
        raise ConlluError(f"duplicate dependency {rel}({gov}, {dep})", lineno, source)


def _adopt_misc_ner(node: Node) -> None:
    for key, value in node.misc:
        if key in ("ner", "NER"):
            node.ner = value
            break


# -- serialization ---------------------------------------------------------


def serialize_document(doc: Document, mode: str = "basic") -> str:
    _check_mode(mode)
    out = "".join(_render_sentence(graph, mode) + "\n" for graph in doc.sentences)
    if doc.trailing_comments:
        out += "\n".join(doc.trailing_comments) + "\n"
    return out


def _render_sentence(graph: DepGraph, mode: str) -> str:
    lines = list(graph.comments)
    keyed: list[tuple[tuple[int, int, int], str]] = []
    for order, span in enumerate(sorted(graph.mwt_spans, key=lambda s: (s.start, s.end))):
        cols = [f"{span.start}-{span.end}", span.form] + ["_"] * 7 + [span.misc]
        keyed.append(((span.start, 0, 0), "\t".join(cols)))
    for node in graph.nodes:
        keyed.append(((node.id.index, node.id.copy, 1), _render_node(graph, node, mode)))
    for cols in graph.hidden_empty_rows:
        base, copy = cols[0].split(".", 1)
        keyed.append(((int(base), int(copy), 1), "\t".join(cols)))
    keyed.sort(key=lambda pair: pair[0])
    lines.extend(line for _, line in keyed)
    return "\n".join(lines) + "\n"


def _render_node(graph: DepGraph, node: Node, mode: str) -> str:
    if mode == "basic":
        head, deprel = _basic_columns(graph, node)
        deps = node.raw_deps if node.raw_deps is not None else "_"
    else:
        head, deprel = node.raw_basic if node.raw_basic is not None else ("_", "_")
        deps = _deps_column(graph, node)
    cols = [
        str(node.id),
        node.word,
        node.lemma if node.lemma is not None else "_",
        node.upos if node.upos is not None else "_",
        node.tag if node.tag is not None else "_",
        _render_pairs(node.feats),
        head,
        deprel,
        deps,
        _render_misc(node),
    ]
    return "\t".join(cols)


def _basic_columns(graph: DepGraph, node: Node) -> tuple[str, str]:
    if node.id.copy:
        raise GraphError(
            f"cannot express copy node {node.id} in basic mode; serialize as enhanced")
    incoming = graph.governors(node.id)
    if len(incoming) > 1:
        raise GraphError(
            f"node {node.id} has {len(incoming)} governors; serialize as enhanced")
    if not incoming:
        return "0", graph.declared_roots.get(node.id, "root")
    edge = incoming[0]
    if edge.gov.copy:
        raise GraphError(
            f"node {node.id} is governed by copy node {edge.gov}; serialize as enhanced")
    return str(edge.gov.index), edge.relation


def _deps_column(graph: DepGraph, node: Node) -> str:
    items = []
    if node.id in graph.declared_roots:
        items.append((NodeId(0), graph.declared_roots[node.id]))
    items.extend((e.gov, e.relation) for e in graph.governors(node.id))
    items.sort()
    if not items:
        return "_"
    return "|".join(f"{gov}:{rel}" for gov, rel in items)


def _render_pairs(pairs: list[tuple[str, str]]) -> str:
    if not pairs:
        return "_"
    return "|".join(value if key == "" else f"{key}={value}" for key, value in pairs)


def _render_misc(node: Node) -> str:
    pairs = [p for p in node.misc if p[0] not in ("ner", "NER") or node.ner is not None]
    if node.ner is not None:
        replaced = False
        pairs = list(pairs)
        for i, (key, _value) in enumerate(pairs):
            if key in ("ner", "NER"):
                pairs[i] = (key, node.ner)
                replaced = True
                break
        if not replaced:
            pairs.append(("ner", node.ner))
    return _render_pairs(pairs)
