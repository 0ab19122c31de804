import pytest

from semgrex import (EditError, IterationLimitError, NodeId, RuleError,
                     apply_edit, apply_rule, apply_rules, find_matches,
                     parse_document, parse_rule_file)
from semgrex.ssurgeon import (AddEdge, AddNode, EditNode, Position,
                              RelabelNamedEdge, RemoveEdge, RemoveNamedEdge,
                              RemoveSubgraph, load_rules)
from conftest import DATA, load

RULES = DATA / "rules"


def edge_set(graph):
    return {(e.gov.index, e.dep.index, e.relation) for e in graph.edges}


def rule_from(text):
    return parse_rule_file(text)[0]


# -- rule file parsing ---------------------------------------------------------

def test_parse_add_edge_block():
    rules = load_rules(str(RULES / "add_nsubj.rules"))
    assert len(rules) == 1
    rule = rules[0]
    assert rule.pattern.names == {"A", "B", "C"}
    assert rule.edits == (AddEdge("A", "C", "nsubj"),)


def test_parse_relabel_block():
    rule = load_rules(str(RULES / "relabel.rules"))[0]
    assert rule.edits == (RelabelNamedEdge("conj", "dep"),)


def test_parse_all_directive_kinds():
    rules = parse_rule_file("""
{}=A > {}=B
removeEdge -gov A -dep B

{}=A >det=d {}
removeNamedEdge -edge d

{}=A !>det {}
addNode -word=a -lemma=a -reln det -gov A -position +A

{}=A > {}=B
removeSubgraph -node B

{}=A
editNode -node A -word=x -lemma=
""")
    assert [type(r.edits[0]) for r in rules] == [
        RemoveEdge, RemoveNamedEdge, AddNode, RemoveSubgraph, EditNode]
    add = rules[2].edits[0]
    assert add.attrs == {"word": "a", "lemma": "a"}
    assert add.position == Position("before", "A")
    assert rules[4].edits[0].assignments == {"word": "x", "lemma": ""}


def test_multiple_edits_one_rule():
    rule = rule_from("{}=A > {}=B\nremoveEdge -gov A -dep B\naddEdge -gov B -dep A -reln dep\n")
    assert len(rule.edits) == 2


@pytest.mark.parametrize("text,complaint", [
    ("{}=A\naddEdge -gov A -dep D -reln x\n", "name 'D'"),
    ("{}=A\neditNode -node A -x=1\nfrobnicate -gov A\n", "unknown directive"),
    ("{}=A\naddEdge -gov A -dep A -plonk x\n", "unknown flag"),
    ("{}=A\naddEdge -gov A -reln x\n", "requires -dep"),
    ("{}=A\naddNode -reln det -gov A -position +A\n", "-word"),
    ("{}=A\naddNode -word=a -reln det -gov A -position ~A\n", "bad position"),
    ("{}=A\nremoveNamedEdge -edge e\n", "edge name 'e'"),
    ("{}=A\neditNode -node A\n", "at least one"),
    ("{}=A\naddEdge -gov A -dep A -reln=x\n", "separate value"),
    ("{}=A\nremoveEdge -gov A -dep A -gov A\n", "twice"),
    ("addEdge -gov A -dep B -reln x\n", "no search pattern"),
    ("{}=A\n", "no edit directives"),
    ("{=A\naddEdge -gov A -dep A -reln x\n", "bad pattern"),
])
def test_rule_load_errors(text, complaint):
    with pytest.raises(RuleError, match=complaint) as err:
        parse_rule_file(text)
    assert err.value.rule_id == "rule-1"
    assert err.value.line is not None


def test_rule_ids_and_comments():
    rules = parse_rule_file(
        "# comment\n{}=A\neditNode -node A -word=x\n\n\n"
        "# another\n{}=B\neditNode -node B -word=y\n")
    assert [r.id for r in rules] == ["rule-1", "rule-2"]


def test_multi_line_pattern(paul_enhanced):
    rule = rule_from("{word:running}\n"
                     "  >nsubj {}=B\n"
                     "  >nsubj ({}=C !== {}=B)\n"
                     "removeEdge -gov B -dep C -reln conj\n")
    assert rule.pattern.names == {"B", "C"}
    apply_rule(paul_enhanced, rule)
    assert (1, 3, "conj") not in edge_set(paul_enhanced)


# -- apply_edit ----------------------------------------------------------------

def match_one(graph, pattern):
    ms = find_matches(graph, pattern)
    assert ms
    return ms[0]


def test_add_edge_edit(paul_basic):
    m = match_one(paul_basic, "{word:running}=A >nsubj ({}=B >conj {}=C)")
    edit = AddEdge("A", "C", "nsubj")
    assert apply_edit(paul_basic, m, edit) is True
    assert (5, 3, "nsubj") in edge_set(paul_basic)
    m = match_one(paul_basic, "{word:running}=A >nsubj ({}=B >conj {}=C)")
    assert apply_edit(paul_basic, m, edit) is False


def test_add_node_edit(hamburger):
    m = match_one(hamburger, "{word:bought} >obj ({}=A !>det {})")
    edit = AddNode({"word": "a"}, "det", "A", Position("before", "A"))
    assert apply_edit(hamburger, m, edit) is True
    assert [n.word for n in hamburger.nodes] == ["I", "bought", "a", "hamburger"]
    assert edge_set(hamburger) == {(2, 1, "nsubj"), (2, 4, "obj"), (4, 3, "det")}


def test_add_node_start_end(jen):
    m = match_one(jen, "{word:rescued}=A")
    apply_edit(jen, m, AddNode({"word": "yes"}, "discourse", "A", Position("start")))
    assert [n.word for n in jen.nodes][0] == "yes"
    m = match_one(jen, "{word:rescued}=A")
    apply_edit(jen, m, AddNode({"word": "!"}, "punct", "A", Position("end")))
    assert [n.word for n in jen.nodes] == ["yes", "Jen", "rescued", "Beckett", "!"]
    assert (3, 5, "punct") in edge_set(jen)


def test_remove_named_edge_edit(paul_enhanced):
    m = match_one(paul_enhanced,
                  "{word:running} >nsubj {}=B >nsubj ({}=C >conj=conj {}=B)")
    edit = RemoveNamedEdge("conj")
    assert apply_edit(paul_enhanced, m, edit) is True
    assert (1, 3, "conj") not in edge_set(paul_enhanced)
    assert apply_edit(paul_enhanced, m, edit) is False  # already gone


def test_relabel_edit(paul_enhanced):
    m = match_one(paul_enhanced,
                  "{word:running} >nsubj {}=B >nsubj ({}=C >conj=conj {}=B)")
    nodes_before = paul_enhanced.node_ids()
    count_before = len(paul_enhanced.edges)
    assert apply_edit(paul_enhanced, m, RelabelNamedEdge("conj", "dep")) is True
    assert (1, 3, "dep") in edge_set(paul_enhanced)
    assert (1, 3, "conj") not in edge_set(paul_enhanced)
    assert paul_enhanced.node_ids() == nodes_before
    assert len(paul_enhanced.edges) == count_before
    assert apply_edit(paul_enhanced, m, RelabelNamedEdge("conj", "dep")) is False


def test_edit_node_edit(jen):
    m = match_one(jen, "{word:Beckett}=A")
    edit = EditNode("A", {"word": "Becky", "ner": "PERSON", "lemma": ""})
    assert apply_edit(jen, m, edit) is True
    node = jen.node(NodeId(3))
    assert (node.word, node.ner, node.lemma) == ("Becky", "PERSON", None)
    assert apply_edit(jen, m, edit) is False  # everything already equal


def test_edit_node_extras_and_index_guard(jen):
    m = match_one(jen, "{word:Jen}=A")
    assert apply_edit(jen, m, EditNode("A", {"animacy": "human"})) is True
    assert jen.node(NodeId(1)).extras == {"animacy": "human"}
    assert len(find_matches(jen, "{animacy:human}")) == 1
    with pytest.raises(EditError, match="indices"):
        apply_edit(jen, m, EditNode("A", {"idx": "4"}))


def test_remove_subgraph_edit(guerrillas):
    m = match_one(guerrillas, "{word:surgeon}=A")
    assert apply_edit(guerrillas, m, RemoveSubgraph("A")) is True
    assert [n.word for n in guerrillas.nodes] == ["guerrillas", "kidnapped"]


def test_consumed_binding_raises():
    rule = rule_from("{}=A > {}=B\nremoveSubgraph -node B\neditNode -node B -word=x\n")
    g = load("jen.conllu").sentences[0]
    with pytest.raises(EditError, match="removed by an earlier edit"):
        apply_rule(g, rule)


def test_bindings_remap_across_insertion(hamburger):
    # edit after addNode must see the shifted id of its target
    rule = rule_from(
        "{word:bought} >obj ({}=A !>det {})\n"
        "addNode -word=a -reln det -gov A -position +A\n"
        "editNode -node A -nodetype=target\n")
    apply_rule(hamburger, rule)
    assert hamburger.node(NodeId(4)).extras == {"nodetype": "target"}
    assert hamburger.node(NodeId(4)).word == "hamburger"


# -- apply_rule ----------------------------------------------------------------

def test_guarded_add_node_converges(hamburger):
    rule = load_rules(str(RULES / "add_det.rules"))[0]
    iterations, changes = apply_rule(hamburger, rule)
    assert iterations == 1
    assert [n.word for n in hamburger.nodes] == ["I", "bought", "a", "hamburger"]
    assert [n.word for n in hamburger.nodes].count("a") == 1
    assert edge_set(hamburger) == {(2, 1, "nsubj"), (2, 4, "obj"), (4, 3, "det")}
    again = apply_rule(hamburger, rule)
    assert again == (0, 0)


def test_unguarded_add_node_hits_cap(hamburger):
    rule = load_rules(str(RULES / "add_det_unguarded.rules"))[0]
    with pytest.raises(IterationLimitError, match="guard"):
        apply_rule(hamburger, rule)


def test_unguarded_cap_is_configurable(hamburger):
    rule = load_rules(str(RULES / "add_det_unguarded.rules"))[0]
    with pytest.raises(IterationLimitError):
        apply_rule(hamburger, rule, max_iterations=5)
    assert [n.word for n in hamburger.nodes].count("a") == 5


def test_add_edge_rule_builds_enhanced_layer(paul_basic, paul_enhanced):
    rule = load_rules(str(RULES / "add_nsubj.rules"))[0]
    iterations, changes = apply_rule(paul_basic, rule)
    assert (iterations, changes) == (1, 1)
    assert edge_set(paul_basic) == edge_set(paul_enhanced)


def test_remove_edge_rule(paul_enhanced):
    rule = load_rules(str(RULES / "remove_conj.rules"))[0]
    iterations, changes = apply_rule(paul_enhanced, rule)
    assert (iterations, changes) == (1, 1)
    assert edge_set(paul_enhanced) == {(5, 1, "nsubj"), (5, 3, "nsubj"),
                                       (3, 2, "cc"), (5, 4, "aux")}


def test_remove_named_edge_rule(paul_enhanced):
    rule = load_rules(str(RULES / "remove_named.rules"))[0]
    apply_rule(paul_enhanced, rule)
    assert edge_set(paul_enhanced) == {(5, 1, "nsubj"), (5, 3, "nsubj"),
                                       (3, 2, "cc"), (5, 4, "aux")}


def test_relabel_rule(paul_enhanced):
    rule = load_rules(str(RULES / "relabel.rules"))[0]
    apply_rule(paul_enhanced, rule)
    assert edge_set(paul_enhanced) == {(5, 1, "nsubj"), (5, 3, "nsubj"),
                                       (1, 3, "dep"), (3, 2, "cc"), (5, 4, "aux")}


def test_fixpoint_idempotence(paul_enhanced, hamburger):
    for fixture, name in ((paul_enhanced, "remove_conj.rules"),
                          (hamburger, "add_det.rules")):
        rule = load_rules(str(RULES / name))[0]
        apply_rule(fixture, rule)
        assert apply_rule(fixture, rule) == (0, 0)


def test_graph_stays_valid_after_every_edit(paul_basic, hamburger):
    cases = [
        (paul_basic, "{word:running}=A >nsubj ({}=B >conj {}=C)",
         AddEdge("A", "C", "nsubj")),
        (hamburger, "{word:bought} >obj ({}=A !>det {})",
         AddNode({"word": "a"}, "det", "A", Position("before", "A"))),
    ]
    for graph, pattern, edit in cases:
        apply_edit(graph, match_one(graph, pattern), edit)
        node_set = set(graph.node_ids())
        for e in graph.edges:
            assert e.gov in node_set and e.dep in node_set and e.gov != e.dep
        assert [issue for issue in graph.validate()] == []


def test_add_then_remove_restores(hamburger):
    original = hamburger.copy()
    add = rule_from("{word:bought} >obj ({}=A !>det {})\n"
                    "addNode -word=a -reln det -gov A -position +A\n")
    remove = rule_from("{word:a;idx:3}=N\nremoveSubgraph -node N\n")
    apply_rule(hamburger, add)
    apply_rule(hamburger, remove)
    assert hamburger == original


def test_conservation_of_tokens(paul_enhanced):
    words = [n.word for n in paul_enhanced.nodes]
    rule = load_rules(str(RULES / "remove_conj.rules"))[0]
    apply_rule(paul_enhanced, rule)
    assert [n.word for n in paul_enhanced.nodes] == words


# -- apply_rules over documents --------------------------------------------------

def test_apply_rules_empty_list():
    doc = load("paul.conllu", "enhanced")
    before = [g.copy() for g in doc.sentences]
    report = apply_rules(doc, [])
    assert report.total_changes == 0
    assert doc.sentences == before


def test_apply_rules_report():
    text = (DATA / "paul.conllu").read_text() + (DATA / "hamburger.conllu").read_text()
    doc = parse_document(text, "basic")
    rules = parse_rule_file((RULES / "add_nsubj.rules").read_text()
                            + "\n" + (RULES / "add_det.rules").read_text())
    assert [r.id for r in rules] == ["rule-1", "rule-2"]
    report = apply_rules(doc, rules)
    assert [s.sentence_index for s in report.sentences] == [1, 2]
    assert [(o.rule_id, o.changes) for o in report.sentences[0].outcomes] == [("rule-1", 1)]
    assert [(o.rule_id, o.changes) for o in report.sentences[1].outcomes] == [("rule-2", 1)]


def test_rule_order_matters():
    text = "1\tv\t_\t_\t_\t_\t0\troot\t_\t_\n2\tw\t_\t_\t_\t_\t1\tr1\t_\t_\n\n"
    remove = "{word:v}=A >r1 {}=B\nremoveEdge -gov A -dep B -reln r1\n"
    add = "{word:v}=A . {}=B\naddEdge -gov A -dep B -reln r1\n"

    doc1 = parse_document(text, "basic")
    report1 = apply_rules(doc1, parse_rule_file(remove + "\n" + add))
    doc2 = parse_document(text, "basic")
    report2 = apply_rules(doc2, parse_rule_file(add + "\n" + remove))

    assert (1, 2, "r1") in edge_set(doc1.sentences[0])
    assert (1, 2, "r1") not in edge_set(doc2.sentences[0])
    assert report1.total_changes == 2
    assert report2.total_changes == 1


def test_apply_rules_error_carries_sentence_index():
    doc = load("hamburger.conllu")
    rules = load_rules(str(RULES / "add_det_unguarded.rules"))
    with pytest.raises(IterationLimitError) as err:
        apply_rules(doc, rules)
    assert err.value.sentence_index == 1
