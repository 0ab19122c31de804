import re
from random import Random

import pytest

from semgrex import (GraphError, NodeId, evaluate_relation, find_matches,
                     matches_at, parse_pattern)
from corpora import rand_graph, rand_pattern
from test_graph import mk


def bindings(match) -> dict:
    return {name: str(nid) for name, nid in match.node_bindings.items()}


# -- evaluate_relation ---------------------------------------------------------

def test_evaluate_dependent_with_label(jen):
    ok, witnesses = evaluate_relation(jen, "<", NodeId(1), NodeId(2), "nsubj")
    assert ok
    assert [(str(e.gov), str(e.dep), e.relation) for e in witnesses] == \
        [("2", "1", "nsubj")]
    ok, _ = evaluate_relation(jen, "<", NodeId(1), NodeId(2), "obj")
    assert not ok


def test_evaluate_adjacency(jen):
    assert evaluate_relation(jen, ".", NodeId(1), NodeId(2))[0]
    assert not evaluate_relation(jen, ".", NodeId(2), NodeId(1))[0]
    assert evaluate_relation(jen, "-", NodeId(2), NodeId(1))[0]


def test_evaluate_sister_after_shared_subject(paul_enhanced):
    ok, witnesses = evaluate_relation(paul_enhanced, "$++", NodeId(1), NodeId(3))
    assert ok and witnesses == ()
    assert evaluate_relation(paul_enhanced, "$--", NodeId(3), NodeId(1))[0]
    assert evaluate_relation(paul_enhanced, "$+", NodeId(3), NodeId(4))[0]


def test_evaluate_regex_label(jen):
    ok, _ = evaluate_relation(jen, "<", NodeId(1), NodeId(2), re.compile("nsubj|obj"))
    assert ok


def test_evaluate_unknown_operator(jen):
    with pytest.raises(ValueError):
        evaluate_relation(jen, "<#", NodeId(1), NodeId(2))
    with pytest.raises(GraphError):
        evaluate_relation(jen, "<", NodeId(1), NodeId(9))


def test_transitive_agrees_with_closures():
    rng = Random(808)
    for _ in range(60):
        g = rand_graph(rng)
        ids = g.node_ids()
        for a in ids:
            desc = set(g.descendants(a))
            anc = set(g.ancestors(a))
            for b in ids:
                assert evaluate_relation(g, ">>", a, b)[0] == (b in desc)
                assert evaluate_relation(g, "<<", a, b)[0] == (b in anc)


def test_labeled_transitive_requires_matching_chain():
    g = mk("a b c d", [(1, 2, "conj"), (2, 3, "conj"), (3, 4, "dep")])
    assert evaluate_relation(g, ">>", NodeId(1), NodeId(3), "conj")[0]
    assert not evaluate_relation(g, ">>", NodeId(1), NodeId(4), "conj")[0]
    assert evaluate_relation(g, ">>", NodeId(1), NodeId(4))[0]
    ok, witnesses = evaluate_relation(g, "<<", NodeId(3), NodeId(1), "conj")
    assert ok
    assert [(e.gov.index, e.dep.index) for e in witnesses] == [(2, 3)]


# -- find_matches --------------------------------------------------------------

def test_chained_relations_single_match(guerrillas):
    ms = find_matches(guerrillas, "{} >nsubj {} >obj {}")
    assert len(ms) == 1
    assert ms[0].anchor == NodeId(2)


def test_grouped_relations_single_match(guerrillas):
    ms = find_matches(guerrillas, "{} >obj ({} >amod {})")
    assert len(ms) == 1
    assert ms[0].anchor == NodeId(2)
    assert dict(ms[0].assignment) == {0: NodeId(2), 1: NodeId(5), 2: NodeId(4)}


def test_backreference_forces_same_node(paul_enhanced):
    ms = find_matches(paul_enhanced,
                      "{word:running} >nsubj ({} >conj {}=C) >nsubj {}=C")
    assert len(ms) == 1
    assert bindings(ms[0]) == {"C": "3"}


def test_named_edge_binding(paul_enhanced):
    ms = find_matches(paul_enhanced,
                      "{word:running} >nsubj ({} >conj=conj {}=C) >nsubj {}=C")
    assert len(ms) == 1
    edge = ms[0].edge_bindings["conj"]
    assert (edge.gov, edge.dep, edge.relation) == (NodeId(1), NodeId(3), "conj")


def test_universal_description_matches_every_node(guerrillas):
    assert len(find_matches(guerrillas, "{}")) == 5


def test_root_anchor_enumerates_dependents(guerrillas):
    ms = find_matches(guerrillas, "{$} > {}")
    assert len(ms) == 2
    assert [dict(m.assignment)[1] for m in ms] == [NodeId(1), NodeId(5)]


def test_slot_filling_daughter(family):
    ms = find_matches(family.sentences[0],
                      "{lemma:/son|daughter|child/} >/nmod:poss/ {ner:PERSON}=ent"
                      " >appos {ner:PERSON}=slot")
    assert len(ms) == 1
    assert bindings(ms[0]) == {"ent": "1", "slot": "5"}


def test_slot_filling_son(family):
    ms = find_matches(family.sentences[1],
                      "{ner:PERSON}=slot >appos ({lemma:/son|daughter|child/}"
                      " >/nmod:of/ {ner:PERSON}=ent)")
    assert len(ms) == 1
    assert bindings(ms[0]) == {"slot": "1", "ent": "5"}


def test_negated_description(jen):
    assert len(find_matches(jen, "!{word:/Jen.*/}")) == 2
    assert len(find_matches(jen, "{word:/Jen.*/}")) == 1


def test_pos_is_an_alias_for_tag(jen):
    assert len(find_matches(jen, "{pos:NNP}")) == 2
    assert len(find_matches(jen, "{tag:NNP}")) == 2
    assert find_matches(jen, "{pos:NNP}").matches == find_matches(jen, "{tag:NNP}").matches


def test_negated_relation_guard(hamburger, guerrillas):
    ms = find_matches(hamburger, "{word:bought} >obj ({}=A !>det {})")
    assert len(ms) == 1
    assert bindings(ms[0]) == {"A": "3"}
    assert not find_matches(guerrillas, "{word:kidnapped} >obj ({}=A !>det {})")


def test_absent_attribute_never_matches(family):
    # the comma has no ner: a positive test fails, its negation succeeds
    assert not find_matches(family.sentences[0], "{word:,;ner:PERSON}")
    assert len(find_matches(family.sentences[0], "!{ner:PERSON}")) == 3


def test_unmatchable_pattern_returns_empty(jen):
    assert list(find_matches(jen, "{word:zzz}")) == []


def test_identity_inequality(paul_enhanced):
    ms = find_matches(paul_enhanced, "{word:running} >nsubj {}=B >nsubj ({}=C !== {}=B)")
    got = {(b["B"], b["C"]) for b in map(bindings, ms)}
    assert got == {("1", "3"), ("3", "1")}
    same = find_matches(paul_enhanced, "{word:running} >nsubj {}=B >nsubj ({}=C == {}=B)")
    assert {(b["B"], b["C"]) for b in map(bindings, same)} == {("1", "1"), ("3", "3")}


def test_copy_nodes_are_ordinary_candidates():
    g = mk("went over woods", [(1, 2, "obl")], copies=[(1, 1, "went")])
    g.add_edge(NodeId(1, 1), NodeId(3), "obl")
    ms = find_matches(g, "{idx:1.1}")
    assert len(ms) == 1 and ms[0].anchor == NodeId(1, 1)
    ms = find_matches(g, "{word:went} >obl {word:woods}")
    assert [m.anchor for m in ms] == [NodeId(1, 1)]


def test_root_anchor_uses_declared_roots(jen):
    jen.add_edge(NodeId(3), NodeId(2), "odd")  # root gains a governor
    assert [m.anchor for m in find_matches(jen, "{$}")] == [NodeId(2)]


# -- matches_at ---------------------------------------------------------------

def test_matches_at_non_matching_anchor(jen):
    assert not matches_at(jen, "{} <nsubj {}", NodeId(3))


def test_matches_at_anchored(jen):
    ms = matches_at(jen, "{} <nsubj {}", NodeId(1))
    assert len(ms) == 1


def test_matches_at_unknown_anchor(jen):
    with pytest.raises(GraphError):
        matches_at(jen, "{}", NodeId(17))


def test_union_over_anchors_equals_find_matches():
    rng = Random(2718)
    for _ in range(40):
        g = rand_graph(rng)
        pattern = parse_pattern(rand_pattern(rng))
        whole = [(m.anchor, m.assignment, tuple(sorted(m.edge_bindings.items())))
                 for m in find_matches(g, pattern)]
        pieces = []
        for anchor in g.canonical_order():
            pieces.extend((m.anchor, m.assignment,
                           tuple(sorted(m.edge_bindings.items())))
                          for m in matches_at(g, pattern, anchor))
        assert sorted(whole) == sorted(pieces)


# -- properties ---------------------------------------------------------------

def test_determinism_same_run_twice():
    rng = Random(5150)
    for _ in range(40):
        g = rand_graph(rng)
        pattern = rand_pattern(rng)
        first = [(m.anchor, m.assignment) for m in find_matches(g, pattern)]
        second = [(m.anchor, m.assignment) for m in find_matches(g, pattern)]
        assert first == second


def test_negation_monotonicity():
    rng = Random(777)
    descs = ["{word:/Jen.*/}", "{tag:NNP}", "{lemma:run;upos:VERB}", "{ner:PERSON}",
             "{idx:2}", "{word:dog}"]
    for _ in range(30):
        g = rand_graph(rng)
        for desc in descs:
            plain = {m.anchor for m in find_matches(g, desc)}
            negated = {m.anchor for m in find_matches(g, "!" + desc)}
            assert plain & negated == set()
            assert plain | negated == set(g.node_ids())


def test_backreference_soundness(paul_enhanced):
    pattern = "{word:running} >nsubj ({} >conj=conj {}=C) >nsubj {}=C"
    for m in find_matches(paul_enhanced, pattern):
        slots = dict(m.assignment)
        assert evaluate_relation(paul_enhanced, ">", slots[0], slots[1], "nsubj")[0]
        assert evaluate_relation(paul_enhanced, ">", slots[1], slots[2], "conj")[0]
        assert evaluate_relation(paul_enhanced, ">", slots[0], slots[3], "nsubj")[0]
        assert slots[2] == slots[3] == m.node_bindings["C"]
        edge = m.edge_bindings["conj"]
        assert edge in paul_enhanced.edges


def test_no_duplicate_matches():
    rng = Random(424242)
    for _ in range(60):
        g = rand_graph(rng)
        ms = find_matches(g, rand_pattern(rng))
        keys = [(m.assignment, tuple(sorted(m.edge_bindings.items()))) for m in ms]
        assert len(keys) == len(set(keys))
