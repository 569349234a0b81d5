import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fogbisim.grammar import (App, BOT, GrammarError, act, apply_rule, enabled_rules,
                              parse_grammar, parse_term, reachable_terms,
                              reachable_witness, word_reachable)
from fogbisim.repro import L1, term

from generators import grammar_and_pair

HEADER = "actions a b l1\nlabels x->a y->a z->b l1->l1\nnt A:1 C:1 D:1 L1:0\n"


def test_bundled_grammar_shape(g):
    assert len(g.nonterminals) == 10
    assert len(g.rules) == 14
    assert [r.id for r in g.rules] == [f"r{i}" for i in range(1, 15)]


def test_empty_rule_section():
    gr = parse_grammar(HEADER)
    assert gr.rules == ()
    assert gr.nonterminals["L1"] == 0


def test_arity_mismatch_diagnostic():
    with pytest.raises(GrammarError) as exc:
        parse_grammar(HEADER + "rule r1 A(v) y C(v,v)\n")
    (d,) = exc.value.diagnostics
    assert "arity mismatch" in d.reason
    assert (d.line, d.column) == (4, 16)


@pytest.mark.parametrize("rule, reason", [
    ("rule r1 Z(v) y C(v)", "unknown symbol"),
    ("rule r1 A(v) q C(v)", "undeclared label"),
    ("rule r1 A(v) y Q(v)", "unknown symbol"),
    ("rule r1 A(v) y C(v2)", "unknown symbol"),
])
def test_rule_errors(rule, reason):
    with pytest.raises(GrammarError, match=reason):
        parse_grammar(HEADER + rule + "\n")


def test_duplicate_rule_id():
    with pytest.raises(GrammarError, match="duplicate rule id"):
        parse_grammar(HEADER + "rule r1 A(v) y C(v)\nrule r1 C(v) x D(v)\n")


def test_unmapped_action():
    with pytest.raises(GrammarError, match="undeclared action"):
        parse_grammar("actions a\nlabels x->a y->c\nnt A:1\n")


def test_two_variable_rules():
    gr = parse_grammar("actions a\nlabels x->a\nnt P:2 Q:1\nrule r1 P(v1,v2) x Q(v2)\n")
    t = parse_term("P(Q(bot),bot)", gr)
    assert apply_rule(gr, t, "r1") == App("Q", (BOT,))


def test_term_round_trip(g):
    for text in ["bot", "L1", "A(bot)", "A''(C(L1))"]:
        assert str(parse_term(text, g)) == text
    with pytest.raises(GrammarError):
        parse_term("A(bot", g)
    with pytest.raises(GrammarError):
        parse_term("A(bot,bot)", g)


def test_to_text_round_trip(g):
    assert parse_grammar(g.to_text()) == g


@pytest.mark.parametrize("t, expected", [
    (term("A"), ("r1", "r2")),
    (BOT, ()),
    (term("E", L1), ("r12", "r13")),
])
def test_enabled_rules(g, t, expected):
    assert enabled_rules(g, t) == expected


def test_enabled_rules_unknown_symbol(g):
    with pytest.raises(GrammarError):
        enabled_rules(g, App("Q", (BOT,)))


@pytest.mark.parametrize("t, rid, expected", [
    (term("A"), "r1", term("C")),
    (term("D", L1), "r11", L1),
    (L1, "r14", BOT),
])
def test_apply_rule(g, t, rid, expected):
    assert apply_rule(g, t, rid) == expected


def test_apply_rule_not_enabled(g):
    with pytest.raises(GrammarError):
        apply_rule(g, term("A"), "r3")


def test_act(g):
    assert act(g, "r5") == "a"
    assert act(g, "r13") == "b"
    assert act(g, "r14") == "l1"
    assert all(act(g, f"r{i}") == "a" for i in range(1, 13))
    with pytest.raises(GrammarError):
        act(g, "r99")


def _brute_traces(gr, t, length):
    """All action words of exactly ``length`` by enumerating rule sequences."""
    out = set()
    for seq in itertools.product([r.id for r in gr.rules], repeat=length):
        cur, ok = t, True
        for rid in seq:
            if rid not in enabled_rules(gr, cur):
                ok = False
                break
            cur = apply_rule(gr, cur, rid)
        if ok:
            out.add("".join(act(gr, r) for r in seq))
    return out


def test_word_reachable(g):
    assert not word_reachable(g, term("A"), "aaab")
    assert word_reachable(g, term("B"), "aaab")
    assert word_reachable(g, BOT, "")
    assert reachable_witness(g, term("B"), "aaab") == ("r4", "r8", "r10", "r13")


def test_word_reachable_matches_enumeration(g):
    for t in (term("A"), term("B")):
        traces = _brute_traces(g, t, 4)
        for w in map("".join, itertools.product("ab", repeat=4)):
            assert word_reachable(g, t, w) == (w in traces)


def test_reachable_terms_small(g):
    # exhaustive enumeration from the start pair is tiny and at most 2 rules fire anywhere
    terms, closed = reachable_terms(g, [term("A"), term("B")])
    assert closed and len(terms) <= 20
    assert max(len(enabled_rules(g, t)) for t in terms) <= 2


@settings(max_examples=100, derandomize=True)
@given(grammar_and_pair(), st.lists(st.sampled_from("ab"), max_size=5))
def test_word_reachable_prefix_monotone(gp, word):
    gr, p = gp
    assert word_reachable(gr, p.left, "")
    if word_reachable(gr, p.left, word) and word:
        assert word_reachable(gr, p.left, word[:-1])


@settings(max_examples=100, derandomize=True)
@given(grammar_and_pair())
def test_apply_defined_exactly_on_enabled(gp):
    gr, p = gp
    for r in gr.rules:
        if r.id in enabled_rules(gr, p.left):
            apply_rule(gr, p.left, r.id)
        else:
            with pytest.raises(GrammarError):
                apply_rule(gr, p.left, r.id)
