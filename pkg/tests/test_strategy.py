import pytest
from hypothesis import given, settings, strategies as st

from fogbisim.game import eq_level
from fogbisim.grammar import BOT, TermPair
from fogbisim.repro import L1, term
from fogbisim.strategy import (CHAR2, DQ1, DQ2, DQ3, DQ4, DQ4_WINNING, ExplorationLimit,
                               PlaySet, StrategyVerdict, attacker_line, check_d, check_dq,
                               check_finite_prefix, check_winning, extension_leq,
                               identity_strategy, indstr, make_playset, materialize,
                               read_strategy, residual, strategy_eq_level, write_strategy)

from generators import (AB, CC, CL1, DE, DL1, EE, EL1, PLAY_LISTS, grammar_and_pair,
                        random_d_strategy, random_quasi_strategy)

S_PLAYS = [
    (), (("r1", "r3"),), (("r1", "r3"), ("r5", "r6")), (("r1", "r3"), ("r6", "r5")),
    (("r2", "r4"),), (("r2", "r4"), ("r7", "r8")), (("r2", "r4"), ("r7", "r8"), ("r9", "r10")),
]


def ps(*plays):
    return PlaySet(plays)


def test_make_playset_closure():
    S = make_playset([[("r1", "r3"), ("r5", "r6")], [("r1", "r3"), ("r6", "r5")],
                      [("r2", "r4"), ("r7", "r8"), ("r9", "r10")]])
    assert S.plays() == frozenset(S_PLAYS)
    assert len(make_playset([])) == 1 and () in make_playset([])
    assert PlaySet(S.plays()) == S


def test_bundled_strategy_answers_with_b_rules(S):
    # A's r1/r2 are answered by B's r3/r4
    assert S.plays() == frozenset(S_PLAYS)
    assert (("r1", "r2"),) not in S


def test_strategy_file_round_trip(S):
    assert read_strategy(write_strategy(S)) == S
    assert read_strategy("") == PlaySet()
    with pytest.raises(ValueError, match="line 2"):
        read_strategy("r1:r3\nr5-r6\n")


def test_residuals(S, strategies):
    assert residual(S, [("r1", "r3")]) == strategies["S1"]
    assert residual(S, []) == S
    assert residual(S, [("r2", "r4")]) == strategies["S3"]
    assert residual(strategies["S3"], [("r7", "r8")]) == strategies["S4"]
    with pytest.raises(KeyError):
        residual(S, [("r14", "r14")])


def test_check_dq(g, S):
    assert check_dq(g, AB, S)
    assert check_dq(g, DE, PlaySet())
    mutated = PlaySet(p for p in S_PLAYS if p != (("r1", "r3"), ("r6", "r5")))
    v = check_dq(g, AB, mutated)
    assert (v.accepted, v.violated_condition, v.witness) == (False, DQ4, (("r1", "r3"),))


def test_check_dq_raw_conditions(g):
    assert check_dq(g, AB, set()).violated_condition == DQ1
    v = check_dq(g, AB, {(), (("r1", "r3"), ("r5", "r6"))})
    assert (v.violated_condition, v.witness) == (DQ2, (("r1", "r3"), ("r5", "r6")))
    v = check_dq(g, AB, {(), (("r14", "r14"),)})
    assert (v.violated_condition, v.witness) == (DQ3, (("r14", "r14"),))


def test_check_d_and_winning(g, S, strategies):
    assert check_d(g, AB, S)
    v = check_winning(g, AB, S)
    assert (v.violated_condition, v.witness) == (DQ4_WINNING, (("r1", "r3"), ("r5", "r6")))
    assert check_winning(g, DL1, strategies["Id_D,2"])
    assert check_winning(g, EL1, strategies["Id_E,2"])
    assert check_winning(g, (BOT, BOT), PlaySet())
    # a D-strategy may not stop at a ~1 position
    assert not check_d(g, AB, PlaySet())


def test_check_finite_prefix(g, S, strategies):
    v = check_finite_prefix(g, AB, S)
    assert v.accepted and v.depth == 3
    v = check_finite_prefix(g, EL1, strategies["Id_E,2"])
    assert v.accepted and v.depth == 2
    assert check_finite_prefix(g, CL1, strategies["Id_C,1"])
    mutated = PlaySet(p for p in S_PLAYS if p != (("r1", "r3"), ("r6", "r5")))
    assert check_finite_prefix(g, AB, mutated).violated_condition == DQ4


def test_char2_violation(g, S):
    # stop early at (C,C), which is in ~1, while another branch reaches depth 3
    short = PlaySet(p for p in S_PLAYS if len(p) < 2 or p[0] == ("r2", "r4"))
    v = check_finite_prefix(g, AB, short)
    assert (v.violated_condition, v.witness) == (CHAR2, (("r1", "r3"),))
    assert check_dq(g, AB, short)


def _ext_oracle(a, b):
    """Direct reading of E1/E2 over explicit sets of tuples."""
    a, b = set(a.plays()), set(b.plays())
    if not a.issubset(b):
        return False
    maximal = {x for x in a if not any(y != x and y[:len(x)] == x for y in a)}
    return all(any(x == al[:len(x)] for x in maximal) for al in b - a)


def test_extension_leq_examples():
    e = PlaySet()
    assert extension_leq(e, e)
    one = ps((("r5", "r6"),))
    assert extension_leq(one, ps((("r5", "r6"), ("r14", "r14"))))
    assert not extension_leq(one, ps((("r5", "r6"),), (("r6", "r5"),)))
    assert _ext_oracle(one, ps((("r5", "r6"), ("r14", "r14"))))
    assert not _ext_oracle(one, ps((("r5", "r6"),), (("r6", "r5"),)))


@settings(max_examples=200, derandomize=True)
@given(PLAY_LISTS, PLAY_LISTS, PLAY_LISTS)
def test_extension_leq_partial_order(x, y, z):
    a, b, c = PlaySet(x), PlaySet(y), PlaySet(z)
    assert extension_leq(a, b) == _ext_oracle(a, b)
    assert extension_leq(a, a)
    if extension_leq(a, b) and extension_leq(b, a):
        assert a == b
    if extension_leq(a, b) and extension_leq(b, c):
        assert extension_leq(a, c)


@settings(max_examples=200, derandomize=True)
@given(PLAY_LISTS)
def test_extension_leq_transitive_on_chains(x):
    # truncations form a chain under the extension ordering
    a = PlaySet(x)
    depth = a.depth
    for m in range(depth + 1):
        for n in range(m, depth + 1):
            assert extension_leq(a.truncate(m), a.truncate(n))


def test_indstr(strategies):
    assert indstr(PlaySet(), PlaySet()) == PlaySet()
    assert strategies["S6"] == PlaySet()
    d1 = strategies["Id_D,1"]
    assert indstr(d1, strategies["Id_E,1"]) == ps((("r14", "r14"),))


@settings(max_examples=200, derandomize=True)
@given(PLAY_LISTS, PLAY_LISTS)
def test_indstr_matches_relational_composition(x, y):
    a, b = PlaySet(x), PlaySet(y)
    words = lambda s: {(tuple(m[0] for m in p), tuple(m[1] for m in p)) for p in s.plays()}
    comp = {(u, w) for (v, u) in words(a) for (v2, w) in words(b) if v == v2}
    expected = PlaySet(tuple(zip(u, w)) for u, w in comp)
    assert indstr(a, b) == expected


def test_identity_materialize(g, strategies):
    id_c = identity_strategy(g, term("C", L1))
    assert materialize(id_c, 1) == ps((("r5", "r5"),), (("r6", "r6"),))
    assert materialize(identity_strategy(g, term("D", L1)), 2) == ps((("r11", "r11"), ("r14", "r14")))
    assert materialize(id_c, 0) == PlaySet()
    assert strategies["Id_D,2"].residual((("r11", "r11"),)) == strategies["Id_D,1"]
    assert check_finite_prefix(g, CL1, materialize(id_c, 1))
    assert check_winning(g, CL1, id_c)


def test_intensional_winning_cap(g):
    with pytest.raises(ExplorationLimit):
        check_winning(g, CL1, identity_strategy(g, term("C", L1)), cap=2)


def test_strategy_eq_level(g, S, strategies):
    assert str(strategy_eq_level(g, EE, strategies["S6"])) == "Exact(0)"
    assert strategy_eq_level(g, (BOT, BOT), PlaySet()).is_infinite
    assert strategy_eq_level(g, CL1, identity_strategy(g, term("C", L1))).is_infinite
    assert str(strategy_eq_level(g, CL1, strategies["Id_C,1"])) == "Exact(1)"


def test_strategy_eq_level_of_S(g, S):
    # Attacker fires r1, S answers r3, then S crosses C's moves and lands on (D,E)
    level, line = attacker_line(g, AB, S)
    assert str(level) == "Exact(2)"
    assert line == (("r1", "r3"), ("r5", "r6"))


def test_verdict_json_round_trip():
    for v in (StrategyVerdict(True, depth=3), StrategyVerdict(False, DQ4, (("r1", "r3"),)),
              StrategyVerdict(False, DQ1, ())):
        assert StrategyVerdict.from_json(v.to_json()) == v
    with pytest.raises(ValueError):
        StrategyVerdict(True, DQ4)


@settings(max_examples=200, derandomize=True)
@given(st.data())
def test_random_quasi_strategies_accepted(data):
    gr, p = data.draw(grammar_and_pair())
    plays = random_quasi_strategy(data.draw, gr, p)
    assert check_dq(gr, p, PlaySet(plays))


@settings(max_examples=200, derandomize=True)
@given(st.data())
def test_truncation_of_d_strategy_is_quasi(data):
    gr, p = data.draw(grammar_and_pair(acyclic=True))
    S = PlaySet(random_d_strategy(data.draw, gr, p))
    assert check_d(gr, p, S)
    for n in range(S.depth + 1):
        assert check_dq(gr, p, S.truncate(n))


@settings(max_examples=200, derandomize=True)
@given(st.data())
def test_truncation_of_finite_prefix_is_finite_prefix(data):
    gr, p = data.draw(grammar_and_pair(acyclic=True))
    S = PlaySet(random_d_strategy(data.draw, gr, p))
    v = check_finite_prefix(gr, p, S)
    assert v
    for m in range(1, v.depth + 1):
        assert check_finite_prefix(gr, p, S.truncate(m))


@settings(max_examples=200, derandomize=True)
@given(st.data())
def test_strategy_level_dominated_by_game_value(data):
    gr, p = data.draw(grammar_and_pair())
    S = PlaySet(random_quasi_strategy(data.draw, gr, p))
    assert check_dq(gr, p, S)
    assert strategy_eq_level(gr, p, S) <= eq_level(gr, p)


@settings(max_examples=100, derandomize=True)
@given(st.data())
def test_residual_prefix_closed(data):
    gr, p = data.draw(grammar_and_pair())
    S = PlaySet(random_quasi_strategy(data.draw, gr, p))
    alpha = data.draw(st.sampled_from(S.sorted()))
    R = S.residual(alpha)
    assert () in R
    assert all(x[:-1] in R for x in R if x)
