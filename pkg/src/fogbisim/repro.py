"""The counterexample grammar, its strategies, and the claim suite.

``run_repro`` evaluates every claim (no short-circuit) and returns one
:class:`ClaimResult` per claim.  ``report`` turns them into the JSON report.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Any, NamedTuple, Optional

from . import bruteforce
from .game import eq_level, full_for, next_pair
from .grammar import (App, BOT, TermPair, Var, make_grammar, parse_grammar,
                      reachable_witness, word_reachable)
from .judgments import (Basis, Form1, Form2, SystemParams, check_axiom,
                        check_judgment, proof_goal)
from .strategy import (PlaySet, check_d, check_dq, check_finite_prefix,
                       check_winning, format_play, identity_strategy, indstr,
                       materialize, read_strategy, strategy_eq_level,
                       attacker_line)


def _data(name):
    return resources.files("fogbisim").joinpath("data", name).read_text(encoding="utf-8")


def counterexample_grammar():
    return parse_grammar(_data("counterexample.fog"))


def family_grammar(k: int):
    """The counterexample grammar with D and E stretched into chains of length ``k``."""
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be an integer >= 1")
    base = counterexample_grammar()
    nts = dict(base.nonterminals)
    del nts["L1"]
    for i in range(1, k + 1):
        nts[f"D{i}"] = 1
        nts[f"E{i}"] = 1
    nts["L1"] = 0
    v = Var(1)
    rules = [(r.id, r.head, r.tlabel, r.rhs) for r in base.rules[:10]]
    chain = [("D", "x", App("D1", (v,))), ("E", "x", App("E1", (v,)))]
    for i in range(1, k):
        chain.append((f"D{i}", "x", App(f"D{i + 1}", (v,))))
        chain.append((f"E{i}", "x", App(f"E{i + 1}", (v,))))
    chain += [(f"D{k}", "x", v), (f"E{k}", "x", v), (f"E{k}", "z", v), ("L1", "l1", BOT)]
    for n, (head, label, rhs) in enumerate(chain, start=11):
        rules.append((f"r{n}", head, label, rhs))
    return make_grammar(nts, base.lab_a, rules, actions=base.actions)


def term(name, arg=BOT):
    return App(name, (arg,))


L1 = App("L1")


def named_strategies(g=None):
    if g is None:
        g = counterexample_grammar()
    S = read_strategy(_data("S.strat"))
    eps = PlaySet()
    S2 = eps
    S5 = eps
    id_c = identity_strategy(g, term("C", L1))
    id_d = identity_strategy(g, term("D", L1))
    id_e = identity_strategy(g, term("E", L1))
    return {
        "S": S,
        "S1": PlaySet([[("r5", "r6")], [("r6", "r5")]]),
        "S2": S2,
        "S3": PlaySet([[("r7", "r8"), ("r9", "r10")]]),
        "S4": PlaySet([[("r9", "r10")]]),
        "S5": S5,
        "S6": indstr(S2, S5),
        "Id_C,1": materialize(id_c, 1),
        "Id_D,2": materialize(id_d, 2),
        "Id_E,2": materialize(id_e, 2),
        "Id_C,inf": id_c,
        "Id_C,0": PlaySet(),
        "Id_D,0": PlaySet(),
        "Id_E,0": PlaySet(),
        "Id_D,1": PlaySet([[("r14", "r14")]]),
        "Id_E,1": PlaySet([[("r14", "r14")]]),
    }


def counterexample_basis():
    return Basis(frozenset(TermPair(term(n, L1), term(n, L1)) for n in "CDE"))


@dataclass
class ClaimResult:
    id: str
    description: str
    expected: Any
    computed: Any
    passed: bool
    witness: Optional[str] = None
    reason: Optional[str] = None

    def to_json(self):
        out = {"id": self.id, "description": self.description,
               "expected": _jsonable(self.expected), "computed": _jsonable(self.computed),
               "pass": self.passed, "witness": self.witness}
        if self.reason:
            out["reason"] = self.reason
        return out


def _jsonable(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return str(v)


class _Claims:
    def __init__(self):
        self.results = []

    def add(self, cid, description, expected, compute, witness=None):
        try:
            out = compute()
        except Exception as e:  # noqa: BLE001 - a crashing claim is a failing claim
            self.results.append(ClaimResult(cid, description, expected, None, False,
                                            reason=f"{type(e).__name__}: {e}"))
            return
        w = witness
        if isinstance(out, _Witnessed):
            out, w = out.value, out.witness
        self.results.append(ClaimResult(cid, description, expected, out, out == expected, w))


class _Witnessed(NamedTuple):
    value: Any
    witness: str


def run_repro(budget: int = 100_000, k_range=range(1, 7)):
    if budget < 10_000:
        raise ValueError("budget must be at least 10^4 states")
    g = counterexample_grammar()
    st = named_strategies(g)
    S = st["S"]
    A, B = term("A"), term("B")
    AB = TermPair(A, B)
    Ebot = TermPair(term("E"), term("E"))
    EL1 = TermPair(term("E", L1), term("E", L1))
    CL1 = TermPair(term("C", L1), term("C", L1))
    DL1 = TermPair(term("D", L1), term("D", L1))
    basis = counterexample_basis()
    c = _Claims()

    c.add("grammar-shape", "counterexample grammar: 10 nonterminals, 14 rules",
          [10, 14], lambda: [len(g.nonterminals), len(g.rules)])
    c.add("eqlv-AB", "EqLv(A(bot), B(bot))", "Exact(3)",
          lambda: str(eq_level(g, AB, budget)))

    def word():
        wa = reachable_witness(g, A, "aaab")
        wb = reachable_witness(g, B, "aaab")
        return _Witnessed([wa is not None, wb is not None], "aaab via B: " + " ".join(wb or ()))
    c.add("word-aaab", "aaab is a trace of B(bot) but not of A(bot)", [False, True], word)

    def prefix():
        v = check_finite_prefix(g, AB, S)
        return _Witnessed([v.accepted, v.depth], str(v))
    c.add("S-finite-prefix", "S is a finite prefix of a D-strategy for (A(bot),B(bot))",
          [True, 3], prefix)

    mutated = PlaySet(p for p in S.plays() if p != (("r1", "r3"), ("r6", "r5")))

    def mutation():
        v = check_dq(g, AB, mutated)
        return _Witnessed([v.accepted, v.violated_condition, format_play(v.witness or ())], str(v))
    c.add("S-mutation", "dropping [r1:r3 r6:r5] breaks DQ4 at [r1:r3]",
          [False, "DQ4", "r1:r3"], mutation)
    c.add("S-mutation-oracle", "residual {(r5,r6)} is not full for (C(bot),C(bot))", False,
          lambda: full_for(g, mutated.moves((("r1", "r3"),)), next_pair(g, AB, [("r1", "r3")])))
    c.add("S-is-D-strategy", "S satisfies DQ'4", True, lambda: check_d(g, AB, S).accepted)
    c.add("S-not-winning", "S is not winning: dead end at (D(bot),E(bot))",
          [False, "r1:r3 r5:r6"],
          lambda: (lambda v: [v.accepted, format_play(v.witness)])(check_winning(g, AB, S)))

    c.add("eqlv-E-S6", "EqLv(E(bot), E(bot), S6)", "Exact(0)",
          lambda: str(strategy_eq_level(g, Ebot, st["S6"], budget)))

    def ab_s():
        v, line = attacker_line(g, AB, S)
        return _Witnessed(str(v), f"Attacker wins along [{format_play(line or ())}]")
    c.add("eqlv-AB-S", "EqLv(A(bot), B(bot), S)", "Exact(3)", ab_s)

    c.add("eqlv-EL1", "EqLv(E(L1), E(L1))", "Infinite", lambda: str(eq_level(g, EL1, budget)))
    c.add("eqlv-Ebot", "EqLv(E(bot), E(bot))", "Infinite", lambda: str(eq_level(g, Ebot, budget)))
    c.add("ineq-14", "EqLv(E(L1),E(L1)) <= EqLv(E(bot),E(bot))", True,
          lambda: eq_level(g, EL1, budget) <= eq_level(g, Ebot, budget))
    c.add("ineq-15", "EqLv(E(L1),E(L1)) > EqLv(E(bot),E(bot),S6)", True,
          lambda: eq_level(g, EL1, budget) > strategy_eq_level(g, Ebot, st["S6"], budget))
    c.add("ineq-16-fails", "EqLv(E(L1),E(L1)) <= EqLv(E(bot),E(bot),S6) is false for S6", False,
          lambda: eq_level(g, EL1, budget) <= strategy_eq_level(g, Ebot, st["S6"], budget))

    c.add("winning-IdD2", "Id_D,2 is a winning strategy for (D(L1),D(L1))", True,
          lambda: check_winning(g, DL1, st["Id_D,2"]).accepted)
    c.add("winning-IdE2", "Id_E,2 is a winning strategy for (E(L1),E(L1))", True,
          lambda: check_winning(g, EL1, st["Id_E,2"]).accepted)
    c.add("prefix-IdC1", "Id_C,1 is a finite prefix for (C(L1),C(L1))", [True, 1],
          lambda: (lambda v: [v.accepted, v.depth])(check_finite_prefix(g, CL1, st["Id_C,1"])))
    c.add("prefix-IdE2", "Id_E,2 is a finite prefix for (E(L1),E(L1))", [True, 2],
          lambda: (lambda v: [v.accepted, v.depth])(check_finite_prefix(g, EL1, st["Id_E,2"])))
    c.add("winning-IdCinf", "Id_C,inf is a winning strategy for (C(L1),C(L1))", True,
          lambda: check_winning(g, CL1, st["Id_C,inf"]).accepted)
    c.add("IdC1-truncates-IdCinf", "Id_C,1 is the depth-1 truncation of Id_C,inf", True,
          lambda: materialize(st["Id_C,inf"], 1) == PlaySet([[("r5", "r5")], [("r6", "r6")]]))

    c.add("residual-S1", "residual(S, r1:r3) = S1", True,
          lambda: S.residual((("r1", "r3"),)) == st["S1"])
    c.add("residual-S3", "residual(S, r2:r4) = S3", True,
          lambda: S.residual((("r2", "r4"),)) == st["S3"])
    c.add("residual-S4", "residual(S3, r7:r8) = S4", True,
          lambda: st["S3"].residual((("r7", "r8"),)) == st["S4"])
    c.add("residual-IdD1", "residual(Id_D,2, r11:r11) = Id_D,1", True,
          lambda: st["Id_D,2"].residual((("r11", "r11"),)) == st["Id_D,1"])
    c.add("indstr-S6", "INDSTR(S2, S5) = {(ε,ε)}", 1, lambda: len(st["S6"]))

    c.add("basis-reflexive", "every basis pair is bisimilar", ["Infinite"] * 3,
          lambda: [str(eq_level(g, p, budget)) for p in basis])

    def judgments():
        params = SystemParams(AB, S, basis)
        axiom = Form1(0, AB, S)
        f2 = Form2(0, AB, S, (("r1", "r3"),), TermPair(term("C"), term("C")), st["S1"])
        goals = [proof_goal(AB, S), proof_goal(CL1, st["Id_C,1"]),
                 proof_goal(DL1, st["Id_D,2"]), proof_goal(EL1, st["Id_E,2"])]
        return [check_axiom(params, axiom), check_judgment(g, axiom).valid,
                check_judgment(g, f2).valid] + [check_judgment(g, j).valid for j in goals]
    c.add("judgments-wellformed",
          "axiom, a Form2 step, and the four proof goals are well-formed", [True] * 7, judgments)

    def headline():
        accepted = check_finite_prefix(g, AB, S).accepted and all(
            check_finite_prefix(g, p, st[name]).accepted
            for p, name in ((CL1, "Id_C,1"), (DL1, "Id_D,2"), (EL1, "Id_E,2")))
        lvl = eq_level(g, AB, budget)
        return _Witnessed([accepted, lvl.is_exact], f"EqLv(A(bot),B(bot)) = {lvl}")
    c.add("non-soundness", "valid strategy prefixes exist for a non-bisimilar pair",
          [True, True], headline)

    for k in k_range:
        def fam(k=k):
            gk = family_grammar(k)
            lvl = eq_level(gk, AB, budget)
            oracle = bruteforce.game_value(gk, A, B, 3 + k + 1)
            return [str(lvl), oracle]
        c.add(f"family-k{k}", f"EqLv(A(bot),B(bot)) = {3 + k} for chain length {k}",
              [f"Exact({3 + k})", 3 + k], fam)

        def fam_word(k=k):
            gk = family_grammar(k)
            w = "a" * (3 + k) + "b"
            return _Witnessed([word_reachable(gk, A, w), word_reachable(gk, B, w)], w)
        c.add(f"family-word-k{k}", f"a^{3 + k}b separates A(bot) from B(bot) for chain length {k}",
              [False, True], fam_word)

    return c.results


def report(results) -> dict:
    return {"claims": [r.to_json() for r in results],
            "all_pass": all(r.passed for r in results)}
