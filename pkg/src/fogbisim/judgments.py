"""Judgments of the formal system and their well-formedness.

Three judgment shapes are supported::

    m |== (T, T', S)                              Form1
    m |== (T, T', S) ~> alpha |== (T1, T1', S1)   Form2
    m |== (T, T', S) ~> alpha |== SUCC            Form3

Only side conditions are checked here; deduction rules are not modelled.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .game import next_pair
from .grammar import GrammarError, TermPair, parse_term
from .strategy import (PlaySet, check_finite_prefix, format_play, parse_play,
                       read_strategy)


@dataclass(frozen=True)
class Basis:
    pairs: frozenset = frozenset()

    def __iter__(self):
        return iter(sorted(self.pairs, key=str))

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class Form1:
    m: int
    pair: TermPair
    strategy: PlaySet

    def __str__(self):
        return f"{self.m} |== ({self.pair.left}, {self.pair.right}, S)"


@dataclass(frozen=True)
class Form2:
    m: int
    pair: TermPair
    strategy: PlaySet
    alpha: tuple
    pair1: TermPair
    strategy1: PlaySet

    def __str__(self):
        return (f"{self.m} |== ({self.pair.left}, {self.pair.right}, S) ~> "
                f"[{format_play(self.alpha) or 'ε'}] |== ({self.pair1.left}, {self.pair1.right}, S1)")


@dataclass(frozen=True)
class Form3:
    m: int
    pair: TermPair
    strategy: PlaySet
    alpha: tuple = ()

    def __str__(self):
        return (f"{self.m} |== ({self.pair.left}, {self.pair.right}, S) ~> "
                f"[{format_play(self.alpha) or 'ε'}] |== SUCC")


@dataclass(frozen=True)
class SystemParams:
    t0: TermPair
    s0: PlaySet
    basis: Basis = field(default_factory=Basis)


@dataclass
class JudgmentCheck:
    valid: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.valid

    def __str__(self):
        return "valid" if self.valid else "invalid: " + "; ".join(self.failures)


def check_judgment(g, j) -> JudgmentCheck:
    failures = []
    if not isinstance(j.m, int) or j.m < 0:
        failures.append("m is not a natural number")
    verdict = check_finite_prefix(g, j.pair, j.strategy)
    if not verdict:
        failures.append(f"S is not a finite prefix of a D-strategy ({verdict})")
    if isinstance(j, (Form2, Form3)):
        alpha = tuple(j.alpha)
        if alpha not in j.strategy:
            failures.append("α ∉ S")
        elif isinstance(j, Form2):
            if j.strategy.residual(alpha) != j.strategy1:
                failures.append("α\\S ≠ S1")
            if next_pair(g, j.pair, alpha) != j.pair1:
                failures.append("(T1,T1') ≠ NEXT((T,T'),α)")
            v1 = check_finite_prefix(g, j.pair1, j.strategy1)
            if not v1:
                failures.append(f"S1 is not a finite prefix of a D-strategy ({v1})")
    return JudgmentCheck(not failures, failures)


def check_axiom(params: SystemParams, j) -> bool:
    return (type(j) is Form1 and j.m == 0 and j.pair == params.t0
            and j.strategy == params.s0)


def proof_goal(pair, strategy) -> Form3:
    """The judgment a proof must derive for one pair: ``0 |== (T,T',S) ~> ε |== SUCC``."""
    return Form3(0, pair, strategy, ())


# -- JSON --------------------------------------------------------------------

def _strategy_lines(S):
    return S.to_lines()


def judgment_to_json(j) -> dict:
    form = {Form1: 1, Form2: 2, Form3: 3}[type(j)]
    out = {"form": form, "m": j.m, "pair": [str(j.pair.left), str(j.pair.right)],
           "strategy": _strategy_lines(j.strategy)}
    if form in (2, 3):
        out["alpha"] = format_play(j.alpha)
    if form == 2:
        out["pair1"] = [str(j.pair1.left), str(j.pair1.right)]
        out["strategy1"] = _strategy_lines(j.strategy1)
    return out


def judgment_from_json(d: dict, g=None):
    def pair(v):
        return TermPair(parse_term(v[0], g), parse_term(v[1], g))

    def strat(lines):
        return read_strategy("\n".join(lines))

    form = d["form"]
    base = (int(d["m"]), pair(d["pair"]), strat(d["strategy"]))
    if form == 1:
        return Form1(*base)
    alpha = parse_play(d.get("alpha", ""))
    if form == 2:
        return Form2(*base, alpha, pair(d["pair1"]), strat(d["strategy1"]))
    if form == 3:
        return Form3(*base, alpha)
    raise GrammarError(f"unknown judgment form {form!r}")
