"""The bisimulation game on pairs of ground terms.

A round: Attacker fires an enabled rule on either side, Defender answers on
the other side with a rule carrying the same action.  ``~n`` holds when
Defender survives ``n`` rounds; the equivalence level of a pair is the
largest such ``n`` (infinite for bisimilar pairs).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .grammar import (GrammarError, TermPair, act, apply_rule, enabled_actions,
                      enabled_rules, reachable_terms, successors)

LEFT, RIGHT = 0, 1


@dataclass(frozen=True, order=False)
class EqLevel:
    """``Exact(n)``, ``Infinite``, or ``AtLeast(n)`` (search budget ran out)."""

    kind: str
    n: int = 0

    @classmethod
    def exact(cls, n):
        return cls("Exact", n)

    @classmethod
    def infinite(cls):
        return cls("Infinite", 0)

    @classmethod
    def at_least(cls, n):
        return cls("AtLeast", n)

    @property
    def is_exact(self):
        return self.kind == "Exact"

    @property
    def is_infinite(self):
        return self.kind == "Infinite"

    @property
    def value(self):
        """Numeric value; AtLeast contributes its lower bound."""
        return math.inf if self.is_infinite else self.n

    def __lt__(self, other):
        return self.value < other.value

    def __le__(self, other):
        return self.value <= other.value

    def __gt__(self, other):
        return self.value > other.value

    def __ge__(self, other):
        return self.value >= other.value

    def __str__(self):
        return "Infinite" if self.is_infinite else f"{self.kind}({self.n})"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text == "Infinite":
            return cls.infinite()
        for kind in ("Exact", "AtLeast"):
            if text.startswith(kind + "(") and text.endswith(")"):
                return cls(kind, int(text[len(kind) + 1:-1]))
        raise ValueError(f"not an equivalence level: {text!r}")


def _pair(p):
    return p if isinstance(p, TermPair) else TermPair(*p)


def is_play(g, p, alpha) -> bool:
    left, right = _pair(p)
    for step in alpha:
        if len(step) != 2:
            return False
        pi, pi2 = step
        try:
            if pi not in enabled_rules(g, left) or pi2 not in enabled_rules(g, right):
                return False
            if act(g, pi) != act(g, pi2):
                return False
        except GrammarError:
            return False
        left, right = apply_rule(g, left, pi), apply_rule(g, right, pi2)
    return True


def next_pair(g, p, alpha) -> TermPair:
    """NEXT: the position reached from ``p`` after the play ``alpha``."""
    left, right = _pair(p)
    for i, (pi, pi2) in enumerate(alpha):
        try:
            if act(g, pi) != act(g, pi2):
                raise GrammarError(f"step {i}: actions of {pi} and {pi2} differ")
            left, right = apply_rule(g, left, pi), apply_rule(g, right, pi2)
        except GrammarError as e:
            raise GrammarError(f"not a play from {_pair(p)}: {e}") from None
    return TermPair(left, right)


def sim1(g, p) -> bool:
    left, right = _pair(p)
    return enabled_actions(g, left) == enabled_actions(g, right)


def full_for(g, moves, p) -> bool:
    """Does the move-pair set answer every attack at ``p``, on both sides?"""
    left, right = _pair(p)
    for pi, pi2 in moves:
        if act(g, pi) != act(g, pi2):
            raise GrammarError(f"move pair ({pi},{pi2}) has mismatched actions")
    lefts, rights = enabled_rules(g, left), enabled_rules(g, right)
    valid = [(pi, pi2) for pi, pi2 in moves if pi in lefts and pi2 in rights]
    return (all(any(m[0] == pi for m in valid) for pi in lefts)
            and all(any(m[1] == pi2 for m in valid) for pi2 in rights))


def attacks(g, p):
    """Attacker options at ``p`` as ``(side, rule id)``, left side first."""
    left, right = _pair(p)
    return ([(LEFT, r) for r in enabled_rules(g, left)]
            + [(RIGHT, r) for r in enabled_rules(g, right)])


def answers(g, p, side, rid):
    """Defender's same-action responses to an attack, as move pairs."""
    left, right = _pair(p)
    a = act(g, rid)
    other = right if side == LEFT else left
    out = []
    for r2 in enabled_rules(g, other):
        if act(g, r2) == a:
            out.append((rid, r2) if side == LEFT else (r2, rid))
    return out


def strat_equiv(g, p, n: int) -> bool:
    """``p ~n``: Defender survives ``n`` rounds from ``p``."""
    succ = lru_cache(maxsize=None)(lambda t: tuple(successors(g, t)))
    holds = _survives(succ)
    left, right = _pair(p)
    return holds(left, right, n)


def _survives(succ, guard=None):
    @lru_cache(maxsize=None)
    def holds(left, right, k):
        if k == 0:
            return True
        if guard is not None:
            guard()
        sl, sr = succ(left), succ(right)
        for _, a, t in sl:
            if not any(a == b and holds(t, u, k - 1) for _, b, u in sr):
                return False
        for _, a, t in sr:
            if not any(a == b and holds(u, t, k - 1) for _, b, u in sl):
                return False
        return True
    return holds


def refine(g, terms):
    """Partition refinement on a successor-closed set of terms.

    Returns the list of class maps ``[cls_0, cls_1, ...]`` up to the stable
    partition; ``cls_n[t] == cls_n[u]`` iff ``t ~n u``.
    """
    succ = {t: [(a, s) for _, a, s in successors(g, t)] for t in terms}
    cls = {t: 0 for t in terms}
    history = [cls]
    while True:
        sigs = {}
        new = {}
        for t in terms:
            sig = (cls[t], frozenset((a, cls[s]) for a, s in succ[t]))
            new[t] = sigs.setdefault(sig, len(sigs))
        history.append(new)
        if len(sigs) == len(set(cls.values())):
            return history
        cls = new


def eq_level(g, p, budget: int = 100_000) -> EqLevel:
    """Equivalence level of ``p``.

    When the reachable term space closes within ``budget`` states the answer
    is exact (partition refinement).  Otherwise the stratified relation is
    evaluated by bounded recursion until the budget is spent.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    p = _pair(p)
    terms, closed = reachable_terms(g, [p.left, p.right], cap=budget)
    if closed:
        history = refine(g, terms)
        for n, cls in enumerate(history):
            if cls[p.left] != cls[p.right]:
                return EqLevel.exact(n - 1)
        return EqLevel.infinite()
    return _bounded_level(g, p, budget)


def _bounded_level(g, p, budget):
    visited = set()

    @lru_cache(maxsize=None)
    def succ(t):
        visited.add(t)
        return tuple(successors(g, t))

    def guard():
        if len(visited) > budget:
            raise _Exhausted

    holds = _survives(succ, guard)
    n = 0
    try:
        while holds(p.left, p.right, n + 1):
            n += 1
    except _Exhausted:
        return EqLevel.at_least(n)
    return EqLevel.exact(n)


class _Exhausted(Exception):
    pass


def solve_levels(nodes, options):
    """Levels of a finite attacker/defender graph.

    ``options(node)`` lists, per attack, the defender's successor nodes.  A
    node's level is the largest ``n`` such that Defender survives ``n``
    rounds; ``math.inf`` if forever.  Computed as the descending chain
    ``W_0 ⊇ W_1 ⊇ ...`` until it stabilises.
    """
    opts = {v: [list(resp) for resp in options(v)] for v in nodes}
    level = {}
    alive = set(nodes)
    n = 0
    while True:
        dropped = {v for v in alive
                   if any(not any(s in alive for s in resp) for resp in opts[v])}
        if not dropped:
            break
        for v in dropped:
            level[v] = n
        alive -= dropped
        n += 1
    for v in alive:
        level[v] = math.inf
    return level


def to_eqlevel(value) -> EqLevel:
    return EqLevel.infinite() if value == math.inf else EqLevel.exact(int(value))
