"""Defender strategies as prefix-closed sets of plays.

A play is a tuple of move pairs ``(left rule id, right rule id)``.  A
:class:`PlaySet` stores a prefix-closed set of plays as a trie whose root is
the empty play.  The checkers below decide the quasi-strategy conditions
(DQ1-DQ4), the strategy and winning-strategy variants, and whether a finite
play set is a depth truncation of some Defender strategy.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .game import (LEFT, RIGHT, EqLevel, _pair, attacks, full_for, is_play,
                   next_pair, sim1, solve_levels, to_eqlevel)
from .grammar import TermPair, act, apply_rule, enabled_rules

DQ1, DQ2, DQ3, DQ4 = "DQ1", "DQ2", "DQ3", "DQ4"
DQ4_STRATEGY = "DQ'4"
DQ4_WINNING = "DQ''4"
CHAR2 = "CHAR-2"


def _natural(rid):
    return tuple(int(s) if s.isdigit() else s for s in re.split(r"(\d+)", rid))


def play_key(play):
    """Length-lexicographic order on plays, comparing rule ids naturally (r2 < r10)."""
    return len(play), tuple((_natural(a), _natural(b)) for a, b in play)


def format_play(play) -> str:
    return " ".join(f"{a}:{b}" for a, b in play)


def parse_play(text: str):
    steps = []
    for tok in text.split():
        a, colon, b = tok.partition(":")
        if not colon or not a or not b:
            raise ValueError(f"malformed step {tok!r}; expected left:right")
        steps.append((a, b))
    return tuple(steps)


class _Node:
    __slots__ = ("children",)

    def __init__(self):
        self.children = {}


class PlaySet:
    """Prefix-closed set of plays, kept as a trie.

    Instances are treated as immutable; all operations return new sets.
    """

    def __init__(self, plays: Iterable = ()):
        self._root = _Node()
        for play in plays:
            node = self._root
            for step in play:
                node = node.children.setdefault(tuple(step), _Node())
        self._plays = None

    @classmethod
    def _from_root(cls, root):
        s = cls.__new__(cls)
        s._root, s._plays = root, None
        return s

    def plays(self) -> frozenset:
        if self._plays is None:
            out = []
            stack = [((), self._root)]
            while stack:
                play, node = stack.pop()
                out.append(play)
                for step, child in node.children.items():
                    stack.append((play + (step,), child))
            self._plays = frozenset(out)
        return self._plays

    def sorted(self):
        return sorted(self.plays(), key=play_key)

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.plays())

    def __contains__(self, play):
        return self._node(play) is not None

    def __eq__(self, other):
        if isinstance(other, PlaySet):
            return self.plays() == other.plays()
        if isinstance(other, (set, frozenset)):
            return self.plays() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.plays())

    def __repr__(self):
        body = ", ".join("(" + (format_play(p) or "ε") + ")" for p in self)
        return f"PlaySet{{{body}}}"

    def _node(self, play):
        node = self._root
        for step in play:
            node = node.children.get(tuple(step))
            if node is None:
                return None
        return node

    def moves(self, play=()):
        """Move pairs that extend ``play`` inside the set, sorted."""
        node = self._node(play)
        if node is None:
            raise KeyError(f"play not in set: {format_play(play) or 'ε'}")
        return sorted(node.children, key=lambda m: (_natural(m[0]), _natural(m[1])))

    @property
    def depth(self) -> int:
        return max(len(p) for p in self.plays())

    def dead_ends(self):
        """Plays with no extension in the set (maximal for the prefix order)."""
        return [p for p in self if not self._node(p).children]

    def truncate(self, n: int) -> "PlaySet":
        return PlaySet(p for p in self.plays() if len(p) <= n)

    def residual(self, alpha) -> "PlaySet":
        node = self._node(alpha)
        if node is None:
            raise KeyError(f"play not in set: {format_play(alpha) or 'ε'}")
        return PlaySet._from_root(node)

    def to_lines(self):
        """Dead ends only; their prefix closure rebuilds the set."""
        return [format_play(p) for p in self.dead_ends() if p]


def make_playset(plays) -> PlaySet:
    return PlaySet(plays)


def residual(S: PlaySet, alpha) -> PlaySet:
    return S.residual(tuple(alpha))


def read_strategy(text: str) -> PlaySet:
    """Parse the line format: one play per line, steps ``left:right``; ``#`` comments."""
    plays = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            plays.append(parse_play(line))
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    return PlaySet(plays)


def write_strategy(S: PlaySet) -> str:
    return "".join(line + "\n" for line in S.to_lines())


@dataclass
class IntensionalStrategy:
    """A strategy given by a move generator, possibly infinite.

    ``moves(g, pair)`` returns Defender's move pairs at a position.
    """

    grammar: object
    base: TermPair
    moves: Callable
    name: str = ""

    def moves_at(self, pair):
        return list(self.moves(self.grammar, pair))


def _identity_moves(g, pair):
    rights = set(enabled_rules(g, pair.right))
    return [(r, r) for r in enabled_rules(g, pair.left) if r in rights]


def identity_strategy(g, t) -> IntensionalStrategy:
    """Answer every rule with the same rule on the other copy of ``t``."""
    return IntensionalStrategy(g, TermPair(t, t), _identity_moves, name=f"Id[{t}]")


def materialize(s: IntensionalStrategy, depth: int) -> PlaySet:
    """Unfold ``s`` from its base pair into the plays of length at most ``depth``."""
    g = s.grammar
    plays = []
    frontier = [((), s.base)]
    for _ in range(depth):
        nxt = []
        for play, pair in frontier:
            for pi, pi2 in s.moves_at(pair):
                succ = TermPair(apply_rule(g, pair.left, pi), apply_rule(g, pair.right, pi2))
                nxt.append((play + ((pi, pi2),), succ))
        if not nxt:
            break
        plays.extend(p for p, _ in nxt)
        frontier = nxt
    return PlaySet(plays)


# -- verdicts ----------------------------------------------------------------

@dataclass
class StrategyVerdict:
    accepted: bool
    violated_condition: Optional[str] = None
    witness: Optional[tuple] = None
    depth: Optional[int] = None

    def __post_init__(self):
        if self.accepted and self.violated_condition is not None:
            raise ValueError("accepted verdict cannot name a violated condition")

    def __bool__(self):
        return self.accepted

    def to_json(self):
        out = {
            "accepted": self.accepted,
            "violated_condition": self.violated_condition,
            "witness": None if self.witness is None else format_play(self.witness),
        }
        if self.depth is not None:
            out["n"] = self.depth
        return out

    @classmethod
    def from_json(cls, d):
        w = d.get("witness")
        return cls(d["accepted"], d.get("violated_condition"),
                   None if w is None else parse_play(w), d.get("n"))

    def __str__(self):
        if self.accepted:
            return "accepted" + (f", n={self.depth}" if self.depth is not None else "")
        w = format_play(self.witness) if self.witness is not None else ""
        return f"rejected: {self.violated_condition} at [{w or 'ε'}]"


class ExplorationLimit(RuntimeError):
    pass


def _as_play_set(S):
    """Return (raw plays, trie).  Raw plays keep DQ1/DQ2 checkable for bare sets."""
    if isinstance(S, PlaySet):
        return S.plays(), S
    raw = frozenset(tuple(tuple(step) for step in p) for p in S)
    return raw, PlaySet(raw)


def _check_base(g, p, S):
    raw, trie = _as_play_set(S)
    if () not in raw:
        return StrategyVerdict(False, DQ1, ()), trie
    for alpha in sorted(raw, key=play_key):
        if alpha and alpha[:-1] not in raw:
            return StrategyVerdict(False, DQ2, alpha), trie
    for alpha in trie:
        if not is_play(g, p, alpha):
            return StrategyVerdict(False, DQ3, alpha), trie
    return None, trie


def _check_local(g, p, S, condition, local_ok):
    bad, trie = _check_base(g, p, S)
    if bad is not None:
        return bad
    for alpha in trie:
        pos = next_pair(g, p, alpha)
        if not local_ok(trie.moves(alpha), pos):
            return StrategyVerdict(False, condition, alpha)
    return StrategyVerdict(True, depth=trie.depth)


def check_dq(g, p, S) -> StrategyVerdict:
    """Quasi-strategy: each play either stops, sits at a non-~1 position, or is answered fully."""
    return _check_local(g, _pair(p), S, DQ4,
                        lambda m, pos: not m or not sim1(g, pos) or full_for(g, m, pos))


def check_d(g, p, S) -> StrategyVerdict:
    return _check_local(g, _pair(p), S, DQ4_STRATEGY,
                        lambda m, pos: not sim1(g, pos) or full_for(g, m, pos))


def check_winning(g, p, S, cap: int = 100_000) -> StrategyVerdict:
    """Every position reached under ``S`` is ~1 and fully answered.

    ``S`` may be an :class:`IntensionalStrategy`; its reachable positions are
    then explored, raising :class:`ExplorationLimit` past ``cap``.
    """
    p = _pair(p)
    if isinstance(S, IntensionalStrategy):
        return _check_winning_intensional(g, p, S, cap)
    return _check_local(g, p, S, DQ4_WINNING,
                        lambda m, pos: sim1(g, pos) and full_for(g, m, pos))


def _check_winning_intensional(g, p, S, cap):
    parent = {p: None}
    queue = deque([p])
    while queue:
        pos = queue.popleft()
        moves = S.moves_at(pos)
        if not all(act(g, a) == act(g, b) for a, b in moves) or not (
                sim1(g, pos) and full_for(g, moves, pos)):
            witness, node = [], pos
            while parent[node] is not None:
                node, step = parent[node]
                witness.append(step)
            return StrategyVerdict(False, DQ4_WINNING, tuple(reversed(witness)))
        for a, b in moves:
            succ = TermPair(apply_rule(g, pos.left, a), apply_rule(g, pos.right, b))
            if succ not in parent:
                if len(parent) >= cap:
                    raise ExplorationLimit(f"more than {cap} positions under {S.name or 'strategy'}")
                parent[succ] = (pos, (a, b))
                queue.append(succ)
    return StrategyVerdict(True)


def check_finite_prefix(g, p, S) -> StrategyVerdict:
    """Is ``S`` a depth truncation of a Defender strategy for ``p``?

    Decided by the characterisation: ``S`` is a quasi-strategy and every dead
    end either has maximal length or sits at a position outside ~1.
    """
    p = _pair(p)
    verdict = check_dq(g, p, S)
    if not verdict:
        return verdict
    _, trie = _as_play_set(S)
    n = trie.depth
    for beta in trie.dead_ends():
        if len(beta) != n and sim1(g, next_pair(g, p, beta)):
            return StrategyVerdict(False, CHAR2, beta)
    return StrategyVerdict(True, depth=n)


def extension_leq(S1, S2) -> bool:
    """``S1 ⊑ S2``: S2 only adds plays below maximal plays of S1."""
    a, b = _as_play_set(S1)[0], _as_play_set(S2)[0]
    if not a <= b:
        return False
    maximal = [p for p in a if not any(len(q) == len(p) + 1 and q[:len(p)] == p for q in a)]
    return all(any(alpha[:len(m)] == m for m in maximal) for alpha in b - a)


def indstr(Sa, Sb) -> PlaySet:
    """Compose two play sets as relations on (left word, right word).

    Returns the prefix closure of ``{(u, w) | (v, u) ∈ Sa and (v, w) ∈ Sb}``.
    """
    by_left = {}
    for play in _as_play_set(Sa)[0]:
        v = tuple(s[0] for s in play)
        by_left.setdefault(v, []).append(tuple(s[1] for s in play))
    out = []
    for play in _as_play_set(Sb)[0]:
        v = tuple(s[0] for s in play)
        w = tuple(s[1] for s in play)
        for u in by_left.get(v, ()):
            out.append(tuple(zip(u, w)))
    return PlaySet(out)


# -- strategy-relative equivalence level -------------------------------------

def _responses(g, pos, moves, side, rid):
    lefts, rights = enabled_rules(g, pos.left), enabled_rules(g, pos.right)
    out = []
    for a, b in moves:
        if (a if side == LEFT else b) != rid:
            continue
        if a in lefts and b in rights and act(g, a) == act(g, b):
            out.append((a, b))
    return out


def strategy_eq_level(g, p, S, cap: int = 100_000) -> EqLevel:
    """Rounds Defender survives from ``p`` when restricted to ``S``.

    Attacker picks a side and an enabled rule; Defender picks among the
    matching move pairs that ``S`` offers.  No offered answer ends the game.
    A position with no enabled rule on either side is never lost.
    """
    p = _pair(p)
    if isinstance(S, IntensionalStrategy):
        return _intensional_level(g, p, S, cap)
    _, trie = _as_play_set(S)
    return to_eqlevel(_tree_value(g, trie, (), p)[0])


def attacker_line(g, p, S):
    """A shortest play along which Attacker defeats Defender restricted to finite ``S``.

    Returns ``(level, play)``; the play ends where Defender has no answer in
    ``S``.  ``play`` is None when Defender is never defeated.
    """
    _, trie = _as_play_set(S)
    v, line = _tree_value(g, trie, (), _pair(p))
    return to_eqlevel(v), (None if v == math.inf else line)


def _tree_value(g, trie, play, pos):
    moves = trie.moves(play)
    best, best_line = math.inf, ()
    for side, rid in attacks(g, pos):
        resp = _responses(g, pos, moves, side, rid)
        if not resp:
            return 0, play
        v, line = max((_tree_value(g, trie, play + (m,), TermPair(
            apply_rule(g, pos.left, m[0]), apply_rule(g, pos.right, m[1]))) for m in resp),
            key=lambda r: r[0])
        if v < best:
            best, best_line = v, line
    return (best + 1 if best != math.inf else math.inf), best_line


def _intensional_level(g, p, S, cap):
    nodes, queue = {p: None}, deque([p])
    options = {}
    while queue:
        pos = queue.popleft()
        moves = S.moves_at(pos)
        opts = []
        for side, rid in attacks(g, pos):
            succs = []
            for a, b in _responses(g, pos, moves, side, rid):
                succ = TermPair(apply_rule(g, pos.left, a), apply_rule(g, pos.right, b))
                succs.append(succ)
                if succ not in nodes:
                    if len(nodes) >= cap:
                        return _truncated_level(g, p, S, cap)
                    nodes[succ] = None
                    queue.append(succ)
            opts.append(succs)
        options[pos] = opts
    return to_eqlevel(solve_levels(list(nodes), options.__getitem__)[p])


def _truncated_level(g, p, S, cap):
    # Value of the depth-d truncation is min(true value, d).
    d, last = 1, 0
    while True:
        T = materialize(IntensionalStrategy(g, p, S.moves, S.name), d)
        if len(T) > cap:
            return EqLevel.at_least(last)
        v = strategy_eq_level(g, p, T)
        if v.value < d:
            return v
        last, d = d, d + 1
