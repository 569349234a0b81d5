"""First-order grammars over ranked nonterminals.

A grammar is a finite list of labelled rewrite rules ``N(v1..vn) --t--> rhs``.
Rules fire at the root of a ground term; the successor is the rule's
right-hand side with the actual arguments substituted for the variables.
Each rule carries an intermediate label that maps onto an observable action.

The textual format (``.fog``) is line-oriented::

    actions a b l1
    labels x->a y->a z->b l1->l1
    nt A:1 C:1 D:1 L1:0
    rule r1 A(v) y C(v)
    rule r2 D(v) x v
    rule r3 L1 l1 bot

``#`` starts a comment.  Header lines may appear in any order and repeat.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union


@dataclass(frozen=True)
class Bot:
    """The constant ⊥; no rule applies to it."""

    def __str__(self):
        return "bot"


BOT = Bot()


@dataclass(frozen=True)
class App:
    head: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.head
        return f"{self.head}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Var:
    """Rule variable ``v_index`` (1-based).  Never appears in ground terms."""

    index: int

    def __str__(self):
        return f"v{self.index}"


Term = Union[Bot, App]
Pattern = Union[Bot, App, Var]


@dataclass(frozen=True)
class TermPair:
    left: Term
    right: Term

    def __iter__(self):
        yield self.left
        yield self.right

    def __str__(self):
        return f"({self.left}, {self.right})"


@dataclass(frozen=True)
class Rule:
    id: str
    head: str
    arity: int
    rhs: Pattern
    tlabel: str
    action: str

    def __str__(self):
        params = ",".join(f"v{i}" for i in range(1, self.arity + 1))
        lhs = f"{self.head}({params})" if self.arity else self.head
        return f"{self.id}: {lhs} --{self.tlabel}--> {self.rhs}"


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    reason: str

    def __str__(self):
        if self.line:
            return f"{self.line}:{self.column}: {self.reason}"
        return f"column {self.column}: {self.reason}" if self.column else self.reason


class GrammarError(ValueError):
    """Raised for malformed grammars, terms, or rule references."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [Diagnostic(0, 0, diagnostics)]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Grammar:
    nonterminals: dict
    actions: tuple
    lab_a: dict
    rules: tuple
    _by_id: dict = field(init=False, repr=False, compare=False)
    _by_head: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_id, by_head = {}, {}
        for pos, r in enumerate(self.rules):
            by_id[r.id] = pos
            by_head.setdefault(r.head, []).append(r.id)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_by_head", {h: tuple(ids) for h, ids in by_head.items()})

    @property
    def tlabels(self):
        return tuple(self.lab_a)

    def rule(self, rid: str) -> Rule:
        try:
            return self.rules[self._by_id[rid]]
        except KeyError:
            raise GrammarError(f"unknown rule id {rid!r}") from None

    def rule_index(self, rid: str) -> int:
        """Declaration position of ``rid``; the canonical ordering key for rules."""
        try:
            return self._by_id[rid]
        except KeyError:
            raise GrammarError(f"unknown rule id {rid!r}") from None

    def rules_for(self, head: str) -> tuple:
        return self._by_head.get(head, ())

    def to_text(self) -> str:
        lines = [
            "actions " + " ".join(self.actions),
            "labels " + " ".join(f"{t}->{a}" for t, a in self.lab_a.items()),
            "nt " + " ".join(f"{n}:{k}" for n, k in self.nonterminals.items()),
        ]
        for r in self.rules:
            params = ",".join(f"v{i}" for i in range(1, r.arity + 1))
            lhs = f"{r.head}({params})" if r.arity else r.head
            lines.append(f"rule {r.id} {lhs} {r.tlabel} {r.rhs}")
        return "\n".join(lines) + "\n"


def make_grammar(nonterminals, lab_a, rules, actions=None) -> Grammar:
    """Build and validate a grammar.

    ``rules`` is a sequence of ``(id, head, tlabel, rhs)`` where ``rhs`` is a
    pattern over :class:`Var`.  Raises :class:`GrammarError` listing every
    problem found.
    """
    nonterminals = dict(nonterminals)
    lab_a = dict(lab_a)
    if actions is None:
        actions = tuple(dict.fromkeys(lab_a.values()))
    actions = tuple(actions)
    problems = []
    for t, a in lab_a.items():
        if a not in actions:
            problems.append(f"label {t!r} maps to undeclared action {a!r}")
    for n, k in nonterminals.items():
        if k < 0:
            problems.append(f"nonterminal {n!r} has negative arity")
    built, seen = [], set()
    for rid, head, tlabel, rhs in rules:
        if rid in seen:
            problems.append(f"duplicate rule id {rid!r}")
        seen.add(rid)
        if head not in nonterminals:
            problems.append(f"rule {rid}: unknown nonterminal {head!r}")
            continue
        if tlabel not in lab_a:
            problems.append(f"rule {rid}: undeclared label {tlabel!r}")
            continue
        arity = nonterminals[head]
        problems.extend(f"rule {rid}: {p}" for p in _check_pattern(rhs, nonterminals, arity))
        built.append(Rule(rid, head, arity, rhs, tlabel, lab_a[tlabel]))
    if problems:
        raise GrammarError(problems)
    return Grammar(nonterminals, actions, lab_a, tuple(built))


def _check_pattern(t, nonterminals, arity):
    if isinstance(t, Var):
        if not 1 <= t.index <= arity:
            yield f"variable v{t.index} out of range for arity {arity}"
        return
    if isinstance(t, Bot):
        return
    if t.head not in nonterminals:
        yield f"unknown symbol {t.head!r}"
        return
    if len(t.args) != nonterminals[t.head]:
        yield f"arity mismatch: {t.head} takes {nonterminals[t.head]} argument(s), got {len(t.args)}"
    for a in t.args:
        yield from _check_pattern(a, nonterminals, arity)


def check_term(g: Grammar, t: Term) -> None:
    """Raise :class:`GrammarError` unless ``t`` is a ground term of ``g``."""
    problems = list(_check_pattern(t, g.nonterminals, 0))
    if problems:
        raise GrammarError(problems)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(.))")
_VAR = re.compile(r"v([0-9]*)$")


class _TermReader:
    def __init__(self, text, variables=None):
        self.text = text
        self.pos = 0
        self.variables = variables

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m or m.end() == m.start() or (m.group(1) is None and m.group(2) is None):
            return None, len(self.text)
        return m, m.start(m.lastindex)

    def take(self):
        m, col = self.peek()
        if m is None:
            raise GrammarError([Diagnostic(0, col + 1, "unexpected end of term")])
        self.pos = m.end()
        return m.group(1) or m.group(2), bool(m.group(1)), col

    def term(self):
        tok, ident, col = self.take()
        if not ident:
            raise GrammarError([Diagnostic(0, col + 1, f"unexpected {tok!r}")])
        if tok == "bot":
            return BOT
        if self.variables is not None and tok in self.variables:
            return self.variables[tok]
        m, _ = self.peek()
        args = []
        if m is not None and m.group(2) == "(":
            self.take()
            while True:
                args.append(self.term())
                sep, _, scol = self.take()
                if sep == ")":
                    break
                if sep != ",":
                    raise GrammarError([Diagnostic(0, scol + 1, f"expected ',' or ')', got {sep!r}")])
        return App(tok, tuple(args))

    def at_end(self):
        return self.text[self.pos:].strip() == ""


def parse_term(text: str, g: Grammar | None = None) -> Term:
    """Parse a ground term such as ``A(bot)`` or ``L1``.

    When ``g`` is given the term is also checked against its ranked alphabet.
    """
    reader = _TermReader(text)
    t = reader.term()
    if not reader.at_end():
        raise GrammarError([Diagnostic(0, reader.pos + 1, "trailing input after term")])
    if g is not None:
        check_term(g, t)
    return t


def parse_grammar(text: str) -> Grammar:
    """Parse the ``.fog`` text format; raises GrammarError with line/column diagnostics."""
    diags = []
    actions, lab_a, nts = [], {}, {}
    rule_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        keyword, _, rest = line.strip().partition(" ")
        rest_col = indent + len(keyword) + 2
        if keyword == "actions":
            for a in rest.split():
                if a in actions:
                    diags.append(Diagnostic(lineno, rest_col, f"duplicate action {a!r}"))
                actions.append(a)
        elif keyword == "labels":
            for item in rest.split():
                t, arrow, a = item.partition("->")
                col = line.find(item) + 1
                if not arrow or not t or not a:
                    diags.append(Diagnostic(lineno, col, f"malformed label mapping {item!r}"))
                elif t in lab_a:
                    diags.append(Diagnostic(lineno, col, f"duplicate label {t!r}"))
                else:
                    lab_a[t] = a
        elif keyword == "nt":
            for item in rest.split():
                name, colon, k = item.partition(":")
                col = line.find(item) + 1
                if not colon or not name or not k.isdigit():
                    diags.append(Diagnostic(lineno, col, f"malformed nonterminal {item!r}"))
                elif name in nts:
                    diags.append(Diagnostic(lineno, col, f"duplicate nonterminal {name!r}"))
                else:
                    nts[name] = int(k)
        elif keyword == "rule":
            rule_lines.append((lineno, rest_col, rest))
        else:
            diags.append(Diagnostic(lineno, indent + 1, f"unknown directive {keyword!r}"))

    for t, a in lab_a.items():
        if a not in actions:
            diags.append(Diagnostic(0, 0, f"label {t!r} maps to undeclared action {a!r}"))

    rules, seen = [], set()
    for lineno, col0, rest in rule_lines:
        try:
            rules.append(_parse_rule(rest, nts, lab_a))
        except GrammarError as e:
            for d in e.diagnostics:
                diags.append(Diagnostic(lineno, col0 + max(d.column, 1) - 1, d.reason))
            continue
        rid = rules[-1][0]
        if rid in seen:
            diags.append(Diagnostic(lineno, col0, f"duplicate rule id {rid!r}"))
        seen.add(rid)
    if diags:
        raise GrammarError(diags)
    return make_grammar(nts, lab_a, rules, actions=actions)


def _parse_rule(text, nts, lab_a):
    rid, _, rest = text.partition(" ")
    if not rid or not rest.strip():
        raise GrammarError([Diagnostic(0, 1, "expected: rule <id> <head> <label> <rhs>")])
    offset = len(rid) + 1
    reader = _TermReader(rest)
    head = reader.term()
    if not isinstance(head, App):
        raise GrammarError([Diagnostic(0, offset + 1, "rule head must be a nonterminal")])
    if head.head not in nts:
        raise GrammarError([Diagnostic(0, offset + 1, f"unknown symbol {head.head!r}")])
    if len(head.args) != nts[head.head]:
        raise GrammarError([Diagnostic(0, offset + 1, f"arity mismatch: {head.head} takes "
                                       f"{nts[head.head]} argument(s), got {len(head.args)}")])
    variables = {}
    for i, a in enumerate(head.args, 1):
        if not (isinstance(a, App) and not a.args and _VAR.match(a.head)) or a.head in variables:
            raise GrammarError([Diagnostic(0, offset + 1, "head arguments must be distinct variables")])
        variables[a.head] = Var(i)
    tok, ident, col = reader.take()
    if not ident:
        raise GrammarError([Diagnostic(0, offset + col + 1, f"expected label, got {tok!r}")])
    if tok not in lab_a:
        raise GrammarError([Diagnostic(0, offset + col + 1, f"undeclared label {tok!r}")])
    rhs_start = reader.pos
    reader.variables = variables
    try:
        rhs = reader.term()
    except GrammarError as e:
        raise GrammarError([Diagnostic(0, offset + d.column, d.reason) for d in e.diagnostics])
    if not reader.at_end():
        raise GrammarError([Diagnostic(0, offset + reader.pos + 1, "trailing input after rule")])
    problems = list(_check_pattern(rhs, nts, len(head.args)))
    if problems:
        col = offset + len(rest[:rhs_start]) + (len(rest[rhs_start:]) - len(rest[rhs_start:].lstrip())) + 1
        raise GrammarError([Diagnostic(0, col, p) for p in problems])
    return rid, head.head, tok, rhs


# -- semantics ---------------------------------------------------------------

def enabled_rules(g: Grammar, t: Term) -> tuple:
    """Ids of rules applicable at the root of ``t``, in declaration order."""
    if isinstance(t, Bot):
        return ()
    if t.head not in g.nonterminals:
        raise GrammarError(f"term uses unknown nonterminal {t.head!r}")
    return g.rules_for(t.head)


def _subst(p, args):
    if isinstance(p, Var):
        return args[p.index - 1]
    if isinstance(p, Bot):
        return p
    return App(p.head, tuple(_subst(a, args) for a in p.args))


def apply_rule(g: Grammar, t: Term, rid: str) -> Term:
    r = g.rule(rid)
    if isinstance(t, Bot) or t.head != r.head:
        raise GrammarError(f"rule {rid} is not enabled at {t}")
    return _subst(r.rhs, t.args)


def act(g: Grammar, rid: str) -> str:
    return g.rule(rid).action


def successors(g: Grammar, t: Term):
    """``[(rule id, action, successor term)]`` in declaration order."""
    return [(rid, act(g, rid), apply_rule(g, t, rid)) for rid in enabled_rules(g, t)]


def enabled_actions(g: Grammar, t: Term) -> frozenset:
    return frozenset(act(g, rid) for rid in enabled_rules(g, t))


def word_reachable(g: Grammar, t: Term, word: Sequence[str]) -> bool:
    return reachable_witness(g, t, word) is not None


def reachable_witness(g: Grammar, t: Term, word: Sequence[str]):
    """A rule sequence from ``t`` whose action word is ``word``, or None.

    BFS over (term, position); each step consumes one action so it terminates.
    """
    word = tuple(word)
    for a in word:
        if a not in g.actions:
            raise GrammarError(f"undeclared action {a!r}")
    start = (t, 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        term, i = queue.popleft()
        if i == len(word):
            path, node = [], (term, i)
            while parent[node] is not None:
                node, rid = parent[node]
                path.append(rid)
            return tuple(reversed(path))
        for rid, a, nxt in successors(g, term):
            if a != word[i]:
                continue
            node = (nxt, i + 1)
            if node not in parent:
                parent[node] = ((term, i), rid)
                queue.append(node)
    return None


def reachable_terms(g: Grammar, roots: Iterable[Term], cap: int | None = None):
    """All terms reachable from ``roots`` in BFS order.

    Returns ``(terms, closed)``; ``closed`` is False when ``cap`` stopped the search.
    """
    seen = dict.fromkeys(roots)
    queue = deque(seen)
    while queue:
        t = queue.popleft()
        for _, _, s in successors(g, t):
            if s not in seen:
                if cap is not None and len(seen) >= cap:
                    return list(seen), False
                seen[s] = None
                queue.append(s)
    return list(seen), True
