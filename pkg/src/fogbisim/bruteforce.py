"""Plain game-tree search, kept deliberately naive.

No memoisation and no partition refinement: this is the reference the fast
routines in :mod:`fogbisim.game` are checked against.
"""
from .grammar import act, apply_rule, enabled_rules


def _moves(g, t):
    return [(act(g, r), apply_rule(g, t, r)) for r in enabled_rules(g, t)]


def survives(g, left, right, rounds):
    if rounds == 0:
        return True
    ml, mr = _moves(g, left), _moves(g, right)
    for a, t in ml:
        if not any(a == b and survives(g, t, u, rounds - 1) for b, u in mr):
            return False
    for b, u in mr:
        if not any(a == b and survives(g, t, u, rounds - 1) for a, t in ml):
            return False
    return True


def game_value(g, left, right, depth):
    """Largest ``n <= depth`` with ``left ~n right``.

    A result equal to ``depth`` means "at least depth".
    """
    n = 0
    while n < depth and survives(g, left, right, n + 1):
        n += 1
    return n
