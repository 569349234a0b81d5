"""Command-line entry point: ``fogbisim <command> ...``.

Exit status: 0 success/accepted, 1 checked and rejected, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .game import LEFT, RIGHT, answers, eq_level, sim1
from .grammar import (GrammarError, TermPair, act, apply_rule, enabled_rules,
                      parse_grammar, parse_term)
from .repro import family_grammar, report, run_repro
from .strategy import (ExplorationLimit, IntensionalStrategy, check_d,
                       check_dq, check_finite_prefix, check_winning, format_play,
                       identity_strategy, materialize, play_key, read_strategy,
                       strategy_eq_level)

OK, REJECTED, USAGE = 0, 1, 2

CHECKERS = {"dq": check_dq, "d": check_d, "winning": check_winning, "prefix": check_finite_prefix}


class UsageError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_grammar(path):
    return parse_grammar(_read(path))


def _load_pair(g, left, right):
    return TermPair(parse_term(left, g), parse_term(right, g))


def _load_strategy(spec, g, pair):
    if spec == "@identity":
        return identity_strategy(g, pair.left)
    try:
        return read_strategy(_read(spec))
    except ValueError as e:
        raise UsageError(f"{spec}: {e}") from None


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def cmd_validate(args):
    try:
        g = _load_grammar(args.grammar)
    except GrammarError as e:
        _emit(args, {"valid": False, "diagnostics": [str(d) for d in e.diagnostics]},
              "\n".join(f"{args.grammar}:{d}" for d in e.diagnostics))
        return REJECTED
    _emit(args, {"valid": True, "nonterminals": len(g.nonterminals), "rules": len(g.rules)},
          f"ok: {len(g.nonterminals)} nonterminals, {len(g.rules)} rules")
    return OK


def cmd_eqlevel(args):
    g = _load_grammar(args.grammar)
    pair = _load_pair(g, args.left, args.right)
    if args.strategy:
        S = _load_strategy(args.strategy, g, pair)
        level = strategy_eq_level(g, pair, S, args.budget)
    else:
        level = eq_level(g, pair, args.budget)
    _emit(args, {"pair": [str(pair.left), str(pair.right)], "eq_level": str(level)}, str(level))
    return OK


def cmd_check_strategy(args):
    g = _load_grammar(args.grammar)
    pair = _load_pair(g, args.left, args.right)
    S = _load_strategy(args.strategy, g, pair)
    if isinstance(S, IntensionalStrategy) and args.mode != "winning":
        S = materialize(S, args.depth)
    verdict = CHECKERS[args.mode](g, pair, S)
    _emit(args, verdict.to_json(), str(verdict))
    return OK if verdict.accepted else REJECTED


def _k_range(text):
    lo, sep, hi = text.partition("-")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected K or K1-K2, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(lo, hi + 1)


def cmd_repro(args):
    results = run_repro(args.budget, args.k_range)
    rep = report(results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.id:24} expected={r.expected} computed={r.computed}"
             + (f"  [{r.witness}]" if r.witness else "") + (f"  ({r.reason})" if r.reason else "")
             for r in results]
    lines.append("all claims pass" if rep["all_pass"] else "some claims FAIL")
    _emit(args, rep, "\n".join(lines))
    return OK if rep["all_pass"] else REJECTED


def cmd_gen_family(args):
    if args.k < 1:
        raise UsageError("k must be >= 1")
    text = f"# chain length k={args.k}\n" + family_grammar(args.k).to_text()
    try:
        Path(args.out).write_text(text, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot write {args.out}: {e.strerror}") from None
    _emit(args, {"k": args.k, "path": str(args.out)}, f"wrote {args.out}")
    return OK


def cmd_play(args):
    g = _load_grammar(args.grammar)
    pair = _load_pair(g, args.left, args.right)
    S = None
    if args.strategy:
        S = _load_strategy(args.strategy, g, pair)
        if isinstance(S, IntensionalStrategy):
            S = materialize(S, args.depth)
        verdict = check_dq(g, pair, S)
        if not verdict:
            print(f"strategy rejected: {verdict}")
            return REJECTED
    game_repl(g, pair, S)
    return OK


def game_repl(g, pair, S=None, inp=None, out=None):
    """Human Attacker against a machine Defender.

    Returns ``(winner, rounds)`` where winner is "attacker", "defender"
    (position is dead), or None (human quit / end of input).
    """
    inp = sys.stdin if inp is None else inp
    out = sys.stdout if out is None else out

    def say(*parts):
        print(*parts, file=out)

    play, rounds = (), 0
    while True:
        left, right = enabled_rules(g, pair.left), enabled_rules(g, pair.right)
        say(f"round {rounds + 1}: position {pair}")
        say("  left :", " ".join(f"{r}[{act(g, r)}]" for r in left) or "-")
        say("  right:", " ".join(f"{r}[{act(g, r)}]" for r in right) or "-")
        if not left and not right:
            say(f"position is dead; Defender survived {rounds} round(s)")
            return "defender", rounds
        while True:
            print("attack (L|R <rule>, q to quit)> ", end="", file=out, flush=True)
            line = inp.readline()
            if not line:
                say(f"\nend of input; Defender survived {rounds} round(s)")
                return None, rounds
            words = line.split()
            if words and words[0].lower() in ("q", "quit"):
                say(f"quit; Defender survived {rounds} round(s)")
                return None, rounds
            if len(words) == 2 and words[0].upper() in ("L", "R"):
                side = LEFT if words[0].upper() == "L" else RIGHT
                if words[1] in (left if side == LEFT else right):
                    break
            say("  illegal move; enter e.g. 'L r1'")
        rid = words[1]
        options = answers(g, pair, side, rid)
        if S is not None:
            offered = set(S.moves(play))
            options = sorted((m for m in options if m in offered), key=lambda m: play_key((m,)))
        else:
            # prefer answers that keep the position inside ~1
            options.sort(key=lambda m: not sim1(g, _step(g, pair, m)))
        if not options:
            say(f"Defender has no answer to {rid}; Attacker wins in round {rounds + 1}")
            return "attacker", rounds
        move = options[0]
        say(f"  Defender answers {move[1] if side == LEFT else move[0]}  (move {format_play([move])})")
        play += (move,)
        pair = _step(g, pair, move)
        rounds += 1


def _step(g, pair, move):
    return TermPair(apply_rule(g, pair.left, move[0]), apply_rule(g, pair.right, move[1]))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="write JSON to stdout")
    common.add_argument("--budget", type=int, default=100_000, help="state cap (default 100000)")
    common.add_argument("--depth", type=int, default=16,
                        help="materialisation depth for @identity strategies (default 16)")

    p = argparse.ArgumentParser(prog="fogbisim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse and validate a grammar")
    s.add_argument("grammar")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("eqlevel", parents=[common], help="equivalence level of a term pair")
    s.add_argument("grammar")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--strategy", help="strategy file (or @identity): level relative to it")
    s.set_defaults(func=cmd_eqlevel)

    s = sub.add_parser("check-strategy", parents=[common], help="check a Defender strategy")
    s.add_argument("grammar")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("strategy", help="strategy file, or @identity")
    s.add_argument("--mode", choices=sorted(CHECKERS), default="prefix")
    s.set_defaults(func=cmd_check_strategy)

    s = sub.add_parser("repro", parents=[common], help="run the counterexample claim suite")
    s.add_argument("--k-range", type=_k_range, default=range(1, 7), metavar="K1-K2")
    s.set_defaults(func=cmd_repro)

    s = sub.add_parser("gen-family", parents=[common], help="write the chain-length-k grammar")
    s.add_argument("k", type=int)
    s.add_argument("out")
    s.set_defaults(func=cmd_gen_family)

    s = sub.add_parser("play", parents=[common], help="play Attacker against the machine")
    s.add_argument("grammar")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("strategy", nargs="?")
    s.set_defaults(func=cmd_play)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    if args.budget <= 0:
        print("error: --budget must be positive", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except (UsageError, GrammarError, ValueError, KeyError, ExplorationLimit) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
