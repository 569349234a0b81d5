"""Strategy-relative levels for the bundled strategies, with Attacker's best line.

Shows where each strategy gives up rounds compared with the unconstrained game.
"""
import argparse
from dataclasses import dataclass

from fogbisim.game import eq_level, next_pair
from fogbisim.grammar import BOT, TermPair
from fogbisim.repro import L1, named_strategies, counterexample_grammar, term
from fogbisim.strategy import attacker_line, format_play


@dataclass
class ProbeConfig:
    budget: int = 100_000


def _pair(name, arg=BOT):
    return TermPair(term(name[0], arg), term(name[1], arg))


CASES = [
    ("S", _pair("AB")),
    ("S1", _pair("CC")),
    ("S6", _pair("EE")),
    ("Id_C,1", _pair("CC", L1)),
    ("Id_D,2", _pair("DD", L1)),
    ("Id_E,2", _pair("EE", L1)),
]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--budget", type=int, default=ProbeConfig.budget)
    cfg = ProbeConfig(**vars(p.parse_args(argv)))
    g = counterexample_grammar()
    st = named_strategies(g)
    for name, pair in CASES:
        game = eq_level(g, pair, cfg.budget)
        level, line = attacker_line(g, pair, st[name])
        where = f" ends at {next_pair(g, pair, line)}" if line is not None else ""
        print(f"{name:7} {str(pair):22} game={str(game):9} with S={str(level):9} "
              f"line=[{format_play(line or ())}]{where}")


if __name__ == "__main__":
    main()
