"""Equivalence level of (A(bot), B(bot)) across the chain-length family.

For each k prints the level from partition refinement, the naive game-tree
value, the separating word, and wall-clock time of both methods.
"""
import argparse
import time
from dataclasses import dataclass

from fogbisim import bruteforce
from fogbisim.game import eq_level
from fogbisim.grammar import TermPair, word_reachable
from fogbisim.repro import family_grammar, term


@dataclass
class SweepConfig:
    k_max: int = 6
    budget: int = 100_000
    oracle: bool = True


def sweep(cfg: SweepConfig):
    A, B = term("A"), term("B")
    rows = []
    for k in range(1, cfg.k_max + 1):
        g = family_grammar(k)
        t0 = time.perf_counter()
        lvl = eq_level(g, TermPair(A, B), cfg.budget)
        t1 = time.perf_counter()
        bf = bruteforce.game_value(g, A, B, 3 + k + 1) if cfg.oracle else None
        t2 = time.perf_counter()
        w = "a" * (3 + k) + "b"
        sep = word_reachable(g, B, w) and not word_reachable(g, A, w)
        rows.append((k, str(lvl), bf, w if sep else "-", t1 - t0, t2 - t1))
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k-max", type=int, default=SweepConfig.k_max)
    p.add_argument("--budget", type=int, default=SweepConfig.budget)
    p.add_argument("--no-oracle", dest="oracle", action="store_false")
    cfg = SweepConfig(**vars(p.parse_args(argv)))
    print(f"{'k':>3} {'eq_level':>10} {'brute':>6} {'word':>14} {'t_refine':>9} {'t_brute':>8}")
    for k, lvl, bf, w, ta, tb in sweep(cfg):
        print(f"{k:>3} {lvl:>10} {bf if bf is not None else '-':>6} {w:>14} {ta:9.4f} {tb:8.4f}")


if __name__ == "__main__":
    main()
