"""Run the counterexample claim suite and write a JSON report.

    python3 scripts/run_repro.py --budget 100000 --k-max 6 --out repro.json
"""
import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from fogbisim.repro import report, run_repro


@dataclass
class ReproConfig:
    budget: int = 100_000
    k_min: int = 1
    k_max: int = 6
    out: str = ""


def parse_args(argv=None) -> ReproConfig:
    d = ReproConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--budget", type=int, default=d.budget)
    p.add_argument("--k-min", type=int, default=d.k_min)
    p.add_argument("--k-max", type=int, default=d.k_max)
    p.add_argument("--out", default=d.out, help="JSON output path (stdout summary only if empty)")
    return ReproConfig(**vars(p.parse_args(argv)))


def main(argv=None):
    cfg = parse_args(argv)
    results = run_repro(cfg.budget, range(cfg.k_min, cfg.k_max + 1))
    rep = report(results)
    rep["config"] = asdict(cfg)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.id:24} {r.computed}")
    print(f"{sum(r.passed for r in results)}/{len(results)} claims pass")
    if cfg.out:
        Path(cfg.out).write_text(json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    return 0 if rep["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
