"""Compare the proximity solver against brute force on randomized instances.

    python3 scripts/oracle_agreement.py --count 10000 --seed 0
"""
import argparse
import collections
import random
import time
from dataclasses import dataclass

from exactbase.acceptance import random_instance
from exactbase.catalog import KINDS
from exactbase.matroid import compile_spec
from exactbase.solver import brute_force_solve, solve


@dataclass
class Config:
    count: int = 10_000
    seed: int = 0
    max_n: int = 12


def main(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    per_kind = collections.Counter()
    feasible = collections.Counter()
    candidates = collections.Counter()
    bad = []
    start = time.perf_counter()
    for i in range(cfg.count):
        spec, M, W, beta = random_instance(rng, i, cfg.max_n)
        kind = KINDS[i % len(KINDS)]
        a = solve(M, W, beta, seed=i)
        b = brute_force_solve(compile_spec(spec), W, beta)
        per_kind[kind] += 1
        feasible[kind] += a.status == "found"
        candidates[a.candidates_tested] += 1
        if a.status != b.status:
            bad.append((i, kind, a.status, b.status))
    elapsed = time.perf_counter() - start
    print(f"{'kind':<14}{'instances':>10}{'feasible':>10}")
    for kind in KINDS:
        print(f"{kind:<14}{per_kind[kind]:>10}{feasible[kind]:>10}")
    print("candidates tested before verdict:", dict(sorted(candidates.items())))
    print(f"disagreements: {len(bad)}  elapsed: {elapsed:.1f}s")
    for row in bad[:10]:
        print("  ", row)
    return 1 if bad else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=Config.count)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--max-n", type=int, default=Config.max_n)
    a = p.parse_args()
    raise SystemExit(main(Config(a.count, a.seed, a.max_n)))
