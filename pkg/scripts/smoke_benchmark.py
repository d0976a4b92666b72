"""Wall-clock of the solver on random connected graphs with one weight row in {-1, 0, 1}.

    python3 scripts/smoke_benchmark.py --sizes 50 100 200 400 --trials 3
"""
import argparse
import random
import time
from dataclasses import dataclass, field

from exactbase.acceptance import smoke_graph
from exactbase.matroid import compile_spec
from exactbase.solver import solve
from exactbase.weights import WeightMatrix


@dataclass
class Config:
    sizes: list = field(default_factory=lambda: [50, 100, 200, 400])
    trials: int = 3
    seed: int = 0


def main(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    print(f"{'n':>5}{'trial':>6}{'status':>12}{'seconds':>9}{'oracle':>9}{'pivots':>8}{'tested':>8}")
    for n in cfg.sizes:
        for t in range(cfg.trials):
            spec = smoke_graph(rng, n, max(4, int(0.3 * n)))
            M = compile_spec(spec)
            W = WeightMatrix.from_rows([[rng.randint(-1, 1) for _ in range(M.n)]])
            order = list(range(M.n))
            rng.shuffle(order)
            beta = W.weight(M.greedy_basis(order))
            start = time.perf_counter()
            rep = solve(M, W, beta, seed=t)
            dt = time.perf_counter() - start
            print(f"{n:>5}{t:>6}{rep.status:>12}{dt:>9.2f}{rep.oracle_calls:>9}{rep.lp_pivots:>8}"
                  f"{rep.candidates_tested:>8}")
    return 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    raise SystemExit(main(Config(a.sizes, a.trials, a.seed)))
