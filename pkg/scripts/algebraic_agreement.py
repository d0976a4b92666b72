"""Feasibility verdicts of the algebraic solver against basis enumeration.

    python3 scripts/algebraic_agreement.py --count 1000 --retries 3
"""
import argparse
import random
from dataclasses import dataclass

from exactbase.algebraic import SelfReductionFailure, exact_basis_1d, representation
from exactbase.catalog import random_linear
from exactbase.matroid import compile_spec, enumerate_bases


@dataclass
class Config:
    count: int = 1000
    retries: int = 3
    seed: int = 2


def main(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    verdicts = misses = invalid = give_ups = 0
    for i in range(cfg.count):
        n = rng.randint(1, 10)
        spec = random_linear(rng, n, rows=rng.randint(1, min(5, n)))
        delta = rng.choice((1, 2))
        w = [rng.randint(-delta, delta) for _ in range(n)]
        M = compile_spec(spec)
        feasible = {sum(w[e] for e in B) for B in enumerate_bases(M)}
        rep = representation(spec)
        for beta in range(-delta * rep.rank - 1, delta * rep.rank + 2):
            verdicts += 1
            try:
                B = exact_basis_1d(rep, w, beta, seed=i * 1000 + beta, retries=cfg.retries)
            except SelfReductionFailure:
                give_ups += 1
                continue
            if B is None:
                misses += beta in feasible
            elif not (M.is_basis(B) and sum(w[e] for e in B) == beta):
                invalid += 1
    rate = (misses + give_ups) / max(1, verdicts)
    print(f"instances {cfg.count}  verdicts {verdicts}  false negatives {misses}  "
          f"self-reduction give-ups {give_ups}  invalid {invalid}  one-sided rate {rate:.2e}")
    return 1 if invalid or rate > 1e-3 else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=Config.count)
    p.add_argument("--retries", type=int, default=Config.retries)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    raise SystemExit(main(Config(a.count, a.retries, a.seed)))
