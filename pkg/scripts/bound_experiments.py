"""Observed sensitivity and proximity against the proven bounds, plus the lower-bound instances.

    python3 scripts/bound_experiments.py --proximity-max-n 14 --sensitivity-max-n 12
"""
import argparse
from dataclasses import dataclass

from exactbase import lab
from exactbase.catalog import CATALOG_VERSION, small_catalog


@dataclass
class Config:
    proximity_max_n: int = 14
    sensitivity_max_n: int = 12
    weight_seeds: int = 3
    seed: int = 0


def main(cfg: Config) -> int:
    print(f"catalog version {CATALOG_VERSION}")
    prox = lab.proximity_catalog(small_catalog(cfg.proximity_max_n), cfg.weight_seeds, cfg.seed)
    by_entry = {}
    for r in prox:
        entry = r.instance.split("/")[0]
        by_entry[entry] = max(by_entry.get(entry, 0), r.observed)
    print("\nproximity (m=1, delta=1, bound 2^13): largest observed distance per entry")
    for entry, obs in by_entry.items():
        print(f"  {entry:<24}{str(obs):>6}")
    print(f"  instances {len(prox)}, failures {sum(not r.passed for r in prox)}, "
          f"max ratio {max(r.ratio for r in prox)}")

    sens = lab.sensitivity_catalog(small_catalog(cfg.sensitivity_max_n), cfg.seed)
    print("\nsensitivity (all basis pairs): worst observed/bound per case")
    for r in sens:
        print(f"  {r.instance:<28} pairs {r.detail['pairs']:>8}  max |A'⊕B| {str(r.observed):>3}  "
              f"ratio {float(r.ratio):.2e}  {'ok' if r.passed else 'VIOLATION'}")

    print("\nlower-bound instances")
    for kind, sizes in (("sensitivity", (4, 6, 8, 10, 12)), ("proximity", (8, 12, 16))):
        for n in sizes:
            rep = lab.verify_lower_bound(lab.lower_bound_instance(kind, n))
            print(f"  {kind:<12} n={n:<3} observed {str(rep.observed):>4}  verified {rep.passed}")
    failed = sum(not r.passed for r in prox) + sum(not r.passed for r in sens)
    return 1 if failed else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--proximity-max-n", type=int, default=Config.proximity_max_n)
    p.add_argument("--sensitivity-max-n", type=int, default=Config.sensitivity_max_n)
    p.add_argument("--weight-seeds", type=int, default=Config.weight_seeds)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    raise SystemExit(main(Config(a.proximity_max_n, a.sensitivity_max_n, a.weight_seeds, a.seed)))
