"""Random instance generators and the fixed, versioned small-matroid catalog."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .matroid import (Contraction, DirectSum, Graphic, Linear, Partition, Restriction, Transversal,
                      Uniform, compile_spec, ground_size)
from .weights import WeightMatrix

CATALOG_VERSION = 1
KINDS = ("uniform", "partition", "graphic", "linear", "linear_prime", "transversal",
         "direct_sum", "restriction", "contraction")


def random_uniform(rng: random.Random, n: int) -> Uniform:
    return Uniform(n, rng.randint(0, n))


def random_partition(rng: random.Random, n: int) -> Partition:
    perm = list(range(n))
    rng.shuffle(perm)
    cuts = sorted(rng.sample(range(1, n), rng.randint(0, min(3, n - 1)))) if n > 1 else []
    blocks = [perm[a:b] for a, b in zip([0] + cuts, cuts + [n])] if n else []
    return Partition(blocks, [rng.randint(0, len(b)) for b in blocks])


def random_graphic(rng: random.Random, n: int) -> Graphic:
    v = rng.randint(2, max(2, min(n, 7)))
    edges = [tuple(rng.sample(range(v), 2)) if rng.random() > 0.1 else (rng.randrange(v),) * 2
             for _ in range(n)]
    return Graphic(v, edges)


def random_linear(rng: random.Random, n: int, prime: int | None = None, rows: int | None = None) -> Linear:
    d = rows if rows is not None else rng.randint(1, min(5, max(1, n)))
    if prime is None:
        matrix = [[rng.choice([-1, 0, 0, 1, 2]) for _ in range(n)] for _ in range(d)]
    else:
        matrix = [[rng.randrange(prime) for _ in range(n)] for _ in range(d)]
    return Linear(matrix, prime, n)


def random_transversal(rng: random.Random, n: int) -> Transversal:
    left = rng.randint(1, max(1, min(n, 6)))
    adj = [rng.sample(range(left), rng.randint(0, min(2, left))) for _ in range(n)]
    return Transversal(left, adj)


def random_spec(rng: random.Random, n: int, kind: str | None = None, depth: int = 0):
    """Random spec on exactly ``n`` elements."""
    if kind is None:
        kind = rng.choice(KINDS if depth == 0 else KINDS[:6])
    if kind == "uniform":
        return random_uniform(rng, n)
    if kind == "partition":
        return random_partition(rng, n)
    if kind == "graphic":
        return random_graphic(rng, n)
    if kind == "linear":
        return random_linear(rng, n)
    if kind == "linear_prime":
        return random_linear(rng, n, prime=rng.choice([2, 3, 5, 7]))
    if kind == "transversal":
        return random_transversal(rng, n)
    if kind == "direct_sum":
        if n < 2:
            return random_uniform(rng, n)
        k = rng.randint(1, n - 1)
        return DirectSum([random_spec(rng, k, depth=depth + 1), random_spec(rng, n - k, depth=depth + 1)])
    if kind == "restriction":
        extra = rng.randint(0, 3)
        base = random_spec(rng, n + extra, depth=depth + 1)
        keep = sorted(rng.sample(range(n + extra), n))
        return Restriction(base, keep)
    if kind == "contraction":
        extra = rng.randint(0, 3)
        base = random_spec(rng, n + extra, depth=depth + 1)
        M = compile_spec(base)
        # contract a random independent set of size up to ``extra``
        order = list(range(n + extra))
        rng.shuffle(order)
        C = sorted(M.greedy_independent(order))[:extra]
        if len(C) < extra:
            return Restriction(Contraction(base, C), list(range(n)))
        return Contraction(base, C)
    raise ValueError(f"unknown kind {kind}")


def random_weights(rng: random.Random, m: int, n: int, delta: int) -> WeightMatrix:
    return WeightMatrix.from_rows([[rng.randint(-delta, delta) for _ in range(n)] for _ in range(m)], n)


@dataclass(frozen=True)
class CatalogEntry:
    ident: str
    spec: object

    @property
    def n(self) -> int:
        return ground_size(self.spec)


def _graph(vertices, edges, name):
    return CatalogEntry(name, Graphic(vertices, edges))


def small_catalog(max_n: int = 14) -> list[CatalogEntry]:
    """Fixed matroid catalog (version ``CATALOG_VERSION``)."""
    out = []
    for n, r in [(3, 1), (4, 2), (5, 2), (6, 3), (7, 3), (8, 4), (10, 5), (12, 6), (14, 7)]:
        out.append(CatalogEntry(f"uniform-{n}-{r}", Uniform(n, r)))
    k4 = list(itertools.combinations(range(4), 2))
    out.append(_graph(3, [(0, 1), (1, 2), (0, 2)], "graphic-K3"))
    out.append(_graph(4, k4, "graphic-K4"))
    out.append(_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)], "graphic-C4"))
    out.append(_graph(6, [(i, (i + 1) % 6) for i in range(6)], "graphic-C6"))
    out.append(_graph(5, [(i, (i + 1) % 5) for i in range(5)] + [(0, 2), (0, 3)], "graphic-fan5"))
    out.append(_graph(5, list(itertools.combinations(range(5), 2)), "graphic-K5"))
    out.append(_graph(6, [(i, j) for i in range(3) for j in range(3, 6)], "graphic-K33"))
    out.append(_graph(6, [(i, (i + 1) % 3) for i in range(3)] + [(3 + i, 3 + (i + 1) % 3) for i in range(3)]
                      + [(i, i + 3) for i in range(3)], "graphic-prism"))
    out.append(CatalogEntry("partition-2x3", Partition([[0, 1, 2], [3, 4, 5]], [1, 2])))
    out.append(CatalogEntry("partition-4x2", Partition([[0, 1], [2, 3], [4, 5], [6, 7]], [1, 1, 1, 1])))
    out.append(CatalogEntry("partition-3-4-5", Partition([list(range(3)), list(range(3, 7)), list(range(7, 12))],
                                                         [2, 2, 3])))
    rng = random.Random(5 * 1000 + CATALOG_VERSION)
    for i, (rows, n) in enumerate([(2, 5), (3, 6), (3, 8), (4, 8), (4, 10), (5, 12)]):
        out.append(CatalogEntry(f"gf5-{i}-{rows}x{n}", random_linear(rng, n, prime=5, rows=rows)))
    out.append(CatalogEntry("transversal-3x6", Transversal(3, [[0], [0, 1], [1], [1, 2], [2], [0, 2]])))
    out.append(CatalogEntry("transversal-4x8", Transversal(4, [[0, 1], [1], [1, 2], [2, 3], [3], [0, 3], [0, 2], [1, 3]])))
    return [e for e in out if e.n <= max_n]
