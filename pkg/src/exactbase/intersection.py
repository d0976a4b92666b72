"""Maximum-cardinality matroid intersection by shortest augmenting paths."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import SpecificationError, TheoremAlarm
from .matroid import Matroid, PartitionMatroid
from .weights import WeightMatrix, as_class_key

CERTIFY_LIMIT = 20


@dataclass
class IntersectionCertificate:
    common_set: frozenset
    partition_witness: frozenset | None = None
    augmentations: int = 0

    @property
    def size(self) -> int:
        return len(self.common_set)


def _shortest_augmenting_path(M1: Matroid, M2: Matroid, I: frozenset):
    n = M1.n
    outside = [y for y in range(n) if y not in I]
    inside = sorted(I)
    sources = [y for y in outside if M1.is_independent(I | {y})]
    parent: dict[int, int | None] = {y: None for y in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        if u not in I:
            if M2.is_independent(I | {u}):
                path = []
                while u is not None:
                    path.append(u)
                    u = parent[u]
                return path
            # arcs u -> x when I - x + u stays independent in M2
            for x in inside:
                if x not in parent and M2.is_independent((I - {x}) | {u}):
                    parent[x] = u
                    queue.append(x)
        else:
            # arcs u -> y when I - u + y stays independent in M1
            for y in outside:
                if y not in parent and M1.is_independent((I - {u}) | {y}):
                    parent[y] = u
                    queue.append(y)
    return None


def _reaching_sinks(M1: Matroid, M2: Matroid, I: frozenset) -> frozenset:
    """Elements from which some sink is reachable in the exchange graph."""
    n = M1.n
    outside = [y for y in range(n) if y not in I]
    inside = sorted(I)
    reach = {y for y in outside if M2.is_independent(I | {y})}
    queue = deque(sorted(reach))
    while queue:
        w = queue.popleft()
        if w in I:
            preds = [y for y in outside if y not in reach and M2.is_independent((I - {w}) | {y})]
        else:
            preds = [x for x in inside if x not in reach and M1.is_independent((I - {x}) | {w})]
        for v in preds:
            reach.add(v)
            queue.append(v)
    return frozenset(reach)


def max_common_independent(M1: Matroid, M2: Matroid, certify: bool = False,
                           order=None) -> IntersectionCertificate:
    """Largest set independent in both matroids.

    Starts from the greedy common independent set (ascending ids unless
    ``order`` is given) and augments
    along shortest exchange-graph paths; BFS visits ids in ascending order, so
    the result is deterministic.  With ``certify`` and ``n <= 20`` the
    certificate carries ``U`` with ``|I| = r1(U) + r2(E - U)``.
    """
    if M1.n != M2.n:
        raise SpecificationError(f"ground sizes differ: {M1.n} vs {M2.n}")
    current: list[int] = []
    for e in (range(M1.n) if order is None else order):
        cand = current + [e]
        if M1.is_independent(cand) and M2.is_independent(cand):
            current.append(e)
    I = frozenset(current)
    rounds = 0
    while True:
        path = _shortest_augmenting_path(M1, M2, I)
        if path is None:
            break
        new = I.symmetric_difference(path)
        if len(new) != len(I) + 1:
            raise TheoremAlarm("augmentation did not grow the common set by one")
        I = new
        rounds += 1
    witness = None
    if certify and M1.n <= CERTIFY_LIMIT:
        U = _reaching_sinks(M1, M2, I)
        rest = frozenset(range(M1.n)) - U
        if M1.rank(U) + M2.rank(rest) != len(I):
            raise TheoremAlarm("min-max witness equation failed")
        witness = U
    return IntersectionCertificate(I, witness, rounds)


def class_partition_matroid(W: WeightMatrix, counts: Mapping) -> PartitionMatroid:
    keys = list(W.classes)
    index = {a: i for i, a in enumerate(keys)}
    block_of = [index[W.column(e)] for e in range(W.n)]
    capacities = [int(counts.get(a, 0)) for a in keys]
    return PartitionMatroid(W.n, block_of, capacities)


def normalize_counts(counts: Mapping, W: WeightMatrix) -> dict:
    return {as_class_key(a, W.m): int(c) for a, c in counts.items()}


def common_basis_with_counts(M: Matroid, counts: Mapping, W: WeightMatrix, order=None) -> frozenset | None:
    """Basis of ``M`` using exactly ``counts[alpha]`` elements of each weight class, or None."""
    counts = normalize_counts(counts, W)
    if W.n != M.n:
        raise SpecificationError(f"weight matrix covers {W.n} elements, matroid has {M.n}")
    for a, c in counts.items():
        size = len(W.classes.get(a, ()))
        if c < 0 or c > size:
            raise SpecificationError(f"count {c} for class {a} outside [0, {size}]")
    r = M.rank()
    if sum(counts.values()) != r:
        raise SpecificationError(f"counts sum to {sum(counts.values())}, rank is {r}")
    cert = max_common_independent(M, class_partition_matroid(W, counts), order=order)
    return cert.common_set if cert.size == r else None
