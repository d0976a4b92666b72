"""Constructive exchange lemmas for one weight row and empirical bound checks."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .catalog import CatalogEntry, random_weights
from .errors import SpecificationError, TheoremAlarm, TheoremInapplicable
from .intersection import max_common_independent
from .linalg import IntegerEchelon, subseed
from .matroid import (Matroid, Partition, PartitionMatroid, compile_spec, enumerate_bases, restrict, to_mask)
from .polytope import lp_vertex
from .weights import WeightMatrix


@dataclass(frozen=True)
class ExchangePair:
    a_side: frozenset
    b_side: frozenset
    unicolor: bool
    weight_gap: str  # ">=": w(a) >= w(b) for all pairs; "<=" the reverse


@dataclass
class BoundReport:
    instance: str
    observed: Fraction
    proven_bound: int
    ratio: Fraction
    passed: bool
    vacuous: bool = False
    detail: dict = field(default_factory=dict)


def _report(instance, observed, bound, vacuous=False, **detail) -> BoundReport:
    observed = Fraction(observed)
    ratio = observed / bound if bound else Fraction(0)
    return BoundReport(instance, observed, bound, ratio, observed <= bound, vacuous, detail)


# ---------------------------------------------------------------------------
# Downsizing and unicolor exchanges
# ---------------------------------------------------------------------------

def downsize(I, A, B, A_prime, M: Matroid) -> frozenset:
    """``B' ⊆ B`` with ``|B'| = |A'|`` and ``(I - A') ∪ B'`` independent.

    Greedy extension of ``I - A'`` by elements of ``B`` in ascending order.
    """
    I, A, B, A_prime = map(frozenset, (I, A, B, A_prime))
    if not A <= I or B & I or len(A) != len(B) or not A_prime <= A:
        raise SpecificationError("downsize needs A ⊆ I, B disjoint from I, |A| = |B| and A' ⊆ A")
    if not M.is_independent(I) or not M.is_independent((I - A) | B):
        raise SpecificationError("downsize needs I and (I - A) ∪ B independent")
    current = list(I - A_prime)
    chosen = []
    for b in sorted(B):
        if len(chosen) == len(A_prime):
            break
        if M.is_independent(current + [b]):
            current.append(b)
            chosen.append(b)
    if len(chosen) != len(A_prime):
        raise TheoremAlarm("downsizing failed to refill the exchanged set")
    return frozenset(chosen)


def _check_pair_inputs(M, w, A, B):
    A, B = frozenset(A), frozenset(B)
    if A & B or len(A) != len(B):
        raise SpecificationError("A and B must be disjoint and of equal size")
    if not M.is_independent(A) or not M.is_independent(B):
        raise SpecificationError("A and B must be independent")
    if len(w) != M.n:
        raise SpecificationError(f"{len(w)} weights for {M.n} elements")
    return A, B


def _exchange_nonunicolor(M: Matroid, w, A: frozenset, B: frozenset):
    """Exchange with ``w(a) >= w(b)`` across sides and size >= (k - μ)/(2Δ+1)²."""
    levels = sorted({w[a] for a in A}, reverse=True)
    blocks = [sorted(a for a in A if w[a] == v) for v in levels]
    # B blocks: block t extends the lighter A blocks after it
    remaining = sorted(B)
    b_blocks = []
    for t, block in enumerate(blocks):
        lighter = [a for later in blocks[t + 1:] for a in later]
        current = list(lighter)
        picked = []
        for b in remaining:
            if len(picked) == len(block):
                break
            if M.is_independent(current + [b]):
                current.append(b)
                picked.append(b)
        if len(picked) != len(block):
            raise TheoremAlarm("exchange property failed while partitioning B")
        b_blocks.append(picked)
        remaining = [b for b in remaining if b not in picked]
    # block with most edges a-b of nonnegative weight difference
    best_t, best = None, []
    for t, (v, bb) in enumerate(zip(levels, b_blocks)):
        good = [b for b in bb if w[b] <= v]
        if best_t is None or len(good) > len(best):
            best_t, best = t, good
    if best_t is None:
        return frozenset(), frozenset()
    lighter = [a for later in blocks[best_t + 1:] for a in later]
    heavy = [a for block in blocks[: best_t + 1] for a in block]
    current = list(best) + lighter
    tilde = []
    for a in heavy:
        if len(current) == len(A):
            break
        if M.is_independent(current + [a]):
            current.append(a)
            tilde.append(a)
    A1 = frozenset(heavy) - frozenset(tilde)
    B1 = frozenset(best)
    if len(A1) != len(B1):
        raise TheoremAlarm("exchange sides differ in size")
    return A1, B1


def _largest_class(S, w):
    if not S:
        return frozenset()
    groups: dict = {}
    for e in sorted(S):
        groups.setdefault(w[e], []).append(e)
    value = max(sorted(groups), key=lambda v: len(groups[v]))
    return frozenset(groups[value])


def unicolor_exchange(M: Matroid, w: Sequence[int], A, B) -> ExchangePair:
    """Unicolor ``A' ⊆ A``, ``B' ⊆ B`` with ``(A - A') ∪ B'`` independent and ``w(a) >= w(b)``.

    The size is at least ``(k - μ) / (2Δ + 1)^4`` with ``μ = |w(A) - w(B)|``;
    a violation raises :class:`TheoremAlarm`.
    """
    A, B = _check_pair_inputs(M, w, A, B)
    w = [int(v) for v in w]
    A1, B1 = _exchange_nonunicolor(M, w, A, B)
    # keep the largest unicolor part of B1, shrinking A1 by downsizing in reverse
    B2 = _largest_class(B1, w)
    back = downsize((A - A1) | B1, B1, A1, B1 - B2, M)
    A2 = A1 - back
    A3 = _largest_class(A2, w)
    B3 = downsize(A, A2, B2, A3, M)
    k = len(A)
    delta = max((abs(w[e]) for e in A | B), default=0)
    mu = abs(sum(w[a] for a in A) - sum(w[b] for b in B))
    if Fraction(len(A3)) < Fraction(k - mu, (2 * delta + 1) ** 4):
        raise TheoremAlarm("unicolor exchange smaller than guaranteed")
    if not M.is_independent((A - A3) | B3):
        raise TheoremAlarm("unicolor exchange not independent")
    if A3 and B3 and min(w[a] for a in A3) < max(w[b] for b in B3):
        raise TheoremAlarm("unicolor exchange violates weight dominance")
    return ExchangePair(A3, B3, True, ">=")


def rescue_threshold(delta: int, mu: int) -> int:
    return (2 * delta + 1) ** 5 + mu


def one_dim_rescue(M: Matroid, w: Sequence[int], A, B) -> frozenset:
    """Independent ``A' ≠ A`` with ``|A'| = |A|`` and ``w(A') = w(A)``.

    Requires ``|A| = |B| >= (2Δ+1)^5 + μ``.  Builds the two opposite unicolor
    exchanges, forms the half-integral point ``y*`` and searches for an
    integral point on the same class counts that avoids some element of ``A``.
    """
    A, B = _check_pair_inputs(M, w, A, B)
    w = [int(v) for v in w]
    delta = max((abs(w[e]) for e in A | B), default=0)
    mu = abs(sum(w[a] for a in A) - sum(w[b] for b in B))
    k = len(A)
    if k < rescue_threshold(delta, mu):
        raise TheoremInapplicable(f"|A| = {k} below threshold {rescue_threshold(delta, mu)}")
    plus = unicolor_exchange(M, w, A, B)
    minus = unicolor_exchange(M, [-v for v in w], A, B)
    Ap, Bp, Am, Bm = plus.a_side, plus.b_side, minus.a_side, minus.b_side
    if not (Ap and Am):
        raise TheoremAlarm("unicolor exchanges are empty above the threshold")
    p = w[min(Ap)] - w[min(Bp)]
    q = w[min(Bm)] - w[min(Am)]
    if p == 0:
        return _checked(M, w, A, (A - Ap) | Bp)
    if q == 0:
        return _checked(M, w, A, (A - Am) | Bm)
    Ap2 = frozenset(sorted(Ap)[: 2 * q])
    Bp2 = downsize(A, Ap, Bp, Ap2, M)
    Am2 = frozenset(sorted(Am)[: 2 * p])
    Bm2 = downsize(A, Am, Bm, Am2, M)
    # class counts of y* = χ(A) - (χ(A+) - χ(B+) + χ(A-) - χ(B-)) / 2
    counts: dict = {}
    for e in A:
        counts[w[e]] = counts.get(w[e], 0) + 2
    for S, sign in ((Ap2, -1), (Bp2, 1), (Am2, -1), (Bm2, 1)):
        for e in S:
            counts[w[e]] = counts.get(w[e], 0) + sign
    if any(c % 2 for c in counts.values()):
        raise TheoremAlarm("class sums of y* are not integral")
    counts = {v: c // 2 for v, c in counts.items()}
    ground = sorted(A | B)
    for a in sorted(A):
        keep = [e for e in ground if e != a]
        sub = restrict(M, keep)
        values = sorted(counts)
        block_of = [values.index(w[e]) if w[e] in counts else len(values) for e in keep]
        caps = [counts[v] for v in values] + [0]
        cert = max_common_independent(sub, PartitionMatroid(len(keep), block_of, caps))
        if cert.size == k:
            return _checked(M, w, A, frozenset(keep[i] for i in cert.common_set))
    raise TheoremAlarm("no alternative independent set on the tight class counts")


def _checked(M, w, A, C):
    C = frozenset(C)
    if C == A or len(C) != len(A) or not M.is_independent(C) or sum(w[e] for e in C) != sum(w[e] for e in A):
        raise TheoremAlarm("rescue produced an invalid set")
    return C


# ---------------------------------------------------------------------------
# Brute-force bound checks
# ---------------------------------------------------------------------------

def sensitivity_bound(m: int, delta: int, gap_l1: int) -> int:
    return (2 * m * delta) ** (12 * m) * gap_l1


def proximity_bound(m: int, delta: int) -> int:
    return (2 * m * delta) ** (13 * m)


def min_symdiff_exact(M: Matroid, W: WeightMatrix, A, B, instance: str = "") -> BoundReport:
    """Smallest ``|A' ⊕ B|`` over bases ``A'`` with ``W(A') = W(A)`` against the sensitivity bound."""
    if M.n > 16:
        raise SpecificationError("brute-force sensitivity check limited to n <= 16")
    A, B = frozenset(A), frozenset(B)
    if not M.is_basis(A) or not M.is_basis(B):
        raise SpecificationError("A and B must be bases")
    wa = W.weight(A)
    observed = min(len(C ^ B) for C in enumerate_bases(M) if W.weight(C) == wa)
    gap = sum(abs(x - y) for x, y in zip(W.weight(B), wa))
    return _report(instance, observed, sensitivity_bound(W.m, W.delta, gap), gap=gap)


def sensitivity_table(M: Matroid, W: WeightMatrix, instance: str = "") -> BoundReport:
    """Sensitivity check over every ordered pair of bases, aggregated into one report.

    ``observed`` is the largest minimal symmetric difference seen; the report
    passes when every pair meets its own bound.  ``detail`` holds the pair
    count, the violations and the worst observed/bound ratio.
    """
    bases = list(enumerate_bases(M))
    masks = np.array([to_mask(B) for B in bases], dtype=np.uint64)
    weights = np.array([W.weight(B) for B in bases], dtype=np.int64).reshape(len(bases), W.m)
    classes: dict = {}
    for i, row in enumerate(weights):
        classes.setdefault(tuple(row), []).append(i)
    factor = sensitivity_bound(W.m, W.delta, 1)
    worst_dist, worst_ratio, violations, pairs = 0, Fraction(0), 0, 0
    for key, members in classes.items():
        best = np.bitwise_count(masks[members][:, None] ^ masks[None, :]).min(axis=0).astype(np.int64)
        gaps = np.abs(weights - weights[members[0]]).sum(axis=1)
        worst_dist = max(worst_dist, int(best.max()))
        # class members share W(A), so each B is checked once per class times |class|
        for b in np.nonzero(best)[0]:
            gap = int(gaps[b])
            if gap == 0 or factor * gap < best[b]:
                violations += len(members)
            else:
                worst_ratio = max(worst_ratio, Fraction(int(best[b]), factor * gap))
        pairs += len(members) * len(bases)
    rep = _report(instance, worst_dist, factor)
    rep.ratio = worst_ratio
    rep.passed = violations == 0
    rep.detail = {"pairs": pairs, "violations": violations}
    return rep


def proximity_exact(M: Matroid, W: WeightMatrix, beta: Sequence[int], seed: int = 0,
                    instance: str = "") -> BoundReport:
    """L1 distance from the LP vertex to the nearest exact basis, against the proximity bound."""
    if M.n > 16:
        raise SpecificationError("brute-force proximity check limited to n <= 16")
    beta = tuple(int(b) for b in beta)
    bound = proximity_bound(W.m, W.delta)
    exact = [B for B in enumerate_bases(M) if W.weight(B) == beta]
    if not exact:
        return _report(instance, 0, bound, vacuous=True)
    lp = lp_vertex(M, W, beta, seed=seed)
    if lp.status != "vertex":
        raise TheoremAlarm("LP infeasible although an exact basis exists")
    x = lp.point
    observed = min(sum((1 - x[e] if e in B else x[e]) for e in range(M.n)) for B in exact)
    return _report(instance, observed, bound, point=x)


def proximity_catalog(catalog: Sequence[CatalogEntry], weight_seeds: int = 3, seed: int = 0) -> list[BoundReport]:
    """Proximity reports for m = 1, Δ = 1 over every attainable target of the catalog."""
    reports = []
    for entry in catalog:
        M = compile_spec(entry.spec)
        for s in range(weight_seeds):
            rng = random.Random(subseed(seed, f"prox:{entry.ident}:{s}"))
            W = random_weights(rng, 1, M.n, 1)
            targets = sorted({W.weight(B) for B in enumerate_bases(M)})
            for beta in targets:
                reports.append(proximity_exact(M, W, beta, seed=seed, instance=f"{entry.ident}/w{s}/b{beta[0]}"))
    return reports


def sensitivity_catalog(catalog: Sequence[CatalogEntry], seed: int = 0) -> list[BoundReport]:
    """One aggregated sensitivity report per entry and (m, Δ) with m, Δ ∈ {1, 2}."""
    reports = []
    for entry in catalog:
        M = compile_spec(entry.spec)
        for m, delta in itertools.product((1, 2), (1, 2)):
            rng = random.Random(subseed(seed, f"sens:{entry.ident}:{m}:{delta}"))
            W = random_weights(rng, m, M.n, delta)
            reports.append(sensitivity_table(M, W, f"{entry.ident}/m{m}d{delta}"))
    return reports


# ---------------------------------------------------------------------------
# Matroid-intersection lower-bound instances
# ---------------------------------------------------------------------------

@dataclass
class LowerBoundInstance:
    kind: str
    n: int
    left: Partition
    right: Partition
    weights: tuple
    target: int
    expected: dict
    fractional_vertex: tuple | None = None


def _cycle_sides(edges_offset, length):
    """Left/right endpoint of each edge of an even cycle on vertices offset..offset+length-1."""
    left, right = [], []
    for i in range(length):
        u, v = i, (i + 1) % length
        l, r = (u, v) if u % 2 == 0 else (v, u)
        left.append(edges_offset + l // 2)
        right.append(edges_offset + r // 2)
    return left, right


def _partition(owner, count):
    blocks = [[e for e, o in enumerate(owner) if o == v] for v in range(count)]
    return Partition(blocks, [1] * count)


def lower_bound_instance(kind: str, n: int) -> LowerBoundInstance:
    """Bipartite matching instances where intersection sensitivity or proximity is large."""
    if kind == "sensitivity":
        if n < 2 or n % 2:
            raise SpecificationError("sensitivity instance needs an even n >= 2")
        left, right = _cycle_sides(0, n)
        weights = tuple(int(i == 0) for i in range(n))
        even = frozenset(range(0, n, 2))
        odd = frozenset(range(1, n, 2))
        return LowerBoundInstance(kind, n, _partition(left, n // 2), _partition(right, n // 2), weights, 1,
                                  {"common_bases": 2, "bases": [sorted(even), sorted(odd)],
                                   "weights": [1, 0], "symmetric_difference": n})
    if kind == "proximity":
        if n < 4 or n % 4:
            raise SpecificationError("proximity instance needs n divisible by 4")
        h = n // 2
        l1, r1 = _cycle_sides(0, h)
        l2, r2 = _cycle_sides(h // 2, h)
        left, right = l1 + l2, r1 + r2
        # cycle 1: one weight-1 edge; cycle 2: two weight-1 edges in one perfect matching
        weights = tuple([int(i == 0) for i in range(h)] + [int(i in (0, 2)) for i in range(h)])
        exact = sorted(list(range(0, h, 2)) + [h + i for i in range(1, h, 2)])
        x = tuple([Fraction(int(i % 2 == 1)) for i in range(h)] + [Fraction(1, 2)] * h)
        return LowerBoundInstance(kind, n, _partition(left, h), _partition(right, h), weights, 1,
                                  {"unique_exact_basis": exact, "distance": Fraction(3 * n, 4)}, x)
    raise SpecificationError(f"unknown lower-bound kind {kind!r}")


def common_bases(inst: LowerBoundInstance) -> list[frozenset]:
    """All common bases of the two partition matroids (exhaustive)."""
    M1, M2 = compile_spec(inst.left), compile_spec(inst.right)
    r = min(M1.rank(), M2.rank())
    return [B for B in enumerate_bases(M1) if len(B) == r and M2.is_independent(B)]


def vertex_rank(inst: LowerBoundInstance) -> int:
    """Rank of the constraints tight at the designated fractional point."""
    x = inst.fractional_vertex
    ech = IntegerEchelon(inst.n)
    for part in (inst.left, inst.right):
        for block in part.blocks:
            ech.add([int(e in block) for e in range(inst.n)])
    ech.add(list(inst.weights))
    for e in range(inst.n):
        if x[e] == 0:
            ech.add([int(j == e) for j in range(inst.n)])
    return ech.rank


def verify_lower_bound(inst: LowerBoundInstance) -> BoundReport:
    """Recompute the asserted quantities exhaustively; observed is the headline number."""
    bases = common_bases(inst)
    w = inst.weights
    if inst.kind == "sensitivity":
        ok = (len(bases) == 2 and not (bases[0] & bases[1])
              and all(len(B) == inst.n // 2 for B in bases)
              and sorted(sum(w[e] for e in B) for B in bases) == [0, 1])
        observed = len(bases[0] ^ bases[1]) if len(bases) == 2 else 0
        rep = _report(f"sensitivity-{inst.n}", observed, inst.n)
        rep.passed = ok and observed == inst.n
        rep.detail = {"common_bases": [sorted(B) for B in bases]}
        return rep
    exact = [B for B in bases if sum(w[e] for e in B) == inst.target]
    x = inst.fractional_vertex
    feasible = (all(sum(x[e] for e in block) == 1 for part in (inst.left, inst.right) for block in part.blocks)
                and sum(w[e] * x[e] for e in range(inst.n)) == inst.target)
    dist = sum(abs(x[e] - int(e in exact[0])) for e in range(inst.n)) if len(exact) == 1 else Fraction(-1)
    rep = _report(f"proximity-{inst.n}", dist, 0)
    rep.proven_bound = None
    rep.ratio = Fraction(0)
    rep.passed = (len(exact) == 1 and feasible and vertex_rank(inst) == inst.n
                  and dist == Fraction(3 * inst.n, 4))
    rep.detail = {"exact_bases": [sorted(B) for B in exact], "vertex_rank": vertex_rank(inst)}
    return rep
