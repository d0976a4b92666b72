"""Proximity-guided exact-weight basis solver and its brute-force reference."""
from __future__ import annotations

import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import CapabilityError, SpecificationError, TheoremAlarm
from .intersection import common_basis_with_counts
from .matroid import Matroid, enumerate_bases
from .polytope import lp_vertex
from .weights import WeightMatrix

BRUTE_FORCE_LIMIT = 20


@dataclass
class SolveReport:
    status: str  # found | infeasible | window_exhausted
    basis: frozenset | None = None
    oracle_calls: int = 0
    lp_pivots: int = 0
    candidates_enumerated: int = 0
    candidates_tested: int = 0
    window_radius_used: int | None = None
    solver: str = "fpt"
    extra: dict = field(default_factory=dict)

    def stats(self) -> dict:
        return {
            "oracle_calls": self.oracle_calls,
            "lp_pivots": self.lp_pivots,
            "candidates_enumerated": self.candidates_enumerated,
            "candidates_tested": self.candidates_tested,
        }


def proven_radius(m: int, delta: int) -> int:
    """The proximity ceiling ``(2mΔ)^(13m)``."""
    return (2 * m * delta) ** (13 * m)


def verify_basis(M: Matroid, W: WeightMatrix, beta: Sequence[int], B) -> None:
    if B is None or not M.is_basis(B) or W.weight(B) != tuple(int(b) for b in beta):
        raise TheoremAlarm(f"returned set {sorted(B) if B is not None else None} is not an exact basis")


def _check_inputs(M: Matroid, W: WeightMatrix, beta) -> tuple:
    if W.n != M.n:
        raise SpecificationError(f"weight matrix covers {W.n} elements, matroid has {M.n}")
    if len(beta) != W.m:
        raise SpecificationError(f"target has {len(beta)} entries, weight matrix has {W.m} rows")
    return tuple(int(b) for b in beta)


def candidate_counts(x: Sequence, W: WeightMatrix, rank: int, beta: Sequence[int],
                     radius: int) -> Iterator[dict]:
    """Count vectors inside the proximity window, closest to ``x`` first.

    Only classes present in ``W`` appear as keys.  Vectors satisfy
    ``Σ ℓ = rank`` and ``Σ α ℓ_α = β``; order is by L1 distance to the class
    sums of ``x`` and then lexicographically by class.
    """
    x = [Fraction(v) for v in x]
    keys = list(W.classes)
    sums = [sum((x[e] for e in W.classes[a]), Fraction(0)) for a in keys]
    ranges = []
    for a, s in zip(keys, sums):
        lo = max(0, math.ceil(s - radius))
        hi = min(len(W.classes[a]), math.floor(s + radius))
        if lo > hi:
            return
        ranges.append((lo, hi))
    m = W.m
    k = len(keys)
    # suffix bounds on the count total and on each weighted coordinate
    cnt_lo = [0] * (k + 1)
    cnt_hi = [0] * (k + 1)
    w_lo = [[0] * m for _ in range(k + 1)]
    w_hi = [[0] * m for _ in range(k + 1)]
    for j in range(k - 1, -1, -1):
        lo, hi = ranges[j]
        cnt_lo[j] = cnt_lo[j + 1] + lo
        cnt_hi[j] = cnt_hi[j + 1] + hi
        for i in range(m):
            a = keys[j][i]
            w_lo[j][i] = w_lo[j + 1][i] + min(a * lo, a * hi)
            w_hi[j][i] = w_hi[j + 1][i] + max(a * lo, a * hi)
    beta = [int(b) for b in beta]
    found = []
    chosen = [0] * k

    def dfs(j, total, weight):
        if j == k:
            if total == rank and weight == beta:
                found.append(tuple(chosen))
            return
        lo, hi = ranges[j]
        a = keys[j]
        for v in range(lo, hi + 1):
            t = total + v
            if t + cnt_lo[j + 1] > rank:
                break
            if t + cnt_hi[j + 1] < rank:
                continue
            w = [weight[i] + a[i] * v for i in range(m)]
            if any(w[i] + w_lo[j + 1][i] > beta[i] or w[i] + w_hi[j + 1][i] < beta[i] for i in range(m)):
                continue
            chosen[j] = v
            dfs(j + 1, t, w)

    dfs(0, 0, [0] * m)
    found.sort(key=lambda c: (sum(abs(v - s) for v, s in zip(c, sums)), c))
    for c in found:
        yield dict(zip(keys, c))


# Worker state is inherited through fork; matroids may wrap closures that do not pickle.
_WORK: tuple | None = None


def _test_candidate(counts: dict) -> tuple:
    M, W, order = _WORK
    before = M.calls
    B = common_basis_with_counts(M, counts, W, order=order)
    return B, M.calls - before


def _test_batch(batch: list) -> list:
    return [_test_candidate(c) for c in batch]


def _search(M, W, candidates, order, jobs):
    """First candidate (lowest index) admitting a basis; stats summed up to it."""
    global _WORK
    _WORK = (M, W, order)
    calls = 0
    if jobs <= 1 or len(candidates) <= 1:
        for idx, c in enumerate(candidates):
            B, used = _test_candidate(c)
            calls += used
            if B is not None:
                return B, idx + 1, calls
        return None, len(candidates), calls
    ctx = multiprocessing.get_context("fork")
    chunk = max(1, jobs)
    with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
        start = 0
        while start < len(candidates):
            window = candidates[start: start + chunk * jobs]
            parts = [window[i: i + chunk] for i in range(0, len(window), chunk)]
            results = [r for part in pool.map(_test_batch, parts) for r in part]
            for offset, (B, used) in enumerate(results):
                calls += used
                if B is not None:
                    return B, start + offset + 1, calls
            start += len(window)
    return None, len(candidates), calls


def solve(M: Matroid, W: WeightMatrix, beta: Sequence[int], radius_override: int | None = None,
          seed: int = 0, jobs: int = 1, lp_method: str = "columns") -> SolveReport:
    """Basis ``B`` of ``M`` with ``W χ(B) = β`` via LP vertex, window and intersection."""
    beta = _check_inputs(M, W, beta)
    r = M.rank()  # cached first so call counts do not depend on earlier use of M
    start_calls = M.calls
    lp = lp_vertex(M, W, beta, seed=seed, method=lp_method)
    if lp.status == "infeasible":
        return SolveReport("infeasible", oracle_calls=M.calls - start_calls, lp_pivots=lp.pivots)
    n = M.n
    bound = proven_radius(W.m, W.delta)
    radius = min(bound if radius_override is None else int(radius_override), n)
    if radius < 0:
        raise SpecificationError("radius must be nonnegative")
    candidates = list(candidate_counts(lp.point, W, r, beta, radius))
    # greedy start for the intersection: elements the vertex uses most come first
    order = sorted(range(n), key=lambda e: (-lp.point[e], e))
    B, tested, calls = _search(M, W, candidates, order, jobs)
    report = SolveReport(
        "found" if B is not None else "infeasible",
        basis=B,
        oracle_calls=M.calls - start_calls + calls * (jobs > 1 and len(candidates) > 1),
        lp_pivots=lp.pivots,
        candidates_enumerated=len(candidates),
        candidates_tested=tested,
        window_radius_used=radius,
    )
    if B is not None:
        verify_basis(M, W, beta, B)
    elif radius < min(bound, n):
        report.status = "window_exhausted"
    return report


def brute_force_solve(M: Matroid, W: WeightMatrix, beta: Sequence[int]) -> SolveReport:
    """First basis in enumeration order with the target weight."""
    beta = _check_inputs(M, W, beta)
    if M.n > BRUTE_FORCE_LIMIT:
        raise CapabilityError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}")
    start_calls = M.calls
    tried = 0
    for B in enumerate_bases(M):
        tried += 1
        if W.weight(B) == beta:
            verify_basis(M, W, beta, B)
            return SolveReport("found", B, M.calls - start_calls, candidates_enumerated=tried,
                               candidates_tested=tried, solver="brute_force")
    return SolveReport("infeasible", None, M.calls - start_calls, candidates_enumerated=tried,
                       candidates_tested=tried, solver="brute_force")
