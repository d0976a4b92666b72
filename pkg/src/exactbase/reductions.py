"""Constraint reductions onto the exact-equality core, λ-aggregation and applications."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebraic import DEFAULT_PRIME, exact_basis_1d, representation
from .errors import CapabilityError, SpecificationError, TheoremAlarm
from .matroid import (DirectSum, Graphic, Linear, Matroid, Transversal, TransversalMatroid, Uniform,
                      compile_spec, enumerate_bases, ground_size)
from .polytope import lp_vertex
from .solver import SolveReport, brute_force_solve, solve, verify_basis
from .weights import WeightMatrix

KINDS = ("equality", "less_equal", "greater_equal", "congruence")


@dataclass(frozen=True)
class ConstraintSpec:
    kind: str
    weights: tuple
    target: int
    modulus: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(v) for v in self.weights))
        object.__setattr__(self, "target", int(self.target))
        if self.kind not in KINDS:
            raise SpecificationError(f"unknown constraint kind {self.kind!r}")
        if self.kind == "congruence":
            p = self.modulus
            if p is None or p < 1:
                raise SpecificationError("congruence needs a modulus >= 1")
            if any(not 0 <= v < p for v in self.weights):
                raise SpecificationError(f"congruence weights must lie in [0, {p - 1}]")
            if not 0 <= self.target < p:
                raise SpecificationError(f"congruence target must lie in [0, {p - 1}]")
        elif self.modulus is not None:
            raise SpecificationError(f"{self.kind} constraints take no modulus")

    def holds(self, S) -> bool:
        v = sum(self.weights[e] for e in S)
        if self.kind == "equality":
            return v == self.target
        if self.kind == "less_equal":
            return v <= self.target
        if self.kind == "greater_equal":
            return v >= self.target
        return v % self.modulus == self.target


@dataclass(frozen=True)
class Padding:
    """Uniform summand appended by a reduction: elements ``start..stop-1``, rank ``rank``."""
    start: int
    stop: int
    rank: int


@dataclass
class ReducedInstance:
    matroid_spec: object
    weight_matrix: WeightMatrix
    target: tuple
    element_map: dict  # original element -> reduced index
    original_n: int
    paddings: tuple = ()

    def restrict(self, basis) -> frozenset:
        back = {v: k for k, v in self.element_map.items()}
        return frozenset(back[e] for e in basis if e in back)


def _extend_row(row, extra):
    return tuple(row) + (0,) * extra


def _append_summand(spec, pad):
    if isinstance(spec, DirectSum):
        return DirectSum(spec.parts + (pad,))
    return DirectSum([spec, pad])


def _row_extremes(M: Matroid, row) -> tuple[int, int]:
    """Minimum and maximum basis weight under one row (greedy)."""
    order = sorted(range(M.n), key=lambda e: (-row[e], e))
    hi = sum(row[e] for e in M.greedy_basis(order))
    order = sorted(range(M.n), key=lambda e: (row[e], e))
    lo = sum(row[e] for e in M.greedy_basis(order))
    return lo, hi


def reduce_constraints(spec, constraints: Sequence[ConstraintSpec]) -> ReducedInstance:
    """Turn every constraint into an equality row, padding the matroid as needed.

    ``≤`` rows get a uniform summand of ``P`` weight-0 and ``P`` weight-1
    elements with rank ``R``; the new elements absorb the slack.  ``≥`` rows
    are negated first.  Congruence rows get ``n`` elements of weight ``-p``
    and ``n`` of weight ``0`` with rank ``n``.  Untouched rows see zeros.
    """
    n0 = ground_size(spec)
    for i, c in enumerate(constraints):
        if len(c.weights) != n0:
            raise SpecificationError(f"constraint {i} has {len(c.weights)} weights, ground set has {n0}")
    M = compile_spec(spec)
    r = M.rank()
    rows: list[tuple] = []
    targets: list[int] = []
    cur_spec = spec
    paddings: list[Padding] = []
    n_cur = n0
    for c in constraints:
        row = list(c.weights) + [0] * (n_cur - n0)
        if c.kind == "equality":
            rows.append(tuple(row))
            targets.append(c.target)
            continue
        if c.kind == "congruence":
            size, rank = 2 * n0, n0
            new = [-c.modulus] * n0 + [0] * n0
            target = c.target
        else:
            w = list(c.weights)
            target = c.target
            if c.kind == "greater_equal":
                w = [-v for v in w]
                target = -target
                row = [-v for v in row]
            lo, hi = _row_extremes(M, w)
            delta = max((abs(v) for v in w), default=0) or 1
            span = hi - lo
            rank = max(n0, span)
            half = max(n0 * delta, rank)
            size = 2 * half
            new = [0] * half + [1] * half
            target = min(target, hi)
            # with the padding contributing k in [0, rank], w(B) + k = target iff w(B) <= target
        pad = Uniform(size, rank)
        cur_spec = _append_summand(cur_spec, pad)
        paddings.append(Padding(n_cur, n_cur + size, rank))
        rows = [_extend_row(rw, size) for rw in rows]
        rows.append(tuple(row) + tuple(new))
        targets.append(target)
        n_cur += size
    W = WeightMatrix(tuple(rows), n_cur)
    return ReducedInstance(cur_spec, W, tuple(targets), {e: e for e in range(n0)}, n0, tuple(paddings))


def reduce_inequality(spec, c: ConstraintSpec, others: Sequence[ConstraintSpec] = ()) -> ReducedInstance:
    if c.kind not in ("less_equal", "greater_equal"):
        raise SpecificationError(f"expected an inequality constraint, got {c.kind}")
    return reduce_constraints(spec, [c, *others])


def reduce_congruence(spec, c: ConstraintSpec, others: Sequence[ConstraintSpec] = ()) -> ReducedInstance:
    if c.kind != "congruence":
        raise SpecificationError(f"expected a congruence constraint, got {c.kind}")
    return reduce_constraints(spec, [c, *others])


def reduce_group(spec, moduli: Sequence[int], labels: Sequence[Sequence[int]], g: Sequence[int]) -> list[ConstraintSpec]:
    """One congruence constraint per cyclic factor of ``Z_m1 x ... x Z_ml``."""
    n = ground_size(spec)
    if len(labels) != n:
        raise SpecificationError(f"{len(labels)} labels for {n} elements")
    if len(g) != len(moduli):
        raise SpecificationError("target must have one residue per cyclic factor")
    out = []
    for i, p in enumerate(moduli):
        if p < 1:
            raise SpecificationError(f"modulus {p} must be positive")
        col = []
        for e, lab in enumerate(labels):
            if len(lab) != len(moduli) or not 0 <= lab[i] < p:
                raise SpecificationError(f"label of element {e} out of range for factor {i}")
            col.append(lab[i])
        if not 0 <= g[i] < p:
            raise SpecificationError(f"target residue {g[i]} out of range for Z_{p}")
        out.append(ConstraintSpec("congruence", col, g[i], p))
    return out


# ---------------------------------------------------------------------------
# Brute force that exploits the symmetry of padding summands
# ---------------------------------------------------------------------------

def brute_force_original(spec, constraints: Sequence[ConstraintSpec]) -> frozenset | None:
    M = compile_spec(spec)
    for B in enumerate_bases(M):
        if all(c.holds(B) for c in constraints):
            return B
    return None


def brute_force_reduced(inst: ReducedInstance) -> frozenset | None:
    """Exhaustive feasibility of a reduced instance.

    Bases of the padded direct sum are ``B ∪ P_1 ∪ ...`` with each ``P_j`` any
    ``rank_j``-subset of its uniform summand; within a summand only the number
    of chosen elements per weight column matters, so those counts are
    enumerated instead of the subsets.
    """
    W = inst.weight_matrix
    base_n = inst.original_n
    base_spec = inst.matroid_spec
    if inst.paddings:
        base_spec = DirectSum(inst.matroid_spec.parts[: len(inst.matroid_spec.parts) - len(inst.paddings)])
        if len(base_spec.parts) == 1:
            base_spec = base_spec.parts[0]
    pad_classes = []
    for pad in inst.paddings:
        groups: dict[tuple, list[int]] = {}
        for e in range(pad.start, pad.stop):
            groups.setdefault(W.column(e), []).append(e)
        pad_classes.append((pad.rank, list(groups.items())))
    target = tuple(inst.target)
    for B in enumerate_bases(compile_spec(base_spec)):
        base_w = W.weight(B)
        hit = _fill_paddings(pad_classes, 0, list(base_w), target, [])
        if hit is not None:
            return frozenset(B) | frozenset(hit)
    return None


def _fill_paddings(pads, j, acc, target, chosen):
    if j == len(pads):
        return list(chosen) if tuple(acc) == target else None
    rank, groups = pads[j]

    def rec(g, left, acc):
        if g == len(groups):
            if left:
                return None
            return _fill_paddings(pads, j + 1, acc, target, chosen)
        col, elems = groups[g]
        for k in range(min(left, len(elems)) + 1):
            chosen.extend(elems[:k])
            res = rec(g + 1, left - k, [a + k * c for a, c in zip(acc, col)])
            if res is not None:
                return res
            del chosen[len(chosen) - k:]
        return None

    return rec(0, rank, acc)


# ---------------------------------------------------------------------------
# Solving constrained instances
# ---------------------------------------------------------------------------

@dataclass
class ConstrainedResult:
    report: SolveReport
    basis: frozenset | None  # in original numbering
    reduced: ReducedInstance


def solve_constraints(spec, constraints: Sequence[ConstraintSpec], seed: int = 0, jobs: int = 1,
                      brute_force: bool = False, radius_override: int | None = None) -> ConstrainedResult:
    """Reduce, solve on the reduced instance and map the witness back (verified)."""
    inst = reduce_constraints(spec, constraints)
    M = compile_spec(inst.matroid_spec)
    if brute_force:
        hit = brute_force_reduced(inst)
        report = SolveReport("found" if hit is not None else "infeasible", hit, solver="brute_force")
        if hit is not None:
            verify_basis(M, inst.weight_matrix, inst.target, hit)
    else:
        report = solve(M, inst.weight_matrix, inst.target, radius_override=radius_override, seed=seed, jobs=jobs)
    basis = None
    if report.status == "found":
        basis = inst.restrict(report.basis)
        original = compile_spec(spec)
        if not original.is_basis(basis) or not all(c.holds(basis) for c in constraints):
            raise TheoremAlarm("reduced witness does not map to a valid original solution")
    return ConstrainedResult(report, basis, inst)


# ---------------------------------------------------------------------------
# Aggregation of m equalities into one (linear matroids)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Aggregation:
    w1: tuple
    w2: tuple
    lam: tuple
    alpha: int
    w: tuple


def round_half_up(x) -> int:
    return math.floor(Fraction(x) + Fraction(1, 2))


def aggregate_to_1d(W: WeightMatrix, beta: Sequence[int], x_round: Sequence[int], Gamma: int) -> Aggregation:
    """Single weight ``w = w1 + (2n+1) w2`` and target ``α`` for distance ``Γ`` from ``x_round``."""
    if Gamma < 0:
        raise SpecificationError("Gamma must be nonnegative")
    n = W.n
    base = 2 * Gamma * W.delta + 1
    lam = tuple(base ** i for i in range(W.m))
    w1 = tuple(1 - 2 * int(x_round[e]) for e in range(n))
    w2 = tuple(sum(l * W.rows[i][e] for i, l in enumerate(lam)) for e in range(n))
    w = tuple(a + (2 * n + 1) * b for a, b in zip(w1, w2))
    alpha = (Gamma - sum(int(v) for v in x_round)) + (2 * n + 1) * sum(l * int(b) for l, b in zip(lam, beta))
    return Aggregation(w1, w2, lam, alpha, w)


def in_gamma_window(W: WeightMatrix, beta, x_round, Gamma) -> bool:
    """``‖β - W x_round‖∞ <= ΓΔ``; every exact basis at distance Γ satisfies it."""
    wx = W.weight([e for e in range(W.n) if x_round[e]])
    return all(abs(int(b) - v) <= Gamma * W.delta for b, v in zip(beta, wx))


def solve_linear(spec, W: WeightMatrix, beta: Sequence[int], seed: int = 0, retries: int = 3,
                 prime: int = DEFAULT_PRIME) -> SolveReport:
    """Exact basis via the LP vertex, a guess of Γ, aggregation and the algebraic solver."""
    if not isinstance(spec, (Linear, Graphic)):
        raise CapabilityError(f"solve_linear needs a linear (or graphic) spec, got {type(spec).__name__}")
    rep = representation(spec)
    M = compile_spec(spec)
    if W.n != M.n or len(beta) != W.m:
        raise SpecificationError("weight matrix or target does not match the instance")
    beta = tuple(int(b) for b in beta)
    lp = lp_vertex(M, W, beta, seed=seed)
    if lp.status == "infeasible":
        return SolveReport("infeasible", lp_pivots=lp.pivots, solver="linear_algebraic")
    xr = [round_half_up(v) for v in lp.point]
    tried = 0
    for Gamma in range(0, 2 * M.n + 1):
        if not in_gamma_window(W, beta, xr, Gamma):
            continue
        agg = aggregate_to_1d(W, beta, xr, Gamma)
        tried += 1
        B = exact_basis_1d(rep, agg.w, agg.alpha, seed=seed * 7919 + Gamma, retries=retries, prime=prime)
        if B is not None:
            verify_basis(M, W, beta, B)
            return SolveReport("found", B, M.calls, lp.pivots, candidates_tested=tried,
                               window_radius_used=Gamma, solver="linear_algebraic")
    return SolveReport("infeasible", None, M.calls, lp.pivots, candidates_tested=tried,
                       window_radius_used=2 * M.n, solver="linear_algebraic")


# ---------------------------------------------------------------------------
# Applications
# ---------------------------------------------------------------------------

@dataclass
class AppResult:
    status: str
    solution: object = None
    report: SolveReport | None = None
    info: dict = field(default_factory=dict)


def app_feedback_edge_set(vertices: int, edges: Sequence, W: Sequence[Sequence[int]], b: Sequence[int],
                          seed: int = 0, brute_force: bool = False) -> AppResult:
    """Smallest edge set ``X`` whose removal leaves a forest, with ``W(X) <= b``."""
    spec = Graphic(vertices, edges)
    n = len(edges)
    if any(len(row) != n for row in W) or len(b) != len(W):
        raise SpecificationError("budget rows must cover every edge, one bound per row")
    if any(v < 0 for row in W for v in row):
        raise SpecificationError("budget weights must be nonnegative")
    cons = [ConstraintSpec("greater_equal", row, sum(row) - int(bi)) for row, bi in zip(W, b)]
    res = solve_constraints(spec, cons, seed=seed, brute_force=brute_force)
    if res.basis is None:
        return AppResult("infeasible", report=res.report)
    X = frozenset(range(n)) - res.basis
    return AppResult("found", X, res.report, {"forest": sorted(res.basis)})


def app_closest_base(spec, bases: Sequence[Sequence[int]], seed: int = 0, brute_force: bool = False) -> AppResult:
    """Basis minimizing the largest symmetric difference to the given bases."""
    M = compile_spec(spec)
    n = M.n
    bases = [frozenset(B) for B in bases]
    if not bases:
        raise SpecificationError("at least one basis is required")
    for B in bases:
        if not M.is_basis(B):
            raise SpecificationError(f"{sorted(B)} is not a basis")
    rows = [[int(e not in B) for e in range(n)] for B in bases]
    for H in range(M.rank() + 1):
        cons = [ConstraintSpec("less_equal", row, H) for row in rows]
        res = solve_constraints(spec, cons, seed=seed, brute_force=brute_force)
        if res.basis is not None:
            return AppResult("found", res.basis, res.report, {"H": H, "max_symmetric_difference": 2 * H})
    raise TheoremAlarm("no basis within distance rank of a basis")


def app_fair_matching(left: int, adjacency: Sequence[Sequence[int]], groups: Sequence[Sequence[int]],
                      quotas: Sequence[int], seed: int = 0, brute_force: bool = False) -> AppResult:
    """Maximum matching covering at least ``q_i`` right vertices of each group ``i``.

    ``adjacency[b]`` lists the left neighbours of right vertex ``b`` and
    ``groups[b]`` the groups it belongs to.
    """
    spec = Transversal(left, adjacency)
    n = len(adjacency)
    m = len(quotas)
    if len(groups) != n:
        raise SpecificationError("one group list per right vertex required")
    if any(q < 0 for q in quotas):
        raise SpecificationError("quotas must be nonnegative")
    for b, gs in enumerate(groups):
        if any(not 0 <= g < m for g in gs):
            raise SpecificationError(f"right vertex {b} names an unknown group")
    rows = [[int(i in groups[b]) for b in range(n)] for i in range(m)]
    cons = [ConstraintSpec("greater_equal", row, q) for row, q in zip(rows, quotas)]
    res = solve_constraints(spec, cons, seed=seed, brute_force=brute_force)
    if res.basis is None:
        return AppResult("infeasible", report=res.report)
    matching = TransversalMatroid(left, spec.adjacency).matching(res.basis)
    if set(matching) != set(res.basis):
        raise TheoremAlarm("selected right vertices are not matchable")
    return AppResult("found", matching, res.report, {"right_vertices": sorted(res.basis)})


def app_group_base(spec, moduli: Sequence[int], labels: Sequence[Sequence[int]], g: Sequence[int],
                   seed: int = 0, brute_force: bool = False) -> AppResult:
    """Basis whose labels sum to ``g`` in ``Z_m1 x ... x Z_ml``."""
    cons = reduce_group(spec, moduli, labels, g)
    res = solve_constraints(spec, cons, seed=seed, brute_force=brute_force)
    if res.basis is None:
        return AppResult("infeasible", report=res.report)
    return AppResult("found", res.basis, res.report)
