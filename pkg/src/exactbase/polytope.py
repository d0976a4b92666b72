"""Exact LP over the base polytope cut by weight equalities.

Two routes compute a vertex of ``P_B(M) ∩ {Wx = β}``:

* ``columns`` (default): the master problem is written over bases,
  ``x = Σ λ_B χ(B)``, and new bases are priced by the greedy algorithm.  Only
  ``m + 1`` rows, so it scales to large ground sets.  The master's basic
  solution need not be a vertex in ``x``-space; vertexhood is checked through
  the face structure of the support and, if it fails, the solve is repeated
  with a lexicographic objective whose optimum is unique.
* ``cuts``: a dense tableau simplex over ``{0 <= x, x_e <= r(e), Σx = r,
  Wx = β}`` plus rank cuts found by exhaustive separation (small ``n``).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import CapabilityError, SpecificationError, TheoremAlarm
from .linalg import IntegerEchelon, integer_row, subseed
from .matroid import Matroid, enumerate_bases, from_mask, rank_table, to_mask
from .weights import WeightMatrix

SEPARATION_LIMIT = 24
TABLE_LIMIT = 20


@dataclass(frozen=True)
class RankCut:
    subset: frozenset
    rhs: int

    def violation(self, x: Sequence) -> Fraction:
        return sum((Fraction(x[e]) for e in self.subset), Fraction(0)) - self.rhs


@dataclass
class LpOutcome:
    status: str  # "vertex" or "infeasible"
    point: tuple | None = None
    tight_cuts: list = field(default_factory=list)
    objective_used: tuple = ()
    face_dim: int | None = None
    pivots: int = 0
    support: tuple = ()
    method: str = "columns"
    perturbed: bool = False


# ---------------------------------------------------------------------------
# Separation
# ---------------------------------------------------------------------------

def separate(M: Matroid, x: Sequence, minimizer: Callable | None = None) -> RankCut | None:
    """Most violated rank inequality ``x(S) <= r(S)``, or None.

    Branch and bound over elements sorted by decreasing ``x_e``: an element
    spanned by the current independent part is always taken (it adds
    ``x_e >= 0`` at no rank cost), and a branch is cut when even taking every
    remaining element cannot beat the incumbent.
    """
    n = M.n
    x = [Fraction(v) for v in x]
    if len(x) != n:
        raise SpecificationError(f"point has {len(x)} coordinates, ground set has {n}")
    if any(v < 0 or v > 1 for v in x):
        raise SpecificationError("point coordinates must lie in [0, 1]")
    if n > SEPARATION_LIMIT:
        if minimizer is None:
            raise CapabilityError(f"exhaustive separation limited to n <= {SEPARATION_LIMIT}; plug a minimizer")
        return minimizer(M, x)
    order = sorted(range(n), key=lambda e: (-x[e], e))
    suffix = [Fraction(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + x[order[i]]
    best_val = Fraction(0)
    best: list | None = None
    chosen: list[int] = []
    indep: list[int] = []

    def dfs(i, val):
        nonlocal best_val, best
        if val > best_val:
            best_val, best = val, list(chosen)
        if i == n or val + suffix[i] <= best_val:
            return
        e = order[i]
        if M.is_independent(indep + [e]):
            chosen.append(e)
            indep.append(e)
            dfs(i + 1, val + x[e] - 1)
            indep.pop()
            chosen.pop()
            dfs(i + 1, val)
        else:
            chosen.append(e)
            dfs(i + 1, val + x[e])
            chosen.pop()

    dfs(0, Fraction(0))
    if best is None:
        return None
    S = frozenset(best)
    return RankCut(S, M.rank(S))


# ---------------------------------------------------------------------------
# Face structure
# ---------------------------------------------------------------------------

@dataclass
class Face:
    """Minimal face of ``P_B(M)`` containing a point.

    ``closure[i]`` is the smallest tight set containing the positive element
    ``i``; ``classes`` groups positive elements that lie in exactly the same
    tight sets.  The face is ``{y : y(T) = r(T) for the closures, y_z = 0 on
    zeros}`` and has dimension ``Σ (|class| - 1)``.
    """
    closure: dict
    zeros: frozenset
    classes: list

    @property
    def dim(self) -> int:
        return sum(len(c) - 1 for c in self.classes)

    def tight_sets(self) -> list[frozenset]:
        return sorted(set(self.closure.values()), key=lambda s: (len(s), sorted(s)))

    def directions(self) -> list[tuple[int, int]]:
        """Pairs ``(i, rep)``; the vectors ``e_i - e_rep`` span the face's direction space."""
        out = []
        for c in self.classes:
            rep = c[0]
            out.extend((i, rep) for i in c[1:])
        return out


def _classes(closure: dict) -> list:
    positive = sorted(closure)
    seen: set[int] = set()
    classes = []
    for i in positive:
        if i in seen:
            continue
        group = [j for j in positive if j in closure[i] and i in closure[j]]
        seen.update(group)
        classes.append(group)
    return classes


def face_from_support(M: Matroid, x: Sequence, support: Sequence[frozenset]) -> Face:
    """Face of ``x = Σ λ_k χ(B_k)`` (all ``λ_k > 0``) from its support bases.

    A set is tight for ``x`` iff it is tight for every ``B_k``; for one basis
    the smallest tight set around ``i`` is the closure of ``{i}`` under adding
    fundamental circuits of outside elements.
    """
    circuits: dict = {}

    def circuit(k, s):
        key = (k, s)
        if key not in circuits:
            circuits[key] = M.fundamental_circuit(support[k], s)
        return circuits[key]

    closure = {}
    for i in range(M.n):
        if x[i] == 0:
            continue
        T = {i}
        stack = [i]
        while stack:
            s = stack.pop()
            for k, B in enumerate(support):
                if s in B:
                    continue
                for t in circuit(k, s):
                    if t not in T:
                        T.add(t)
                        stack.append(t)
        closure[i] = frozenset(T)
    zeros = frozenset(e for e in range(M.n) if x[e] == 0)
    return Face(closure, zeros, _classes(closure))


def _scaled(x: Sequence) -> tuple[list[int], int]:
    den = 1
    for v in x:
        d = Fraction(v).denominator
        den = den * d // np.gcd(den, d)
    return [int(Fraction(v) * den) for v in x], int(den)


def _subset_sums(xs: list[int], n: int) -> np.ndarray:
    dtype = np.int64 if sum(abs(v) for v in xs) < 2 ** 62 else object
    sums = np.zeros(1 << n, dtype=dtype)
    for i, v in enumerate(xs):
        sums[1 << i: 1 << (i + 1)] = sums[: 1 << i] + v
    return sums


def face_from_table(M: Matroid, x: Sequence, ranks: Sequence[int] | None = None) -> Face:
    """Face of a point of ``P_B(M)`` from the full rank table (``n <= 20``)."""
    n = M.n
    if n > TABLE_LIMIT:
        raise CapabilityError(f"rank-table face computation limited to n <= {TABLE_LIMIT}")
    if ranks is None:
        ranks = rank_table(M)
    xs, den = _scaled(x)
    sums = _subset_sums(xs, n)
    rk = np.asarray(ranks, dtype=sums.dtype) * den
    if np.any(sums > rk) or sums[-1] != rk[-1]:
        raise SpecificationError("point is not in the base polytope")
    tight = np.nonzero(sums == rk)[0].astype(np.int64)
    closure = {}
    for i in range(n):
        if xs[i] == 0:
            continue
        hits = tight[(tight >> i) & 1 == 1]
        closure[i] = from_mask(int(np.bitwise_and.reduce(hits)))
    zeros = frozenset(e for e in range(n) if xs[e] == 0)
    return Face(closure, zeros, _classes(closure))


def in_base_polytope(M: Matroid, x: Sequence, ranks: Sequence[int] | None = None) -> bool:
    """Exhaustive membership test via the rank table (independent of ``separate``)."""
    if ranks is None:
        ranks = rank_table(M)
    if any(Fraction(v) < 0 for v in x):
        return False
    xs, den = _scaled(x)
    sums = _subset_sums(xs, M.n)
    rk = np.asarray(ranks, dtype=sums.dtype) * den
    return bool(np.all(sums <= rk) and sums[-1] == rk[-1])


def tight_system_rank(M: Matroid, W: WeightMatrix, x: Sequence, ranks: Sequence[int] | None = None) -> int:
    """Rank of every constraint of ``P_B(M) ∩ {Wx = β}`` that is tight at ``x``.

    Brute force over all ``2^n`` rank inequalities; ``x`` is a vertex iff the
    result is ``n``.
    """
    n = M.n
    if ranks is None:
        ranks = rank_table(M)
    xs, den = _scaled(x)
    sums = _subset_sums(xs, n)
    rk = np.asarray(ranks, dtype=sums.dtype) * den
    ech = IntegerEchelon(n)
    for row in W.rows:
        ech.add(row)
    for e in range(n):
        if xs[e] == 0:
            ech.add([int(j == e) for j in range(n)])
    for mask in np.nonzero(sums == rk)[0]:
        if ech.rank == n:
            break
        mask = int(mask)
        if mask:
            ech.add([(mask >> j) & 1 for j in range(n)])
    return ech.rank


def _face_rank_with_weights(W: WeightMatrix, face: Face) -> int:
    dirs = face.directions()
    if not dirs:
        return 0
    ech = IntegerEchelon(len(dirs))
    for row in W.rows:
        ech.add([row[i] - row[j] for i, j in dirs])
    return ech.rank


# ---------------------------------------------------------------------------
# Route 1: column generation over bases
# ---------------------------------------------------------------------------

def _lex_positive(v) -> bool:
    for a in v:
        if a:
            return a > 0
    return False


def _sorted_by_lex_weight(n: int, layer: Callable[[int, int], Fraction], depth: int) -> list[int]:
    """Elements by decreasing lexicographic weight; layers computed only to split ties."""
    def refine(group, k):
        if len(group) <= 1 or k >= depth:
            return sorted(group)
        vals = {e: layer(e, k) for e in group}
        out = []
        for v in sorted(set(vals.values()), reverse=True):
            out.extend(refine([e for e in group if vals[e] == v], k + 1))
        return out

    return refine(list(range(n)), 0)


class _Master:
    """Revised simplex for ``max Σ cost_B λ_B`` s.t. ``Σλ = 1, Σ λ_B W(B) = β``.

    Costs are tuples compared lexicographically; layer 0 carries the
    artificial penalty so phase one and two run as one problem.
    """

    def __init__(self, M: Matroid, W: WeightMatrix, beta, elem_cost: Callable[[int, int], Fraction], depth: int):
        self.M, self.W = M, W
        self.R = W.m + 1
        self.sign = [1] + [(-1 if b < 0 else 1) for b in beta]
        self.rhs = [Fraction(1)] + [Fraction(abs(int(b))) for b in beta]
        self.elem_cost = elem_cost  # layer >= 1 cost of element e
        self.depth = depth  # number of layers including the artificial one
        self.cols: list[dict] = []
        self.basis: list[int] = []
        for i in range(self.R):
            a = [Fraction(int(i == j)) for j in range(self.R)]
            cost = (Fraction(-1),) + (Fraction(0),) * (depth - 1)
            self.cols.append({"a": a, "cost": cost, "B": None})
            self.basis.append(i)
        self.Binv = [[Fraction(int(i == j)) for j in range(self.R)] for i in range(self.R)]
        self.xB = list(self.rhs)
        self.pivots = 0

    def _column(self, B: frozenset) -> dict:
        wB = self.W.weight(B)
        a = [Fraction(1)] + [Fraction(self.sign[i + 1] * wB[i]) for i in range(self.W.m)]
        cost = (Fraction(0),) + tuple(
            sum((self.elem_cost(e, k) for e in B), Fraction(0)) for k in range(1, self.depth))
        return {"a": a, "cost": cost, "B": B}

    def _duals(self):
        R = self.R
        return [[sum((self.cols[self.basis[r]]["cost"][k] * self.Binv[r][i] for r in range(R)), Fraction(0))
                 for i in range(R)] for k in range(self.depth)]

    def run(self):
        M, W, R = self.M, self.W, self.R
        wcols = [W.column(e) for e in range(M.n)]
        while True:
            pi = self._duals()
            cache: dict = {}

            def layer(e, k):
                key = (e, k)
                if key not in cache:
                    base = self.elem_cost(e, k) if k else Fraction(0)
                    col = wcols[e]
                    cache[key] = base - sum((pi[k][i + 1] * self.sign[i + 1] * col[i]
                                             for i in range(W.m) if col[i]), Fraction(0))
                return cache[key]

            order = _sorted_by_lex_weight(M.n, layer, self.depth)
            B = M.greedy_basis(order)
            reduced = [sum((layer(e, k) for e in B), Fraction(0)) - pi[k][0] for k in range(self.depth)]
            if not _lex_positive(reduced):
                return
            col = self._column(B)
            self.cols.append(col)
            self._pivot(len(self.cols) - 1)

    def _pivot(self, j):
        R = self.R
        a = self.cols[j]["a"]
        u = [sum((self.Binv[r][i] * a[i] for i in range(R) if a[i]), Fraction(0)) for r in range(R)]
        best_r, best_key = None, None
        for r in range(R):
            if u[r] > 0:
                key = tuple([self.xB[r] / u[r]] + [self.Binv[r][i] / u[r] for i in range(R)])
                if best_key is None or key < best_key:
                    best_r, best_key = r, key
        if best_r is None:
            raise TheoremAlarm("master LP unbounded despite the convexity row")
        r = best_r
        p = u[r]
        self.Binv[r] = [v / p for v in self.Binv[r]]
        self.xB[r] = self.xB[r] / p
        for s in range(R):
            if s != r and u[s]:
                f = u[s]
                self.Binv[s] = [v - f * w for v, w in zip(self.Binv[s], self.Binv[r])]
                self.xB[s] = self.xB[s] - f * self.xB[r]
        self.basis[r] = j
        self.pivots += 1

    def solution(self):
        """(feasible, point, support bases)."""
        n = self.M.n
        x = [Fraction(0)] * n
        support = []
        for r, j in enumerate(self.basis):
            lam = self.xB[r]
            B = self.cols[j]["B"]
            if B is None:
                if lam > 0:
                    return False, None, ()
                continue
            if lam > 0:
                support.append(B)
                for e in B:
                    x[e] += lam
        return True, tuple(x), tuple(support)


def random_objective(n: int, seed: int) -> tuple:
    rng = random.Random(subseed(seed, "lp-objective"))
    den = max(2 * n * n, 1)
    return tuple(Fraction(rng.randint(1, den), den) for _ in range(n))


def _lp_columns(M: Matroid, W: WeightMatrix, beta, seed: int) -> LpOutcome:
    n = M.n
    c = random_objective(n, seed)
    pivots = 0
    for lexical in (False, True):
        if lexical:
            def cost(e, k):
                return c[e] if k == 1 else Fraction(int(e == k - 2))
            depth = n + 2
        else:
            def cost(e, k):
                return c[e]
            depth = 2
        master = _Master(M, W, beta, cost, depth)
        master.run()
        pivots += master.pivots
        ok, x, support = master.solution()
        if not ok:
            return LpOutcome("infeasible", objective_used=c, pivots=pivots, method="columns")
        face = face_from_support(M, x, support)
        if _face_rank_with_weights(W, face) == face.dim:
            cuts = [RankCut(T, M.rank(T)) for T in face.tight_sets()]
            return LpOutcome("vertex", x, cuts, c, face.dim, pivots, support, "columns", lexical)
    raise TheoremAlarm("lexicographic optimum is not a vertex")


# ---------------------------------------------------------------------------
# Route 2: tableau simplex with lazily added rank cuts
# ---------------------------------------------------------------------------

def simplex(c, eq_rows, eq_rhs, le_rows, le_rhs):
    """Maximize ``c x`` over ``x >= 0`` with the given rows (exact, Bland's rule).

    Returns ``(status, x, pivots)`` with status ``optimal``, ``infeasible`` or
    ``unbounded``.
    """
    nv = len(c)
    nle = len(le_rows)
    rows, rhs, needs_art = [], [], []
    for i, (a, b) in enumerate(zip(le_rows, le_rhs)):
        row = [Fraction(v) for v in a] + [Fraction(int(j == i)) for j in range(nle)]
        b = Fraction(b)
        if b < 0:
            row, b = [-v for v in row], -b
            needs_art.append(True)
        else:
            needs_art.append(False)
        rows.append(row)
        rhs.append(b)
    for a, b in zip(eq_rows, eq_rhs):
        row = [Fraction(v) for v in a] + [Fraction(0)] * nle
        b = Fraction(b)
        if b < 0:
            row, b = [-v for v in row], -b
        rows.append(row)
        rhs.append(b)
        needs_art.append(True)
    arts = [i for i, f in enumerate(needs_art) if f]
    width = nv + nle + len(arts)
    T = []
    basis = []
    for i, row in enumerate(rows):
        ext = [Fraction(0)] * len(arts)
        if needs_art[i]:
            ext[arts.index(i)] = Fraction(1)
            basis.append(nv + nle + arts.index(i))
        else:
            basis.append(nv + i)
        T.append(row + ext + [rhs[i]])
    pivots = 0
    first_art = nv + nle

    def pivot(r, j):
        nonlocal pivots
        p = T[r][j]
        T[r] = [v / p for v in T[r]]
        for s in range(len(T)):
            if s != r and T[s][j]:
                f = T[s][j]
                T[s] = [v - f * w for v, w in zip(T[s], T[r])]
        basis[r] = j
        pivots += 1

    def optimize(cost, allowed):
        while True:
            d = [cost[j] - sum((cost[basis[r]] * T[r][j] for r in range(len(T)) if T[r][j]), Fraction(0))
                 if allowed(j) and j not in basis else Fraction(0) for j in range(width)]
            enter = next((j for j in range(width) if d[j] > 0), None)
            if enter is None:
                return "optimal"
            best = None
            for r in range(len(T)):
                if T[r][enter] > 0:
                    key = (T[r][-1] / T[r][enter], basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return "unbounded"
            pivot(best[1], enter)

    if arts:
        cost1 = [Fraction(0)] * first_art + [Fraction(-1)] * len(arts)
        optimize(cost1, lambda j: True)
        if any(basis[r] >= first_art and T[r][-1] > 0 for r in range(len(T))):
            return "infeasible", None, pivots
        for r in range(len(T) - 1, -1, -1):
            if basis[r] >= first_art:
                j = next((j for j in range(first_art) if T[r][j] != 0), None)
                if j is None:
                    del T[r]
                    del basis[r]
                else:
                    pivot(r, j)
    cost2 = [Fraction(v) for v in c] + [Fraction(0)] * (width - nv)
    status = optimize(cost2, lambda j: j < first_art)
    if status != "optimal":
        return status, None, pivots
    x = [Fraction(0)] * nv
    for r, j in enumerate(basis):
        if j < nv:
            x[j] = T[r][-1]
    return "optimal", tuple(x), pivots


def _lp_cuts(M: Matroid, W: WeightMatrix, beta, seed: int, minimizer=None) -> LpOutcome:
    n = M.n
    if n > TABLE_LIMIT:
        raise CapabilityError(f"cut route limited to n <= {TABLE_LIMIT}")
    c = random_objective(n, seed)
    r = M.rank()
    eq_rows = [[1] * n] + [list(row) for row in W.rows]
    eq_rhs = [r] + [int(b) for b in beta]
    cuts = [RankCut(frozenset([e]), M.rank([e])) for e in range(n)]
    pivots = 0
    while True:
        le_rows = [[int(e in cut.subset) for e in range(n)] for cut in cuts]
        status, x, p = simplex(c, eq_rows, eq_rhs, le_rows, [cut.rhs for cut in cuts])
        pivots += p
        if status != "optimal":
            return LpOutcome("infeasible", objective_used=c, pivots=pivots, method="cuts")
        cut = separate(M, x, minimizer)
        if cut is None:
            break
        cuts.append(cut)
    face = face_from_table(M, x)
    active = [cut for cut in cuts if cut.violation(x) == 0 and len(cut.subset) > 1]
    return LpOutcome("vertex", x, active, c, face.dim, pivots, (), "cuts", False)


def lp_vertex(M: Matroid, W: WeightMatrix, beta: Sequence[int], seed: int = 0,
              method: str = "columns", minimizer=None) -> LpOutcome:
    """Vertex of ``P_B(M) ∩ {Wx = β}`` maximizing a seeded random objective."""
    if W.n != M.n:
        raise SpecificationError(f"weight matrix covers {W.n} elements, matroid has {M.n}")
    if len(beta) != W.m:
        raise SpecificationError(f"target has {len(beta)} entries, weight matrix has {W.m} rows")
    if method == "columns":
        return _lp_columns(M, W, beta, seed)
    if method == "cuts":
        return _lp_cuts(M, W, beta, seed, minimizer)
    raise SpecificationError(f"unknown LP method {method!r}")


# ---------------------------------------------------------------------------
# Rounding to a basis on the minimal face
# ---------------------------------------------------------------------------

@dataclass
class FaceRounding:
    basis: frozenset
    distance: Fraction
    face_dim: int


def round_to_face_basis(M: Matroid, x: Sequence) -> FaceRounding:
    """Basis on the minimal face of ``x`` closest to ``x`` in L1.

    The distance is certified against the face dimension; exceeding it raises
    :class:`TheoremAlarm`.
    """
    x = [Fraction(v) for v in x]
    if len(x) != M.n:
        raise SpecificationError(f"point has {len(x)} coordinates, ground set has {M.n}")
    ranks = rank_table(M)
    face = face_from_table(M, x, ranks)
    constraints = [(to_mask(T), ranks[to_mask(T)]) for T in face.tight_sets()]
    zero_mask = to_mask(face.zeros)
    best = None
    for B in enumerate_bases(M):
        mask = to_mask(B)
        if mask & zero_mask:
            continue
        if any(bin(mask & T).count("1") != rT for T, rT in constraints):
            continue
        dist = sum((1 - x[e] if e in B else x[e] for e in range(M.n)), Fraction(0))
        key = (dist, tuple(sorted(B)))
        if best is None or key < best:
            best = key
    if best is None:
        raise TheoremAlarm("minimal face contains no basis")
    dist, B = best
    if dist > face.dim:
        raise TheoremAlarm(f"closest face basis at distance {dist} exceeds face dimension {face.dim}")
    return FaceRounding(frozenset(B), dist, face.dim)
