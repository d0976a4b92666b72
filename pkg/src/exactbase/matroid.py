"""Matroid specs, independence oracles and brute-force helpers.

Subsets of the ground set ``{0, ..., n-1}`` are passed around as frozensets of
element ids.  Brute-force helpers switch to integer bitmasks internally, with
:func:`to_mask` / :func:`from_mask` for conversion.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import EnumerationOverflow, SpecificationError, CapabilityError

Subset = frozenset


def to_mask(S: Iterable[int]) -> int:
    mask = 0
    for e in S:
        mask |= 1 << e
    return mask


def from_mask(mask: int) -> frozenset:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return frozenset(out)


# ---------------------------------------------------------------------------
# Declarative specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Uniform:
    n: int
    rank: int


@dataclass(frozen=True)
class Partition:
    blocks: tuple
    capacities: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "capacities", tuple(self.capacities))


@dataclass(frozen=True)
class Graphic:
    vertices: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))


@dataclass(frozen=True)
class Linear:
    """Column matroid of ``matrix``; ``field`` is None for the rationals or a prime."""
    matrix: tuple
    field: int | None = None
    n: int | None = None

    def __post_init__(self):
        if self.field is None:
            rows = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        else:
            rows = tuple(tuple(int(x) % self.field for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if self.n is None:
            if not rows:
                raise SpecificationError("linear spec with no rows needs an explicit column count")
            object.__setattr__(self, "n", len(rows[0]))


@dataclass(frozen=True)
class Transversal:
    left: int
    adjacency: tuple

    def __post_init__(self):
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(set(a))) for a in self.adjacency))


@dataclass(frozen=True)
class DirectSum:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Restriction:
    base: "MatroidSpec"
    keep: tuple

    def __post_init__(self):
        object.__setattr__(self, "keep", tuple(sorted(set(self.keep))))


@dataclass(frozen=True)
class Contraction:
    base: "MatroidSpec"
    contract: tuple

    def __post_init__(self):
        object.__setattr__(self, "contract", tuple(sorted(set(self.contract))))


MatroidSpec = Union[Uniform, Partition, Graphic, Linear, Transversal, DirectSum,
                    Restriction, Contraction]


def ground_size(spec) -> int:
    if isinstance(spec, Uniform):
        return spec.n
    if isinstance(spec, Partition):
        return sum(len(b) for b in spec.blocks)
    if isinstance(spec, Graphic):
        return len(spec.edges)
    if isinstance(spec, Linear):
        return spec.n
    if isinstance(spec, Transversal):
        return len(spec.adjacency)
    if isinstance(spec, DirectSum):
        return sum(ground_size(p) for p in spec.parts)
    if isinstance(spec, Restriction):
        return len(spec.keep)
    if isinstance(spec, Contraction):
        return ground_size(spec.base) - len(spec.contract)
    raise SpecificationError(f"unknown matroid spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------

class Matroid:
    """Independence oracle over ground set ``range(n)``.

    ``calls`` counts top-level oracle queries; it is the cost model used in
    solver statistics.  Under concurrent use the counter is approximate.
    """

    kind = "oracle"

    def __init__(self, n: int):
        self.n = n
        self.calls = 0
        self._full_rank = None

    def _independent(self, S: frozenset) -> bool:
        raise NotImplementedError

    def is_independent(self, S: Iterable[int]) -> bool:
        self.calls += 1
        return self._independent(frozenset(S))

    @classmethod
    def from_oracle(cls, n: int, predicate: Callable[[frozenset], bool]) -> "Matroid":
        return OracleMatroid(n, predicate)

    @property
    def ground(self) -> range:
        return range(self.n)

    def rank(self, S: Iterable[int] | None = None) -> int:
        if S is None:
            if self._full_rank is None:
                self._full_rank = len(self.greedy_basis())
            return self._full_rank
        return len(self.greedy_independent(sorted(S)))

    def greedy_independent(self, order: Sequence[int]) -> frozenset:
        current: list[int] = []
        for e in order:
            if self.is_independent(current + [e]):
                current.append(e)
        return frozenset(current)

    def greedy_basis(self, order: Sequence[int] | None = None) -> frozenset:
        """Basis built by greedy insertion, canonical (ascending) order by default."""
        basis = self.greedy_independent(range(self.n) if order is None else order)
        if order is None and self._full_rank is None:
            self._full_rank = len(basis)
        return basis

    def is_basis(self, S: Iterable[int]) -> bool:
        S = frozenset(S)
        return len(S) == self.rank() and self.is_independent(S)

    def fundamental_circuit(self, B: frozenset, e: int) -> frozenset:
        """Unique circuit in ``B + e`` for a basis ``B`` and ``e`` outside it."""
        circuit = {e}
        for b in sorted(B):
            if self.is_independent((B - {b}) | {e}):
                circuit.add(b)
        return frozenset(circuit)

    def __repr__(self):
        return f"<{type(self).__name__} n={self.n}>"


class OracleMatroid(Matroid):
    kind = "oracle"

    def __init__(self, n, predicate):
        super().__init__(n)
        self._predicate = predicate

    def _independent(self, S):
        return bool(self._predicate(S))


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, n, r):
        super().__init__(n)
        self.r = r

    def _independent(self, S):
        return len(S) <= self.r


class PartitionMatroid(Matroid):
    kind = "partition"

    def __init__(self, n, block_of: Sequence[int], capacities: Sequence[int]):
        super().__init__(n)
        self.block_of = list(block_of)
        self.capacities = list(capacities)

    def _independent(self, S):
        used = [0] * len(self.capacities)
        for e in S:
            b = self.block_of[e]
            used[b] += 1
            if used[b] > self.capacities[b]:
                return False
        return True


class GraphicMatroid(Matroid):
    kind = "graphic"

    def __init__(self, vertices, edges):
        super().__init__(len(edges))
        self.vertices = vertices
        self.edges = list(edges)

    def _independent(self, S):
        parent = {}

        def find(v):
            root = v
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(v, v) != root:
                parent[v], v = root, parent[v]
            return root

        for e in S:
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


def _integer_columns(matrix, n):
    """Columns of a rational matrix, with each row scaled to integers."""
    rows = []
    for row in matrix:
        scale = 1
        for x in row:
            scale = scale * x.denominator // _gcd(scale, x.denominator)
        rows.append([int(x * scale) for x in row])
    return [tuple(r[j] for r in rows) for j in range(n)]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def independent_int_vectors(vectors: Sequence[Sequence[int]]) -> bool:
    """Exact linear independence of integer vectors (fraction-free elimination)."""
    basis: list[tuple[int, list[int]]] = []
    for vec in vectors:
        v = list(vec)
        for p, b in basis:
            if v[p]:
                f, g = b[p], v[p]
                v = [f * x - g * y for x, y in zip(v, b)]
                d = 0
                for x in v:
                    d = _gcd(d, x)
                if d > 1:
                    v = [x // d for x in v]
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        basis.append((pivot, v))
    return True


def independent_mod_p(vectors: Sequence[Sequence[int]], p: int) -> bool:
    basis: list[tuple[int, list[int]]] = []
    for vec in vectors:
        v = [x % p for x in vec]
        for piv, b in basis:
            if v[piv]:
                g = v[piv]
                v = [(x - g * y) % p for x, y in zip(v, b)]
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        inv = pow(v[pivot], p - 2, p)
        basis.append((pivot, [(x * inv) % p for x in v]))
    return True


class LinearMatroid(Matroid):
    kind = "linear"

    def __init__(self, spec: Linear):
        super().__init__(spec.n)
        self.spec = spec
        self.dim = len(spec.matrix)
        if spec.field is None:
            self.columns = _integer_columns(spec.matrix, spec.n)
        else:
            self.columns = [tuple(r[j] for r in spec.matrix) for j in range(spec.n)]

    def _independent(self, S):
        if len(S) > self.dim:
            return False
        vectors = [self.columns[e] for e in sorted(S)]
        if self.spec.field is None:
            return independent_int_vectors(vectors)
        return independent_mod_p(vectors, self.spec.field)


def _max_matching_covers(S, adjacency) -> bool:
    match_left: dict[int, int] = {}

    def augment(e, seen):
        for a in adjacency[e]:
            if a in seen:
                continue
            seen.add(a)
            if a not in match_left or augment(match_left[a], seen):
                match_left[a] = e
                return True
        return False

    for e in sorted(S):
        if not augment(e, set()):
            return False
    return True


class TransversalMatroid(Matroid):
    """Elements are right-hand vertices; independent = matchable into the left side."""
    kind = "transversal"

    def __init__(self, left, adjacency):
        super().__init__(len(adjacency))
        self.left = left
        self.adjacency = [tuple(a) for a in adjacency]

    def _independent(self, S):
        return _max_matching_covers(S, self.adjacency)

    def matching(self, S: Iterable[int]) -> dict[int, int]:
        """Right element -> left vertex for a matching covering ``S``."""
        match_left: dict[int, int] = {}

        def augment(e, seen):
            for a in self.adjacency[e]:
                if a in seen:
                    continue
                seen.add(a)
                if a not in match_left or augment(match_left[a], seen):
                    match_left[a] = e
                    return True
            return False

        for e in sorted(S):
            if not augment(e, set()):
                raise SpecificationError(f"set {sorted(S)} is not matchable")
        return {e: a for a, e in match_left.items()}


class DirectSumMatroid(Matroid):
    kind = "direct_sum"

    def __init__(self, parts: Sequence[Matroid]):
        super().__init__(sum(p.n for p in parts))
        self.parts = list(parts)
        self.offsets = list(itertools.accumulate([0] + [p.n for p in parts]))[:-1]
        self._owner = []
        for i, p in enumerate(parts):
            self._owner.extend([i] * p.n)

    def _independent(self, S):
        split: list[list[int]] = [[] for _ in self.parts]
        for e in S:
            i = self._owner[e]
            split[i].append(e - self.offsets[i])
        return all(p._independent(frozenset(s)) for p, s in zip(self.parts, split) if s)


class RestrictionMatroid(Matroid):
    kind = "restriction"

    def __init__(self, base: Matroid, keep: Sequence[int]):
        super().__init__(len(keep))
        self.base = base
        self.parent_ids = list(keep)

    def _independent(self, S):
        return self.base._independent(frozenset(self.parent_ids[e] for e in S))


class ContractionMatroid(Matroid):
    kind = "contraction"

    def __init__(self, base: Matroid, contract: Sequence[int]):
        contract = frozenset(contract)
        keep = [e for e in range(base.n) if e not in contract]
        super().__init__(len(keep))
        self.base = base
        self.contracted = contract
        self.parent_ids = keep

    def _independent(self, S):
        return self.base._independent(frozenset(self.parent_ids[e] for e in S) | self.contracted)


def restrict(M: Matroid, keep: Iterable[int]) -> RestrictionMatroid:
    return RestrictionMatroid(M, sorted(set(keep)))


def contract(M: Matroid, C: Iterable[int]) -> ContractionMatroid:
    C = frozenset(C)
    if not M._independent(C):
        raise SpecificationError(f"contraction set {sorted(C)} is dependent")
    return ContractionMatroid(M, C)


class TruncationMatroid(Matroid):
    kind = "truncation"

    def __init__(self, base: Matroid, k: int):
        super().__init__(base.n)
        self.base = base
        self.k = k

    def _independent(self, S):
        return len(S) <= self.k and self.base._independent(S)


# ---------------------------------------------------------------------------
# compile
# ---------------------------------------------------------------------------

def compile_spec(spec) -> Matroid:
    """Validate a spec and build its independence oracle."""
    if isinstance(spec, Uniform):
        if spec.n < 0 or not 0 <= spec.rank:
            raise SpecificationError(f"uniform({spec.n},{spec.rank}): negative parameter")
        return UniformMatroid(spec.n, min(spec.rank, spec.n))
    if isinstance(spec, Partition):
        if len(spec.blocks) != len(spec.capacities):
            raise SpecificationError("partition: one capacity per block required")
        if any(c < 0 for c in spec.capacities):
            raise SpecificationError("partition: capacities must be nonnegative")
        n = sum(len(b) for b in spec.blocks)
        block_of = [-1] * n
        for i, block in enumerate(spec.blocks):
            for e in block:
                if not 0 <= e < n:
                    raise SpecificationError(f"partition: element {e} outside ground set of size {n}")
                if block_of[e] != -1:
                    raise SpecificationError(f"partition: blocks overlap at element {e}")
                block_of[e] = i
        return PartitionMatroid(n, block_of, spec.capacities)
    if isinstance(spec, Graphic):
        for u, v in spec.edges:
            if not (0 <= u < spec.vertices and 0 <= v < spec.vertices):
                raise SpecificationError(f"graphic: edge ({u},{v}) has an endpoint outside 0..{spec.vertices - 1}")
        return GraphicMatroid(spec.vertices, spec.edges)
    if isinstance(spec, Linear):
        if any(len(row) != spec.n for row in spec.matrix):
            raise SpecificationError(f"linear: every row must have {spec.n} columns")
        if spec.field is not None and (spec.field < 2 or any(spec.field % d == 0 for d in range(2, int(spec.field ** 0.5) + 1))):
            raise SpecificationError(f"linear: field size {spec.field} is not prime")
        return LinearMatroid(spec)
    if isinstance(spec, Transversal):
        for e, adj in enumerate(spec.adjacency):
            if any(not 0 <= a < spec.left for a in adj):
                raise SpecificationError(f"transversal: element {e} adjacent to a vertex outside 0..{spec.left - 1}")
        return TransversalMatroid(spec.left, spec.adjacency)
    if isinstance(spec, DirectSum):
        return DirectSumMatroid([compile_spec(p) for p in spec.parts])
    if isinstance(spec, Restriction):
        base = compile_spec(spec.base)
        if any(not 0 <= e < base.n for e in spec.keep):
            raise SpecificationError("restriction: kept element outside the base ground set")
        return RestrictionMatroid(base, spec.keep)
    if isinstance(spec, Contraction):
        base = compile_spec(spec.base)
        if any(not 0 <= e < base.n for e in spec.contract):
            raise SpecificationError("contraction: element outside the base ground set")
        return contract(base, spec.contract)
    raise SpecificationError(f"unknown matroid spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------

def enumerate_bases(M: Matroid, cap: int | None = None) -> Iterator[frozenset]:
    """Yield every basis once, in lexicographic order of sorted element tuples.

    Raises :class:`EnumerationOverflow` before yielding basis number ``cap + 1``.
    """
    r = M.rank()
    n = M.n
    emitted = 0
    stack: list[int] = []

    def dfs(start):
        nonlocal emitted
        if len(stack) == r:
            if cap is not None and emitted >= cap:
                raise EnumerationOverflow(f"more than {cap} bases")
            emitted += 1
            yield frozenset(stack)
            return
        for e in range(start, n - (r - len(stack)) + 1):
            stack.append(e)
            if M.is_independent(stack):
                yield from dfs(e + 1)
            stack.pop()

    yield from dfs(0)


def independence_table(M: Matroid, hereditary: bool = True) -> list[bool]:
    """``table[mask]`` tells whether the subset ``mask`` is independent.

    With ``hereditary`` the oracle is only asked about sets whose every
    one-smaller subset is independent; pass False to query all ``2**n`` sets.
    """
    n = M.n
    size = 1 << n
    table = [False] * size
    for mask in range(size):
        if hereditary and mask:
            ok = True
            m = mask
            while m:
                low = m & -m
                if not table[mask ^ low]:
                    ok = False
                    break
                m ^= low
            if not ok:
                continue
        table[mask] = M.is_independent(from_mask(mask))
    return table


def rank_table(M: Matroid) -> list[int]:
    """Rank of every subset, indexed by bitmask (brute force, small ``n``)."""
    if M.n > 22:
        raise CapabilityError("rank table limited to n <= 22")
    indep = independence_table(M)
    ranks = [0] * (1 << M.n)
    for mask in range(1, 1 << M.n):
        size = bin(mask).count("1")
        if indep[mask]:
            ranks[mask] = size
            continue
        best = 0
        m = mask
        while m:
            low = m & -m
            val = ranks[mask ^ low]
            if val > best:
                best = val
                if best == size - 1:
                    break
            m ^= low
        ranks[mask] = best
    return ranks


@dataclass
class AxiomVerdict:
    ok: bool
    axiom: str | None = None
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def check_axioms(M: Matroid) -> AxiomVerdict:
    """Exhaustively verify (M1)-(M3); returns the first counterexample found."""
    if M.n > 16:
        raise CapabilityError("axiom check limited to n <= 16")
    n = M.n
    full = (1 << n) - 1
    indep = independence_table(M, hereditary=False)
    if not indep[0]:
        return AxiomVerdict(False, "M1", (frozenset(),))
    for Y in range(1 << n):
        if not indep[Y]:
            continue
        m = Y
        while m:
            low = m & -m
            if not indep[Y ^ low]:
                return AxiomVerdict(False, "M2", (from_mask(Y ^ low), from_mask(Y)))
            m ^= low
    # largest independent subset of every set, then (M3) via the augmentable set of X
    best = [0] * (1 << n)
    for U in range(1, 1 << n):
        if indep[U]:
            best[U] = bin(U).count("1")
        else:
            v = 0
            m = U
            while m:
                low = m & -m
                v = max(v, best[U ^ low])
                m ^= low
            best[U] = v
    for X in range(1 << n):
        if not indep[X]:
            continue
        augment = 0
        for e in range(n):
            bit = 1 << e
            if not X & bit and indep[X | bit]:
                augment |= bit
        size = bin(X).count("1")
        outside = full & ~augment
        if best[outside] > size:
            # find a witness Y inside ``outside`` with |Y| = |X| + 1
            for Y in _submasks_of_size(outside, size + 1):
                if indep[Y]:
                    return AxiomVerdict(False, "M3", (from_mask(X), from_mask(Y)))
    return AxiomVerdict(True)


def _submasks_of_size(mask, k):
    bits = [i for i in range(mask.bit_length()) if mask >> i & 1]
    for combo in itertools.combinations(bits, k):
        yield to_mask(combo)
