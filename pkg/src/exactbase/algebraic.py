"""Randomized exact-weight bases of linear matroids through the basis generating polynomial.

For a full-row-rank ``r x n`` matrix ``A`` and random scalars ``t_e``,
Cauchy–Binet gives

    det(A · diag(t_e y^(w_e + Δ)) · Aᵀ) = Σ_B det(A_B)² Π_{e∈B} t_e · y^(w(B) + Δr),

so the coefficient at ``y^(β + Δr)`` is nonzero (with high probability) iff
some basis weighs ``β``.  Everything is computed modulo a prime ``q``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy

from .errors import CapabilityError, SpecificationError
from .linalg import row_reduce, subseed
from .matroid import Graphic, Linear, LinearMatroid, Matroid, compile_spec

DEFAULT_PRIME = 2 ** 61 - 1


class SelfReductionFailure(RuntimeError):
    """A nonzero coefficient was seen but no verified basis could be extracted."""


@dataclass(frozen=True)
class Representation:
    """Full-row-rank matrix over the rationals (``field`` None) or GF(field)."""
    rows: tuple
    n: int
    field: int | None = None

    @property
    def rank(self) -> int:
        return len(self.rows)

    def matroid(self) -> Matroid:
        return LinearMatroid(Linear(self.rows, self.field, self.n))


def _reduce_mod(rows, p):
    mat = [[int(x) % p for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        mat[rank] = [v * inv % p for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return mat[:rank]


def representation(spec) -> Representation:
    """Row-reduced matrix for a linear or graphic spec."""
    if isinstance(spec, Representation):
        return spec
    if isinstance(spec, Graphic):
        # oriented incidence matrix; its column matroid is the cycle matroid
        rows = [[0] * len(spec.edges) for _ in range(spec.vertices)]
        for j, (u, v) in enumerate(spec.edges):
            if u != v:
                rows[u][j] += 1
                rows[v][j] -= 1
        compile_spec(spec)
        return Representation(tuple(tuple(r) for r in row_reduce(rows)), len(spec.edges))
    if isinstance(spec, Linear):
        compile_spec(spec)
        if spec.field is None:
            rows = row_reduce(spec.matrix) if spec.matrix else []
        else:
            rows = _reduce_mod(spec.matrix, spec.field) if spec.matrix else []
        return Representation(tuple(tuple(r) for r in rows), spec.n, spec.field)
    raise CapabilityError(f"no explicit linear representation for {type(spec).__name__} specs")


def _to_field(rep: Representation, q: int) -> list[list[int]]:
    if rep.field is not None:
        if rep.field != q:
            raise CapabilityError(f"matrix lives over GF({rep.field}); evaluation needs GF({q})")
        return [list(r) for r in rep.rows]
    out = []
    for row in rep.rows:
        vals = []
        for x in row:
            x = Fraction(x)
            if x.denominator % q == 0:
                raise CapabilityError(f"denominator divisible by the prime {q}")
            vals.append(x.numerator % q * pow(x.denominator, q - 2, q) % q)
        out.append(vals)
    return out


def det_mod(mat: list[list[int]], q: int) -> int:
    a = [row[:] for row in mat]
    k = len(a)
    det = 1
    for c in range(k):
        piv = next((r for r in range(c, k) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det = det * p % q
        inv = pow(p, q - 2, q)
        for r in range(c + 1, k):
            if a[r][c]:
                f = a[r][c] * inv % q
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[c])]
    return det % q


@lru_cache(maxsize=None)
def _check_prime(q: int) -> None:
    if not sympy.isprime(q):
        raise SpecificationError(f"{q} is not prime")


@lru_cache(maxsize=256)
def _root_of_unity(q: int, need: int):
    """``(ω, N)`` with ``ω`` of exact order ``N >= need`` and ``N | q - 1``, or None."""
    for N in sympy.divisors(q - 1):
        if N >= need:
            g = sympy.primitive_root(q)
            return pow(g, (q - 1) // N, q), N
    return None


@dataclass
class GeneratingPolynomial:
    coefficients: dict  # shifted degree -> nonzero field element
    shift: int
    prime: int
    degree_bound: int

    def coefficient(self, weight: int) -> int:
        return self.coefficients.get(weight + self.shift, 0)

    def support(self) -> list[int]:
        return sorted(d - self.shift for d in self.coefficients)


class _Evaluator:
    def __init__(self, A, w, t, q, delta):
        self.A, self.w, self.t, self.q = A, w, t, q
        self.r = len(A)
        self.n = len(w)
        self.delta = delta
        self.bound = 2 * delta * self.r
        _check_prime(q)
        if q <= self.bound:
            raise CapabilityError(f"prime {q} too small for {self.bound + 1} evaluation points")
        self.unity = _root_of_unity(q, self.bound + 1)

    def value(self, y: int) -> int:
        q, A, r = self.q, self.A, self.r
        if r == 0:
            return 1
        d = [self.t[e] * pow(y, self.w[e] + self.delta, q) % q for e in range(self.n)]
        mat = [[sum(A[i][e] * d[e] * A[j][e] for e in range(self.n)) % q for j in range(r)] for i in range(r)]
        return det_mod(mat, q)

    def coefficients(self, degrees=None) -> dict:
        q, D = self.q, self.bound
        wanted = range(D + 1) if degrees is None else [d for d in degrees if 0 <= d <= D]
        if self.unity is not None:
            omega, N = self.unity
            vals = [self.value(pow(omega, k, q)) for k in range(N)]
            inv_n = pow(N, q - 2, q)
            inv_omega = pow(omega, q - 2, q)
            out = {}
            for d in wanted:
                step = pow(inv_omega, d, q)
                acc, z = 0, 1
                for v in vals:
                    acc = (acc + v * z) % q
                    z = z * step % q
                out[d] = acc * inv_n % q
            return out
        # fall back to interpolation through 0..D
        xs = list(range(D + 1))
        vals = [self.value(x) for x in xs]
        coeffs = _interpolate(xs, vals, q)
        return {d: coeffs[d] for d in wanted}


def _interpolate(xs, ys, q):
    """Monomial coefficients of the interpolating polynomial (Lagrange, O(k²))."""
    k = len(xs)
    full = [1]
    for x in xs:
        full = _mul_linear(full, x, q)
    coeffs = [0] * k
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        # full / (y - xi) by synthetic division
        quo = [0] * k
        acc = full[k]
        quo[k - 1] = acc
        for j in range(k - 1, 0, -1):
            acc = (full[j] + acc * xi) % q
            quo[j - 1] = acc
        denom = 1
        for j, xj in enumerate(xs):
            if j != i:
                denom = denom * (xi - xj) % q
        f = yi * pow(denom, q - 2, q) % q
        for j in range(k):
            coeffs[j] = (coeffs[j] + f * quo[j]) % q
    return coeffs


def _mul_linear(poly, x, q):
    out = [0] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i + 1] = (out[i + 1] + c) % q
        out[i] = (out[i] - x * c) % q
    return out


def _scalars(n, seed, q):
    rng = random.Random(subseed(seed, "algebraic-scalars"))
    return [rng.randrange(1, q) for _ in range(n)]


def _prepare(A, w, prime):
    rep = A if isinstance(A, Representation) else Representation(tuple(tuple(r) for r in A), len(w))
    if rep.n != len(w):
        raise SpecificationError(f"{len(w)} weights for {rep.n} columns")
    if rep.field is None:
        if len(row_reduce(rep.rows)) != rep.rank:
            raise SpecificationError("representation matrix must have full row rank")
    elif len(_reduce_mod(rep.rows, rep.field)) != rep.rank:
        raise SpecificationError("representation matrix must have full row rank")
    q = prime if rep.field is None else rep.field
    return rep, _to_field(rep, q), q


def generating_poly(A, w: Sequence[int], seed: int = 0, prime: int = DEFAULT_PRIME,
                    delta: int | None = None) -> GeneratingPolynomial:
    """Basis generating polynomial of the column matroid of ``A`` under weights ``w``."""
    rep, Aq, q = _prepare(A, w, prime)
    w = [int(v) for v in w]
    delta = max((abs(v) for v in w), default=0) if delta is None else delta
    ev = _Evaluator(Aq, w, _scalars(rep.n, seed, q), q, delta)
    coeffs = {d: c for d, c in ev.coefficients().items() if c}
    return GeneratingPolynomial(coeffs, delta * rep.rank, q, ev.bound)


def _coefficient_at(Aq, w, t, q, beta):
    r = len(Aq)
    delta = max((abs(v) for v in w), default=0)
    target = beta + delta * r
    if not 0 <= target <= 2 * delta * r:
        return 0
    return _Evaluator(Aq, w, t, q, delta).coefficients([target])[target]


def _contract_column(Aq, j, q):
    """Eliminate column ``j`` through one pivot row and drop that row and column."""
    piv = next(i for i in range(len(Aq)) if Aq[i][j])
    inv = pow(Aq[piv][j], q - 2, q)
    prow = [v * inv % q for v in Aq[piv]]
    out = []
    for i, row in enumerate(Aq):
        if i == piv:
            continue
        f = row[j]
        new = [(a - f * b) % q for a, b in zip(row, prow)] if f else list(row)
        out.append(new[:j] + new[j + 1:])
    return out


def _rank_mod(rows, q):
    return len(_reduce_mod(rows, q)) if rows and rows[0] else 0


def exact_basis_1d(A, w: Sequence[int], beta: int, seed: int = 0, retries: int = 3,
                   prime: int = DEFAULT_PRIME) -> frozenset | None:
    """Basis of weight exactly ``beta`` by coefficient tests and self-reduction.

    Absence is probabilistic (a zero coefficient in every attempt); a returned
    basis is always checked against an exact independence oracle.
    """
    rep, Aq0, q = _prepare(A, w, prime)
    w = [int(v) for v in w]
    oracle = rep.matroid()
    seen_nonzero = False
    for attempt in range(max(1, retries)):
        s = subseed(seed, f"attempt-{attempt}")
        t = _scalars(rep.n, s, q)
        if not _coefficient_at(Aq0, w, t, q, beta):
            continue
        seen_nonzero = True
        Aq = [row[:] for row in Aq0]
        alive = list(range(rep.n))  # original ids of the current columns
        ws = list(w)
        ts = list(t)
        target = beta
        chosen = []
        for e in range(rep.n):
            j = alive.index(e)
            rest = [row[:j] + row[j + 1:] for row in Aq]
            keep_rank = len(Aq) == 0 or _rank_mod(rest, q) == len(Aq)
            wr, tr = ws[:j] + ws[j + 1:], ts[:j] + ts[j + 1:]
            if keep_rank and _coefficient_at(rest, wr, tr, q, target):
                Aq, ws, ts = rest, wr, tr
            else:
                if not any(row[j] for row in Aq):
                    break  # loop element cannot be kept; this attempt is lost
                Aq = _contract_column(Aq, j, q)
                target -= ws[j]
                ws, ts = wr, tr
                chosen.append(e)
            alive.pop(j)
        B = frozenset(chosen)
        if len(B) == rep.rank and sum(w[e] for e in B) == beta and oracle.is_independent(B):
            return B
    if seen_nonzero:
        raise SelfReductionFailure(
            f"coefficient at {beta} was nonzero but self-reduction failed in {retries} attempts")
    return None
