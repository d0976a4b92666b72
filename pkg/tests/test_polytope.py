from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import rng_for, seeds
from exactbase.acceptance import random_instance
from exactbase.catalog import random_spec
from exactbase.errors import CapabilityError
from exactbase.matroid import Graphic, Uniform, compile_spec, enumerate_bases, rank_table
from exactbase.polytope import (face_from_table, in_base_polytope, lp_vertex, round_to_face_basis, separate,
                                tight_system_rank)
from exactbase.solver import brute_force_solve
from exactbase.weights import WeightMatrix

TRIANGLE = Graphic(3, [(0, 1), (1, 2), (0, 2)])
H = F(1, 2)


def test_separate_examples():
    U = compile_spec(Uniform(2, 1))
    cut = separate(U, [1, 1])
    assert cut.subset == {0, 1} and cut.violation([1, 1]) == 1
    assert separate(U, [H, H]) is None
    assert separate(compile_spec(TRIANGLE), [1, 1, 0]) is None


def test_separate_capability():
    M = compile_spec(Uniform(30, 3))
    with pytest.raises(CapabilityError):
        separate(M, [F(1, 10)] * 30)


@pytest.mark.parametrize("method", ["columns", "cuts"])
def test_lp_examples(method):
    U3 = compile_spec(Uniform(3, 1))
    W = WeightMatrix.from_rows([[0, 1, 2]])
    seen = {lp_vertex(U3, W, [1], seed=s, method=method).point for s in range(8)}
    assert seen <= {(0, 1, 0), (H, 0, H)}
    out = lp_vertex(compile_spec(Uniform(2, 1)), WeightMatrix.from_rows([[0, 1]]), [0], method=method)
    assert out.point == (1, 0)
    out = lp_vertex(compile_spec(Uniform(2, 1)), WeightMatrix.from_rows([[1, 1]]), [3], method=method)
    assert out.status == "infeasible"


def test_lp_both_vertices_reachable():
    U3 = compile_spec(Uniform(3, 1))
    W = WeightMatrix.from_rows([[0, 1, 2]])
    seen = {lp_vertex(U3, W, [1], seed=s).point for s in range(30)}
    assert seen == {(0, 1, 0), (H, 0, H)}


def test_round_examples():
    B = round_to_face_basis(compile_spec(Uniform(3, 1)), [0, 1, 0])
    assert B.basis == {1} and B.distance == 0
    r = round_to_face_basis(compile_spec(Uniform(3, 1)), [H, 0, H])
    assert r.basis in ({0}, {2}) and r.distance == 1 and r.face_dim == 1
    r = round_to_face_basis(compile_spec(TRIANGLE), [F(2, 3)] * 3)
    assert r.distance == F(4, 3) and r.face_dim == 2


@given(seed=seeds, n=st.integers(1, 12))
def test_lp_vertex_properties(seed, n):
    rng = rng_for(seed)
    spec, M, W, beta = random_instance(rng, seed % 9, n)
    out = lp_vertex(M, W, beta, seed=seed)
    if out.status == "infeasible":
        assert brute_force_solve(M, W, beta).status == "infeasible"
        return
    x = out.point
    assert all(sum(row[e] * x[e] for e in range(M.n)) == b for row, b in zip(W.rows, beta))
    ranks = rank_table(M)
    assert in_base_polytope(M, x, ranks)
    assert tight_system_rank(M, W, x, ranks) == M.n
    assert lp_vertex(M, W, beta, seed=seed) == out


@given(seed=seeds, n=st.integers(1, 12), k=st.integers(1, 4))
def test_rounding_within_face_dimension(seed, n, k):
    rng = rng_for(seed)
    M = compile_spec(random_spec(rng, n))
    bases = list(enumerate_bases(M))
    picks = [rng.choice(bases) for _ in range(k)]
    coeffs = [rng.randint(1, 5) for _ in picks]
    total = sum(coeffs)
    x = [sum(F(c, total) for c, B in zip(coeffs, picks) if e in B) for e in range(n)]
    res = round_to_face_basis(M, x)
    assert M.is_basis(res.basis)
    assert res.distance == sum(abs(int(e in res.basis) - x[e]) for e in range(n))
    assert res.distance <= res.face_dim
    assert res.face_dim == face_from_table(M, x).dim
