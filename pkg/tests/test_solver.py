import pytest
from hypothesis import given, strategies as st

from conftest import rng_for, seeds
from exactbase.acceptance import random_instance
from exactbase.errors import CapabilityError
from exactbase.matroid import Graphic, Uniform, compile_spec
from exactbase.solver import brute_force_solve, candidate_counts, proven_radius, solve
from exactbase.weights import WeightMatrix
from fractions import Fraction as F

C4 = Graphic(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.mark.parametrize("solver", [solve, brute_force_solve])
def test_examples(solver):
    U = compile_spec(Uniform(4, 2))
    W = WeightMatrix.from_rows([[0, 1, 1, 2]])
    rep = solver(U, W, [2])
    assert rep.status == "found" and rep.basis in ({0, 3}, {1, 2})
    assert solver(U, W, [5]).status == "infeasible"
    rep = solver(compile_spec(C4), WeightMatrix.from_rows([[1, 0, 0, 0]]), [0])
    assert rep.basis == {1, 2, 3}


def test_empty_matroid():
    M = compile_spec(Uniform(0, 0))
    W = WeightMatrix((( ),), 0)
    assert brute_force_solve(M, W, [0]).basis == frozenset()
    assert solve(M, W, [0]).basis == frozenset()
    assert brute_force_solve(M, W, [1]).status == "infeasible"
    assert solve(M, W, [1]).status == "infeasible"


def test_brute_force_limit():
    M = compile_spec(Uniform(21, 1))
    with pytest.raises(CapabilityError):
        brute_force_solve(M, WeightMatrix.from_rows([[0] * 21]), [0])


def test_candidate_examples():
    W = WeightMatrix.from_rows([[0, 1, 2]])
    cands = list(candidate_counts([F(1, 2), 0, F(1, 2)], W, 1, [1], 1))
    assert {(0,): 0, (1,): 1, (2,): 0} in cands
    assert list(candidate_counts([F(1, 2), 0, F(1, 2)], W, 1, [1], 0)) == []
    W = WeightMatrix.from_rows([[0, 1, 1, 2]])
    first = next(candidate_counts([1, 0, 0, 1], W, 2, [2], 0))
    assert first == {(0,): 1, (1,): 0, (2,): 1}


def test_proven_radius():
    assert proven_radius(1, 1) == 2 ** 13


@given(seed=seeds, n=st.integers(0, 12))
def test_candidate_stream_sound(seed, n):
    rng = rng_for(seed)
    spec, M, W, beta = random_instance(rng, seed % 9, n)
    from exactbase.polytope import lp_vertex
    lp = lp_vertex(M, W, beta, seed=seed)
    if lp.status != "vertex":
        return
    radius = rng.randint(0, n)
    seen = set()
    for c in candidate_counts(lp.point, W, M.rank(), beta, radius):
        key = tuple(sorted(c.items()))
        assert key not in seen
        seen.add(key)
        assert sum(c.values()) == M.rank()
        assert all(sum(a[i] * v for a, v in c.items()) == beta[i] for i in range(W.m))
        for a, v in c.items():
            s = sum(lp.point[e] for e in W.classes[a])
            assert abs(v - s) <= radius and 0 <= v <= len(W.classes[a])


@given(seed=seeds, n=st.integers(0, 12))
def test_agrees_with_brute_force(seed, n):
    rng = rng_for(seed)
    spec, M, W, beta = random_instance(rng, seed % 9, n)
    a = solve(M, W, beta, seed=seed)
    b = brute_force_solve(compile_spec(spec), W, beta)
    assert a.status == b.status
    if a.basis is not None:
        assert M.is_basis(a.basis) and W.weight(a.basis) == tuple(beta)


@given(seed=seeds, n=st.integers(1, 12))
def test_radius_monotone(seed, n):
    rng = rng_for(seed)
    spec, M, W, beta = random_instance(rng, seed % 9, n)
    statuses = [solve(M, W, beta, radius_override=r, seed=seed).status for r in range(0, n + 1)]
    for lo, hi in zip(statuses, statuses[1:]):
        assert not (lo == "found" and hi != "found")
    assert statuses[-1] == brute_force_solve(M, W, beta).status


def test_deterministic_stats():
    rng = rng_for(11)
    spec, M, W, beta = random_instance(rng, 2, 12)
    a = solve(M, W, beta, seed=3)
    b = solve(compile_spec(spec), W, beta, seed=3)
    assert a == b


def test_jobs_do_not_change_report():
    rng = rng_for(5)
    for i in range(6):
        spec, M, W, beta = random_instance(rng, i, 12)
        assert solve(M, W, beta, seed=i, jobs=1) == solve(compile_spec(spec), W, beta, seed=i, jobs=3)
