import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import rng_for, seeds
from exactbase.catalog import random_linear, random_spec, random_weights
from exactbase.errors import CapabilityError, SpecificationError
from exactbase.matroid import Graphic, Linear, Transversal, Uniform, compile_spec, enumerate_bases
from exactbase.polytope import lp_vertex
from exactbase.reductions import (ConstraintSpec, aggregate_to_1d, app_closest_base, app_fair_matching,
                                  app_feedback_edge_set, app_group_base, brute_force_original,
                                  brute_force_reduced, in_gamma_window, reduce_congruence, reduce_constraints,
                                  reduce_group, reduce_inequality, round_half_up, solve_constraints, solve_linear)
from exactbase.weights import WeightMatrix

U21 = Uniform(2, 1)
TRIANGLE_EDGES = [(0, 1), (1, 2), (0, 2)]


def _feasible(inst):
    return brute_force_reduced(inst) is not None


def test_inequality_examples():
    assert _feasible(reduce_inequality(U21, ConstraintSpec("less_equal", [0, 1], 1)))
    assert not _feasible(reduce_inequality(U21, ConstraintSpec("less_equal", [0, 1], -1)))
    c = ConstraintSpec("greater_equal", [0, 1], 1)
    inst = reduce_inequality(U21, c)
    assert inst.restrict(brute_force_reduced(inst)) == {1}
    assert solve_constraints(U21, [c]).basis == {1}


def test_congruence_examples():
    c = ConstraintSpec("congruence", [1, 2], 2, 3)
    assert solve_constraints(U21, [c]).basis == {1}
    assert _feasible(reduce_congruence(U21, ConstraintSpec("congruence", [0, 0], 0, 1)))
    assert not _feasible(reduce_congruence(U21, ConstraintSpec("congruence", [1, 1], 0, 3)))


def test_group_examples():
    cons = reduce_group(U21, [2, 3], [[1, 2], [0, 1]], [1, 0])
    assert [(c.modulus, c.weights, c.target) for c in cons] == [(2, (1, 0), 1), (3, (2, 1), 0)]
    assert len(reduce_group(U21, [4], [[1], [3]], [0])) == 1
    cons = reduce_group(Uniform(3, 2), [5], [[0], [0], [0]], [0])
    assert brute_force_original(Uniform(3, 2), cons) is not None
    with pytest.raises(SpecificationError):
        reduce_group(U21, [2], [[2], [0]], [0])


def test_constraint_validation():
    with pytest.raises(SpecificationError):
        ConstraintSpec("congruence", [1, 2], 0, 1)
    with pytest.raises(SpecificationError):
        ConstraintSpec("between", [1], 0)


def test_aggregation_examples():
    W = WeightMatrix.from_rows([[1, 0, -1], [0, 1, 1]])
    agg = aggregate_to_1d(W, [0, 1], [1, 1, 0], 2)
    assert agg.lam == (1, 5)
    B = [1, 2]
    x = [int(e in B) for e in range(3)]
    agg = aggregate_to_1d(W, W.weight(B), x, 0)
    assert sum(agg.w[e] for e in B) == agg.alpha
    W1 = WeightMatrix.from_rows([[2, -1, 0]])
    agg = aggregate_to_1d(W1, [1], [0, 0, 1], 3)
    assert agg.lam == (1,) and agg.w2 == (2, -1, 0)


def test_solve_linear_examples():
    spec = Graphic(3, TRIANGLE_EDGES)
    W = WeightMatrix.from_rows([[0, 1, 1]])
    rep = solve_linear(spec, W, [1])
    assert rep.basis in ({0, 1}, {0, 2})
    assert solve_linear(spec, W, [2]).basis == {1, 2}
    assert solve_linear(spec, W, [4]).status == "infeasible"
    with pytest.raises(CapabilityError):
        solve_linear(Uniform(3, 2), W, [1])


def test_feedback_examples():
    res = app_feedback_edge_set(3, TRIANGLE_EDGES, [[1, 1, 1]], [1])
    assert res.status == "found" and len(res.solution) == 1
    assert app_feedback_edge_set(3, TRIANGLE_EDGES, [[1, 1, 1]], [0]).status == "infeasible"
    res = app_feedback_edge_set(4, [(0, 1), (1, 2), (2, 3)], [[2, 2, 2]], [0])
    assert res.solution == frozenset()


def test_closest_examples():
    res = app_closest_base(Uniform(4, 2), [[0, 1]])
    assert res.solution == {0, 1} and res.info["H"] == 0
    res = app_closest_base(Uniform(4, 2), [[0, 1], [2, 3]])
    assert res.info["H"] == 1 and len(res.solution & {0, 1}) == 1
    assert app_closest_base(Uniform(4, 2), [[0, 1], [2, 3]], brute_force=True).solution == {0, 2}
    res = app_closest_base(Uniform(4, 2), [[1, 3]] * 3)
    assert res.solution == {1, 3} and res.info["H"] == 0
    with pytest.raises(SpecificationError):
        app_closest_base(Uniform(4, 2), [[0]])


def test_fair_matching_examples():
    res = app_fair_matching(1, [[0]], [[0]], [1])
    assert res.solution == {0: 0}
    # C4: left {0,1}, right {0,1}, complete bipartite
    res = app_fair_matching(2, [[0, 1], [0, 1]], [[0], [1]], [1, 1])
    assert res.status == "found" and set(res.solution) == {0, 1}
    assert app_fair_matching(2, [[0, 1], [0, 1]], [[0], [1]], [2, 0]).status == "infeasible"


def test_group_base_app():
    res = app_group_base(Uniform(4, 2), [3], [[1], [1], [2], [0]], [0])
    assert res.status == "found"
    assert sum(l for e in res.solution for l in [[1], [1], [2], [0]][e]) % 3 == 0


def _random_constraints(rng, n):
    kind = rng.choice(["less_equal", "greater_equal", "congruence", "equality"])
    if kind == "congruence":
        p = rng.randint(1, 4)
        return [ConstraintSpec(kind, [rng.randrange(p) for _ in range(n)], rng.randrange(p), p)]
    return [ConstraintSpec(kind, [rng.randint(-2, 2) for _ in range(n)], rng.randint(-n, n))]


@given(seed=seeds, n=st.integers(1, 7))
def test_round_trip_feasibility(seed, n):
    rng = rng_for(seed)
    spec = random_spec(rng, n)
    cons = _random_constraints(rng, n) + (_random_constraints(rng, n) if rng.random() < 0.3 else [])
    truth = brute_force_original(spec, cons) is not None
    inst = reduce_constraints(spec, cons)
    assert _feasible(inst) == truth
    res = solve_constraints(spec, cons, seed=seed)
    assert (res.basis is not None) == truth
    if res.basis is not None:
        assert compile_spec(spec).is_basis(res.basis) and all(c.holds(res.basis) for c in cons)


@given(seed=seeds, n=st.integers(2, 8))
def test_aggregation_identity_and_lambda_dominance(seed, n):
    rng = rng_for(seed)
    spec = random_linear(rng, n)
    M = compile_spec(spec)
    W = random_weights(rng, 2, n, rng.choice((1, 2)))
    bases = list(enumerate_bases(M))
    beta = W.weight(rng.choice(bases))
    xr = [round_half_up(v) for v in lp_vertex(M, W, beta, seed=seed).point]
    for Gamma in range(n + 1):
        if not in_gamma_window(W, beta, xr, Gamma):
            continue
        agg = aggregate_to_1d(W, beta, xr, Gamma)
        for B in bases:
            wb = W.weight(B)
            dist = sum(abs(int(e in B) - xr[e]) for e in range(n))
            assert (sum(agg.w[e] for e in B) == agg.alpha) == (dist == Gamma and wb == beta)
            diff = [a - b for a, b in zip(wb, beta)]
            if any(diff) and max(map(abs, diff)) <= 2 * Gamma * W.delta:
                assert sum(l * d for l, d in zip(agg.lam, diff)) != 0


def test_round_half_up():
    from fractions import Fraction as F
    assert [round_half_up(F(v, 2)) for v in (0, 1, 2)] == [0, 1, 1]
