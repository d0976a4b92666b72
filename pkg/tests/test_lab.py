import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import rng_for, seeds
from exactbase import lab
from exactbase.catalog import random_spec, small_catalog
from exactbase.errors import SpecificationError, TheoremInapplicable
from exactbase.matroid import Graphic, Partition, Uniform, compile_spec, enumerate_bases
from exactbase.weights import WeightMatrix

C4 = Graphic(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_downsize_examples():
    U = compile_spec(Uniform(4, 2))
    assert lab.downsize({0, 1}, {0, 1}, {2, 3}, {0, 1}, U) == {2, 3}
    assert lab.downsize({0, 1}, {0, 1}, {2, 3}, set(), U) == frozenset()
    assert lab.downsize({0, 1}, {0, 1}, {2, 3}, {0}, U) in ({2}, {3})
    with pytest.raises(SpecificationError):
        lab.downsize({0, 1}, {0, 1}, {1, 3}, {0}, U)


def _pair_inputs(rng, n):
    M = compile_spec(random_spec(rng, n))
    bases = list(enumerate_bases(M))
    A, B = rng.choice(bases), rng.choice(bases)
    return M, A - B, B - A


@given(seed=seeds, n=st.integers(2, 10))
def test_downsize_on_basis_pairs(seed, n):
    rng = rng_for(seed)
    M = compile_spec(random_spec(rng, n))
    bases = list(enumerate_bases(M))
    I, other = rng.choice(bases), rng.choice(bases)
    A, B = I - other, other - I  # (I - A) ∪ B is the basis ``other``
    A_prime = frozenset(e for e in A if rng.random() < 0.5)
    Bp = lab.downsize(I, A, B, A_prime, M)
    assert Bp <= B and len(Bp) == len(A_prime) and M.is_independent((I - A_prime) | Bp)


def test_unicolor_examples():
    U6 = compile_spec(Uniform(6, 3))
    pair = lab.unicolor_exchange(U6, [0] * 6, {0, 1, 2}, {3, 4, 5})
    assert len(pair.a_side) == 3
    w = [1, 1, 0, 0, 1, 1]
    pair = lab.unicolor_exchange(U6, w, {0, 1, 2}, {3, 4, 5})
    assert pair.a_side and len(pair.a_side) == len(pair.b_side)
    assert min(w[a] for a in pair.a_side) >= max(w[b] for b in pair.b_side)
    # k < mu: the bound is vacuous and any valid pair is fine
    pair = lab.unicolor_exchange(compile_spec(Uniform(2, 1)), [1, -1], {0}, {1})
    assert len(pair.a_side) == len(pair.b_side)


@given(seed=seeds, n=st.integers(2, 12), delta=st.integers(0, 2))
def test_unicolor_corollary_properties(seed, n, delta):
    rng = rng_for(seed)
    M, A, B = _pair_inputs(rng, n)
    w = [rng.randint(-delta, delta) for _ in range(n)]
    pair = lab.unicolor_exchange(M, w, A, B)
    Ap, Bp = pair.a_side, pair.b_side
    assert Ap <= A and Bp <= B and len(Ap) == len(Bp)
    assert M.is_independent((A - Ap) | Bp)
    assert len({w[a] for a in Ap}) <= 1 and len({w[b] for b in Bp}) <= 1
    if Ap:
        assert min(w[a] for a in Ap) >= max(w[b] for b in Bp)
    k, mu = len(A), abs(sum(w[a] for a in A) - sum(w[b] for b in B))
    d = max((abs(w[e]) for e in A | B), default=0)
    assert len(Ap) >= F(k - mu, (2 * d + 1) ** 4)


def test_rescue_below_threshold():
    with pytest.raises(TheoremInapplicable):
        lab.one_dim_rescue(compile_spec(Uniform(10, 3)), [1] * 10, [0, 1, 2], [3, 4, 5])


def test_rescue_zero_weights():
    U6 = compile_spec(Uniform(6, 3))
    C = lab.one_dim_rescue(U6, [0] * 6, {0, 1, 2}, {3, 4, 5})
    assert C != {0, 1, 2} and len(C) == 3


@pytest.mark.parametrize("kind", ["uniform", "partition"])
def test_rescue_two_classes_at_threshold(kind):
    k = 244
    n = 2 * k
    spec = Uniform(n, k) if kind == "uniform" else Partition([[i, i + k] for i in range(k)], [1] * k)
    M = compile_spec(spec)
    A, B = set(range(k)), set(range(k, n))
    w = [1 if i % 2 == 0 else -1 for i in range(k)] + [0] * k
    C = lab.one_dim_rescue(M, w, A, B)
    assert C != A and len(C) == k and M.is_independent(C)
    assert sum(w[e] for e in C) == sum(w[e] for e in A)


def test_rescue_p_zero_shortcut():
    k = 250
    M = compile_spec(Uniform(2 * k, k))
    w = [1] * (2 * k)
    C = lab.one_dim_rescue(M, w, set(range(k)), set(range(k, 2 * k)))
    assert len(C) == k and C != set(range(k))


def test_min_symdiff_examples():
    M = compile_spec(C4)
    W = WeightMatrix.from_rows([[1, 0, 0, 0]])
    assert lab.min_symdiff_exact(M, W, {1, 2, 3}, {0, 1, 2}).observed == 2
    assert lab.min_symdiff_exact(M, W, {0, 1, 2}, {0, 1, 2}).observed == 0


def test_sensitivity_table_matches_pairwise():
    M = compile_spec(Graphic(4, list(itertools.combinations(range(4), 2))))
    W = WeightMatrix.from_rows([[1, 0, -1, 1, 0, 0], [0, 1, 1, 0, -1, 0]])
    table = lab.sensitivity_table(M, W)
    bases = list(enumerate_bases(M))
    worst = max(lab.min_symdiff_exact(M, W, A, B).observed for A in bases for B in bases)
    assert table.observed == worst and table.passed and table.detail["pairs"] == len(bases) ** 2


def test_proximity_examples():
    U3 = compile_spec(Uniform(3, 1))
    W = WeightMatrix.from_rows([[0, 1, 2]])
    observed = {lab.proximity_exact(U3, W, [1], seed=s).observed for s in range(10)}
    assert observed == {0, 2}
    rep = lab.proximity_exact(U3, W, [7])
    assert rep.vacuous and rep.passed


def test_catalog_is_versioned_and_bounded():
    cat = small_catalog()
    assert len({e.ident for e in cat}) == len(cat)
    assert all(e.n <= 14 for e in cat)
    assert small_catalog() == cat


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_sensitivity_lower_bound(n):
    inst = lab.lower_bound_instance("sensitivity", n)
    bases = lab.common_bases(inst)
    assert len(bases) == 2 and not bases[0] & bases[1]
    assert all(len(B) == n // 2 for B in bases)
    assert sorted(sum(inst.weights[e] for e in B) for B in bases) == [0, 1]
    assert lab.verify_lower_bound(inst).observed == n


@pytest.mark.parametrize("n", [8, 12])
def test_proximity_lower_bound(n):
    rep = lab.verify_lower_bound(lab.lower_bound_instance("proximity", n))
    assert rep.passed and rep.observed == F(3 * n, 4)


def test_lower_bound_parity():
    with pytest.raises(SpecificationError):
        lab.lower_bound_instance("sensitivity", 3)
    with pytest.raises(SpecificationError):
        lab.lower_bound_instance("proximity", 6)
