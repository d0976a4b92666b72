import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import rng_for, seeds
from exactbase.catalog import KINDS, random_spec
from exactbase.errors import EnumerationOverflow, SpecificationError
from exactbase.matroid import (Contraction, DirectSum, Graphic, Linear, Matroid, Partition, Restriction,
                               Transversal, Uniform, check_axioms, compile_spec, enumerate_bases, from_mask,
                               rank_table, to_mask)

TRIANGLE = Graphic(3, [(0, 1), (1, 2), (0, 2)])
K4 = Graphic(4, list(itertools.combinations(range(4), 2)))


def test_compile_examples():
    assert not compile_spec(Uniform(4, 2)).is_independent({0, 1, 2})
    assert compile_spec(TRIANGLE).is_independent({0, 1})
    assert not compile_spec(Linear([[1, 0, 1], [0, 1, 1]])).is_independent({0, 1, 2})


def test_rank_examples():
    assert compile_spec(Uniform(4, 2)).rank({0}) == 1
    assert compile_spec(TRIANGLE).rank() == 2
    assert compile_spec(Partition([[0, 1], [2, 3]], [1, 1])).rank({0, 1}) == 1


def test_greedy_examples():
    assert compile_spec(Uniform(4, 2)).greedy_basis() == {0, 1}
    assert compile_spec(TRIANGLE).greedy_basis() == {0, 1}
    assert compile_spec(DirectSum([Uniform(2, 1), Uniform(2, 1)])).greedy_basis() == {0, 2}


def test_enumerate_examples():
    assert list(enumerate_bases(compile_spec(Uniform(3, 1)))) == [{0}, {1}, {2}]
    assert sorted(map(sorted, enumerate_bases(compile_spec(TRIANGLE)))) == [[0, 1], [0, 2], [1, 2]]
    assert sum(1 for _ in enumerate_bases(compile_spec(K4))) == 16


def test_enumerate_cap():
    with pytest.raises(EnumerationOverflow):
        list(enumerate_bases(compile_spec(K4), cap=5))


def test_axiom_examples():
    assert check_axioms(compile_spec(Uniform(4, 2)))
    allowed = {frozenset(s) for s in [(), (0,), (1,), (0, 1), (2, 3)]}
    verdict = check_axioms(Matroid.from_oracle(4, lambda S: S in allowed))
    assert not verdict and verdict.axiom == "M2"
    small = {frozenset(s) for s in [(), (0,), (1,)]}
    assert check_axioms(Matroid.from_oracle(2, lambda S: S in small))


def test_empty_and_rank_zero():
    M = compile_spec(Uniform(0, 0))
    assert M.rank() == 0 and list(enumerate_bases(M)) == [frozenset()]
    M = compile_spec(Uniform(3, 0))
    assert M.greedy_basis() == frozenset() and list(enumerate_bases(M)) == [frozenset()]


@pytest.mark.parametrize("spec, fragment", [
    (Partition([[0, 1], [1, 2]], [1, 1]), "overlap"),
    (Linear([[1, 0], [0, 1, 1]], None, 2), "columns"),
    (Contraction(Uniform(3, 1), [0, 1]), "dependent"),
    (Graphic(2, [(0, 5)]), "endpoint"),
    (Transversal(1, [[3]]), "adjacent"),
])
def test_malformed_specs(spec, fragment):
    with pytest.raises(SpecificationError, match=fragment):
        compile_spec(spec)


def test_mask_roundtrip():
    assert from_mask(to_mask({0, 3, 5})) == {0, 3, 5}


@given(seed=seeds, n=st.integers(0, 9), k=st.integers(0, len(KINDS) - 1))
def test_axioms_hold_for_generated_specs(seed, n, k):
    M = compile_spec(random_spec(rng_for(seed), n, KINDS[k]))
    assert check_axioms(M)


@given(seed=seeds, n=st.integers(0, 8))
def test_rank_monotone_submodular(seed, n):
    M = compile_spec(random_spec(rng_for(seed), n))
    r = rank_table(M)
    for S in range(1 << n):
        for T in range(1 << n):
            assert r[S] + r[T] >= r[S | T] + r[S & T]
            if S & T == S:
                assert r[S] <= r[T]


@given(seed=seeds, n=st.integers(0, 12))
def test_greedy_size_is_rank_for_any_order(seed, n):
    rng = rng_for(seed)
    M = compile_spec(random_spec(rng, n))
    order = list(range(n))
    rng.shuffle(order)
    B = M.greedy_basis(order)
    assert len(B) == M.rank() and M.is_basis(B)


def test_minors_reindex():
    base = Uniform(5, 3)
    R = compile_spec(Restriction(base, [1, 3, 4]))
    assert R.n == 3 and R.rank() == 3
    C = compile_spec(Contraction(base, [0]))
    assert C.n == 4 and C.rank() == 2 and not C.is_independent({0, 1, 2})


def test_oracle_calls_counted():
    M = compile_spec(Uniform(4, 2))
    before = M.calls
    M.is_independent({0})
    assert M.calls == before + 1
