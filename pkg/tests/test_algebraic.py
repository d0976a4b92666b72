import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import rng_for, seeds
from exactbase.algebraic import Representation, exact_basis_1d, generating_poly, representation
from exactbase.catalog import random_linear
from exactbase.errors import CapabilityError, SpecificationError
from exactbase.matroid import Graphic, Linear, Uniform, compile_spec, enumerate_bases

TRIANGLE = Graphic(3, [(0, 1), (1, 2), (0, 2)])
K4 = Graphic(4, list(itertools.combinations(range(4), 2)))


def test_triangle_support():
    assert generating_poly(representation(TRIANGLE), [0, 1, 1]).support() == [1, 2]


@pytest.mark.parametrize("seed", range(5))
def test_k4_single_support_point(seed):
    poly = generating_poly(representation(K4), [1] * 6, seed=seed)
    assert poly.support() == [3] and poly.coefficient(3) != 0


def test_unique_basis_monomial():
    rep = representation(Linear([[1, 2], [0, 3]]))
    assert generating_poly(rep, [2, -1]).support() == [1]
    assert exact_basis_1d(rep, [2, -1], 1) == {0, 1}


def test_exact_basis_examples():
    rep = representation(TRIANGLE)
    assert exact_basis_1d(rep, [0, 1, 1], 2) == {1, 2}
    assert exact_basis_1d(rep, [0, 1, 1], 0) is None
    assert exact_basis_1d(rep, [0, 1, 1], 1) in ({0, 1}, {0, 2})


def test_errors():
    with pytest.raises(SpecificationError):
        generating_poly(Representation(((1, 2), (2, 4)), 2), [0, 0])
    with pytest.raises(CapabilityError):
        representation(Uniform(3, 2))


def test_prime_field_matroid():
    # over GF(5) absence is only probabilistic, so check soundness and that something is found
    spec = Linear([[1, 0, 1, 1], [0, 1, 1, 2]], 5)
    rep = representation(spec)
    w = [0, 1, 1, -1]
    M = compile_spec(spec)
    weights = {sum(w[e] for e in B) for B in enumerate_bases(M)}
    found = set()
    for beta in range(-3, 4):
        B = exact_basis_1d(rep, w, beta, retries=5)
        if B is not None:
            assert M.is_basis(B) and sum(w[e] for e in B) == beta
            found.add(beta)
    assert found and found <= weights


def test_deterministic_given_seed():
    rng = rng_for(3)
    spec = random_linear(rng, 8, rows=4)
    w = [rng.randint(-2, 2) for _ in range(8)]
    a = generating_poly(representation(spec), w, seed=9)
    b = generating_poly(representation(spec), w, seed=9)
    assert a == b


@given(seed=seeds, n=st.integers(1, 10))
def test_support_and_verdicts(seed, n):
    rng = rng_for(seed)
    spec = random_linear(rng, n, rows=rng.randint(1, min(5, n)))
    delta = rng.choice((1, 2))
    w = [rng.randint(-delta, delta) for _ in range(n)]
    rep = representation(spec)
    M = compile_spec(spec)
    weights = {sum(w[e] for e in B) for B in enumerate_bases(M)}
    poly = generating_poly(rep, w, seed=seed)
    assert max(poly.coefficients, default=0) <= 2 * delta * rep.rank
    assert set(poly.support()) <= weights
    for beta in sorted(weights)[:2]:
        B = exact_basis_1d(rep, w, beta, seed=seed)
        assert B is not None and M.is_basis(B) and sum(w[e] for e in B) == beta
