from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablek import algebra as A
from stablek.decomp import (
    endomorphism_algebra,
    enumerate_indecomposables,
    is_indecomposable,
    is_isomorphic,
    krull_schmidt,
)
from stablek.exactlinalg import inverse_array, rank_array
from stablek.module import Module, direct_sum, regular_module, simple_trivial, truncated

X4 = A.trunc_poly(2, 4)


def _conjugate(m, p_mat):
    """The same module written in a new basis (rows of p_mat)."""
    inv = inverse_array(p_mat, m.p)
    return Module(m.algebra, [(p_mat @ a @ inv) % m.p for a in m.mats])


def _jordan_type(m):
    """Block sizes of x acting on an F_p[x]/x^n module, from the rank sequence."""
    x = m.mats[m.algebra.basis_labels.index("x")]
    ranks, cur = [m.dim], np.eye(m.dim, dtype=np.int64)
    for _ in range(m.algebra.dim):
        cur = cur @ x % m.p
        ranks.append(rank_array(cur, m.p))
    ranks.append(0)
    # number of blocks of size >= k is r_{k-1} - r_k
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    return Counter({k: at_least[k - 1] - at_least[k] for k in range(1, len(at_least)) if at_least[k - 1] - at_least[k]})


@st.composite
def x4_modules(draw):
    sizes = draw(st.lists(st.integers(1, 4), min_size=1, max_size=3))
    m = direct_sum([truncated(X4, s) for s in sizes]).module
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    while True:
        p_mat = rng.integers(0, 2, size=(m.dim, m.dim))
        if rank_array(p_mat, 2) == m.dim:
            return sizes, _conjugate(m, p_mat)


@settings(max_examples=40, deadline=None)
@given(x4_modules())
def test_krull_schmidt_matches_jordan_type(data):
    sizes, m = data
    dec = krull_schmidt(m)
    found = Counter()
    for piece, mult in dec.summands:
        assert is_indecomposable(piece)
        found[piece.dim] += mult
    assert found == Counter(sizes) == _jordan_type(m)
    # the decomposition isomorphisms are mutually inverse
    assert np.array_equal((dec.from_sum @ dec.to_sum).matrix, np.eye(m.dim, dtype=np.int64))


@settings(max_examples=40, deadline=None)
@given(x4_modules(), x4_modules())
def test_is_isomorphic_matches_jordan_type(a, b):
    _, m = a
    _, n = b
    iso = is_isomorphic(m, n)
    assert (iso is not None) == (_jordan_type(m) == _jordan_type(n))
    if iso is not None:
        assert iso.is_iso()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_census_of_truncated_polynomials(n):
    e = enumerate_indecomposables(A.trunc_poly(2, n), n)
    assert sorted(m.dim for m in e.modules) == list(range(1, n + 1))
    assert not e.possibly_incomplete
    assert [m.name for m in e.modules] == [f"I{i}" for i in range(1, n + 1)]


def test_census_over_odd_prime():
    e = enumerate_indecomposables(A.trunc_poly(3, 3), 3)
    assert sorted(m.dim for m in e.modules) == [1, 2, 3]


@pytest.mark.parametrize("preset", [("exterior", 2, 2), ("square_zero", 2, 2)])
def test_census_of_radical_square_zero_types(preset):
    # one simple, three dim-2 modules (one per point of P^1(F_2)), and the two dim-3 string modules
    e = enumerate_indecomposables(A.preset(*preset), 3)
    assert sorted(m.dim for m in e.modules) == [1, 2, 2, 2, 3, 3]
    mods = e.modules
    for i, m in enumerate(mods):
        for n in mods[i + 1:]:
            assert is_isomorphic(m, n) is None


def test_endomorphism_algebra_is_local_for_indecomposables():
    for i in range(1, 5):
        end, _ = endomorphism_algebra(truncated(X4, i))
        assert end.dim == i
        assert A.is_local(end)
    k = simple_trivial(X4)
    end, _ = endomorphism_algebra(direct_sum([k, k]).module)
    assert end.dim == 4 and not A.is_local(end)


def test_krull_schmidt_with_catalog():
    catalog = enumerate_indecomposables(X4, 4).modules
    m = direct_sum([truncated(X4, 2), truncated(X4, 2), regular_module(X4)]).module
    dec = krull_schmidt(m, catalog=catalog)
    assert sorted((piece.name, mult) for piece, mult in dec.summands) == [("I2", 2), ("I4", 1)]
    with pytest.raises(LookupError):
        krull_schmidt(m, catalog=catalog[:1])
