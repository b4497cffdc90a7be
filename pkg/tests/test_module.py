from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablek import algebra as A
from stablek.errors import AlgebraMismatch, CapExceeded, InvalidModule
from stablek.exactlinalg import rank_array
from stablek.formats import ParseError, module_from_text, module_to_text, parse_element
from stablek.module import (
    Module,
    all_homs,
    base_change,
    cokernel,
    coregular,
    direct_sum,
    dual,
    hom_space,
    identity,
    image,
    induce,
    kernel,
    left_free_basis,
    pullback,
    pushout,
    quotient,
    regular_module,
    restrict,
    simple_trivial,
    submodule,
    submodules,
    truncated,
    zero_module,
)

X4 = A.trunc_poly(2, 4)


def _is_hom(m, n, mat):
    return all(np.array_equal(m.mats[a] @ mat % m.p, mat @ n.mats[a] % m.p) for a in range(m.algebra.dim))


def _brute_hom_count(m, n):
    count = 0
    for bits in np.ndindex(*(m.p,) * (m.dim * n.dim)):
        if _is_hom(m, n, np.array(bits, dtype=np.int64).reshape(m.dim, n.dim)):
            count += 1
    return count


@pytest.mark.parametrize("i,j", [(1, 1), (1, 3), (2, 3), (3, 2), (2, 2)])
def test_hom_space_matches_brute_force(i, j):
    alg = A.trunc_poly(2, 3)
    m, n = truncated(alg, i), truncated(alg, j)
    basis = hom_space(m, n)
    assert len(basis) == min(i, j)
    assert 2 ** len(basis) == _brute_hom_count(m, n)
    assert all(_is_hom(m, n, h.matrix) for h in basis)


def test_invalid_module_rejected():
    with pytest.raises(InvalidModule):
        Module(A.trunc_poly(2, 2), [np.eye(2), np.eye(2)])
    with pytest.raises(InvalidModule):
        Module(A.trunc_poly(2, 2), [np.eye(2)])


def test_regular_coregular_and_simple():
    reg = regular_module(X4)
    assert reg.dim == 4
    assert coregular(X4).dim == 4
    k = simple_trivial(X4)
    assert k.dim == 1 and not k.mats[1].any()
    assert zero_module(X4).dim == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_kernel_image_cokernel_dimensions(i, j, data):
    m, n = truncated(X4, i), truncated(X4, j)
    basis = hom_space(m, n)
    coeffs = data.draw(st.lists(st.integers(0, 1), min_size=len(basis), max_size=len(basis)))
    mat = sum((c * b.matrix for c, b in zip(coeffs, basis)), np.zeros((i, j), dtype=np.int64)) % 2
    f = [h for h in all_homs(m, n) if np.array_equal(h.matrix, mat)][0]
    k, inc = kernel(f)
    im, onto, into = image(f)
    c, proj = cokernel(f)
    r = rank_array(f.matrix, 2)
    assert k.dim == i - r and im.dim == r and c.dim == j - r
    assert not (f @ inc).matrix.any()
    assert np.array_equal((into @ onto).matrix, f.matrix)
    assert not (proj @ f).matrix.any()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.data())
def test_composition_of_homs_is_a_hom(i, j, l, data):
    alg = A.trunc_poly(2, 3)
    a, b, c = truncated(alg, i), truncated(alg, j), truncated(alg, l)
    f = data.draw(st.sampled_from(list(all_homs(a, b))))
    g = data.draw(st.sampled_from(list(all_homs(b, c))))
    gf = g @ f
    assert gf.source is a and gf.target is c
    assert np.array_equal(gf.matrix, f.matrix @ g.matrix % 2)
    assert _is_hom(a, c, gf.matrix)


def test_direct_sum_injections_and_projections():
    ms = [truncated(X4, 1), truncated(X4, 3)]
    ds = direct_sum(ms)
    assert ds.module.dim == 4
    for idx, (inj, pr) in enumerate(zip(ds.injections, ds.projections)):
        assert (pr @ inj).is_iso()
        other = ds.projections[1 - idx]
        assert not (other @ inj).matrix.any()
    with pytest.raises(AlgebraMismatch):
        direct_sum([truncated(X4, 1), simple_trivial(A.trunc_poly(2, 2))])


def test_pushout_and_pullback_dimensions():
    k = truncated(X4, 1)
    m2 = truncated(X4, 2)
    f = [h for h in all_homs(k, m2) if h.is_injective()][0]
    po = pushout(f, f)
    assert po.module.dim == 3
    assert np.array_equal((po.from_y @ f).matrix, (po.from_z @ f).matrix)
    g = [h for h in all_homs(m2, k) if h.is_surjective()][0]
    pb = pullback(g, g)
    assert pb.module.dim == 3
    assert np.array_equal((g @ pb.to_y).matrix, (g @ pb.to_w).matrix)


def test_submodule_lattice_of_uniserial_module():
    # a uniserial module has exactly dim + 1 submodules
    for i in range(1, 5):
        assert len(submodules(truncated(X4, i))) == i + 1
    k = simple_trivial(X4)
    kk = direct_sum([k, k]).module
    assert len(submodules(kk)) == 5  # 0, three lines, whole
    with pytest.raises(CapExceeded):
        submodules(direct_sum([k, k, k, k]).module, cap=5)


def test_quotient_and_submodule():
    reg = regular_module(X4)
    sub, inc = submodule(reg, [parse_element(X4, "x^2"), parse_element(X4, "x^3")])
    q, proj = quotient(reg, inc.matrix)
    assert sub.dim == 2 and q.dim == 2
    assert not (proj @ inc).matrix.any()


def test_dual_dimensions_and_double_dual():
    for i in range(1, 5):
        m = truncated(X4, i)
        assert dual(m).dim == i
        assert dual(dual(m)).dim == i


def test_base_change_restrict_and_induce():
    b = X4
    c, phi = A.quotient_by_ideal(b, A.ideal_generated(b, [parse_element(b, "x^2")]))
    assert [base_change(truncated(b, i), phi).dim for i in range(1, 5)] == [1, 2, 2, 2]
    n = regular_module(c)
    assert restrict(n, phi).dim == 2
    sub, inc = A.subalgebra_generated(b, [parse_element(b, "x^2")])
    basis = left_free_basis(inc)
    assert len(basis) == 2
    assert induce(regular_module(sub), inc, basis).dim == 4
    assert induce(simple_trivial(sub), inc, basis).dim == 2
    with pytest.raises(AlgebraMismatch):
        restrict(truncated(b, 1), phi)


def test_identity_is_neutral():
    m = truncated(X4, 3)
    for h in all_homs(m, truncated(X4, 2)):
        assert np.array_equal((h @ identity(m)).matrix, h.matrix)


def test_module_text_round_trip():
    m = truncated(X4, 3)
    back = module_from_text(X4, module_to_text(m))
    assert np.array_equal(back.mats, m.mats)
    with pytest.raises(ParseError):
        module_from_text(X4, "dim 1\naction 0\n1\n")
    with pytest.raises(ParseError):
        module_from_text(X4, "dim 1\naction 0\n1\naction 1\n1\naction 2\n0\naction 3\n0\n")
