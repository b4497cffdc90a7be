from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from stablek.exactlinalg import (
    AbelianGroup,
    FpMatrix,
    IntMatrix,
    cokernel_presentation,
    integer_left_kernel,
    inverse_array,
    matmul_int,
    nullspace_array,
    rank_array,
    rref_array,
    row_lattice_solve,
    smith_normal_form,
    solve_array,
)


@st.composite
def fp_matrices(draw, max_rows=4, max_cols=4, primes=(2, 3, 5)):
    p = draw(st.sampled_from(primes))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


@st.composite
def int_matrices(draw, max_rows=4, max_cols=4, bound=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c))
    return [vals[i * c:(i + 1) * c] for i in range(r)]


def _row_space_size(a, p):
    """Number of distinct vectors in the row space, by enumeration."""
    seen = set()
    for coeffs in itertools.product(range(p), repeat=a.shape[0]):
        seen.add(tuple((np.array(coeffs) @ a) % p))
    return len(seen)


def _kernel_size(a, p):
    return sum(1 for x in itertools.product(range(p), repeat=a.shape[1]) if not ((a @ np.array(x)) % p).any())


def _det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n, det = len(m), Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return int(det)


# ---------------------------------------------------------------------------
# F_p


@settings(max_examples=60, deadline=None)
@given(fp_matrices())
def test_rank_matches_row_space_size(pa):
    p, a = pa
    assert p ** rank_array(a, p) == _row_space_size(a, p)


@settings(max_examples=60, deadline=None)
@given(fp_matrices())
def test_nullspace_matches_brute_force(pa):
    p, a = pa
    ns = nullspace_array(a, p)
    assert not ((a @ ns.T) % p).any()
    assert p ** ns.shape[0] == _kernel_size(a, p)


@settings(max_examples=60, deadline=None)
@given(fp_matrices())
def test_rref_is_reduced_and_same_row_space(pa):
    p, a = pa
    r, piv = rref_array(a, p)
    for i, c in enumerate(piv):
        assert r[i, c] == 1
        assert np.count_nonzero(r[:, c]) == 1
    assert not r[len(piv):].any()
    assert rank_array(np.vstack([a, r]), p) == len(piv)


@settings(max_examples=60, deadline=None)
@given(fp_matrices(), st.data())
def test_solve_finds_solution_when_one_exists(pa, data):
    p, a = pa
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])))
    b = (a @ x0) % p
    x = solve_array(a, b, p)
    assert x is not None
    assert np.array_equal((a @ x[:, 0]) % p, b)


def test_solve_reports_inconsistency():
    a = np.array([[1, 1], [1, 1]])
    assert solve_array(a, np.array([0, 1]), 2) is None


@settings(max_examples=40, deadline=None)
@given(fp_matrices(max_rows=3, max_cols=3))
def test_inverse_exactly_when_full_rank(pa):
    p, a = pa
    if a.shape[0] != a.shape[1]:
        assert inverse_array(a, p) is None
        return
    inv = inverse_array(a, p)
    full = rank_array(a, p) == a.shape[0]
    assert (inv is not None) == full
    if full:
        assert np.array_equal((a @ inv) % p, np.eye(a.shape[0], dtype=np.int64))


def test_fpmatrix_is_immutable_and_reduces():
    m = FpMatrix(3, [[4, 5], [-1, 0]])
    assert m.tolist() == [[1, 2], [2, 0]]
    assert m.rank() == 2


# ---------------------------------------------------------------------------
# Smith normal form and abelian groups


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_smith_normal_form_certificate(rows):
    m = IntMatrix.from_rows(rows)
    d, u, v = smith_normal_form(m)
    diag = matmul_int(matmul_int(u, rows), v)
    for i, row in enumerate(diag):
        for j, x in enumerate(row):
            assert x == (d[i] if i == j and i < len(d) else 0)
    assert all(x > 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert abs(_det(u)) == 1 and abs(_det(v)) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_cokernel_order_is_absolute_determinant(rows):
    n = len(rows)
    g = cokernel_presentation(IntMatrix.from_rows(rows, n), n)
    det = _det(rows)
    if det == 0:
        assert g.rank > 0
    else:
        assert g.order == abs(det)


@settings(max_examples=60, deadline=None)
@given(int_matrices(), st.data())
def test_row_lattice_solve_certificate(rows, data):
    m = IntMatrix.from_rows(rows)
    z0 = data.draw(st.lists(st.integers(-4, 4), min_size=len(rows), max_size=len(rows)))
    w = [sum(z0[i] * rows[i][j] for i in range(len(rows))) for j in range(len(rows[0]))]
    z = row_lattice_solve(m, w)
    assert z is not None
    assert [sum(z[i] * rows[i][j] for i in range(len(rows))) for j in range(len(rows[0]))] == w


def test_row_lattice_solve_rejects_non_member():
    assert row_lattice_solve(IntMatrix.from_rows([[2, 0], [0, 3]]), [1, 0]) is None


@settings(max_examples=40, deadline=None)
@given(int_matrices())
def test_integer_left_kernel_annihilates(rows):
    for y in integer_left_kernel(IntMatrix.from_rows(rows)):
        assert all(sum(y[i] * rows[i][j] for i in range(len(rows))) == 0 for j in range(len(rows[0])))


def test_abelian_group_rendering():
    assert str(AbelianGroup(0, (2, 4))) == "Z/2 ⊕ Z/4"
    assert str(AbelianGroup(2, ())) == "Z^2"
    assert str(AbelianGroup(0, ())) == "0"
    assert AbelianGroup(1, (2,)).factors() == [2, 0]
    assert cokernel_presentation(IntMatrix.from_rows([[2, 0], [0, 4]]), 2).torsion == (2, 4)
    assert cokernel_presentation(IntMatrix.from_rows([[2, 4]]), 2) == AbelianGroup(1, (2,))
