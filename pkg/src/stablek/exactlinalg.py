"""Exact dense linear algebra over prime fields and over the integers.

Matrices over F_p are stored as read-only ``int64`` numpy arrays with entries
in ``[0, p)``.  Integer matrices use Python ints so Smith normal form never
overflows.
"""

from __future__ import annotations

import fractions
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class FpMatrix:
    """A dense matrix over F_p.  Immutable after construction."""

    __slots__ = ("p", "data", "_hash")

    def __init__(self, p: int, data, *, _trusted: bool = False):
        if not _trusted:
            if not is_prime(p):
                raise ValueError(f"modulus {p} is not prime")
            arr = np.array(data, dtype=np.int64)
            if arr.ndim == 1 and arr.size == 0:
                arr = arr.reshape(0, 0)
            if arr.ndim != 2:
                raise ValueError("FpMatrix data must be two-dimensional")
            arr = arr % p
        else:
            arr = data
        self.p = p
        self.data = _frozen(arr)
        self._hash = None

    @classmethod
    def _wrap(cls, p: int, arr: np.ndarray) -> "FpMatrix":
        return cls(p, arr, _trusted=True)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls._wrap(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls._wrap(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.data.ravel())

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def _check(self, other: "FpMatrix") -> None:
        if self.p != other.p:
            raise ValueError("moduli differ")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix._wrap(self.p, (self.data @ other.data) % self.p)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix._wrap(self.p, (self.data + other.data) % self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix._wrap(self.p, (self.data - other.data) % self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix._wrap(self.p, (-self.data) % self.p)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix._wrap(self.p, (self.data * (c % self.p)) % self.p)

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix._wrap(self.p, np.ascontiguousarray(self.data.T))

    def is_zero(self) -> bool:
        return not self.data.any()

    def rank(self) -> int:
        return rank_array(self.data, self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.shape == other.shape
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.shape, self.data.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"

    @staticmethod
    def hstack(p: int, blocks: Sequence["FpMatrix"], rows: int | None = None) -> "FpMatrix":
        if not blocks:
            return FpMatrix.zeros(p, rows or 0, 0)
        return FpMatrix._wrap(p, np.hstack([b.data for b in blocks]))

    @staticmethod
    def vstack(p: int, blocks: Sequence["FpMatrix"], cols: int | None = None) -> "FpMatrix":
        if not blocks:
            return FpMatrix.zeros(p, 0, cols or 0)
        return FpMatrix._wrap(p, np.vstack([b.data for b in blocks]))


# ---------------------------------------------------------------------------
# array-level kernels (used throughout the package)


def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form of ``a`` mod p and its pivot columns."""
    r = np.array(a, dtype=np.int64) % p
    nrows, ncols = r.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = pow(int(r[row, col]), -1, p)
        if inv != 1:
            r[row] = (r[row] * inv) % p
        factors = r[:, col].copy()
        factors[row] = 0
        if factors.any():
            r = (r - np.outer(factors, r[row])) % p
        pivots.append(col)
        row += 1
    return r, tuple(pivots)


def rank_array(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref_array(a, p)[1])


def row_basis_array(a: np.ndarray, p: int) -> np.ndarray:
    """Echelonized basis (as rows) of the row space of ``a``."""
    if a.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    r, piv = rref_array(a, p)
    return r[: len(piv)]


def nullspace_array(a: np.ndarray, p: int) -> np.ndarray:
    """Echelonized basis (as rows) of ``{x : a @ x = 0}``."""
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    r, piv = rref_array(a, p)
    free = [c for c in range(ncols) if c not in piv]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = (-r[i, f]) % p
    return row_basis_array(basis, p)


def left_nullspace_array(a: np.ndarray, p: int) -> np.ndarray:
    """Echelonized basis (as rows) of ``{y : y @ a = 0}``."""
    return nullspace_array(np.ascontiguousarray(a.T), p)


def solve_array(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x = b`` mod p, or None."""
    n = a.shape[1]
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    aug = np.hstack([a, b]) if a.shape[0] else np.zeros((0, n + b.shape[1]), dtype=np.int64)
    if aug.shape[0] == 0:
        return np.zeros((n, b.shape[1]), dtype=np.int64)
    r, piv = rref_array(aug, p)
    if piv and piv[-1] >= n:
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = r[i, n:]
    return x


def solve_left_array(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution ``y`` of ``y @ a = b`` mod p, or None."""
    x = solve_array(np.ascontiguousarray(a.T), np.ascontiguousarray(np.atleast_2d(b).T), p)
    return None if x is None else np.ascontiguousarray(x.T)


def inverse_array(a: np.ndarray, p: int) -> np.ndarray | None:
    n = a.shape[0]
    if a.shape != (n, n):
        return None
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    r, piv = rref_array(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != tuple(range(n)):
        return None
    return np.ascontiguousarray(r[:, n:])


def in_row_span_array(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis.shape[0] == 0:
        return not (np.asarray(v) % p).any()
    return solve_left_array(basis, v, p) is not None


# ---------------------------------------------------------------------------
# public F_p operations


def rref(m: FpMatrix) -> tuple[FpMatrix, tuple[int, ...], int]:
    """Reduced row echelon form, pivot columns and rank."""
    r, piv = rref_array(m.data, m.p)
    return FpMatrix._wrap(m.p, r), piv, len(piv)


@dataclass(frozen=True)
class Solution:
    """A particular solution plus a basis (rows) of the homogeneous solutions."""

    particular: FpMatrix
    nullspace: FpMatrix


def solve(a: FpMatrix, b: FpMatrix) -> Solution | None:
    """Solve ``a @ x = b``.  Returns None when there is no solution."""
    if a.rows != b.rows:
        raise ValueError(f"dimension mismatch: a has {a.rows} rows, b has {b.rows}")
    if a.p != b.p:
        raise ValueError("moduli differ")
    x = solve_array(a.data, b.data, a.p)
    if x is None:
        return None
    return Solution(FpMatrix._wrap(a.p, x), nullspace_basis(a))


def nullspace_basis(m: FpMatrix) -> FpMatrix:
    """Rows form an echelonized basis of ``ker(m)`` (column convention)."""
    return FpMatrix._wrap(m.p, nullspace_array(m.data, m.p))


def image_basis(m: FpMatrix) -> FpMatrix:
    """Rows form an echelonized basis of the column space of ``m``."""
    return FpMatrix._wrap(m.p, row_basis_array(np.ascontiguousarray(m.data.T), m.p))


# ---------------------------------------------------------------------------
# integers


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("IntMatrix entries do not match its dimensions")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        ent = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(ent[0]) if ent else 0
        return cls(len(ent), cols, ent)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def smith_normal_form(m: IntMatrix) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Invariant factors ``d`` and unimodular ``u``, ``v`` with ``u m v`` diagonal.

    Only the nonzero diagonal entries are returned in ``d``; they satisfy
    d[0] | d[1] | ... and are positive.
    """
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = _identity(r)
    v = _identity(c)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, r):
                    if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best][t])):
                        best = i
                swap_rows(t, best)
                bestc = None
                for j in range(t, c):
                    if a[t][j] and (bestc is None or abs(a[t][j]) < abs(a[t][bestc])):
                        bestc = j
                swap_cols(t, bestc)
                continue
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return [a[i][i] for i in range(t)], u, v


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank plus cyclic torsion factors (each > 1, dividing the next)."""

    rank: int
    torsion: tuple[int, ...]

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def factors(self) -> list[int]:
        """Invariant factors with 0 standing for a copy of Z."""
        return list(self.torsion) + [0] * self.rank

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        return " ⊕ ".join(parts) if parts else "0"


def cokernel_presentation(relations: IntMatrix, ngens: int) -> AbelianGroup:
    """Structure of Z^ngens modulo the row span of ``relations``."""
    if relations.rows and relations.cols != ngens:
        raise ValueError("relations must have one column per generator")
    d, _, _ = smith_normal_form(relations) if relations.rows else ([], None, None)
    return AbelianGroup(ngens - len(d), tuple(x for x in d if x != 1))


def row_lattice_solve(relations: IntMatrix, w: Sequence[int]) -> list[int] | None:
    """Integer coefficients ``z`` with ``z @ relations == w``, or None."""
    n = len(w)
    if relations.rows == 0:
        return [] if not any(w) else None
    d, u, v = smith_normal_form(relations)
    wv = [sum(w[k] * v[k][j] for k in range(n)) for j in range(n)]
    t = [0] * relations.rows
    for j in range(n):
        if j < len(d):
            if wv[j] % d[j]:
                return None
            t[j] = wv[j] // d[j]
        elif wv[j]:
            return None
    z = [sum(t[i] * u[i][k] for i in range(relations.rows)) for k in range(relations.rows)]
    return z


def integer_left_kernel(m: IntMatrix) -> list[list[int]]:
    """A Z-basis of ``{y : y @ m == 0}``."""
    if m.rows == 0:
        return []
    d, u, _ = smith_normal_form(m)
    return [list(u[i]) for i in range(len(d), m.rows)]


def integer_row_basis(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """A Z-basis of the lattice spanned by ``rows`` (nonzero rows of a Hermite-like form)."""
    if not rows:
        return []
    m = IntMatrix.from_rows(rows, ncols)
    d, u, v = smith_normal_form(m)
    # rows of diag(d) @ v^{-1} span the same lattice as m.
    vinv = _unimodular_inverse(v)
    return [[d[i] * vinv[i][j] for j in range(ncols)] for i in range(len(d))]


def _unimodular_inverse(v: list[list[int]]) -> list[list[int]]:
    n = len(v)
    a = [[fractions.Fraction(x) for x in row] + [fractions.Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(v)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = [[int(x) for x in row[n:]] for row in a]
    return out


def matmul_int(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    return _matmul(a, b)
