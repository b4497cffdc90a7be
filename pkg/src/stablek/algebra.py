"""Finite-dimensional associative unital algebras over F_p.

Elements are coordinate vectors in the basis ``e_0, ..., e_{n-1}``.  The
structure tensor ``mul[i, j, k]`` is the coefficient of ``e_k`` in
``e_i * e_j``.  Linear maps act on row vectors: ``phi(x) = x @ matrix``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from dataclasses import field as dc_field

import numpy as np

from .errors import BadUnit, NonAssociative, NotCommutative, StableKError
from .exactlinalg import (
    AbelianGroup,
    FpMatrix,
    IntMatrix,
    inverse_array,
    is_prime,
    left_nullspace_array,
    rank_array,
    row_basis_array,
    smith_normal_form,
    solve_left_array,
    _unimodular_inverse,
)


class FiniteAlgebra:
    """An associative unital algebra given by structure constants."""

    def __init__(self, p: int, mul, unit, labels=None, name: str | None = None, *, check: bool = True):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        c = np.array(mul, dtype=np.int64) % p
        n = c.shape[0]
        if c.shape != (n, n, n) or n < 1:
            raise ValueError("structure tensor must have shape (n, n, n) with n >= 1")
        u = np.array(unit, dtype=np.int64).reshape(n) % p
        self.p = p
        self.dim = n
        self.mul = c
        self.mul.setflags(write=False)
        self.unit = u
        self.unit.setflags(write=False)
        self.basis_labels = list(labels) if labels is not None else [f"e{i}" for i in range(n)]
        if len(self.basis_labels) != n:
            raise ValueError("need one label per basis element")
        self.name = name or f"algebra(p={p}, dim={n})"
        # right_mats[j] = matrix of x -> x * e_j, left_mats[i] = matrix of x -> e_i * x
        self.right_mats = np.ascontiguousarray(np.transpose(c, (1, 0, 2)))
        self.left_mats = c
        if check:
            self._validate()

    def _validate(self) -> None:
        p, c = self.p, self.mul
        lhs = np.einsum("ijm,mkl->ijkl", c, c) % p  # (e_i e_j) e_k
        rhs = np.einsum("jkm,iml->ijkl", c, c) % p  # e_i (e_j e_k)
        bad = np.argwhere((lhs != rhs).any(axis=3))
        if bad.size:
            raise NonAssociative(*(int(x) for x in bad[0]))
        ul = np.einsum("i,ijk->jk", self.unit, c) % p
        ur = np.einsum("j,ijk->ik", self.unit, c) % p
        eye = np.eye(self.dim, dtype=np.int64)
        for i in range(self.dim):
            if not (np.array_equal(ul[i], eye[i]) and np.array_equal(ur[i], eye[i])):
                raise BadUnit(i)

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name})"

    # elements -----------------------------------------------------------

    def element(self, coords) -> np.ndarray:
        return np.array(coords, dtype=np.int64).reshape(self.dim) % self.p

    def basis_element(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def multiply(self, a, b) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(a), np.asarray(b), self.mul) % self.p

    def power(self, a, e: int) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(e):
            out = self.multiply(out, a)
        return out

    def right_mult(self, a) -> np.ndarray:
        """Matrix of ``x -> x * a`` on row vectors."""
        return np.einsum("j,ijk->ik", np.asarray(a), self.mul) % self.p

    def left_mult(self, a) -> np.ndarray:
        """Matrix of ``x -> a * x`` on row vectors."""
        return np.einsum("i,ijk->jk", np.asarray(a), self.mul) % self.p

    def is_commutative(self) -> bool:
        return np.array_equal(self.mul, np.transpose(self.mul, (1, 0, 2)))

    def is_unit_element(self, a) -> bool:
        return rank_array(self.right_mult(a), self.p) == self.dim

    def is_nilpotent_element(self, a) -> bool:
        return _nilpotent_matrix(self.right_mult(a), self.p)

    def format_element(self, a) -> str:
        terms = []
        for c, lab in zip(np.asarray(a) % self.p, self.basis_labels):
            if c == 0:
                continue
            terms.append(lab if c == 1 else f"{int(c)}*{lab}")
        return "+".join(terms) if terms else "0"

    def opposite(self) -> "FiniteAlgebra":
        return FiniteAlgebra(
            self.p, np.transpose(self.mul, (1, 0, 2)), self.unit, self.basis_labels,
            name=f"{self.name}^op", check=False,
        )

    def same_structure(self, other: "FiniteAlgebra") -> bool:
        return (
            self.p == other.p
            and self.dim == other.dim
            and np.array_equal(self.mul, other.mul)
            and np.array_equal(self.unit, other.unit)
        )

    def elements(self):
        """Iterate over all p^dim elements in lexicographic order."""
        for t in itertools.product(range(self.p), repeat=self.dim):
            yield np.array(t, dtype=np.int64)


def _nilpotent_matrix(m: np.ndarray, p: int) -> bool:
    n = m.shape[0]
    cur = m % p
    steps = 1
    while steps < n:
        cur = (cur @ cur) % p
        steps *= 2
    return not cur.any()


def from_structure_constants(p: int, mul, unit, labels=None, name: str | None = None) -> FiniteAlgebra:
    """Build and validate an algebra.  Raises NonAssociative or BadUnit."""
    return FiniteAlgebra(p, mul, unit, labels, name)


# ---------------------------------------------------------------------------
# presets

_LETTERS = "xyzw"


def _var_names(g: int) -> list[str]:
    return list(_LETTERS[:g]) if g <= len(_LETTERS) else [f"x{i + 1}" for i in range(g)]


def trunc_poly(p: int, n: int) -> FiniteAlgebra:
    """k[x]/x^n."""
    if n < 1:
        raise ValueError("trunc_poly needs n >= 1")
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n - i):
            c[i, j, i + j] = 1
    labels = ["1", "x"] + [f"x^{i}" for i in range(2, n)]
    return FiniteAlgebra(p, c, np.eye(n, dtype=np.int64)[0], labels[:n], name=f"trunc_poly({p},{n})")


def exterior(p: int, g: int) -> FiniteAlgebra:
    """Exterior algebra on g generators."""
    if g < 1:
        raise ValueError("exterior needs g >= 1")
    subsets = [s for r in range(g + 1) for s in itertools.combinations(range(g), r)]
    index = {s: i for i, s in enumerate(subsets)}
    n = len(subsets)
    c = np.zeros((n, n, n), dtype=np.int64)
    for s in subsets:
        for t in subsets:
            if set(s) & set(t):
                continue
            seq = list(s) + list(t)
            inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
            c[index[s], index[t], index[tuple(sorted(seq))]] = (-1) ** inversions
    names = _var_names(g)
    labels = ["".join(names[i] for i in s) or "1" for s in subsets]
    return FiniteAlgebra(p, c % p, np.eye(n, dtype=np.int64)[0], labels, name=f"exterior({p},{g})")


def field(p: int) -> FiniteAlgebra:
    return FiniteAlgebra(p, [[[1]]], [1], ["1"], name=f"field({p})")


def square_zero(p: int, g: int) -> FiniteAlgebra:
    """k[x_1..x_g]/(x_1..x_g)^2, a local algebra with radical square zero."""
    if g < 1:
        raise ValueError("square_zero needs g >= 1")
    n = g + 1
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        c[0, i, i] = 1
        c[i, 0, i] = 1
    labels = ["1"] + _var_names(g)
    return FiniteAlgebra(p, c, np.eye(n, dtype=np.int64)[0], labels, name=f"square_zero({p},{g})")


PRESETS = {
    "trunc_poly": (trunc_poly, 2),
    "exterior": (exterior, 2),
    "field": (field, 1),
    "square_zero": (square_zero, 2),
}


def preset(name: str, *params: int) -> FiniteAlgebra:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    fn, arity = PRESETS[name]
    if len(params) != arity:
        raise ValueError(f"preset {name} takes {arity} integer parameters")
    if not is_prime(params[0]):
        raise ValueError(f"{params[0]} is not prime")
    return fn(*(int(x) for x in params))


# ---------------------------------------------------------------------------
# morphisms and ideals


class AlgebraMorphism:
    """A unital algebra map; ``matrix`` has shape (source.dim, target.dim)."""

    def __init__(self, source: FiniteAlgebra, target: FiniteAlgebra, matrix, *, check: bool = True):
        if source.p != target.p:
            raise ValueError("algebras over different fields")
        m = np.array(matrix, dtype=np.int64).reshape(source.dim, target.dim) % source.p
        m.setflags(write=False)
        self.source, self.target, self.matrix = source, target, m
        if check:
            self._validate()
        self.surjective = rank_array(m, source.p) == target.dim

    def _validate(self) -> None:
        s, t, m, p = self.source, self.target, self.matrix, self.source.p
        if not np.array_equal((s.unit @ m) % p, t.unit):
            raise ValueError("morphism does not preserve the unit")
        img = np.einsum("ijk,kl->ijl", s.mul, m) % p
        prod = np.einsum("ia,jb,abl->ijl", m, m, t.mul) % p
        bad = np.argwhere((img != prod).any(axis=2))
        if bad.size:
            i, j = (int(x) for x in bad[0])
            raise ValueError(f"morphism does not preserve the product e_{i} * e_{j}")

    def __call__(self, x) -> np.ndarray:
        return (np.asarray(x) @ self.matrix) % self.source.p

    def fp_matrix(self) -> FpMatrix:
        return FpMatrix(self.source.p, self.matrix)

    def __repr__(self) -> str:
        return f"AlgebraMorphism({self.source.name} -> {self.target.name})"


def identity_morphism(alg: FiniteAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(alg, alg, np.eye(alg.dim, dtype=np.int64), check=False)


@dataclass(frozen=True, eq=False)
class Ideal:
    ambient: FiniteAlgebra
    basis: np.ndarray = dc_field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, x) -> bool:
        from .exactlinalg import in_row_span_array

        return in_row_span_array(self.basis, np.asarray(x) % self.ambient.p, self.ambient.p)

    def labels(self) -> list[str]:
        return [self.ambient.format_element(b) for b in self.basis]

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and self.ambient is other.ambient and np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash((id(self.ambient), self.basis.tobytes()))


def _span_closure(alg: FiniteAlgebra, rows: np.ndarray, left: bool, right: bool) -> np.ndarray:
    p = alg.p
    basis = row_basis_array(rows % p, p) if rows.shape[0] else np.zeros((0, alg.dim), dtype=np.int64)
    while True:
        new = [basis]
        for j in range(alg.dim):
            if right:
                new.append((basis @ alg.right_mats[j]) % p)
            if left:
                new.append((basis @ alg.left_mats[j]) % p)
        grown = row_basis_array(np.vstack(new), p)
        if grown.shape[0] == basis.shape[0]:
            return grown
        basis = grown


def ideal_generated(alg: FiniteAlgebra, elements) -> Ideal:
    rows = np.array(list(elements), dtype=np.int64).reshape(-1, alg.dim)
    return Ideal(alg, _span_closure(alg, rows, True, True))


def zero_ideal(alg: FiniteAlgebra) -> Ideal:
    return Ideal(alg, np.zeros((0, alg.dim), dtype=np.int64))


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    alg = a.ambient
    rows = [alg.multiply(x, y) for x in a.basis for y in b.basis]
    if not rows:
        return zero_ideal(alg)
    return Ideal(alg, row_basis_array(np.array(rows), alg.p))


def is_nilpotent_ideal(ideal: Ideal) -> bool:
    power = ideal
    for _ in range(ideal.ambient.dim + 1):
        if power.dim == 0:
            return True
        power = ideal_product(power, ideal)
    return power.dim == 0


def _trace_power_functional(alg: FiniteAlgebra, a: np.ndarray, i: int) -> int:
    """``Tr(A^(p^i)) / p^i mod p`` for the integer lift A of the right-regular matrix of a."""
    p = alg.p
    mod = p ** (i + 1)
    m = alg.right_mult(a) % mod
    e = p**i
    # entries stay below mod <= p * dim, so int64 products cannot overflow
    result = np.eye(alg.dim, dtype=np.int64)
    base = m.astype(np.int64)
    while e:
        if e & 1:
            result = (result.dot(base)) % mod
        base = (base.dot(base)) % mod
        e >>= 1
    tr = int(np.trace(result)) % mod
    if tr % (p**i):
        raise StableKError("trace functional not divisible; radical computation invariant broken")
    return (tr // p**i) % p


def jacobson_radical(alg: FiniteAlgebra) -> Ideal:
    """The largest nilpotent two-sided ideal.

    Uses the trace-functional filtration for algebras of matrices in
    characteristic p: start with the whole algebra and cut down by the
    kernels of ``a -> g_i(a * b)`` for ``i = 0 .. floor(log_p n)``.
    """
    cached = getattr(alg, "_radical", None)
    if cached is not None:
        return cached
    p, n = alg.p, alg.dim
    levels = 0
    while p ** (levels + 1) <= n:
        levels += 1
    basis = np.eye(n, dtype=np.int64)
    for i in range(levels + 1):
        if basis.shape[0] == 0:
            break
        g = np.zeros((basis.shape[0], n), dtype=np.int64)
        for k, b in enumerate(basis):
            for j in range(n):
                g[k, j] = _trace_power_functional(alg, alg.multiply(b, alg.basis_element(j)), i)
        coeffs = left_nullspace_array(g, p)
        basis = row_basis_array((coeffs @ basis) % p, p) if coeffs.shape[0] else np.zeros((0, n), dtype=np.int64)
    rad = Ideal(alg, basis)
    closed = _span_closure(alg, basis, True, True)
    if closed.shape[0] != basis.shape[0] or not is_nilpotent_ideal(rad):
        raise StableKError("radical computation produced a non-nilpotent or non-ideal subspace")
    alg._radical = rad
    return rad


def radical_power_series(alg: FiniteAlgebra) -> list[Ideal]:
    """[J, J^2, ..., 0] for the Jacobson radical J."""
    rad = jacobson_radical(alg)
    series = [rad]
    while series[-1].dim:
        series.append(ideal_product(series[-1], rad))
    return series


def is_local(alg: FiniteAlgebra) -> bool:
    """True iff alg / rad is the prime field."""
    return jacobson_radical(alg).dim == alg.dim - 1


# ---------------------------------------------------------------------------
# subalgebras and quotients


def subalgebra_generated(alg: FiniteAlgebra, elements) -> tuple[FiniteAlgebra, AlgebraMorphism]:
    """Smallest unital subalgebra containing ``elements`` with its inclusion."""
    p = alg.p
    rows = [alg.unit] + [np.asarray(e) % p for e in elements]
    basis = row_basis_array(np.array(rows, dtype=np.int64), p)
    while True:
        prods = [basis] + [np.array([alg.multiply(x, y) for x in basis for y in basis])]
        grown = row_basis_array(np.vstack(prods), p)
        if grown.shape[0] == basis.shape[0]:
            break
        basis = grown
    return _algebra_on_basis(alg, basis)


def _algebra_on_basis(alg: FiniteAlgebra, basis: np.ndarray) -> tuple[FiniteAlgebra, AlgebraMorphism]:
    p = alg.p
    d = basis.shape[0]
    c = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod = alg.multiply(basis[i], basis[j])
            coords = solve_left_array(basis, prod, p)
            if coords is None:
                raise StableKError("subspace is not closed under multiplication")
            c[i, j] = coords[0]
    unit = solve_left_array(basis, alg.unit, p)[0]
    labels = [alg.format_element(b) for b in basis]
    sub = FiniteAlgebra(p, c, unit, labels, name=f"sub({alg.name}; {', '.join(labels)})")
    return sub, AlgebraMorphism(sub, alg, basis)


def quotient_by_ideal(alg: FiniteAlgebra, ideal: Ideal) -> tuple[FiniteAlgebra, AlgebraMorphism]:
    """alg / ideal together with the projection."""
    p, n = alg.p, alg.dim
    if ideal.contains(alg.unit):
        raise ValueError("ideal contains the unit; the quotient would be zero")
    if ideal.dim == 0:
        return alg, identity_morphism(alg)
    from .exactlinalg import rref_array

    r, piv = rref_array(ideal.basis, p)
    keep = [j for j in range(n) if j not in piv]
    proj = np.zeros((n, len(keep)), dtype=np.int64)
    pos = {j: t for t, j in enumerate(keep)}
    for j in keep:
        proj[j, pos[j]] = 1
    for row, pc in enumerate(piv):
        for j in keep:
            proj[pc, pos[j]] = (-r[row, j]) % p
    d = len(keep)
    c = np.zeros((d, d, d), dtype=np.int64)
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            c[a, b] = (alg.mul[i, j] @ proj) % p
    unit = (alg.unit @ proj) % p
    labels = [alg.basis_labels[j] for j in keep]
    quot = FiniteAlgebra(p, c, unit, labels, name=f"{alg.name}/({', '.join(ideal.labels())})")
    return quot, AlgebraMorphism(alg, quot, proj)


def kernel_ideal(f: AlgebraMorphism) -> Ideal:
    basis = left_nullspace_array(f.matrix, f.source.p)
    return Ideal(f.source, row_basis_array(basis, f.source.p) if basis.shape[0] else basis)


def image_subalgebra(f: AlgebraMorphism) -> tuple[FiniteAlgebra, AlgebraMorphism]:
    basis = row_basis_array(f.matrix, f.source.p)
    return _algebra_on_basis(f.target, basis)


def find_algebra_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra, cap: int = 1 << 16) -> AlgebraMorphism | None:
    """Brute-force search for an isomorphism a -> b (small algebras only)."""
    if a.p != b.p or a.dim != b.dim:
        return None
    p, n = a.p, a.dim
    # an algebra map is determined by the images of algebra generators; for
    # desk-scale use we search over images of a generating set of basis vectors.
    gens = _basis_generators(a)
    words = _words_for_basis(a, gens)
    total = p ** (n * len(gens))
    if total > cap:
        raise ValueError("isomorphism search space exceeds cap")
    for imgs in itertools.product(itertools.product(range(p), repeat=n), repeat=len(gens)):
        imgs = [np.array(v, dtype=np.int64) for v in imgs]
        rows = []
        for word in words:
            rows.append(_eval_word_combo(b, imgs, word))
        m = np.array(rows, dtype=np.int64)
        if inverse_array(m, p) is None:
            continue
        try:
            return AlgebraMorphism(a, b, m)
        except ValueError:
            continue
    return None


def _basis_generators(alg: FiniteAlgebra) -> list[int]:
    """Indices of basis elements that generate alg as a unital algebra (greedy)."""
    chosen: list[int] = []
    for i in range(alg.dim):
        sub, _ = subalgebra_generated(alg, [alg.basis_element(j) for j in chosen])
        if sub.dim == alg.dim:
            break
        sub2, _ = subalgebra_generated(alg, [alg.basis_element(j) for j in chosen + [i]])
        if sub2.dim > sub.dim:
            chosen.append(i)
    return chosen


def _words_for_basis(alg: FiniteAlgebra, gens: list[int]):
    """Express every basis vector as a linear combination of words in gens.

    Returns, for each basis index, a list of (coefficient, word) pairs where a
    word is a tuple of generator positions (empty tuple = unit).
    """
    p, n = alg.p, alg.dim
    words: list[tuple[int, ...]] = [()]
    vecs = [alg.unit.copy()]
    frontier = [()]
    while True:
        span = row_basis_array(np.array(vecs), p)
        if span.shape[0] == n or not frontier:
            break
        new_frontier = []
        for w in frontier:
            for g in range(len(gens)):
                w2 = w + (g,)
                v = alg.multiply(_word_value(alg, gens, w), alg.basis_element(gens[g]))
                if rank_array(np.vstack([span, v]), p) > span.shape[0]:
                    words.append(w2)
                    vecs.append(v)
                    span = row_basis_array(np.array(vecs), p)
                    new_frontier.append(w2)
        frontier = new_frontier
    v = np.array(vecs)
    inv = inverse_array(v, p)
    if inv is None:
        raise StableKError("generators do not span the algebra")
    # basis e_i = sum_t inv[i, t] * word_t
    return [[(int(inv[i, t]), words[t]) for t in range(n) if inv[i, t]] for i in range(n)]


def _word_value(alg: FiniteAlgebra, gens: list[int], word) -> np.ndarray:
    out = alg.unit.copy()
    for g in word:
        out = alg.multiply(out, alg.basis_element(gens[g]))
    return out


def _eval_word_combo(b: FiniteAlgebra, imgs, combo) -> np.ndarray:
    out = np.zeros(b.dim, dtype=np.int64)
    for coef, word in combo:
        val = b.unit.copy()
        for g in word:
            val = b.multiply(val, imgs[g])
        out = (out + coef * val) % b.p
    return out


# ---------------------------------------------------------------------------
# units


@dataclass(frozen=True)
class UnitGroup:
    group: AbelianGroup
    generators: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...]
    count: int


def _element_order(alg: FiniteAlgebra, a: np.ndarray, limit: int) -> int:
    cur = a.copy()
    for k in range(1, limit + 1):
        if np.array_equal(cur, alg.unit):
            return k
        cur = alg.multiply(cur, a)
    raise StableKError("element order exceeds the group size")


def units(alg: FiniteAlgebra, cap: int = 1 << 16) -> list[np.ndarray]:
    if alg.p**alg.dim > cap:
        from .errors import CapExceeded

        raise CapExceeded(f"{alg.p}^{alg.dim} elements exceed cap {cap}")
    return [a for a in alg.elements() if alg.is_unit_element(a)]


def subgroup_generated(alg: FiniteAlgebra, gens) -> set[tuple[int, ...]]:
    seen = {tuple(int(x) for x in alg.unit)}
    frontier = [alg.unit.copy()]
    gens = [np.asarray(g) % alg.p for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = alg.multiply(x, g)
                key = tuple(int(v) for v in y)
                if key not in seen:
                    seen.add(key)
                    nxt.append(y)
        frontier = nxt
    return seen


def unit_group(alg: FiniteAlgebra, cap: int = 1 << 16) -> UnitGroup:
    """Invariant factors of the unit group of a commutative algebra, with generators."""
    if not alg.is_commutative():
        raise NotCommutative(f"{alg.name} is not commutative")
    us = units(alg, cap)
    total = len(us)
    # greedy generating set: add units not yet in the generated subgroup
    gens: list[np.ndarray] = []
    sub = {tuple(int(x) for x in alg.unit)}
    for u in us:
        if tuple(int(x) for x in u) not in sub:
            gens.append(u)
            sub = subgroup_generated(alg, gens)
            if len(sub) == total:
                break
    if not gens:
        return UnitGroup(AbelianGroup(0, ()), (), (), total)
    orders = [_element_order(alg, g, total) for g in gens]
    # relation lattice of Z^r -> units: all exponent vectors giving 1, plus orders
    rels = [[orders[i] if j == i else 0 for j in range(len(gens))] for i in range(len(gens))]
    powers = []
    for g, o in zip(gens, orders):
        pw = [alg.unit.copy()]
        for _ in range(o - 1):
            pw.append(alg.multiply(pw[-1], g))
        powers.append(pw)
    for exps in itertools.product(*(range(o) for o in orders)):
        if not any(exps):
            continue
        val = alg.unit.copy()
        for pw, e in zip(powers, exps):
            val = alg.multiply(val, pw[e])
        if np.array_equal(val, alg.unit):
            rels.append(list(exps))
    relm = IntMatrix.from_rows(rels, len(gens))
    d, u, v = smith_normal_form(relm)
    vinv = _unimodular_inverse(v)
    factors, new_gens, new_orders = [], [], []
    for j, dj in enumerate(d):
        if dj == 1:
            continue
        elem = alg.unit.copy()
        for k, e in enumerate(vinv[j]):
            e %= orders[k]
            elem = alg.multiply(elem, powers[k][e])
        factors.append(dj)
        new_gens.append(tuple(int(x) for x in elem))
        new_orders.append(_element_order(alg, elem, total))
    prod = 1
    for o in new_orders:
        prod *= o
    if prod != total or new_orders != factors:
        raise StableKError("unit group decomposition failed its order check")
    return UnitGroup(AbelianGroup(0, tuple(factors)), tuple(new_gens), tuple(new_orders), total)


def is_independent_generating_set(alg: FiniteAlgebra, gens, factors) -> bool:
    """Check that ``gens`` have orders ``factors`` and generate all units freely."""
    total = len(units(alg))
    orders = [_element_order(alg, np.asarray(g) % alg.p, total) for g in gens]
    if sorted(orders) != sorted(factors):
        return False
    prod = 1
    for o in orders:
        prod *= o
    return prod == total and len(subgroup_generated(alg, gens)) == total


# ---------------------------------------------------------------------------
# freeness over a subalgebra


def is_free_over_subalgebra(alg: FiniteAlgebra, inclusion: AlgebraMorphism) -> list[np.ndarray] | None:
    """A basis b_1..b_r with alg = ⊕ b_i * sub as right sub-modules, or None."""
    sub = inclusion.source
    p, n, m = alg.p, alg.dim, sub.dim
    if n % m:
        return None
    r = n // m
    images = inclusion.matrix  # rows: images of sub basis in alg

    def cyclic_span(b: np.ndarray) -> np.ndarray:
        return np.array([alg.multiply(b, images[j]) for j in range(m)], dtype=np.int64)

    def try_candidates(cands) -> list[np.ndarray] | None:
        chosen: list[np.ndarray] = []
        span = np.zeros((0, n), dtype=np.int64)
        for b in cands:
            block = cyclic_span(b)
            stacked = np.vstack([span, block])
            if rank_array(stacked, p) == span.shape[0] + m:
                chosen.append(b)
                span = row_basis_array(stacked, p)
                if len(chosen) == r:
                    return chosen
        return None

    found = try_candidates(alg.basis_element(i) for i in range(n))
    if found is not None:
        return found
    if is_local(sub):
        # exact: lift a basis of alg / alg * rad(sub)
        rad = jacobson_radical(sub)
        rad_imgs = (rad.basis @ images) % p
        sub_span = [alg.multiply(alg.basis_element(i), x) for i in range(n) for x in rad_imgs]
        base = row_basis_array(np.array(sub_span), p) if sub_span else np.zeros((0, n), dtype=np.int64)
        lifts = []
        cur = base
        for i in range(n):
            e = alg.basis_element(i)
            if rank_array(np.vstack([cur, e]), p) > cur.shape[0]:
                lifts.append(e)
                cur = row_basis_array(np.vstack([cur, e]), p)
        if len(lifts) != r:
            return None
        return try_candidates(lifts)
    if p**n <= 1 << 12:
        return try_candidates(alg.elements())
    return None
