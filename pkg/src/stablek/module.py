"""Right modules over a FiniteAlgebra and their homomorphisms.

A module of dimension d is a tuple of d x d action matrices, one per algebra
basis element, acting on row vectors: ``m . e_j = m @ mats[j]``.  A
homomorphism M -> N is a (dim M) x (dim N) matrix F with ``m -> m @ F``; the
composite ``g o f`` has matrix ``F @ G``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import AlgebraMorphism, FiniteAlgebra, _basis_generators, kernel_ideal
from .errors import AlgebraMismatch, CapExceeded, InvalidHom, InvalidModule, NotExact, NotSurjective
from .exactlinalg import (
    FpMatrix,
    inverse_array,
    nullspace_array,
    rank_array,
    row_basis_array,
    rref_array,
    solve_left_array,
)


def _generators(alg: FiniteAlgebra) -> list[int]:
    gens = getattr(alg, "_module_generators", None)
    if gens is None:
        gens = _basis_generators(alg)
        alg._module_generators = gens
    return gens


def opposite_algebra(alg: FiniteAlgebra) -> FiniteAlgebra:
    """The opposite algebra, cached so that op(op(A)) is A itself."""
    if alg.is_commutative():
        return alg
    op = getattr(alg, "_opposite", None)
    if op is None:
        op = alg.opposite()
        op._opposite = alg
        alg._opposite = op
    return op


class Module:
    """A finite-dimensional right module given by action matrices."""

    def __init__(self, algebra: FiniteAlgebra, mats, name: str | None = None, *, check: bool = True):
        p = algebra.p
        arr = np.array(mats, dtype=np.int64) % p
        if arr.ndim != 3 or arr.shape[0] != algebra.dim or arr.shape[1] != arr.shape[2]:
            if arr.size == 0:
                arr = np.zeros((algebra.dim, 0, 0), dtype=np.int64)
            else:
                raise InvalidModule("need one square action matrix per algebra basis element")
        arr.setflags(write=False)
        self.algebra = algebra
        self.mats = arr
        self.dim = arr.shape[1]
        self.name = name
        self._cache: dict = {}
        if check:
            self._validate()

    def _validate(self) -> None:
        alg, p, d = self.algebra, self.algebra.p, self.dim
        unit = np.einsum("j,jab->ab", alg.unit, self.mats) % p
        if not np.array_equal(unit, np.eye(d, dtype=np.int64)):
            raise InvalidModule("the unit does not act as the identity")
        lhs = np.einsum("iab,jbc->ijac", self.mats, self.mats) % p
        rhs = np.einsum("ijk,kac->ijac", alg.mul, self.mats) % p
        bad = np.argwhere((lhs != rhs).reshape(alg.dim, alg.dim, -1).any(axis=2))
        if bad.size:
            i, j = (int(x) for x in bad[0])
            raise InvalidModule(f"action does not respect e_{i} * e_{j}")

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def action(self) -> list[FpMatrix]:
        return [FpMatrix(self.p, m) for m in self.mats]

    def action_of(self, a) -> np.ndarray:
        return np.einsum("j,jab->ab", np.asarray(a), self.mats) % self.p

    def is_zero(self) -> bool:
        return self.dim == 0

    def key(self) -> bytes:
        return self.mats.tobytes() + bytes([self.dim % 256])

    def label(self) -> str:
        return self.name or f"<dim {self.dim}>"

    def __repr__(self) -> str:
        return f"Module({self.label()} over {self.algebra.name})"


class ModuleHom:
    """A module homomorphism; validated to commute with the action."""

    def __init__(self, source: Module, target: Module, matrix, *, check: bool = True):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("source and target are modules over different algebras")
        p = source.p
        m = np.array(matrix, dtype=np.int64).reshape(source.dim, target.dim) % p
        m.setflags(write=False)
        self.source, self.target, self.matrix = source, target, m
        if check:
            for j in _generators(source.algebra):
                if not np.array_equal((source.mats[j] @ m) % p, (m @ target.mats[j]) % p):
                    raise InvalidHom(f"map does not commute with the action of basis element {j}")

    @property
    def p(self) -> int:
        return self.source.p

    def __call__(self, v) -> np.ndarray:
        return (np.asarray(v) @ self.matrix) % self.p

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        """``self @ other`` is the composite self o other."""
        if other.target is not self.source:
            raise InvalidHom("maps are not composable")
        return ModuleHom(other.source, self.target, (other.matrix @ self.matrix) % self.p, check=False)

    def _same(self, other: "ModuleHom") -> None:
        if other.source is not self.source or other.target is not self.target:
            raise InvalidHom("maps have different source or target")

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        self._same(other)
        return ModuleHom(self.source, self.target, (self.matrix + other.matrix) % self.p, check=False)

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        self._same(other)
        return ModuleHom(self.source, self.target, (self.matrix - other.matrix) % self.p, check=False)

    def scale(self, c: int) -> "ModuleHom":
        return ModuleHom(self.source, self.target, (self.matrix * c) % self.p, check=False)

    def rank(self) -> int:
        return rank_array(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def inverse(self) -> "ModuleHom":
        inv = inverse_array(self.matrix, self.p)
        if inv is None:
            raise InvalidHom("map is not invertible")
        return ModuleHom(self.target, self.source, inv, check=False)

    def fp_matrix(self) -> FpMatrix:
        return FpMatrix(self.p, self.matrix)

    def __repr__(self) -> str:
        return f"ModuleHom({self.source.label()} -> {self.target.label()}, {self.matrix.tolist()})"


def identity(m: Module) -> ModuleHom:
    return ModuleHom(m, m, np.eye(m.dim, dtype=np.int64), check=False)


def zero_hom(m: Module, n: Module) -> ModuleHom:
    return ModuleHom(m, n, np.zeros((m.dim, n.dim), dtype=np.int64), check=False)


def linear_combination(basis: Sequence[ModuleHom], coeffs, source: Module, target: Module) -> ModuleHom:
    p = source.p
    out = np.zeros((source.dim, target.dim), dtype=np.int64)
    for c, h in zip(coeffs, basis):
        if c % p:
            out = out + int(c) * h.matrix
    return ModuleHom(source, target, out % p, check=False)


# ---------------------------------------------------------------------------
# basic modules


def regular_module(alg: FiniteAlgebra) -> Module:
    cached = getattr(alg, "_regular", None)
    if cached is None:
        cached = Module(alg, alg.right_mats, name="A", check=False)
        alg._regular = cached
    return cached


def zero_module(alg: FiniteAlgebra) -> Module:
    cached = getattr(alg, "_zero_module", None)
    if cached is None:
        cached = Module(alg, np.zeros((alg.dim, 0, 0), dtype=np.int64), name="0", check=False)
        alg._zero_module = cached
    return cached


# ---------------------------------------------------------------------------
# hom spaces


def _intertwiner_system(m: Module, n: Module) -> np.ndarray:
    dm, dn = m.dim, n.dim
    blocks = []
    eye_m = np.eye(dm, dtype=np.int64)
    eye_n = np.eye(dn, dtype=np.int64)
    for j in _generators(m.algebra):
        blocks.append(np.kron(m.mats[j], eye_n) - np.kron(eye_m, n.mats[j].T))
    if not blocks:
        return np.zeros((0, dm * dn), dtype=np.int64)
    return np.vstack(blocks) % m.p


def hom_space(m: Module, n: Module) -> list[ModuleHom]:
    """Echelonized basis of Hom(M, N)."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("modules over different algebras")
    key = ("hom", n)
    cached = m._cache.get(key)
    if cached is not None:
        return cached
    if m.dim == 0 or n.dim == 0:
        out: list[ModuleHom] = []
    else:
        sysm = _intertwiner_system(m, n)
        if sysm.shape[0] == 0:
            basis = np.eye(m.dim * n.dim, dtype=np.int64)
        else:
            basis = nullspace_array(sysm, m.p)
        out = [ModuleHom(m, n, row.reshape(m.dim, n.dim), check=False) for row in basis]
    m._cache[key] = out
    return out


def hom_matrix(basis: Sequence[ModuleHom], dm: int, dn: int) -> np.ndarray:
    """Stack a hom basis as rows of flattened matrices."""
    if not basis:
        return np.zeros((0, dm * dn), dtype=np.int64)
    return np.array([h.matrix.ravel() for h in basis], dtype=np.int64)


def all_homs(m: Module, n: Module):
    """Iterate over every element of Hom(M, N) (p^dim many)."""
    basis = hom_space(m, n)
    p = m.p
    mat = hom_matrix(basis, m.dim, n.dim)
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        flat = (np.array(coeffs, dtype=np.int64) @ mat) % p if basis else np.zeros(m.dim * n.dim, dtype=np.int64)
        yield ModuleHom(m, n, flat.reshape(m.dim, n.dim), check=False)


def hom_count(m: Module, n: Module) -> int:
    return m.p ** len(hom_space(m, n))


# ---------------------------------------------------------------------------
# sub and quotient modules


def _coords(basis_rref: np.ndarray, pivots: tuple[int, ...], v: np.ndarray) -> np.ndarray:
    """Coordinates of rows of v in an RREF basis (v must lie in the span)."""
    return np.ascontiguousarray(np.atleast_2d(v)[:, list(pivots)])


def submodule(m: Module, basis, name: str | None = None) -> tuple[Module, ModuleHom]:
    """The submodule spanned by ``basis`` (must be invariant) with its inclusion."""
    p = m.p
    rows = np.array(basis, dtype=np.int64)
    rows = rows.reshape(-1, m.dim) % p if m.dim else np.zeros((0, 0), dtype=np.int64)
    if rows.shape[0] == 0:
        z = zero_module(m.algebra)
        return z, ModuleHom(z, m, np.zeros((0, m.dim), dtype=np.int64), check=False)
    b, piv = rref_array(rows, p)
    b = b[: len(piv)]
    mats = []
    for a in m.mats:
        img = (b @ a) % p
        co = _coords(b, piv, img)
        if not np.array_equal((co @ b) % p, img):
            raise InvalidModule("subspace is not invariant under the action")
        mats.append(co)
    sub = Module(m.algebra, np.array(mats), name=name, check=False)
    return sub, ModuleHom(sub, m, b, check=False)


def quotient(m: Module, basis, name: str | None = None) -> tuple[Module, ModuleHom]:
    """M / span(basis) (must be invariant) with the projection."""
    p, n = m.p, m.dim
    if n == 0:
        return m, identity(m)
    rows = np.array(basis, dtype=np.int64).reshape(-1, n) % p
    if rows.shape[0] == 0 or not rows.any():
        return m, identity(m)
    r, piv = rref_array(rows, p)
    keep = [j for j in range(n) if j not in piv]
    pos = {j: t for t, j in enumerate(keep)}
    proj = np.zeros((n, len(keep)), dtype=np.int64)
    for j in keep:
        proj[j, pos[j]] = 1
    for row, pc in enumerate(piv):
        for j in keep:
            proj[pc, pos[j]] = (-r[row, j]) % p
    mats = []
    for a in m.mats:
        mats.append((a[keep] @ proj) % p)
    q = Module(m.algebra, np.array(mats).reshape(m.algebra.dim, len(keep), len(keep)), name=name, check=False)
    hom = ModuleHom(m, q, proj, check=False)
    # validate invariance: the projection must be a module map
    for j in _generators(m.algebra):
        if not np.array_equal((m.mats[j] @ proj) % p, (proj @ q.mats[j]) % p):
            raise InvalidModule("subspace is not invariant under the action")
    return q, hom


def submodule_generated(m: Module, vectors) -> np.ndarray:
    """RREF basis of the submodule generated by ``vectors``."""
    p = m.p
    rows = np.array(vectors, dtype=np.int64).reshape(-1, m.dim) % p
    basis = row_basis_array(rows, p) if rows.shape[0] else rows
    while True:
        if basis.shape[0] == 0:
            return basis
        new = [basis] + [(basis @ m.mats[j]) % p for j in _generators(m.algebra)]
        grown = row_basis_array(np.vstack(new), p)
        if grown.shape[0] == basis.shape[0]:
            return grown
        basis = grown


def kernel(f: ModuleHom) -> tuple[Module, ModuleHom]:
    if f.source.dim == 0:
        return submodule(f.source, np.zeros((0, 0), dtype=np.int64))
    if f.target.dim == 0:
        return f.source, identity(f.source)
    basis = nullspace_array(np.ascontiguousarray(f.matrix.T), f.p)
    return submodule(f.source, basis.reshape(-1, f.source.dim))


def image(f: ModuleHom) -> tuple[Module, ModuleHom, ModuleHom]:
    """(Im f, M -> Im f, Im f -> N)."""
    p = f.p
    if f.source.dim == 0 or not f.matrix.any():
        z = zero_module(f.source.algebra)
        return (
            z,
            ModuleHom(f.source, z, np.zeros((f.source.dim, 0), dtype=np.int64), check=False),
            ModuleHom(z, f.target, np.zeros((0, f.target.dim), dtype=np.int64), check=False),
        )
    b, piv = rref_array(f.matrix, p)
    b = b[: len(piv)]
    im, inc = submodule(f.target, b)
    onto = ModuleHom(f.source, im, _coords(b, piv, f.matrix), check=False)
    return im, onto, inc


def cokernel(f: ModuleHom) -> tuple[Module, ModuleHom]:
    return quotient(f.target, f.matrix)


# ---------------------------------------------------------------------------
# sums, pushouts, pullbacks


@dataclass(frozen=True)
class DirectSum:
    module: Module
    injections: tuple[ModuleHom, ...]
    projections: tuple[ModuleHom, ...]


def direct_sum(ms: Sequence[Module], name: str | None = None) -> DirectSum:
    if not ms:
        raise ValueError("direct_sum needs at least one module")
    alg = ms[0].algebra
    if any(m.algebra is not alg for m in ms):
        raise AlgebraMismatch("summands over different algebras")
    total = sum(m.dim for m in ms)
    mats = np.zeros((alg.dim, total, total), dtype=np.int64)
    off = 0
    offsets = []
    for m in ms:
        mats[:, off : off + m.dim, off : off + m.dim] = m.mats
        offsets.append(off)
        off += m.dim
    if name is None:
        name = " ⊕ ".join(m.label() for m in ms)
    s = Module(alg, mats, name=name, check=False)
    inj, proj = [], []
    for m, o in zip(ms, offsets):
        e = np.zeros((m.dim, total), dtype=np.int64)
        e[:, o : o + m.dim] = np.eye(m.dim, dtype=np.int64)
        inj.append(ModuleHom(m, s, e, check=False))
        proj.append(ModuleHom(s, m, np.ascontiguousarray(e.T), check=False))
    return DirectSum(s, tuple(inj), tuple(proj))


def direct_sum_hom(fs: Sequence[ModuleHom], source: DirectSum | None = None, target: DirectSum | None = None) -> ModuleHom:
    """Block diagonal map between direct sums."""
    source = source or direct_sum([f.source for f in fs])
    target = target or direct_sum([f.target for f in fs])
    p = fs[0].p
    out = np.zeros((source.module.dim, target.module.dim), dtype=np.int64)
    for f, i, pr in zip(fs, source.injections, target.projections):
        out = out + (i.matrix.T @ f.matrix @ pr.matrix.T)
    return ModuleHom(source.module, target.module, out % p, check=False)


def hom_to_sum(fs: Sequence[ModuleHom], target: DirectSum) -> ModuleHom:
    """(f_1, ..., f_k): X -> Y_1 ⊕ ... ⊕ Y_k."""
    src = fs[0].source
    out = sum(f.matrix @ i.matrix for f, i in zip(fs, target.injections))
    return ModuleHom(src, target.module, np.asarray(out) % src.p, check=False)


def hom_from_sum(fs: Sequence[ModuleHom], source: DirectSum) -> ModuleHom:
    """[f_1 ... f_k]: X_1 ⊕ ... ⊕ X_k -> Y."""
    tgt = fs[0].target
    out = sum(pr.matrix @ f.matrix for f, pr in zip(fs, source.projections))
    return ModuleHom(source.module, tgt, np.asarray(out) % tgt.p, check=False)


@dataclass(frozen=True)
class Pushout:
    module: Module
    from_y: ModuleHom
    from_z: ModuleHom


def pushout(f: ModuleHom, c: ModuleHom) -> Pushout:
    """Pushout of Y <- X -> Z: the cokernel of (f, -c): X -> Y ⊕ Z."""
    if f.source is not c.source:
        raise InvalidHom("pushout needs a common source")
    ds = direct_sum([f.target, c.target])
    both = hom_to_sum([f, c.scale(-1)], ds)
    q, proj = cokernel(both)
    return Pushout(q, proj @ ds.injections[0], proj @ ds.injections[1])


@dataclass(frozen=True)
class Pullback:
    module: Module
    to_y: ModuleHom
    to_w: ModuleHom


def pullback(g: ModuleHom, h: ModuleHom) -> Pullback:
    """Pullback of Y -> Z <- W: the kernel of [g, -h]: Y ⊕ W -> Z."""
    if g.target is not h.target:
        raise InvalidHom("pullback needs a common target")
    ds = direct_sum([g.source, h.source])
    both = hom_from_sum([g, h.scale(-1)], ds)
    k, inc = kernel(both)
    return Pullback(k, ds.projections[0] @ inc, ds.projections[1] @ inc)


# ---------------------------------------------------------------------------
# short exact sequences


class ShortExact:
    """0 -> X --f--> Y --g--> Z -> 0, validated."""

    def __init__(self, f: ModuleHom, g: ModuleHom, *, check: bool = True):
        if f.target is not g.source:
            raise NotExact("maps are not composable")
        self.f, self.g = f, g
        if check:
            if not f.is_injective():
                raise NotExact("first map is not injective")
            if not g.is_surjective():
                raise NotExact("second map is not surjective")
            if (f.matrix @ g.matrix % f.p).any() or f.source.dim + g.target.dim != f.target.dim:
                raise NotExact("image of the first map is not the kernel of the second")

    @property
    def left(self) -> Module:
        return self.f.source

    @property
    def middle(self) -> Module:
        return self.f.target

    @property
    def right(self) -> Module:
        return self.g.target

    def __repr__(self) -> str:
        return f"ShortExact({self.left.label()} -> {self.middle.label()} -> {self.right.label()})"


def sequence_of_mono(f: ModuleHom) -> ShortExact:
    q, proj = cokernel(f)
    return ShortExact(f, proj)


def sequence_of_epi(g: ModuleHom) -> ShortExact:
    k, inc = kernel(g)
    return ShortExact(inc, g)


def split_sequence(x: Module, z: Module) -> ShortExact:
    ds = direct_sum([x, z])
    return ShortExact(ds.injections[0], ds.projections[1])


def submodules(m: Module, cap: int = 10_000) -> list[np.ndarray]:
    """All submodules of M as RREF bases, ordered by (dimension, entries)."""
    p, d = m.p, m.dim
    if p**d > 1 << 16:
        raise CapExceeded(f"{p}^{d} vectors is too many to enumerate")
    zero = np.zeros((0, d), dtype=np.int64)
    found = {zero.tobytes() + b"0": zero}
    frontier = [zero]
    vectors = [np.array(t, dtype=np.int64) for t in itertools.product(range(p), repeat=d)][1:]
    cyclic = {}
    for v in vectors:
        c = submodule_generated(m, v)
        cyclic[c.tobytes() + bytes([c.shape[0]])] = c
    cyclic_list = list(cyclic.values())
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyclic_list:
                t = row_basis_array(np.vstack([s, c]), p) if s.shape[0] or c.shape[0] else s
                key = t.tobytes() + bytes([t.shape[0]])
                if key not in found:
                    found[key] = t
                    nxt.append(t)
                    if len(found) > cap:
                        raise CapExceeded(f"more than {cap} submodules")
        frontier = nxt
    out = list(found.values())
    out.sort(key=lambda b: (b.shape[0], b.ravel().tolist()))
    return out


# ---------------------------------------------------------------------------
# change of rings


def restrict(n: Module, phi: AlgebraMorphism) -> Module:
    """View a module over phi.target as a module over phi.source."""
    if n.algebra is not phi.target:
        raise AlgebraMismatch("module does not live over the target of phi")
    key = ("restrict", phi)
    cached = n._cache.get(key)
    if cached is not None:
        return cached
    mats = np.einsum("bk,kxy->bxy", phi.matrix, n.mats) % n.p
    out = Module(phi.source, mats, name=n.name, check=False)
    n._cache[key] = out
    return out


def restrict_hom(f: ModuleHom, phi: AlgebraMorphism) -> ModuleHom:
    return ModuleHom(restrict(f.source, phi), restrict(f.target, phi), f.matrix, check=False)


def _preimages(phi: AlgebraMorphism) -> np.ndarray:
    cached = getattr(phi, "_preimages", None)
    if cached is None:
        cached = solve_left_array(phi.matrix, np.eye(phi.target.dim, dtype=np.int64), phi.source.p)
        if cached is None:
            raise NotSurjective(f"{phi} is not surjective")
        phi._preimages = cached
    return cached


def base_change_with_projection(m: Module, phi: AlgebraMorphism) -> tuple[Module, ModuleHom]:
    """(M ⊗_B C, projection M -> restrict(M ⊗_B C)) for a surjection phi: B -> C."""
    if m.algebra is not phi.source:
        raise AlgebraMismatch("module does not live over the source of phi")
    if not phi.surjective:
        raise NotSurjective(f"{phi} is not surjective")
    key = ("base_change", phi)
    cached = m._cache.get(key)
    if cached is not None:
        return cached
    p = m.p
    ker = kernel_ideal(phi)
    rows = [m.action_of(k) for k in ker.basis]
    span = np.vstack(rows) if rows else np.zeros((0, m.dim), dtype=np.int64)
    q, proj = quotient(m, span)
    pre = _preimages(phi)
    mats = np.array([q.action_of(pre[c]) for c in range(phi.target.dim)]).reshape(phi.target.dim, q.dim, q.dim)
    name = f"{m.name}⊗C" if m.name else None
    over_c = Module(phi.target, mats, name=name, check=False)
    projection = ModuleHom(m, restrict(over_c, phi), proj.matrix, check=False)
    m._cache[key] = (over_c, projection)
    return over_c, projection


def base_change(m: Module, phi: AlgebraMorphism) -> Module:
    return base_change_with_projection(m, phi)[0]


def base_change_hom(f: ModuleHom, phi: AlgebraMorphism) -> ModuleHom:
    """The induced map M ⊗_B C -> N ⊗_B C."""
    qm, pm = base_change_with_projection(f.source, phi)
    qn, pn = base_change_with_projection(f.target, phi)
    # pick the representatives of the quotient basis: the columns kept by the projection
    sec = solve_left_array(pm.matrix, np.eye(qm.dim, dtype=np.int64), f.p) if qm.dim else np.zeros((0, f.source.dim), dtype=np.int64)
    mat = (sec @ f.matrix @ pn.matrix) % f.p if qm.dim else np.zeros((0, qn.dim), dtype=np.int64)
    return ModuleHom(qm, qn, mat.reshape(qm.dim, qn.dim), check=False)


def annihilated_by_kernel(m: Module, phi: AlgebraMorphism) -> bool:
    ker = kernel_ideal(phi)
    return all(not m.action_of(k).any() for k in ker.basis)


def descend(m: Module, phi: AlgebraMorphism) -> Module:
    """The C-module whose restriction is M (M must be annihilated by ker phi)."""
    key = ("descend", phi)
    cached = m._cache.get(key)
    if cached is not None:
        return cached
    if not annihilated_by_kernel(m, phi):
        raise InvalidModule("module is not annihilated by the kernel")
    pre = _preimages(phi)
    mats = np.array([m.action_of(pre[c]) for c in range(phi.target.dim)]).reshape(phi.target.dim, m.dim, m.dim)
    out = Module(phi.target, mats, name=m.name, check=False)
    m._cache[key] = out
    return out


def descend_hom(f: ModuleHom, phi: AlgebraMorphism) -> ModuleHom:
    return ModuleHom(descend(f.source, phi), descend(f.target, phi), f.matrix, check=False)


def left_free_basis(inclusion: AlgebraMorphism) -> list[np.ndarray] | None:
    """A basis b_1..b_r of B with B = ⊕ A b_i (free as a left A-module)."""
    from .algebra import is_free_over_subalgebra

    big = inclusion.target
    op_big = opposite_algebra(big)
    if op_big is big:
        return is_free_over_subalgebra(big, inclusion)
    op_small = opposite_algebra(inclusion.source)
    op_inc = AlgebraMorphism(op_small, op_big, inclusion.matrix, check=False)
    return is_free_over_subalgebra(op_big, op_inc)


def induce(n: Module, inclusion: AlgebraMorphism, basis=None) -> Module:
    """N ⊗_A B for A ⊆ B with B free as a left A-module on ``basis``."""
    small, big = inclusion.source, inclusion.target
    if n.algebra is not small:
        raise AlgebraMismatch("module does not live over the subalgebra")
    p = n.p
    if basis is None:
        basis = left_free_basis(inclusion)
        if basis is None:
            raise InvalidModule("the algebra is not free over the subalgebra")
    basis = [np.asarray(b) % p for b in basis]
    r, m = len(basis), small.dim
    # phi: A^r -> B, (a_k) -> sum a_k b_k ; rows indexed by (k, j)
    rows = []
    for b in basis:
        for j in range(m):
            rows.append(big.multiply(inclusion.matrix[j], b))
    phi = np.array(rows, dtype=np.int64)
    inv = inverse_array(phi, p)
    if inv is None:
        raise InvalidModule("supplied elements are not a free basis")
    dn = n.dim
    mats = np.zeros((big.dim, r * dn, r * dn), dtype=np.int64)
    for e in range(big.dim):
        for i, b in enumerate(basis):
            prod = big.multiply(b, big.basis_element(e))
            coeff = (prod @ inv) % p  # coordinates indexed (k, j)
            for k in range(r):
                a = coeff[k * m : (k + 1) * m]
                mats[e, i * dn : (i + 1) * dn, k * dn : (k + 1) * dn] = n.action_of(a)
    name = f"ind({n.name})" if n.name else None
    return Module(big, mats % p, name=name)


def induce_hom(f: ModuleHom, inclusion: AlgebraMorphism, source: Module, target: Module, r: int) -> ModuleHom:
    """f ⊗ B given the already induced source and target."""
    mat = np.kron(np.eye(r, dtype=np.int64), f.matrix) % f.p
    return ModuleHom(source, target, mat, check=False)


# ---------------------------------------------------------------------------
# duality


def dual(m: Module) -> Module:
    """Hom_k(M, k), a right module over the opposite algebra."""
    key = "dual"
    cached = m._cache.get(key)
    if cached is not None:
        return cached
    op = opposite_algebra(m.algebra)
    mats = np.ascontiguousarray(np.transpose(m.mats, (0, 2, 1)))
    name = f"D({m.name})" if m.name else None
    out = Module(op, mats, name=name, check=False)
    m._cache[key] = out
    return out


def dual_hom(f: ModuleHom) -> ModuleHom:
    return ModuleHom(dual(f.target), dual(f.source), np.ascontiguousarray(f.matrix.T), check=False)


def coregular(alg: FiniteAlgebra) -> Module:
    """U = dual of the regular left module: the injective cogenerator."""
    cached = getattr(alg, "_coregular", None)
    if cached is None:
        cached = dual(regular_module(opposite_algebra(alg)))
        cached = Module(alg, cached.mats, name="U", check=False)
        alg._coregular = cached
    return cached


# ---------------------------------------------------------------------------
# named modules


def cyclic_module(alg: FiniteAlgebra, relations, name: str | None = None) -> Module:
    """A / (right ideal generated by ``relations``)."""
    reg = regular_module(alg)
    span = submodule_generated(reg, np.array(relations, dtype=np.int64).reshape(-1, alg.dim))
    q, _ = quotient(reg, span, name=name)
    return q


def truncated(alg: FiniteAlgebra, i: int) -> Module:
    """M_i = k[x]/x^i over a trunc_poly algebra (requires 1 <= i <= dim)."""
    if not 1 <= i <= alg.dim:
        raise ValueError(f"M_{i} needs 1 <= i <= {alg.dim}")
    if i == alg.dim:
        return Module(alg, alg.right_mats, name=f"M{i}", check=False)
    return cyclic_module(alg, [alg.basis_element(i)], name=f"M{i}")


def simple_trivial(alg: FiniteAlgebra) -> Module:
    """The module k on which the radical acts by zero (local algebras)."""
    from .algebra import jacobson_radical

    rad = jacobson_radical(alg)
    return cyclic_module(alg, rad.basis, name="k")
