"""Projective covers, injective envelopes, syzygies, Ext^1 and the absolute
stable category (maps modulo those factoring through projectives)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra, jacobson_radical
from .decomp import is_isomorphic, krull_schmidt
from .errors import UnsupportedSemisimpleType
from .exactlinalg import nullspace_array, rank_array, row_basis_array, rref_array, solve_array, solve_left_array
from .module import (
    Module,
    ModuleHom,
    ShortExact,
    direct_sum,
    dual,
    hom_space,
    identity,
    kernel,
    opposite_algebra,
    cokernel,
    hom_to_sum,
    quotient,
    regular_module,
    submodule,
    zero_hom,
    zero_module,
)


# ---------------------------------------------------------------------------
# small linear helpers


def solve_combination(mats: Sequence[np.ndarray], target: np.ndarray, p: int) -> np.ndarray | None:
    """Coefficients c with sum c_k mats[k] == target (mod p), or None."""
    target = np.asarray(target) % p
    if not mats:
        return np.zeros(0, dtype=np.int64) if not target.any() else None
    a = np.array([np.asarray(m).ravel() for m in mats]).T % p
    c = solve_array(a, target.ravel(), p)
    return None if c is None else np.asarray(c).ravel()


def hom_coords(m: Module, n: Module, mat: np.ndarray) -> np.ndarray:
    """Coordinates of a hom M -> N in the basis returned by hom_space."""
    basis = hom_space(m, n)
    c = solve_combination([b.matrix for b in basis], mat, m.p)
    if c is None:
        raise ValueError("matrix is not a module homomorphism")
    return c


def lift_through_epi(g: ModuleHom, e: ModuleHom) -> ModuleHom | None:
    """f: X -> M with e o f == g, for g: X -> N and e: M -> N; None if no lift."""
    basis = hom_space(g.source, e.source)
    p = g.p
    c = solve_combination([(b.matrix @ e.matrix) % p for b in basis], g.matrix, p)
    if c is None:
        return None
    mat = sum((int(ci) * b.matrix for ci, b in zip(c, basis)), np.zeros((g.source.dim, e.source.dim), dtype=np.int64))
    return ModuleHom(g.source, e.source, mat % p, check=False)


def extend_through_mono(g: ModuleHom, i: ModuleHom) -> ModuleHom | None:
    """f: Y -> N with f o i == g, for g: X -> N and i: X -> Y; None if no extension."""
    basis = hom_space(i.target, g.target)
    p = g.p
    c = solve_combination([(i.matrix @ b.matrix) % p for b in basis], g.matrix, p)
    if c is None:
        return None
    mat = sum((int(ci) * b.matrix for ci, b in zip(c, basis)), np.zeros((i.target.dim, g.target.dim), dtype=np.int64))
    return ModuleHom(i.target, g.target, mat % p, check=False)


def factor_through_quotient(q: ModuleHom, h: ModuleHom) -> ModuleHom:
    """g with g o q == h, for an epi q: X -> Y and h: X -> Z vanishing on ker q."""
    p = q.p
    s = solve_left_array(q.matrix, np.eye(q.target.dim, dtype=np.int64), p)
    if s is None:
        raise ValueError("map is not surjective")
    g = (s @ h.matrix) % p
    if not np.array_equal((q.matrix @ g) % p, h.matrix % p):
        raise ValueError("map does not vanish on the kernel")
    return ModuleHom(q.target, h.target, g, check=False)


# ---------------------------------------------------------------------------
# simples, tops, socles


def _rad_actions(m: Module) -> list[np.ndarray]:
    return [m.action_of(r) for r in jacobson_radical(m.algebra).basis]


def radical_submodule(m: Module) -> np.ndarray:
    """Basis rows of M·rad(A)."""
    acts = _rad_actions(m)
    if not acts or m.dim == 0:
        return np.zeros((0, m.dim), dtype=np.int64)
    return row_basis_array(np.vstack(acts), m.p)


def top(m: Module) -> Module:
    q, _ = quotient(m, radical_submodule(m), name=f"top({m.label()})")
    return q


def top_with_projection(m: Module) -> tuple[Module, ModuleHom]:
    return quotient(m, radical_submodule(m))


def socle(m: Module) -> Module:
    return socle_with_inclusion(m)[0]


def socle_with_inclusion(m: Module) -> tuple[Module, ModuleHom]:
    acts = _rad_actions(m)
    if not acts:
        basis = np.eye(m.dim, dtype=np.int64)
    else:
        basis = nullspace_array(np.ascontiguousarray(np.hstack(acts).T), m.p)
    return submodule(m, basis, name=f"soc({m.label()})")


@dataclass
class _ProjectiveData:
    simples: list[Module]
    projectives: list[Module]
    tops: list[ModuleHom]  # P_i -> S_i


def _projective_data(alg: FiniteAlgebra) -> _ProjectiveData:
    cached = getattr(alg, "_projective_data", None)
    if cached is not None:
        return cached
    reg = regular_module(alg)
    pieces = krull_schmidt(reg).summands
    simples: list[Module] = []
    projectives: list[Module] = []
    tops: list[ModuleHom] = []
    for piece, _ in pieces:
        t, proj = top_with_projection(piece)
        if len(hom_space(t, t)) != 1:
            raise UnsupportedSemisimpleType(
                f"{alg.name}: a simple module has endomorphism ring larger than F_{alg.p}"
            )
        simples.append(t)
        projectives.append(piece)
        tops.append(proj)
    for k, s in enumerate(simples):
        s.name = "k" if len(simples) == 1 else f"S{k + 1}"
        projectives[k].name = projectives[k].name if len(simples) == 1 and projectives[k] is reg else f"P{k + 1}"
    data = _ProjectiveData(simples, projectives, tops)
    alg._projective_data = data
    return data


def simples(alg: FiniteAlgebra) -> list[Module]:
    """The simple modules, one per isomorphism class (split case only)."""
    return list(_projective_data(alg).simples)


def indecomposable_projectives(alg: FiniteAlgebra) -> list[Module]:
    return list(_projective_data(alg).projectives)


# ---------------------------------------------------------------------------
# projective covers and syzygies


def projective_cover(m: Module) -> tuple[Module, ModuleHom]:
    """(P, epi P -> M) with P a sum of indecomposable projectives matching top(M)."""
    cached = m._cache.get("cover")
    if cached is not None:
        return cached
    alg = m.algebra
    if m.dim == 0:
        z = zero_module(alg)
        out = (z, zero_hom(z, m))
        m._cache["cover"] = out
        return out
    data = _projective_data(alg)
    t, tproj = top_with_projection(m)
    dec = krull_schmidt(t, catalog=data.simples)
    idx = [next(i for i, s in enumerate(data.simples) if s is piece) for piece in dec.pieces]
    ps = [data.projectives[i] for i in idx]
    ds = direct_sum(ps)
    # P -> ⊕ S_i -> top(M), then lift along M -> top(M)
    row = 0
    col = 0
    blocks = []
    for i in idx:
        blocks.append(data.tops[i].matrix)
    stacked = np.zeros((ds.module.dim, sum(b.shape[1] for b in blocks)), dtype=np.int64)
    for b in blocks:
        stacked[row : row + b.shape[0], col : col + b.shape[1]] = b
        row += b.shape[0]
        col += b.shape[1]
    to_tops = (stacked @ dec.from_sum.matrix) % m.p
    g = ModuleHom(ds.module, t, to_tops, check=False)
    f = lift_through_epi(g, tproj)
    assert f is not None and f.is_surjective()
    if len(ps) == 1:
        out = (ps[0], ModuleHom(ps[0], m, f.matrix, check=False))
    else:
        out = (ds.module, f)
    m._cache["cover"] = out
    return out


def syzygy(m: Module) -> Module:
    return syzygy_sequence(m).left


def syzygy_sequence(m: Module) -> ShortExact:
    """0 -> ΩM -> P(M) -> M -> 0."""
    cached = m._cache.get("syzseq")
    if cached is None:
        _, e = projective_cover(m)
        k, inc = kernel(e)
        k.name = f"Ω({m.label()})"
        cached = ShortExact(inc, e, check=False)
        m._cache["syzseq"] = cached
    return cached


def is_projective(m: Module) -> bool:
    return projective_cover(m)[0].dim == m.dim


def injective_envelope(m: Module) -> tuple[Module, ModuleHom]:
    """(I, mono M -> I), computed by duality through the opposite algebra."""
    cached = m._cache.get("envelope")
    if cached is not None:
        return cached
    d = dual(m)
    p_op, e = projective_cover(d)
    i = dual(p_op)
    assert i.algebra is m.algebra
    mono = ModuleHom(m, i, np.ascontiguousarray(e.matrix.T), check=False)
    out = (i, mono)
    m._cache["envelope"] = out
    return out


def cosyzygy(m: Module) -> Module:
    i, mono = injective_envelope(m)
    q, _ = quotient(i, mono.matrix, name=f"Ω⁻¹({m.label()})")
    return q


def is_injective(m: Module) -> bool:
    return injective_envelope(m)[0].dim == m.dim


# ---------------------------------------------------------------------------
# the stable category


def factors_through_projective(f: ModuleHom) -> ModuleHom | None:
    """g: M -> P(N) with cover o g == f, or None."""
    _, e = projective_cover(f.target)
    return lift_through_epi(f, e)


def _ftp_span(m: Module, n: Module) -> list[np.ndarray]:
    """Matrices spanning the maps M -> N that factor through a projective."""
    key = ("ftp", n)
    cached = m._cache.get(key)
    if cached is not None:
        return cached
    _, e = projective_cover(n)
    p = m.p
    mats = [(b.matrix @ e.matrix) % p for b in hom_space(m, e.source)]
    if mats:
        flat = row_basis_array(np.array([x.ravel() for x in mats]), p)
        mats = [r.reshape(m.dim, n.dim) for r in flat]
    m._cache[key] = mats
    return mats


@dataclass
class StableHom:
    dim: int
    basis: list[ModuleHom]  # representatives of a basis of the quotient


def stable_hom(m: Module, n: Module) -> StableHom:
    """Hom(M, N) modulo maps factoring through projectives."""
    p = m.p
    ftp = _ftp_span(m, n)
    homs = hom_space(m, n)
    if not homs:
        return StableHom(0, [])
    span = np.array([x.ravel() for x in ftp]) if ftp else np.zeros((0, m.dim * n.dim), dtype=np.int64)
    reps = []
    for h in homs:
        stacked = np.vstack([span, h.matrix.ravel()]) if span.shape[0] else h.matrix.reshape(1, -1)
        if rank_array(stacked, p) > span.shape[0]:
            reps.append(h)
            span = row_basis_array(stacked, p)
    return StableHom(len(reps), reps)


def is_stably_zero(f: ModuleHom) -> bool:
    ftp = _ftp_span(f.source, f.target)
    return solve_combination(ftp, f.matrix, f.p) is not None


def is_stable_equivalence(f: ModuleHom) -> ModuleHom | None:
    """A quasi-inverse h (h o f ~ id, f o h ~ id modulo projectives), or None."""
    m, n, p = f.source, f.target, f.p
    hs = hom_space(n, m)
    ftp_m = _ftp_span(m, m)
    ftp_n = _ftp_span(n, n)
    dm, dn = m.dim, n.dim
    # unknowns: coefficients of h, then of the two factoring terms
    cols = []
    for h in hs:
        cols.append(np.concatenate([((f.matrix @ h.matrix) % p).ravel(), ((h.matrix @ f.matrix) % p).ravel()]))
    for x in ftp_m:
        cols.append(np.concatenate([(-x) % p, np.zeros((dn, dn), dtype=np.int64)], axis=None))
    for x in ftp_n:
        cols.append(np.concatenate([np.zeros((dm, dm), dtype=np.int64), (-x) % p], axis=None))
    rhs = np.concatenate([np.eye(dm, dtype=np.int64).ravel(), np.eye(dn, dtype=np.int64).ravel()])
    if not cols:
        return ModuleHom(n, m, np.zeros((dn, dm), dtype=np.int64), check=False) if not rhs.any() else None
    sol = solve_array(np.array(cols).T % p, rhs, p)
    if sol is None:
        return None
    mat = np.zeros((dn, dm), dtype=np.int64)
    for c, h in zip(sol[: len(hs), 0], hs):
        mat = mat + int(c) * h.matrix
    return ModuleHom(n, m, mat % p, check=False)


def nonprojective_part(m: Module) -> list[Module]:
    return [x for x in krull_schmidt(m).pieces if not is_projective(x)]


def stably_isomorphic(m: Module, n: Module) -> bool:
    a = nonprojective_part(m)
    b = nonprojective_part(n)
    if sorted(x.dim for x in a) != sorted(x.dim for x in b):
        return False
    used = [False] * len(b)
    for x in a:
        for j, y in enumerate(b):
            if not used[j] and y.dim == x.dim and is_isomorphic(x, y) is not None:
                used[j] = True
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Ext^1 and extensions


@dataclass
class Extension:
    sequence: ShortExact
    coords: tuple[int, ...]

    @property
    def middle(self) -> Module:
        return self.sequence.middle


@dataclass
class Ext1:
    dim: int
    basis: list[ModuleHom]  # maps ΩM -> N representing a basis


def ext1(m: Module, n: Module) -> Ext1:
    """Ext^1(M, N) = Hom(ΩM, N) / (maps extending to P(M))."""
    seq = syzygy_sequence(m)
    om, inc = seq.left, seq.f
    p = m.p
    homs = hom_space(om, n)
    if not homs:
        return Ext1(0, [])
    restricted = [(inc.matrix @ b.matrix) % p for b in hom_space(seq.middle, n)]
    span = row_basis_array(np.array([x.ravel() for x in restricted]), p) if restricted else np.zeros((0, om.dim * n.dim), dtype=np.int64)
    reps = []
    for h in homs:
        stacked = np.vstack([span, h.matrix.ravel()]) if span.shape[0] else h.matrix.reshape(1, -1)
        if rank_array(stacked, p) > span.shape[0]:
            reps.append(h)
            span = row_basis_array(stacked, p)
    return Ext1(len(reps), reps)


def extension_from_class(m: Module, n: Module, coords: Sequence[int]) -> Extension:
    """0 -> N -> Y -> M -> 0 classified by ``coords`` in the ext1 basis."""
    e = ext1(m, n)
    coords = tuple(int(c) % m.p for c in coords)
    if len(coords) != e.dim:
        raise ValueError(f"expected {e.dim} coordinates, got {len(coords)}")
    seq = syzygy_sequence(m)
    p = m.p
    mat = np.zeros((seq.left.dim, n.dim), dtype=np.int64)
    for c, b in zip(coords, e.basis):
        mat = mat + c * b.matrix
    r = ModuleHom(seq.left, n, mat % p, check=False)
    # pushout of P(M) <- ΩM -> N as the cokernel of (inc, -r): ΩM -> P(M) ⊕ N
    ds = direct_sum([seq.middle, n])
    _, q = cokernel(hom_to_sum([seq.f, r.scale(-1)], ds))
    cover_then_zero = np.vstack([seq.g.matrix, np.zeros((n.dim, m.dim), dtype=np.int64)])
    to_m = factor_through_quotient(q, ModuleHom(ds.module, m, cover_then_zero, check=False))
    from_n = q @ ds.injections[1]
    return Extension(ShortExact(from_n, to_m), coords)
