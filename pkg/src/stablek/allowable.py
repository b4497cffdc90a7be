"""Allowable classes of short exact sequences as decidable objects.

A class is a small descriptor tree.  Membership, relative monos/epis,
relative projectives and relative stable equivalence are all decided by
linear algebra over the base field, except where noted as universe-relative
(decided by a lifting search over a supplied finite list of modules).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import AlgebraMorphism, FiniteAlgebra
from .errors import AlgebraMismatch, BudgetExceeded
from .exactlinalg import left_nullspace_array, nullspace_array, rank_array, row_basis_array, solve_array
from .homproj import (
    _ftp_span,
    extend_through_mono,
    is_injective,
    is_projective,
    lift_through_epi,
    solve_combination,
)
from .module import (
    Module,
    ModuleHom,
    ShortExact,
    all_homs,
    annihilated_by_kernel,
    base_change,
    base_change_hom,
    coregular,
    descend_hom,
    direct_sum,
    hom_from_sum,
    hom_space,
    hom_to_sum,
    identity,
    regular_module,
    sequence_of_epi,
    sequence_of_mono,
)


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckReport:
    """Verdict of one check, with witnesses for failures."""

    name: str
    verdict: bool
    regime: str = "exhaustive"
    count: int = 0
    seed: int | None = None
    witnesses: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    parts: list["CheckReport"] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "axiom": self.name,
            "verdict": "pass" if self.verdict else "fail",
            "regime": self.regime,
            "count": self.count,
            "seed": self.seed,
            "witnesses": self.witnesses,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out

    def failed(self) -> list["CheckReport"]:
        own = [] if self.verdict or self.parts else [self]
        return own + [f for p in self.parts for f in p.failed()]


def combine(name: str, parts: Sequence[CheckReport], notes: Sequence[str] = ()) -> CheckReport:
    regimes = {p.regime for p in parts}
    return CheckReport(
        name,
        all(p.verdict for p in parts),
        regime="sampled" if "sampled" in regimes else "exhaustive",
        count=sum(p.count for p in parts),
        seed=next((p.seed for p in parts if p.seed is not None), None),
        notes=list(notes),
        parts=list(parts),
    )


def hom_witness(f: ModuleHom, role: str = "map") -> dict:
    return {
        "role": role,
        "source": f.source.label(),
        "target": f.target.label(),
        "matrix": f.matrix.tolist(),
    }


# ---------------------------------------------------------------------------
# class descriptors


@dataclass(eq=False)
class AllowableClass:
    kind: str
    algebra: FiniteAlgebra
    generators: tuple[Module, ...] = ()
    morphism: AlgebraMorphism | None = None
    inner: "AllowableClass | None" = None
    universe: tuple[Module, ...] = ()
    member_override: Callable[[ShortExact], bool] | None = None

    def describe(self) -> str:
        if self.kind in ("all", "trivial"):
            return self.kind
        if self.kind in ("projgen", "injgen"):
            return f"{self.kind}({', '.join(g.label() for g in self.generators)})"
        return f"{self.kind}({self.inner.describe()})"

    def __repr__(self) -> str:
        return f"AllowableClass({self.describe()} over {self.algebra.name})"

    def with_universe(self, universe: Iterable[Module]) -> "AllowableClass":
        return AllowableClass(
            self.kind, self.algebra, self.generators, self.morphism, self.inner, tuple(universe), self.member_override
        )

    def with_membership(self, member: Callable[[ShortExact], bool]) -> "AllowableClass":
        """A copy whose membership test is replaced (used to inject faults)."""
        return AllowableClass(self.kind, self.algebra, self.generators, self.morphism, self.inner, self.universe, member)

    @property
    def universe_relative_projectives(self) -> bool:
        return self.kind in ("injgen", "pullback")


def All(alg: FiniteAlgebra) -> AllowableClass:
    return AllowableClass("all", alg)


def Trivial(alg: FiniteAlgebra) -> AllowableClass:
    return AllowableClass("trivial", alg)


def _check_generators(gens: Sequence[Module]) -> tuple[Module, ...]:
    if not gens:
        raise ValueError("generator list must be nonempty")
    alg = gens[0].algebra
    if any(g.algebra is not alg for g in gens):
        raise AlgebraMismatch("generators over different algebras")
    return tuple(gens)


def ProjGenerated(gens: Sequence[Module]) -> AllowableClass:
    gens = _check_generators(gens)
    return AllowableClass("projgen", gens[0].algebra, gens)


def InjGenerated(gens: Sequence[Module], universe: Sequence[Module] = ()) -> AllowableClass:
    gens = _check_generators(gens)
    return AllowableClass("injgen", gens[0].algebra, gens, universe=tuple(universe))


def _check_morphism(phi: AlgebraMorphism, inner: AllowableClass) -> None:
    if not phi.surjective:
        from .errors import NotSurjective

        raise NotSurjective("class transport needs a surjective morphism")
    if inner.algebra is not phi.target:
        raise AlgebraMismatch("inner class must live over the target algebra")


def Pullback(phi: AlgebraMorphism, inner: AllowableClass, universe: Sequence[Module] = ()) -> AllowableClass:
    """Sequences whose base change along phi is short exact and in ``inner``."""
    _check_morphism(phi, inner)
    return AllowableClass("pullback", phi.source, morphism=phi, inner=inner, universe=tuple(universe))


def Pushforward(phi: AlgebraMorphism, inner: AllowableClass) -> AllowableClass:
    """Sequences of modules killed by ker phi that lie in ``inner`` over the target."""
    _check_morphism(phi, inner)
    return AllowableClass("pushforward", phi.source, morphism=phi, inner=inner)


# ---------------------------------------------------------------------------
# membership


def _hom_surjective(p_mod: Module, g: ModuleHom) -> bool:
    """Is Hom(P, Y) -> Hom(P, Z) onto, for g: Y -> Z?"""
    target = hom_space(p_mod, g.target)
    if not target:
        return True
    imgs = [(b.matrix @ g.matrix) % g.p for b in hom_space(p_mod, g.source)]
    if not imgs:
        return False
    return rank_array(np.array([x.ravel() for x in imgs]), g.p) == len(target)


def _hom_dual_surjective(i_mod: Module, f: ModuleHom) -> bool:
    """Is Hom(Y, I) -> Hom(X, I) onto, for f: X -> Y?"""
    target = hom_space(f.source, i_mod)
    if not target:
        return True
    imgs = [(f.matrix @ b.matrix) % f.p for b in hom_space(f.target, i_mod)]
    if not imgs:
        return False
    return rank_array(np.array([x.ravel() for x in imgs]), f.p) == len(target)


def is_member(s: ShortExact, cls: AllowableClass) -> bool:
    if s.middle.algebra is not cls.algebra:
        raise AlgebraMismatch("sequence and class live over different algebras")
    if cls.member_override is not None:
        return bool(cls.member_override(s))
    kind = cls.kind
    if kind == "all":
        return True
    if kind == "trivial":
        return s.left.dim == 0 or s.middle.dim == 0 or s.right.dim == 0
    if kind == "projgen":
        return all(_hom_surjective(q, s.g) for q in cls.generators)
    if kind == "injgen":
        return all(_hom_dual_surjective(i, s.f) for i in cls.generators)
    phi = cls.morphism
    if kind == "pullback":
        bf = base_change_hom(s.f, phi)
        if not bf.is_injective():
            return False
        bg = base_change_hom(s.g, phi)
        return is_member(ShortExact(bf, bg, check=False), cls.inner)
    if kind == "pushforward":
        if not all(annihilated_by_kernel(m, phi) for m in (s.left, s.middle, s.right)):
            return False
        return is_member(ShortExact(descend_hom(s.f, phi), descend_hom(s.g, phi), check=False), cls.inner)
    raise ValueError(f"unknown class kind {kind!r}")


def is_class_mono(f: ModuleHom, cls: AllowableClass) -> bool:
    return f.is_injective() and is_member(sequence_of_mono(f), cls)


def is_class_epi(g: ModuleHom, cls: AllowableClass) -> bool:
    return g.is_surjective() and is_member(sequence_of_epi(g), cls)


# ---------------------------------------------------------------------------
# relative projectives and injectives


def _evaluation(m: Module, objs: Sequence[Module]) -> ModuleHom | None:
    """⊕_Q Q^{hom(Q, M)} -> M, the sum of a basis of each hom space."""
    maps = [h for q in objs for h in hom_space(q, m)]
    if not maps:
        return None
    ds = direct_sum([h.source for h in maps])
    return hom_from_sum(maps, ds)


def _coevaluation(m: Module, objs: Sequence[Module]) -> ModuleHom | None:
    """M -> ⊕_I I^{hom(M, I)}."""
    maps = [h for i in objs for h in hom_space(m, i)]
    if not maps:
        return None
    ds = direct_sum([h.target for h in maps])
    return hom_to_sum(maps, ds)


def in_additive_closure(m: Module, objs: Sequence[Module]) -> bool:
    """M is a summand of a finite sum of the given modules."""
    if m.dim == 0:
        return True
    ev = _evaluation(m, objs)
    if ev is None or not ev.is_surjective():
        return False
    return lift_through_epi(identity(m), ev) is not None


def in_additive_coclosure(m: Module, objs: Sequence[Module]) -> bool:
    if m.dim == 0:
        return True
    co = _coevaluation(m, objs)
    if co is None or not co.is_injective():
        return False
    return extend_through_mono(identity(m), co) is not None


def _projgen_objects(cls: AllowableClass) -> list[Module]:
    return list(cls.generators) + [regular_module(cls.algebra)]


def _injgen_objects(cls: AllowableClass) -> list[Module]:
    return list(cls.generators) + [coregular(cls.algebra)]


def relative_projectives_test(m: Module, cls: AllowableClass) -> bool:
    """Is M projective relative to the class?

    Classes whose projectives have no intrinsic description (injgen,
    pullback) are decided against the class's universe.
    """
    kind = cls.kind
    if kind == "all":
        return is_projective(m)
    if kind == "trivial":
        return True
    if kind == "projgen":
        return in_additive_closure(m, _projgen_objects(cls))
    if kind == "pushforward":
        return relative_projectives_test(base_change(m, cls.morphism), cls.inner)
    return lifts_against_universe(m, cls, cls.universe or (m,))


def relative_injectives_test(m: Module, cls: AllowableClass) -> bool:
    kind = cls.kind
    if kind == "all":
        return is_injective(m)
    if kind == "trivial":
        return True
    if kind == "injgen":
        return in_additive_coclosure(m, _injgen_objects(cls))
    return extends_against_universe(m, cls, cls.universe or (m,))


# ---------------------------------------------------------------------------
# universe-relative lifting tests


def class_epis(cls: AllowableClass, universe: Sequence[Module], cap: int = 1 << 16) -> list[ModuleHom]:
    """Every class epi between members of the universe."""
    key = ("epis",) + tuple(id(u) for u in universe)
    cache = cls.__dict__.setdefault("_cache", {})
    if key in cache:
        return cache[key]
    out = []
    seen = 0
    for y in universe:
        for z in universe:
            if z.dim > y.dim or z.dim == 0:
                continue
            for g in all_homs(y, z):
                seen += 1
                if seen > cap:
                    raise BudgetExceeded(f"more than {cap} maps while collecting class epis")
                if g.is_surjective() and is_member(sequence_of_epi(g), cls):
                    out.append(g)
    cache[key] = out
    return out


def class_monos(cls: AllowableClass, universe: Sequence[Module], cap: int = 1 << 16) -> list[ModuleHom]:
    key = ("monos",) + tuple(id(u) for u in universe)
    cache = cls.__dict__.setdefault("_cache", {})
    if key in cache:
        return cache[key]
    out = []
    seen = 0
    for x in universe:
        for y in universe:
            if x.dim > y.dim or x.dim == 0:
                continue
            for f in all_homs(x, y):
                seen += 1
                if seen > cap:
                    raise BudgetExceeded(f"more than {cap} maps while collecting class monos")
                if f.is_injective() and is_member(sequence_of_mono(f), cls):
                    out.append(f)
    cache[key] = out
    return out


def _lifts_along(m: Module, g: ModuleHom) -> bool:
    return _hom_surjective(m, g)


def lifts_against_universe(m: Module, cls: AllowableClass, universe: Sequence[Module]) -> bool:
    """M has the lifting property against every class epi inside the universe."""
    if is_projective(m):
        return True
    return all(_lifts_along(m, g) for g in class_epis(cls, universe))


def extends_against_universe(m: Module, cls: AllowableClass, universe: Sequence[Module]) -> bool:
    if is_injective(m):
        return True
    return all(_hom_dual_surjective(m, f) for f in class_monos(cls, universe))


def universe_projectives(cls: AllowableClass, universe: Sequence[Module]) -> list[Module]:
    return [u for u in universe if u.dim and lifts_against_universe(u, cls, universe)]


# ---------------------------------------------------------------------------
# relative stable equivalence


def span_through(m: Module, n: Module, objs: Sequence[Module]) -> list[np.ndarray]:
    """Basis of the maps M -> N that factor through a sum of the given modules."""
    p = m.p
    mats = []
    for q in objs:
        for a in hom_space(m, q):
            for b in hom_space(q, n):
                mats.append(((a.matrix @ b.matrix) % p).ravel())
    if not mats:
        return []
    basis = row_basis_array(np.array(mats), p)
    return [r.reshape(m.dim, n.dim) for r in basis]


def _preimage_span(m: Module, n: Module, phi: AlgebraMorphism, target_span: list[np.ndarray]) -> list[np.ndarray]:
    """Maps h: M -> N whose base change lies in ``target_span``."""
    p = m.p
    homs = hom_space(m, n)
    if not homs:
        return []
    images = [base_change_hom(h, phi).matrix.ravel() for h in homs]
    if images[0].size == 0:
        return [h.matrix for h in homs]
    images = np.array(images)
    if target_span:
        s = np.array([x.ravel() for x in target_span])
        w = nullspace_array(s, p)  # rows w with s @ w = 0
        if w.shape[0] == 0:
            return [h.matrix for h in homs]
        cond = (images @ w.T) % p
    else:
        cond = images
    coeffs = left_nullspace_array(cond, p)
    out = []
    for c in coeffs:
        mat = sum(int(ci) * h.matrix for ci, h in zip(c, homs)) % p
        out.append(mat)
    if not out:
        return []
    basis = row_basis_array(np.array([x.ravel() for x in out]), p)
    return [r.reshape(m.dim, n.dim) for r in basis]


def stably_zero_span(m: Module, n: Module, cls: AllowableClass) -> list[np.ndarray]:
    """Basis of the maps M -> N that factor through a class projective."""
    key = ("stably_zero", cls, n)
    cached = m._cache.get(key)
    if cached is None:
        cached = _stably_zero_span(m, n, cls)
        m._cache[key] = cached
    return cached


def _stably_zero_span(m: Module, n: Module, cls: AllowableClass) -> list[np.ndarray]:
    kind = cls.kind
    if kind == "all":
        return _ftp_span(m, n)
    if kind == "trivial":
        return [h.matrix for h in hom_space(m, n)]
    if kind == "projgen":
        return span_through(m, n, _projgen_objects(cls))
    if kind == "pushforward":
        phi = cls.morphism
        inner = stably_zero_span(base_change(m, phi), base_change(n, phi), cls.inner)
        return _preimage_span(m, n, phi, inner)
    universe = cls.universe or (m, n)
    objs = universe_projectives(cls, universe) + [regular_module(cls.algebra)]
    return span_through(m, n, objs)


def class_stably_equivalent(f: ModuleHom, g: ModuleHom, cls: AllowableClass) -> bool:
    if f.source is not g.source or f.target is not g.target:
        raise ValueError("maps must share source and target")
    diff = (f.matrix - g.matrix) % f.p
    if not diff.any():
        return True
    return solve_combination(stably_zero_span(f.source, f.target, cls), diff, f.p) is not None


def _annihilator(m: Module, span: Sequence[np.ndarray]) -> np.ndarray:
    """Rows L with L @ vec(x) = 0 exactly for x in the span of ``span``."""
    key = ("annihilator", id(span))
    hit = m._cache.get(key)
    if hit is not None and hit[0] is span:
        return hit[1]
    d = m.dim
    if len(span):
        ann = nullspace_array(np.array([np.asarray(x).ravel() for x in span]) % m.p, m.p)
    else:
        ann = np.eye(d * d, dtype=np.int64)
    m._cache[key] = (span, ann)
    return ann


def quasi_inverse(
    f: ModuleHom, span_m: Sequence[np.ndarray], span_n: Sequence[np.ndarray]
) -> ModuleHom | None:
    """h: N -> M with h o f - id_M in span_m and f o h - id_N in span_n."""
    m, n, p = f.source, f.target, f.p
    dm, dn = m.dim, n.dim
    lm, ln = _annihilator(m, span_m), _annihilator(n, span_n)
    rhs = np.concatenate([lm @ np.eye(dm, dtype=np.int64).ravel(), ln @ np.eye(dn, dtype=np.int64).ravel()]) % p
    hs = hom_space(n, m)
    if not hs:
        if rhs.any():
            return None
        return ModuleHom(n, m, np.zeros((dn, dm), dtype=np.int64), check=False)
    stack = np.array([h.matrix for h in hs])
    first = (f.matrix @ stack).reshape(len(hs), dm * dm) % p
    second = (stack @ f.matrix).reshape(len(hs), dn * dn) % p
    system = np.vstack([lm @ first.T, ln @ second.T]) % p
    sol = solve_array(system, rhs, p)
    if sol is None:
        return None
    mat = np.tensordot(sol[:, 0], stack, axes=1) % p
    return ModuleHom(n, m, mat, check=False)


def is_class_stable_equivalence(f: ModuleHom, cls: AllowableClass) -> ModuleHom | None:
    """A quasi-inverse of f modulo maps through class projectives, or None."""
    return quasi_inverse(
        f, stably_zero_span(f.source, f.source, cls), stably_zero_span(f.target, f.target, cls)
    )


def class_stably_equivalent_objects(m: Module, n: Module, cls: AllowableClass, cap: int = 1 << 12) -> ModuleHom | None:
    """Some class stable equivalence M -> N, searching Hom(M, N) up to ``cap`` maps."""
    for count, f in enumerate(all_homs(m, n)):
        if count >= cap:
            raise BudgetExceeded(f"Hom({m.label()}, {n.label()}) has more than {cap} elements")
        if is_class_stable_equivalence(f, cls) is not None:
            return f
    if m.dim == 0 and n.dim == 0:
        return ModuleHom(m, n, np.zeros((0, 0), dtype=np.int64), check=False)
    return None


# ---------------------------------------------------------------------------
# closure checks


def _all_maps(m: Module, n: Module) -> list[ModuleHom]:
    key = ("allhoms", n)
    cached = m._cache.get(key)
    if cached is None:
        cached = list(all_homs(m, n))
        m._cache[key] = cached
    return cached


def _universe_epis(universe: Sequence[Module]) -> list[ModuleHom]:
    return [g for y in universe for z in universe if z.dim <= y.dim for g in _all_maps(y, z) if g.is_surjective()]


def _detected_by_projectives(g: ModuleHom, projectives: Sequence[Module]) -> bool:
    return all(_hom_surjective(q, g) for q in projectives)


def _lifting_projectives(universe: Sequence[Module], epis: Sequence[ModuleHom]) -> list[Module]:
    return [u for u in universe if all(_hom_surjective(u, g) for g in epis)]


def sectile_closure_check(
    cls: AllowableClass,
    universe: Sequence[Module],
    *,
    smaller: Sequence[AllowableClass] | None = None,
    closure_member: Callable[[ModuleHom], bool] | None = None,
) -> CheckReport:
    """Check the defining properties of the sectile closure on a finite universe.

    E-projectives are found by lifting against the class epis inside the
    universe; the closure E_sc admits an epi g when Hom(P, g) is onto for
    every such projective.  ``closure_member`` replaces that test (fault
    injection).  ``smaller`` lists classes contained in ``cls`` used for the
    monotonicity check (defaults to the trivial class, plus for generated
    classes the class generated by the generators together with the universe).
    """
    universe = [u for u in universe if u.algebra is cls.algebra]
    epis = _universe_epis(universe)

    def e_member(g: ModuleHom, c: AllowableClass = cls) -> bool:
        return is_member(sequence_of_epi(g), c)

    e_epis = [g for g in epis if e_member(g)]
    proj_e = _lifting_projectives(universe, e_epis)

    def sc_member(g: ModuleHom) -> bool:
        if closure_member is not None:
            return bool(closure_member(g))
        return _detected_by_projectives(g, proj_e)

    sc_epis = [g for g in epis if sc_member(g)]
    proj_sc = _lifting_projectives(universe, sc_epis)
    parts = []

    # 1. sectile epics
    wit, count = [], 0
    for x in universe:
        for y in universe:
            for z in universe:
                if z.dim > y.dim or z.dim > x.dim:
                    continue
                for g in _all_maps(y, z):
                    if not g.is_surjective():
                        continue
                    g_in = sc_member(g)
                    for f in _all_maps(x, y):
                        count += 1
                        gf = g @ f
                        if not g_in and gf.is_surjective() and sc_member(gf):
                            wit.append({"kind": "sectile", "maps": [hom_witness(f, "f"), hom_witness(g, "g")]})
    parts.append(CheckReport("closure has sectile epics", not wit, count=count, witnesses=wit[:3]))

    # 2. same projectives
    names_e = sorted(u.label() for u in proj_e)
    names_sc = sorted(u.label() for u in proj_sc)
    wit = [] if names_e == names_sc else [{"kind": "projectives", "class": names_e, "closure": names_sc}]
    parts.append(CheckReport("same relative projectives", not wit, count=len(universe), witnesses=wit))

    # 3. stable equivalence of maps
    wit, count = [], 0
    for m in universe:
        for n in universe:
            span_e = span_through(m, n, proj_e)
            span_sc = span_through(m, n, proj_sc)
            for h in _all_maps(m, n):
                count += 1
                a = solve_combination(span_e, h.matrix, m.p) is not None
                b = solve_combination(span_sc, h.matrix, m.p) is not None
                if a != b:
                    wit.append({"kind": "map", "maps": [hom_witness(h, "difference")], "class": a, "closure": b})
    parts.append(CheckReport("same stable equivalence of maps", not wit, count=count, witnesses=wit[:3]))

    # 4. stable equivalence of objects
    wit, count = [], 0
    for m in universe:
        for n in universe:
            count += 1
            a = _stable_object_search(m, n, proj_e)
            b = _stable_object_search(m, n, proj_sc)
            if a != b:
                wit.append({"kind": "objects", "modules": [m.label(), n.label()], "class": a, "closure": b})
    parts.append(CheckReport("same stable equivalence of objects", not wit, count=count, witnesses=wit[:3]))

    # 5. idempotence
    wit = []
    for g in epis:
        if _detected_by_projectives(g, proj_sc) != sc_member(g):
            wit.append({"kind": "idempotence", "maps": [hom_witness(g, "epi")]})
    parts.append(CheckReport("closure is idempotent", not wit, count=len(epis), witnesses=wit[:3]))

    # 6. monotonicity
    if smaller is None:
        smaller = [Trivial(cls.algebra)]
        if cls.kind == "projgen":
            smaller.append(ProjGenerated(list(cls.generators) + [u for u in universe if u.dim]))
    wit, count = [], 0
    for f_cls in smaller:
        f_epis = [g for g in epis if e_member(g, f_cls)]
        contained = all(e_member(g) for g in f_epis)
        if not contained:
            wit.append({"kind": "premise", "class": f_cls.describe(), "detail": "not contained in the larger class"})
            continue
        f_proj = _lifting_projectives(universe, f_epis)
        for g in epis:
            count += 1
            if _detected_by_projectives(g, f_proj) and not sc_member(g):
                wit.append({"kind": "monotonicity", "class": f_cls.describe(), "maps": [hom_witness(g, "epi")]})
    parts.append(CheckReport("closure is monotone", not wit, count=count, witnesses=wit[:3]))

    return combine(
        f"sectile closure of {cls.describe()}",
        parts,
        notes=[f"universe: {', '.join(u.label() for u in universe)}", "projectives are universe-relative"],
    )


def _stable_object_search(m: Module, n: Module, objs: Sequence[Module]) -> bool:
    span_m = span_through(m, m, objs)
    span_n = span_through(n, n, objs)
    if m.dim == 0 and n.dim == 0:
        return True
    for f in _all_maps(m, n):
        if quasi_inverse(f, span_m, span_n) is not None:
            return True
    return False


def _composable_triples(universe: Sequence[Module]):
    for x, y, z in itertools.product(universe, repeat=3):
        nf = len(hom_space(x, y))
        ng = len(hom_space(y, z))
        yield x, y, z, x.p ** (nf + ng)


def _random_hom(m: Module, n: Module, rng: np.random.Generator) -> ModuleHom:
    basis = hom_space(m, n)
    mat = np.zeros((m.dim, n.dim), dtype=np.int64)
    for b in basis:
        mat = mat + int(rng.integers(0, m.p)) * b.matrix
    return ModuleHom(m, n, mat % m.p, check=False)


def retractile_sectile_check(
    cls: AllowableClass,
    universe: Sequence[Module],
    budget: int = 100_000,
    seed: int = 0,
    which: Sequence[str] = ("retractile", "sectile"),
) -> CheckReport:
    """Look for composable pairs violating retractile monics / sectile epics."""
    universe = list(universe)
    triples = list(_composable_triples(universe))
    total = sum(t[3] for t in triples)
    exhaustive = total <= budget
    rng = np.random.default_rng(seed)
    wit = {"retractile": [], "sectile": []}
    count = 0

    def pairs():
        if exhaustive:
            for x, y, z, _ in triples:
                for f in _all_maps(x, y):
                    for g in _all_maps(y, z):
                        yield f, g
        else:
            weights = np.array([t[3] for t in triples], dtype=float)
            weights /= weights.sum()
            for _ in range(budget):
                x, y, z, _ = triples[int(rng.choice(len(triples), p=weights))]
                yield _random_hom(x, y, rng), _random_hom(y, z, rng)

    for f, g in pairs():
        count += 1
        gf = g @ f
        if "retractile" in which and gf.is_injective() and is_class_mono(gf, cls) and not is_class_mono(f, cls):
            wit["retractile"].append({"kind": "retractile", "maps": [hom_witness(f, "f"), hom_witness(g, "g")]})
        if "sectile" in which and gf.is_surjective() and is_class_epi(gf, cls) and not is_class_epi(g, cls):
            wit["sectile"].append({"kind": "sectile", "maps": [hom_witness(f, "f"), hom_witness(g, "g")]})
    regime = "exhaustive" if exhaustive else "sampled"
    parts = [
        CheckReport(
            f"{w} {'monics' if w == 'retractile' else 'epics'}",
            not wit[w],
            regime=regime,
            count=count,
            seed=None if exhaustive else seed,
            witnesses=wit[w][:3],
        )
        for w in which
    ]
    return combine(f"{'/'.join(which)} check for {cls.describe()}", parts)


# ---------------------------------------------------------------------------
# coherence of push-forward and pull-back classes with base change


def pushforward_projectives_check(phi: AlgebraMorphism, inner: AllowableClass, universe: Sequence[Module]) -> CheckReport:
    """Relative projectivity decided through base change agrees with the
    lifting property against class epis inside the universe."""
    cls = Pushforward(phi, inner)
    wit = []
    for m in universe:
        via_bc = relative_projectives_test(m, cls)
        via_lift = lifts_against_universe(m, cls, universe)
        if via_bc != via_lift:
            wit.append({"module": m.label(), "base_change": via_bc, "lifting": via_lift})
    return CheckReport("push-forward projectives via base change", not wit, count=len(universe), witnesses=wit)


def pushforward_stable_check(phi: AlgebraMorphism, inner: AllowableClass, universe: Sequence[Module]) -> CheckReport:
    """Stable equivalence decided through base change agrees with factoring
    through universe-relative projectives over the source algebra."""
    cls = Pushforward(phi, inner)
    projs = [u for u in universe if u.dim and lifts_against_universe(u, cls, universe)]
    projs.append(regular_module(cls.algebra))
    maps_wit, equiv_wit = [], []
    n_maps = n_equiv = 0
    for m in universe:
        for n in universe:
            span_bc = stably_zero_span(m, n, cls)
            span_obj = span_through(m, n, projs)
            for h in _all_maps(m, n):
                n_maps += 1
                a = solve_combination(span_bc, h.matrix, m.p) is not None
                b = solve_combination(span_obj, h.matrix, m.p) is not None
                if a != b:
                    maps_wit.append({"maps": [hom_witness(h, "difference")], "base_change": a, "factoring": b})
                n_equiv += 1
                a = is_class_stable_equivalence(base_change_hom(h, phi), inner) is not None
                b = quasi_inverse(h, span_through(m, m, projs), span_through(n, n, projs)) is not None
                if a != b:
                    equiv_wit.append({"maps": [hom_witness(h, "map")], "base_change": a, "factoring": b})
    return combine(
        "push-forward stable equivalence via base change",
        [
            CheckReport("stably equivalent maps", not maps_wit, count=n_maps, witnesses=maps_wit[:3]),
            CheckReport("stable equivalences", not equiv_wit, count=n_equiv, witnesses=equiv_wit[:3]),
        ],
    )


def pullback_retractile_check(
    phi: AlgebraMorphism,
    inner: AllowableClass,
    universe: Sequence[Module],
    target_universe: Sequence[Module],
    budget: int = 100_000,
    seed: int = 0,
) -> CheckReport:
    """If the inner class has retractile monics then so does its pull-back."""
    premise = retractile_sectile_check(inner, target_universe, budget, seed, which=("retractile",))
    premise.name = f"premise: {premise.name}"
    conclusion = retractile_sectile_check(Pullback(phi, inner), universe, budget, seed, which=("retractile",))
    return combine("pull-back inherits retractile monics", [premise, conclusion])
