from __future__ import annotations

import pytest

from stablek import algebra as A
from stablek.allowable import (
    All,
    InjGenerated,
    ProjGenerated,
    Pullback,
    Pushforward,
    Trivial,
    class_stably_equivalent_objects,
    is_class_mono,
    is_class_stable_equivalence,
    is_member,
    relative_projectives_test,
    retractile_sectile_check,
    sectile_closure_check,
)
from stablek.decomp import enumerate_indecomposables
from stablek.errors import AlgebraMismatch, NotSurjective
from stablek.formats import parse_element
from stablek.module import (
    all_homs,
    coregular,
    direct_sum,
    regular_module,
    sequence_of_mono,
    simple_trivial,
    split_sequence,
    truncated,
    zero_module,
)

X2 = A.trunc_poly(2, 2)
X4 = A.trunc_poly(2, 4)


def _monos(m, n):
    return [f for f in all_homs(m, n) if f.is_injective()]


def _phi():
    c, phi = A.quotient_by_ideal(X4, A.ideal_generated(X4, [parse_element(X4, "x^2")]))
    return c, phi


def test_membership_of_the_basic_classes():
    k = simple_trivial(X2)
    reg = regular_module(X2)
    nonsplit = sequence_of_mono(_monos(k, reg)[0])
    split = split_sequence(k, k)
    assert is_member(nonsplit, All(X2)) and is_member(split, All(X2))
    assert not is_member(nonsplit, Trivial(X2))
    # Hom(A, -) is exact on everything; Hom(k, -) is not exact on k -> A -> k
    assert is_member(nonsplit, ProjGenerated([reg]))
    assert not is_member(nonsplit, ProjGenerated([k]))
    assert is_member(split, ProjGenerated([k]))
    assert not is_member(nonsplit, InjGenerated([k]))
    assert is_member(nonsplit, InjGenerated([coregular(X2)]))


def test_trivial_class_contains_sequences_with_a_zero_term():
    k = simple_trivial(X2)
    z = zero_module(X2)
    assert is_class_mono(_monos(z, k)[0], Trivial(X2))
    assert is_class_mono([f for f in all_homs(k, k) if f.is_iso()][0], Trivial(X2))


def test_relative_projectives():
    k = simple_trivial(X2)
    reg = regular_module(X2)
    assert relative_projectives_test(reg, All(X2))
    assert not relative_projectives_test(k, All(X2))
    assert relative_projectives_test(k, Trivial(X2))
    assert relative_projectives_test(k, ProjGenerated([k]))


def test_class_transport_needs_a_surjection_and_matching_algebras():
    c, phi = _phi()
    sub, inc = A.subalgebra_generated(X4, [parse_element(X4, "x^2")])
    with pytest.raises(NotSurjective):
        Pushforward(inc, All(X4))
    with pytest.raises(AlgebraMismatch):
        Pullback(phi, All(X4))
    with pytest.raises(AlgebraMismatch):
        ProjGenerated([simple_trivial(X2), simple_trivial(X4)])


def test_pullback_membership_detects_base_change_exactness():
    c, phi = _phi()
    pb = Pullback(phi, All(c))
    m1, m2, m3 = (truncated(X4, i) for i in (1, 2, 3))
    # M1 -> M2 -> M1 stays exact after base change to F_2[x]/x^2; the socle of M3 dies there
    assert all(is_class_mono(f, pb) for f in _monos(m1, m2))
    assert not any(is_class_mono(f, pb) for f in _monos(m1, m3))
    assert not any(is_class_mono(f, pb) for f in _monos(m2, m3))


def test_stable_equivalence_in_classes():
    k = simple_trivial(X2)
    reg = regular_module(X2)
    s = direct_sum([k, reg])
    assert is_class_stable_equivalence(s.projections[0], All(X2)) is not None
    assert is_class_stable_equivalence(s.injections[0], All(X2)) is not None
    zero = next(h for h in all_homs(k, k) if h.is_zero())
    assert is_class_stable_equivalence(zero, All(X2)) is None
    # every module is relatively projective for the trivial class, so every map is a stable equivalence
    assert is_class_stable_equivalence(zero, Trivial(X2)) is not None
    assert class_stably_equivalent_objects(s.module, k, All(X2)) is not None
    assert class_stably_equivalent_objects(reg, zero_module(X2), All(X2)) is not None


def test_trivial_class_is_not_retractile():
    k = simple_trivial(X2)
    universe = [zero_module(X2), k, direct_sum([k, k]).module]
    rep = retractile_sectile_check(Trivial(X2), universe, which=("retractile",))
    assert not rep.verdict
    assert rep.parts[0].regime == "exhaustive"
    wit = rep.parts[0].witnesses
    assert wit and wit[0]["kind"] == "retractile"
    assert [w["target"] for w in wit[0]["maps"]] == ["k ⊕ k", "k"]


def test_all_is_retractile_and_sectile():
    universe = [zero_module(X2)] + enumerate_indecomposables(X2, 2).modules
    assert retractile_sectile_check(All(X2), universe).verdict


def test_retractile_check_samples_over_budget():
    universe = [zero_module(X4)] + enumerate_indecomposables(X4, 4).modules
    rep = retractile_sectile_check(All(X4), universe, budget=50, seed=3)
    assert rep.verdict
    assert {p.regime for p in rep.parts} == {"sampled"}
    assert all(p.seed == 3 for p in rep.parts)


def test_sectile_closure_of_a_generated_class():
    k = simple_trivial(X2)
    universe = [zero_module(X2), k, regular_module(X2), direct_sum([k, k]).module]
    rep = sectile_closure_check(ProjGenerated([k]), universe)
    assert rep.verdict
    assert len(rep.parts) == 6


def test_sectile_closure_fault_injection():
    k = simple_trivial(X2)
    universe = [zero_module(X2), k, regular_module(X2), direct_sum([k, k]).module]
    # a closure that admits nothing but isomorphisms loses the idempotence and monotonicity properties
    rep = sectile_closure_check(ProjGenerated([regular_module(X2)]), universe, closure_member=lambda g: g.is_iso())
    assert not rep.verdict
    assert {p.name for p in rep.failed()} & {"closure is idempotent", "closure is monotone"}
