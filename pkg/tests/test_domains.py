from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (rand_real_open, rand_valid_omega, rand_valid_rect_omega,
                     rand_w_and_k, seeded)
from ncsheaf.domains import (INTERSECT, UNION, CompactTuple, DiskUnion,
                             DomainTuple, OmegaOpen, RealCompactSet, RealOpenSet,
                             RectUnion, base_open, build_w_tuple, cover_compacts,
                             exhaust, in_base, omega_combine, omega_member,
                             omega_validate, region_combine, region_member,
                             region_shift, region_subset, regions_overlap,
                             tuple_condition_check)
from ncsheaf.errors import (InvalidOmegaError, PreconditionError, RangeError,
                            UnsupportedOperationError)
from ncsheaf.uea import GaussianRational

I = GaussianRational(0, 1)


def R(*pairs):
    return RealOpenSet(tuple((F(a), F(b)) for a, b in pairs))


def Kc(*pairs):
    return RealCompactSet(tuple((F(a), F(b)) for a, b in pairs))


def D(c, r):
    return DiskUnion(((GaussianRational(c), F(r)),))


V3 = OmegaOpen.real(R((0, 3)), R((1, 3)), R((2, 3)))


# -- regions ------------------------------------------------------------------------


def test_region_combine_examples():
    assert region_combine(R((0, 3)), R((2, 5)), UNION) == R((0, 5))
    assert region_combine(R((0, 1)), R((2, 3)), INTERSECT).is_empty()
    a = R((1, 3), (3, 5))
    b = R((2, 4), (4, 6))
    assert region_combine(a, b, INTERSECT) == R((2, 3), (3, 4), (4, 5))


def test_touching_intervals_stay_apart():
    a = R((1, 3), (3, 5))
    assert len(a.components()) == 2
    assert not a.contains(3)


def test_region_shift_examples():
    assert region_shift(R((0, 3)), 1) == R((1, 4))
    assert region_shift(RealOpenSet.empty(), 5).is_empty()
    assert region_shift(D(0, F(1, 2)), -1) == D(-1, F(1, 2))


def test_region_subset_examples():
    assert region_subset(R((1, 2)), R((0, 3)))
    assert region_subset(R((0, 3)), R((0, 3), (5, 6)))
    assert region_subset(D(0, F(1, 4)), D(0, F(1, 2)))
    assert not region_subset(R((0, 3)), R((0, 1), (1, 3)))


def test_region_member_examples():
    assert region_member(R((0, 3)), 1)
    assert not region_member(R((0, 3)), 3)
    assert region_member(D(0, F(3, 4)), I / 2)
    assert not region_member(D(0, F(1, 2)), I / 2)


def test_rect_union_exact_subset():
    two = RectUnion(((F(0), F(0), F(2), F(1)), (F(1), F(0), F(3), F(1))))
    strip = RectUnion(((F(0), F(0), F(3), F(1)),))
    assert region_subset(strip, two)
    assert len(two.components()) == 1
    touching = RectUnion(((F(0), F(0), F(1), F(1)), (F(1), F(0), F(3), F(1))))
    assert not region_subset(strip, touching)   # the segment x = 1 is missing
    assert len(touching.components()) == 2


def test_disk_components_and_intersect():
    u = DiskUnion(((GaussianRational(0), F(1, 2)), (GaussianRational(-1), F(1, 2))))
    assert len(u.components()) == 2      # tangent disks do not meet
    v = DiskUnion(((GaussianRational(0), F(3, 4)), (GaussianRational(-1), F(3, 4))))
    assert len(v.components()) == 1
    with pytest.raises(UnsupportedOperationError):
        region_combine(u, v, INTERSECT)


def test_disk_rect_overlap():
    d = D(0, 1)
    assert regions_overlap(d, RectUnion(((F(0), F(0), F(5), F(5)),)))
    assert not regions_overlap(d, RectUnion(((F(1), F(1), F(5), F(5)),)))


# -- Omega ------------------------------------------------------------------------------


def test_omega_validate_examples():
    assert omega_validate(V3)
    assert omega_validate(OmegaOpen.whole())
    bad = OmegaOpen.real(R((0, 1)), R((0, 1)))
    check = omega_validate(bad)
    assert not check and check.level == 0


def test_omega_combine_examples():
    W = OmegaOpen.real(R((2, 5)), R((3, 5)))
    assert omega_combine(V3, W, UNION) == OmegaOpen.real(R((0, 5)), R((1, 3), (3, 5)), R((2, 3)))
    assert omega_combine(V3, V3, INTERSECT) == V3
    A = OmegaOpen.real(R((0, 3)), R((1, 3)))
    assert omega_combine(A, W, INTERSECT) == OmegaOpen.real(R((2, 3)))


def test_omega_combine_rejects_invalid_input():
    with pytest.raises(InvalidOmegaError):
        omega_combine(OmegaOpen.real(R((0, 1)), R((0, 1))), V3, UNION)


def test_omega_member_examples():
    assert omega_member(V3, F(5, 2), 2)
    assert not omega_member(V3, F(5, 2), 3)
    assert not omega_member(V3, F(1, 2), 1)


def test_full_tail_levels_are_whole():
    whole = OmegaOpen.whole()
    assert omega_member(whole, 10 ** 6, 40)
    assert omega_combine(V3, whole, UNION) == whole
    assert omega_combine(V3, whole, INTERSECT) == V3


# -- W-tuples ------------------------------------------------------------------------------


def test_build_w_tuple_example():
    W = build_w_tuple(V3, 2)
    expect = {(1, 1): (-2, 1), (1, 2): (-1, 1), (1, 3): (0, 1),
              (2, 2): (-1, 2), (2, 3): (0, 2), (3, 3): (0, 3)}
    for ij, iv in expect.items():
        assert W[ij] == R(iv), ij
    assert W[(1, 3)].issubset(W[(1, 2)].intersect(W[(2, 3)]))
    assert tuple_condition_check(W)


def test_build_w_tuple_whole():
    W = build_w_tuple(OmegaOpen.whole(), 4)
    assert all(W[ij].is_whole() for ij in W.entries)


def test_tuple_condition_examples():
    same = DomainTuple(3, {(i, j): R((0, 1)) for i in range(1, 4) for j in range(i, 4)})
    assert tuple_condition_check(same)
    entries = {(i, j): RealOpenSet.whole() for i in range(1, 4) for j in range(i, 4)}
    entries.update({(1, 2): R((0, 1)), (2, 3): R((5, 6)), (1, 3): R((0, 1))})
    check = tuple_condition_check(DomainTuple(3, entries))
    assert not check and check.level == (1, 2, 3)


def test_base_open_examples():
    V = base_open(0, 1, F(1, 2))
    assert V.level(0) == DiskUnion(((GaussianRational(0), F(1, 2)), (GaussianRational(-1), F(1, 2))))
    assert V.level(1) == D(0, F(1, 2))
    assert omega_validate(V)
    assert in_base(V)
    single = base_open(0, 0, F(1, 4))
    assert len(single.levels) == 1 and single.level(0) == D(0, F(1, 4))
    with pytest.raises(RangeError):
        base_open(0, 1, 1)


def test_exhaust_examples():
    W = DomainTuple(2, {(1, 1): R((0, 3)), (2, 2): R((0, 3)), (1, 2): R((1, 2))})
    K = CompactTuple(2, {(1, 2): Kc((F(5, 4), F(7, 4)))})
    out = exhaust(K, W)
    assert out[(1, 1)] == out[(1, 2)] == out[(2, 2)]
    assert Kc((F(5, 4), F(7, 4))).issubset(out[(1, 2)])
    assert all(out[ij].issubset(R((1, 2))) for ij in out.entries)

    assert all(c.is_empty() for c in exhaust(CompactTuple(2, {}), W).entries.values())

    W1 = DomainTuple(1, {(1, 1): R((-1, 2))})
    out = exhaust(CompactTuple(1, {(1, 1): Kc((0, 1))}), W1)
    assert Kc((0, 1)).issubset(out[(1, 1)]) and out[(1, 1)].issubset(R((-1, 2)))


def test_exhaust_preconditions():
    W = DomainTuple(1, {(1, 1): R((0, 1))})
    with pytest.raises(PreconditionError):
        exhaust(CompactTuple(1, {(1, 1): Kc((0, 1))}), W)


def test_cover_compacts_examples():
    K = CompactTuple(2, {(1, 1): Kc((-1, 0)), (2, 2): Kc((0, 1)), (1, 2): Kc((F(-1, 2), 0))})
    M0, M1 = cover_compacts(K, 1)
    assert M0 == Kc((0, 1))
    assert M1 == Kc((F(1, 2), 1))
    assert all(m.is_empty() for m in cover_compacts(CompactTuple(3, {}), 2))
    assert cover_compacts(CompactTuple(1, {(1, 1): Kc((2, 5))}), 0) == [Kc((2, 5))]


# -- properties -----------------------------------------------------------------------------

seeds = st.integers(0, 2 ** 32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_topology_closure(seed):
    rng = seeded(seed)
    V, W = rand_valid_omega(rng), rand_valid_omega(rng)
    for op in (UNION, INTERSECT):
        assert omega_validate(omega_combine(V, W, op))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_topology_closure_rects(seed):
    rng = seeded(seed)
    V, W = rand_valid_rect_omega(rng), rand_valid_rect_omega(rng)
    for op in (UNION, INTERSECT):
        assert omega_validate(omega_combine(V, W, op))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_saturation(seed):
    rng = seeded(seed)
    V = rand_valid_omega(rng)
    for q in range(len(V.levels)):
        lv = V.level(q + 1)
        for k in range(len(lv.components()) if not lv.is_empty() else 0):
            r = lv.representative(k)
            assert omega_member(V, r, q) and omega_member(V, r - 1, q)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_levels_monotone_and_derived_inclusion(seed):
    V = rand_valid_omega(seeded(seed))
    n = len(V.levels)
    for q in range(n):
        assert V.level(q + 1).issubset(V.level(q))
        for i in range(q + 1):
            j = q - i
            assert V.level(q).issubset(V.level(i))
            assert V.level(q).issubset(V.level(j).shift(i))


@settings(max_examples=80, deadline=None)
@given(seeds, st.fractions(-5, 5, max_denominator=6))
def test_shift_distributes(seed, c):
    rng = seeded(seed)
    A, B = rand_real_open(rng), rand_real_open(rng)
    for op in (UNION, INTERSECT):
        assert region_shift(region_combine(A, B, op), c) == \
            region_combine(region_shift(A, c), region_shift(B, c), op)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 8))
def test_w_tuples_satisfy_condition(seed, q):
    assert tuple_condition_check(build_w_tuple(rand_valid_omega(seeded(seed)), q))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_exhaust_properties(seed):
    K, W = rand_w_and_k(seeded(seed))
    out = exhaust(K, W)
    assert K.issubset(out)
    assert all(out[ij].issubset(W[ij]) for ij in W.entries)
    assert tuple_condition_check(out)
    assert out.has_dense_interior()
