"""Random generators shared by the unit, property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from ncsheaf.domains import (CompactTuple, OmegaOpen, RealCompactSet,
                             RealOpenSet, RectUnion, build_w_tuple)
from ncsheaf.sheaf import Section
from ncsheaf.uea import COMPLEX, REAL, GaussianRational, PBWElement, Polynomial

BOX = 8  # infinite endpoints are clamped to +-BOX before sampling sub-intervals

# criterion lines collected by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


def rand_rational(rng, lo=-10, hi=10, den=4):
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_scalar(rng, field=REAL, lo=-10, hi=10, den=1):
    if field == REAL:
        return rand_rational(rng, lo, hi, den)
    return GaussianRational(rand_rational(rng, lo, hi, den), rand_rational(rng, lo, hi, den))


def rand_poly(rng, max_deg=5, field=REAL, lo=-10, hi=10, den=1):
    deg = rng.randint(-1, max_deg)
    return Polynomial(tuple(rand_scalar(rng, field, lo, hi, den) for _ in range(deg + 1)), field)


def rand_pbw(rng, max_level=5, max_deg=5, field=REAL, lo=-10, hi=10):
    n = rng.randint(0, max_level + 1)
    return PBWElement(tuple(rand_poly(rng, max_deg, field, lo, hi) for _ in range(n)), field)


# -- hypothesis strategies -------------------------------------------------------


def fractions(lo=-10, hi=10, max_den=4):
    return st.builds(Fraction, st.integers(lo * max_den, hi * max_den), st.integers(1, max_den))


def gaussians(lo=-5, hi=5):
    return st.builds(GaussianRational, fractions(lo, hi), fractions(lo, hi))


def polynomials(field=REAL, max_deg=4, lo=-10, hi=10):
    coeff = fractions(lo, hi) if field == REAL else gaussians(lo, hi)
    return st.lists(coeff, max_size=max_deg + 1).map(lambda cs: Polynomial(tuple(cs), field))


def pbw_elements(field=REAL, max_level=3, max_deg=3):
    return st.lists(polynomials(field, max_deg, -5, 5), max_size=max_level + 1).map(
        lambda ls: PBWElement(tuple(ls), field))


# -- real open sets --------------------------------------------------------------


def _clamp(lo, hi):
    return max(lo, Fraction(-BOX)), min(hi, Fraction(BOX))


def _sub_interval(rng, lo, hi, den=8):
    """Random open sub-interval of ``(lo, hi)`` with rational endpoints."""
    lo, hi = _clamp(lo, hi)
    if hi <= lo:
        return None
    i, j = sorted(rng.sample(range(den + 1), 2))
    return lo + (hi - lo) * Fraction(i, den), lo + (hi - lo) * Fraction(j, den)


def rand_real_open(rng, max_components=4):
    ivs = []
    for _ in range(rng.randint(1, max_components)):
        a = rand_rational(rng, -6, 6, 2)
        b = a + Fraction(rng.randint(1, 12), 2)
        ivs.append((a, b))
    return RealOpenSet(tuple(ivs))


def sub_open(rng, region: RealOpenSet, max_components=4, keep=0.8):
    """Random open subset of ``region``; may be empty."""
    out = []
    for lo, hi in region.intervals:
        if rng.random() > keep:
            continue
        for _ in range(rng.choice((1, 1, 2))):
            iv = _sub_interval(rng, lo, hi)
            if iv:
                out.append(iv)
    out = RealOpenSet(tuple(out))
    return RealOpenSet(out.intervals[:max_components])


def rand_valid_omega(rng, max_levels=5, max_components=4, within: OmegaOpen = None):
    """Valid real open set with at most ``max_levels`` nonempty levels.

    Each level is a random open subset of ``V_q & (V_q + 1)`` (and of the
    matching level of ``within``), so validity holds by construction.
    """
    if within is None:
        levels = [rand_real_open(rng, max_components)]
    else:
        levels = [sub_open(rng, within.level(0), max_components, keep=0.9)]
    n = rng.randint(1, max_levels)
    while len(levels) < n and not levels[-1].is_empty():
        room = levels[-1].intersect(levels[-1].shift(1))
        if within is not None:
            room = room.intersect(within.level(len(levels)))
        nxt = sub_open(rng, room, max_components)
        if nxt.is_empty():
            break
        levels.append(nxt)
    while levels and levels[-1].is_empty():
        levels.pop()
    return OmegaOpen(REAL, tuple(levels))


def rand_section(rng, V: OmegaOpen, max_deg=3):
    field = V.space
    return Section(V, tuple(
        tuple(rand_poly(rng, max_deg, field, -5, 5) for _ in V.level(q).components())
        if not V.level(q).is_empty() else ()
        for q in range(len(V.levels))))


# -- complex rectangle unions ------------------------------------------------------------


def rand_rect(rng):
    x0, y0 = rand_rational(rng, -4, 4, 2), rand_rational(rng, -4, 4, 2)
    return (x0, y0, x0 + Fraction(rng.randint(1, 8), 2), y0 + Fraction(rng.randint(1, 8), 2))


def _sub_rect(rng, r):
    xs = _sub_interval(rng, r[0], r[2])
    ys = _sub_interval(rng, r[1], r[3])
    if xs is None or ys is None:
        return None
    return (xs[0], ys[0], xs[1], ys[1])


def sub_rect_open(rng, region: RectUnion, max_pieces=4, keep=0.8):
    out = []
    for r in region.rects:
        if rng.random() > keep:
            continue
        s = _sub_rect(rng, r)
        if s:
            out.append(s)
    return RectUnion(tuple(out[:max_pieces]))


def rand_valid_rect_omega(rng, max_levels=4, max_pieces=3, within: OmegaOpen = None):
    if within is None:
        levels = [RectUnion(tuple(rand_rect(rng) for _ in range(rng.randint(1, max_pieces))))]
    else:
        levels = [sub_rect_open(rng, within.level(0), max_pieces, keep=0.9)]
    n = rng.randint(1, max_levels)
    while len(levels) < n and not levels[-1].is_empty():
        room = levels[-1].intersect(levels[-1].shift(1))
        if within is not None:
            room = room.intersect(within.level(len(levels)))
        nxt = sub_rect_open(rng, room, max_pieces)
        if nxt.is_empty():
            break
        levels.append(nxt)
    while levels and levels[-1].is_empty():
        levels.pop()
    return OmegaOpen(COMPLEX, tuple(levels))


# -- compact tuples ----------------------------------------------------------------------


def rand_compact_inside(rng, region: RealOpenSet, p_empty=0.3):
    if region.is_empty() or rng.random() < p_empty:
        return RealCompactSet.empty()
    out = []
    for lo, hi in region.intervals:
        if rng.random() < 0.5:
            continue
        iv = _sub_interval(rng, lo, hi)
        if iv:
            a, b = iv
            # closed and strictly inside
            mid = (a + b) / 2
            out.append((a + (mid - a) / 4, b - (b - mid) / 4))
    return RealCompactSet(tuple(out))


def rand_w_and_k(rng, max_order=4):
    """A real W-tuple of random order and compacts ``K_ij`` inside it."""
    while True:
        V = rand_valid_omega(rng, max_levels=max_order)
        q = rng.randint(0, max_order - 1)
        W = build_w_tuple(V, q)
        if any(not W[ij].is_empty() for ij in W.entries):
            break
    K = CompactTuple(W.p, {ij: rand_compact_inside(rng, W[ij]) for ij in W.entries})
    return K, W


def rand_compact_tuple(rng, q):
    """Order ``q + 1`` tuple of single intervals, not necessarily nested."""
    entries = {}
    for i in range(1, q + 2):
        for j in range(i, q + 2):
            if rng.random() < 0.8:
                a = Fraction(rng.randint(-8, 8), 4)
                entries[(i, j)] = RealCompactSet(((a, a + Fraction(rng.randint(0, 8), 4)),))
    return CompactTuple(q + 1, entries)


def seeded(seed):
    return random.Random(seed)


# -- sheaf axiom suite ----------------------------------------------------------------------


def _random_cover(rng, kind, max_members=4):
    """``(ambient, members)`` with every member a valid open inside ``ambient``."""
    from ncsheaf.domains import UNION, base_open, omega_combine
    m = rng.randint(1, max_members)
    if kind == "real":
        V = rand_valid_omega(rng, max_levels=4)
        return V, [rand_valid_omega(rng, max_levels=4, within=V) for _ in range(m)]
    if kind == "rect":
        V = rand_valid_rect_omega(rng)
        return V, [rand_valid_rect_omega(rng, within=V) for _ in range(m)]
    if kind == "base":
        p = rng.randint(0, 2)
        members = []
        for _ in range(m):
            lam = GaussianRational(rand_rational(rng, -3, 3, 2), rand_rational(rng, -3, 3, 2))
            members.append(base_open(lam, p, rng.choice((Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)))))
        V = members[0]
        for W in members[1:]:
            V = omega_combine(V, W, UNION)
        return V, members
    raise ValueError(kind)


def _shrink(rng, kind, W):
    from ncsheaf.domains import DiskUnion, OmegaOpen
    if kind == "real":
        return rand_valid_omega(rng, max_levels=4, within=W)
    if kind == "rect":
        return rand_valid_rect_omega(rng, within=W)
    # same centres, half the radius: still a basic neighbourhood
    return OmegaOpen(W.space, tuple(DiskUnion(tuple((c, r / 2) for c, r in lv.disks))
                                    for lv in W.levels))


def check_sheaf_axioms(rng, kind):
    """One random instance of gluing, restriction functoriality and the homomorphism law.

    Raises AssertionError on the first failure.
    """
    from ncsheaf.sheaf import embed_u, glue, nc_mul, tau_restrict

    V, cover = _random_cover(rng, kind)
    s = rand_section(rng, V)
    t = rand_section(rng, V)
    pieces = [tau_restrict(V, W, s) for W in cover]

    g = glue(cover, pieces)
    U = g.parent
    for W, piece in zip(cover, pieces):
        assert tau_restrict(U, W, g) == piece, "restriction of the glued section"
    # uniqueness: the restriction of s to the union also restricts to every piece
    assert g == tau_restrict(V, U, s), "glued section is not unique"

    assert tau_restrict(V, V, s) == s
    for W in cover:
        X = _shrink(rng, kind, W)
        assert tau_restrict(W, X, tau_restrict(V, W, s)) == tau_restrict(V, X, s), "functoriality"
        lhs = tau_restrict(V, W, nc_mul(V, s, t))
        rhs = nc_mul(W, tau_restrict(V, W, s), tau_restrict(V, W, t))
        assert lhs == rhs, "restriction is not multiplicative"

    a = rand_pbw(rng, 2, 2, V.space, -5, 5)
    b = rand_pbw(rng, 2, 2, V.space, -5, 5)
    from ncsheaf.uea import pbw_mul
    assert nc_mul(V, embed_u(a, V), embed_u(b, V)) == embed_u(pbw_mul(a, b), V)
    if kind == "base":
        assert all(W.space == COMPLEX for W in cover)
