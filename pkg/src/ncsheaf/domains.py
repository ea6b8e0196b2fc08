"""Exact one-variable regions, the topology of Omega, W-tuples and compact tuples.

Real regions are finite unions of open (or closed) intervals with rational
endpoints; open intervals may be unbounded.  Complex regions come in two
flavours: unions of open axis-aligned rectangles, which are closed under both
union and intersection, and unions of open disks, used for the base of
shifted-disk neighbourhoods where every inclusion we need reduces to comparing
centers and radii.

An open subset of Omega is a finite level sequence ``V_0, ..., V_p`` plus a tail
marker saying whether the levels past ``p`` are empty or the whole space.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import (FieldMismatchError, InvalidOmegaError, ParseError,
                     PreconditionError, RangeError, UnsupportedOperationError)
from .uea import COMPLEX, REAL, GaussianRational, to_scalar

NEG_INF = -math.inf
POS_INF = math.inf

UNION = "union"
INTERSECT = "intersect"

TAIL_EMPTY = "empty"
TAIL_FULL = "full"


def parse_extended(text):
    """Parse a rational string or one of the sentinels ``-inf``/``+inf``."""
    if text in ("-inf", "-oo"):
        return NEG_INF
    if text in ("+inf", "inf", "+oo", "oo"):
        return POS_INF
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ParseError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad endpoint {text!r}") from exc


def format_extended(x):
    if x == NEG_INF:
        return "-inf"
    if x == POS_INF:
        return "+inf"
    return str(x)


def _ext(x):
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError("finite endpoints must be exact rationals")
    if isinstance(x, str):
        return parse_extended(x)
    return Fraction(x)


def _mid(lo, hi):
    """A rational point strictly between ``lo < hi`` (either may be infinite)."""
    if lo == NEG_INF and hi == POS_INF:
        return Fraction(0)
    if lo == NEG_INF:
        return hi - 1
    if hi == POS_INF:
        return lo + 1
    return (lo + hi) / 2


@dataclass
class Validity:
    """Boolean outcome with a diagnostic of the first violation."""

    ok: bool
    level: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


# -- real regions -------------------------------------------------------------


@dataclass(frozen=True)
class RealOpenSet:
    """Finite union of open intervals, stored sorted and disjoint.

    Intervals that overlap are merged; intervals that merely touch, like
    ``(1, 3)`` and ``(3, 5)``, are kept apart because the shared endpoint is not
    in the set.
    """

    intervals: tuple = ()

    space = REAL
    kind = "interval_union"

    def __post_init__(self):
        ivs = []
        for lo, hi in self.intervals:
            lo, hi = _ext(lo), _ext(hi)
            if lo < hi:
                ivs.append((lo, hi))
        ivs.sort()
        merged = []
        for lo, hi in ivs:
            if merged and lo < merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def of(cls, *pairs):
        return cls(tuple(pairs))

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def whole(cls):
        return cls(((NEG_INF, POS_INF),))

    def is_empty(self):
        return not self.intervals

    def is_whole(self):
        return self.intervals == ((NEG_INF, POS_INF),)

    def union(self, other):
        return RealOpenSet(self.intervals + other.intervals)

    def intersect(self, other):
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return RealOpenSet(tuple(out))

    def shift(self, c):
        c = to_scalar(c, REAL)
        return RealOpenSet(tuple((lo + c, hi + c) for lo, hi in self.intervals))

    def issubset(self, other):
        if isinstance(other, RealOpenSet):
            return all(any(c <= a and b <= d for c, d in other.intervals)
                       for a, b in self.intervals)
        raise FieldMismatchError("cannot compare real and complex regions")

    def overlaps(self, other):
        return any(max(a, c) < min(b, d)
                   for a, b in self.intervals for c, d in other.intervals)

    def contains(self, x):
        x = to_scalar(x, REAL)
        return self.component_index(x) is not None

    def components(self):
        return [RealOpenSet((iv,)) for iv in self.intervals]

    def component_index(self, x):
        """Index of the interval containing ``x``, or ``None``."""
        k = bisect.bisect_right([lo for lo, _ in self.intervals], x) - 1
        if k >= 0:
            lo, hi = self.intervals[k]
            if lo < x < hi:
                return k
        return None

    def representative(self, k=0):
        lo, hi = self.intervals[k]
        return _mid(lo, hi)

    def __repr__(self):
        if not self.intervals:
            return "RealOpenSet(empty)"
        body = " u ".join(f"({format_extended(lo)}, {format_extended(hi)})"
                          for lo, hi in self.intervals)
        return f"RealOpenSet({body})"


@dataclass(frozen=True)
class RealCompactSet:
    """Finite union of closed bounded intervals, merged when they meet."""

    intervals: tuple = ()

    def __post_init__(self):
        ivs = []
        for lo, hi in self.intervals:
            lo, hi = Fraction(lo), Fraction(hi)
            if lo > hi:
                raise ValueError(f"empty closed interval [{lo}, {hi}]")
            ivs.append((lo, hi))
        ivs.sort()
        merged = []
        for lo, hi in ivs:
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def of(cls, *pairs):
        return cls(tuple(pairs))

    @classmethod
    def empty(cls):
        return cls(())

    def is_empty(self):
        return not self.intervals

    def has_dense_interior(self):
        return all(lo < hi for lo, hi in self.intervals)

    def union(self, other):
        return RealCompactSet(self.intervals + other.intervals)

    def intersect(self, other):
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo <= hi:
                    out.append((lo, hi))
        return RealCompactSet(tuple(out))

    def shift(self, c):
        c = Fraction(c)
        return RealCompactSet(tuple((lo + c, hi + c) for lo, hi in self.intervals))

    def issubset(self, other):
        """Inclusion in another compact set or in an open set."""
        if isinstance(other, RealCompactSet):
            return all(any(c <= a and b <= d for c, d in other.intervals)
                       for a, b in self.intervals)
        if isinstance(other, RealOpenSet):
            return all(any(c < a and b < d for c, d in other.intervals)
                       for a, b in self.intervals)
        raise FieldMismatchError("compact sets are real")

    def contains(self, x):
        x = Fraction(x)
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def components(self):
        return [RealCompactSet((iv,)) for iv in self.intervals]

    def __repr__(self):
        if not self.intervals:
            return "RealCompactSet(empty)"
        return "RealCompactSet(" + " u ".join(f"[{lo}, {hi}]" for lo, hi in self.intervals) + ")"


# -- complex regions ----------------------------------------------------------


def _gauss(x):
    return x if isinstance(x, GaussianRational) else to_scalar(x, COMPLEX)


class ComplexRegion:
    """Common behaviour of :class:`RectUnion` and :class:`DiskUnion`."""

    space = COMPLEX
    kind = None

    def __eq__(self, other):
        if not isinstance(other, ComplexRegion):
            return NotImplemented
        if self.is_empty() or other.is_empty():
            return self.is_empty() and other.is_empty()
        return region_subset(self, other) and region_subset(other, self)

    def __hash__(self):
        return 0 if self.is_empty() else hash(self.kind)

    def contains(self, x):
        return self.piece_index(_gauss(x)) is not None

    def _groups(self):
        """Connected components as lists of piece indices, in first-piece order."""
        cached = self.__dict__.get("_group_cache")
        if cached is None:
            cached = self._compute_groups()
            # regions are immutable, so the partition can be memoized
            object.__setattr__(self, "_group_cache", cached)
        return cached

    def _compute_groups(self):
        n = len(self._pieces())
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        pieces = self._pieces()
        for a in range(n):
            for b in range(a + 1, n):
                if self._piece_overlap(pieces[a], pieces[b]):
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
        groups = {}
        for a in range(n):
            groups.setdefault(find(a), []).append(a)
        return [groups[r] for r in sorted(groups)]

    def components(self):
        pieces = self._pieces()
        return [type(self)(tuple(pieces[k] for k in g)) for g in self._groups()]

    def component_index(self, x):
        x = _gauss(x)
        k = self.piece_index(x)
        if k is None:
            return None
        for idx, g in enumerate(self._groups()):
            if k in g:
                return idx
        return None

    def representative(self, k=0):
        g = self._groups()[k]
        return self._piece_center(self._pieces()[g[0]])


@dataclass(frozen=True, eq=False)
class RectUnion(ComplexRegion):
    """Union of open rectangles ``(x0, x1) x (y0, y1)``; corners may be infinite."""

    rects: tuple = ()

    kind = "rect_union"

    def __post_init__(self):
        rs = []
        for r in self.rects:
            x0, y0, x1, y1 = (_ext(v) for v in r)
            if x0 < x1 and y0 < y1 and (x0, y0, x1, y1) not in rs:
                rs.append((x0, y0, x1, y1))
        kept = [r for k, r in enumerate(rs)
                if not any(j != k and _rect_in_rect(r, s) for j, s in enumerate(rs))]
        kept.sort()
        object.__setattr__(self, "rects", tuple(kept))

    @classmethod
    def of(cls, *rects):
        return cls(tuple(rects))

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def whole(cls):
        return cls(((NEG_INF, NEG_INF, POS_INF, POS_INF),))

    def is_empty(self):
        return not self.rects

    def is_whole(self):
        return self.rects == ((NEG_INF, NEG_INF, POS_INF, POS_INF),)

    def _pieces(self):
        return self.rects

    @staticmethod
    def _piece_overlap(r, s):
        return max(r[0], s[0]) < min(r[2], s[2]) and max(r[1], s[1]) < min(r[3], s[3])

    @staticmethod
    def _piece_center(r):
        return GaussianRational(_mid(r[0], r[2]), _mid(r[1], r[3]))

    def piece_index(self, x):
        for k, (x0, y0, x1, y1) in enumerate(self.rects):
            if x0 < x.re < x1 and y0 < x.im < y1:
                return k
        return None

    def union(self, other):
        return RectUnion(self.rects + other.rects)

    def intersect(self, other):
        out = []
        for r in self.rects:
            for s in other.rects:
                if self._piece_overlap(r, s):
                    out.append((max(r[0], s[0]), max(r[1], s[1]),
                                min(r[2], s[2]), min(r[3], s[3])))
        return RectUnion(tuple(out))

    def shift(self, c):
        c = _gauss(c)
        return RectUnion(tuple((x0 + c.re, y0 + c.im, x1 + c.re, y1 + c.im)
                               for x0, y0, x1, y1 in self.rects))

    def covers_rect(self, r):
        """Exact test ``open rect r <= self``.

        Membership in each of our rectangles is constant on every cell, edge and
        vertex of the grid cut out by all rectangle sides inside ``r``, so one
        sample point per grid face decides the question.
        """
        x0, y0, x1, y1 = r

        def reps(lo, hi, cuts):
            pts = sorted({lo, hi} | {c for c in cuts if lo < c < hi})
            out = [_mid(a, b) for a, b in zip(pts, pts[1:])]
            out.extend(pts[1:-1])
            return out

        xs = reps(x0, x1, [v for s in self.rects for v in (s[0], s[2])])
        ys = reps(y0, y1, [v for s in self.rects for v in (s[1], s[3])])
        for x in xs:
            for y in ys:
                if not any(a < x < c and b < y < d for a, b, c, d in self.rects):
                    return False
        return True

    def __repr__(self):
        if not self.rects:
            return "RectUnion(empty)"
        body = " u ".join("(" + ",".join(format_extended(v) for v in r) + ")" for r in self.rects)
        return f"RectUnion({body})"


def _rect_in_rect(r, s):
    return s[0] <= r[0] and s[1] <= r[1] and r[2] <= s[2] and r[3] <= s[3]


@lru_cache(maxsize=1 << 16)
def _disk_in_disk(d, e):
    (c1, r1), (c2, r2) = d, e
    return r1 <= r2 and (c1 - c2).norm2() <= (r2 - r1) ** 2


@dataclass(frozen=True, eq=False)
class DiskUnion(ComplexRegion):
    """Union of open disks ``(center, radius)`` with rational data.

    Intersection is not supported: the result is not a union of disks.
    """

    disks: tuple = ()

    kind = "disk_union"

    def __post_init__(self):
        ds = []
        for c, r in self.disks:
            c, r = _gauss(c), Fraction(r)
            if r <= 0:
                raise ValueError("disk radius must be positive")
            if (c, r) not in ds:
                ds.append((c, r))
        kept = [d for k, d in enumerate(ds)
                if not any(j != k and _disk_in_disk(d, e) and (j < k or not _disk_in_disk(e, d))
                           for j, e in enumerate(ds))]
        kept.sort(key=lambda d: (d[0].re, d[0].im, d[1]))
        object.__setattr__(self, "disks", tuple(kept))

    @classmethod
    def of(cls, *disks):
        return cls(tuple(disks))

    @classmethod
    def empty(cls):
        return cls(())

    def is_empty(self):
        return not self.disks

    def is_whole(self):
        return False

    def _pieces(self):
        return self.disks

    @staticmethod
    @lru_cache(maxsize=1 << 16)
    def _piece_overlap(d, e):
        return (d[0] - e[0]).norm2() < (d[1] + e[1]) ** 2

    @staticmethod
    def _piece_center(d):
        return d[0]

    def piece_index(self, x):
        for k, (c, r) in enumerate(self.disks):
            if (x - c).norm2() < r * r:
                return k
        return None

    def union(self, other):
        return DiskUnion(self.disks + other.disks)

    def intersect(self, other):
        raise UnsupportedOperationError("intersection of disk unions is not a disk union")

    def shift(self, c):
        c = _gauss(c)
        return DiskUnion(tuple((d + c, r) for d, r in self.disks))

    def __repr__(self):
        if not self.disks:
            return "DiskUnion(empty)"
        return "DiskUnion(" + " u ".join(f"D({c}, {r})" for c, r in self.disks) + ")"


def _disk_rect_overlap(d, r):
    c, rad = d
    px = min(max(c.re, r[0]), r[2])
    py = min(max(c.im, r[1]), r[3])
    return (px - c.re) ** 2 + (py - c.im) ** 2 < rad * rad


# -- region operations --------------------------------------------------------


def _same_space(a, b):
    if a.space != b.space:
        raise FieldMismatchError(f"regions over {a.space} and {b.space}")


def region_combine(a, b, op):
    """Exact union or intersection of two regions of the same space."""
    _same_space(a, b)
    if op not in (UNION, INTERSECT):
        raise ValueError(f"unknown op {op!r}")
    if a.space == COMPLEX and a.kind != b.kind:
        if a.is_empty() or b.is_empty():
            if op == INTERSECT:
                return a if a.is_empty() else b
            return b if a.is_empty() else a
        raise UnsupportedOperationError(f"cannot combine {a.kind} with {b.kind}")
    return a.union(b) if op == UNION else a.intersect(b)


def region_shift(a, c):
    return a.shift(c)


def region_subset(a, b):
    """Inclusion test.

    Exact for interval unions and rectangle unions.  Whenever a disk union is
    involved the test is conservative: each piece of ``a`` must sit inside a
    single piece of ``b``, which can reject true inclusions.
    """
    _same_space(a, b)
    if a.is_empty():
        return True
    if b.is_empty():
        return False
    if a.space == REAL:
        return a.issubset(b)
    if isinstance(a, RectUnion) and isinstance(b, RectUnion):
        return all(b.covers_rect(r) for r in a.rects)
    if isinstance(a, DiskUnion) and isinstance(b, DiskUnion):
        return all(any(_disk_in_disk(d, e) for e in b.disks) for d in a.disks)
    if isinstance(a, DiskUnion):
        return all(any(x0 <= c.re - r and c.re + r <= x1 and y0 <= c.im - r and c.im + r <= y1
                       for x0, y0, x1, y1 in b.rects) for c, r in a.disks)
    return all(any(_rect_in_disk(rect, d) for d in b.disks) for rect in a.rects)


def _rect_in_disk(rect, d):
    if any(math.isinf(v) for v in rect):
        return False
    c, r = d
    return all((GaussianRational(x, y) - c).norm2() <= r * r
               for x in (rect[0], rect[2]) for y in (rect[1], rect[3]))


def region_member(a, x):
    return a.contains(x)


def regions_overlap(a, b):
    """Whether two open regions share a point (exact, all kinds)."""
    _same_space(a, b)
    if a.is_empty() or b.is_empty():
        return False
    if a.space == REAL:
        return a.overlaps(b)
    for p in a._pieces():
        for q in b._pieces():
            if isinstance(a, RectUnion) and isinstance(b, RectUnion):
                hit = RectUnion._piece_overlap(p, q)
            elif isinstance(a, DiskUnion) and isinstance(b, DiskUnion):
                hit = DiskUnion._piece_overlap(p, q)
            elif isinstance(a, DiskUnion):
                hit = _disk_rect_overlap(p, q)
            else:
                hit = _disk_rect_overlap(q, p)
            if hit:
                return True
    return False


def empty_region(space, kind=None):
    if space == REAL:
        return RealOpenSet.empty()
    return DiskUnion.empty() if kind == "disk_union" else RectUnion.empty()


def whole_region(space):
    return RealOpenSet.whole() if space == REAL else RectUnion.whole()


# -- Omega ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OmegaOpen:
    """Open subset of Omega: points ``sigma_{r,q}`` with ``r`` in ``levels[q]``."""

    space: str
    levels: tuple = ()
    tail: str = TAIL_EMPTY

    def __post_init__(self):
        if self.space not in (REAL, COMPLEX):
            raise ValueError(f"unknown space {self.space!r}")
        if self.tail not in (TAIL_EMPTY, TAIL_FULL):
            raise ValueError(f"unknown tail {self.tail!r}")
        levels = tuple(self.levels)
        for lv in levels:
            if lv.space != self.space:
                raise FieldMismatchError(f"{lv.space} level in {self.space} Omega")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def real(cls, *levels, tail=TAIL_EMPTY):
        return cls(REAL, tuple(lv if isinstance(lv, RealOpenSet) else RealOpenSet(tuple(lv))
                               for lv in levels), tail)

    @classmethod
    def whole(cls, space=REAL):
        return cls(space, (), TAIL_FULL)

    @property
    def kind(self):
        for lv in self.levels:
            if not lv.is_empty():
                return lv.kind
        return None

    def level(self, q):
        if q < len(self.levels):
            return self.levels[q]
        if self.tail == TAIL_FULL:
            return whole_region(self.space)
        return empty_region(self.space, self.kind)

    def support(self):
        """Number of levels that can be nonempty (``None`` for a full tail)."""
        if self.tail == TAIL_FULL:
            return None
        n = len(self.levels)
        while n and self.levels[n - 1].is_empty():
            n -= 1
        return n

    def __eq__(self, other):
        if not isinstance(other, OmegaOpen):
            return NotImplemented
        if self.space != other.space or self.tail != other.tail:
            return False
        n = max(len(self.levels), len(other.levels))
        return all(self.level(q) == other.level(q) for q in range(n))

    def __hash__(self):
        return hash((self.space, self.tail))

    def __repr__(self):
        return f"OmegaOpen({self.space}, {list(self.levels)}, tail={self.tail})"


def omega_validate(V: OmegaOpen) -> Validity:
    """Check ``V_{q+1} <= V_q & (V_q + 1)`` for every level, tail included."""
    if V.tail == TAIL_FULL:
        for q, lv in enumerate(V.levels):
            if not lv.is_whole():
                return Validity(False, q, "a full tail needs every level to be the whole space")
        return Validity(True)
    for q in range(len(V.levels)):
        cur, nxt = V.level(q), V.level(q + 1)
        if nxt.is_empty():
            continue
        if not region_subset(nxt, cur):
            return Validity(False, q, f"V_{q + 1} is not contained in V_{q}")
        if not region_subset(nxt, cur.shift(1)):
            return Validity(False, q, f"V_{q + 1} is not contained in V_{q} + 1")
    return Validity(True)


def require_valid(V: OmegaOpen):
    v = omega_validate(V)
    if not v:
        raise InvalidOmegaError(f"invalid open set of Omega at level {v.level}: {v.detail}",
                                level=v.level)


def omega_combine(V: OmegaOpen, W: OmegaOpen, op) -> OmegaOpen:
    if V.space != W.space:
        raise FieldMismatchError(f"Omega over {V.space} and {W.space}")
    require_valid(V)
    require_valid(W)
    if op == UNION:
        tail = TAIL_FULL if TAIL_FULL in (V.tail, W.tail) else TAIL_EMPTY
    elif op == INTERSECT:
        tail = TAIL_FULL if V.tail == W.tail == TAIL_FULL else TAIL_EMPTY
    else:
        raise ValueError(f"unknown op {op!r}")
    n = max(len(V.levels), len(W.levels))
    if tail == TAIL_FULL:
        # a full operand forces every level of the union to the whole space
        levels = tuple(whole_region(V.space) for _ in range(n))
    else:
        levels = tuple(region_combine(V.level(q), W.level(q), op) for q in range(n))
    out = OmegaOpen(V.space, levels, tail)
    require_valid(out)
    return out


def omega_member(V: OmegaOpen, r, q) -> bool:
    if q < 0:
        raise RangeError("level must be non-negative")
    return region_member(V.level(q), r)


# -- tuples ----------------------------------------------------------------------


def _index_pairs(p):
    return [(i, j) for i in range(1, p + 1) for j in range(i, p + 1)]


@dataclass(frozen=True, eq=False)
class DomainTuple:
    """Open regions ``W_ij`` for ``1 <= i <= j <= p`` (1-based)."""

    p: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        missing = [ij for ij in _index_pairs(self.p) if ij not in self.entries]
        if missing:
            raise ValueError(f"DomainTuple of order {self.p} misses entries {missing}")

    def __getitem__(self, ij):
        return self.entries[ij]

    @property
    def space(self):
        return self.entries[(1, 1)].space if self.p else REAL

    def __eq__(self, other):
        if not isinstance(other, DomainTuple):
            return NotImplemented
        return self.p == other.p and all(self[ij] == other[ij] for ij in _index_pairs(self.p))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CompactTuple:
    """Compact sets ``K_ij`` for ``1 <= i <= j <= p``; entries may be empty."""

    p: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        full = {ij: self.entries.get(ij, RealCompactSet.empty()) for ij in _index_pairs(self.p)}
        object.__setattr__(self, "entries", full)

    def __getitem__(self, ij):
        return self.entries[ij]

    def has_dense_interior(self):
        return all(k.has_dense_interior() for k in self.entries.values())

    def issubset(self, other):
        return all(self[ij].issubset(other[ij]) for ij in _index_pairs(self.p))

    def __eq__(self, other):
        if not isinstance(other, CompactTuple):
            return NotImplemented
        return self.p == other.p and self.entries == other.entries

    __hash__ = None


def build_w_tuple(V: OmegaOpen, q: int) -> DomainTuple:
    """``W_ij = V_{j-i} - q - 1 + i`` for ``1 <= i <= j <= q + 1``."""
    require_valid(V)
    p = q + 1
    entries = {(i, j): V.level(j - i).shift(i - q - 1) for i, j in _index_pairs(p)}
    out = DomainTuple(p, entries)
    check = tuple_condition_check(out)
    assert check, check
    return out


def _subset(a, b):
    if isinstance(a, RealCompactSet):
        return a.issubset(b)
    return region_subset(a, b)


def tuple_condition_check(T) -> Validity:
    """Exhaustive check of ``T_ik <= T_ij & T_jk`` over ``i <= j <= k``."""
    p = T.p
    for i in range(1, p + 1):
        for j in range(i, p + 1):
            for k in range(j, p + 1):
                a = T[(i, k)]
                if not (_subset(a, T[(i, j)]) and _subset(a, T[(j, k)])):
                    return Validity(False, (i, j, k),
                                    f"entry ({i},{k}) not inside ({i},{j}) & ({j},{k})")
    return Validity(True)


def base_open(lam, p: int, eps) -> OmegaOpen:
    """Basic neighbourhood: ``V_q`` is the union of ``eps``-disks at ``lam, lam-1, ..., lam-p+q``."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise RangeError("eps must lie in (0, 1)")
    if p < 0:
        raise RangeError("p must be non-negative")
    lam = _gauss(lam)
    levels = tuple(DiskUnion(tuple((lam - k, eps) for k in range(p - q + 1)))
                   for q in range(p + 1))
    out = OmegaOpen(COMPLEX, levels, TAIL_EMPTY)
    require_valid(out)
    return out


def in_base(V: OmegaOpen) -> bool:
    """Whether ``V`` has exactly the shape produced by :func:`base_open`."""
    if V.space != COMPLEX or V.tail != TAIL_EMPTY:
        return False
    p = V.support()
    if not p:
        return False
    p -= 1
    top = V.level(p)
    if not isinstance(top, DiskUnion) or len(top.disks) != 1:
        return False
    lam = top.disks[0][0]
    for q in range(p + 1):
        lv = V.level(q)
        if not isinstance(lv, DiskUnion):
            return False
        radii = {r for _, r in lv.disks}
        if len(radii) != 1 or not 0 < next(iter(radii)) < 1:
            return False
        if sorted((c.re, c.im) for c, _ in lv.disks) != sorted(
                ((lam - k).re, (lam - k).im) for k in range(p - q + 1)):
            return False
    return True


def exhaust(K: CompactTuple, W: DomainTuple) -> CompactTuple:
    """Enlarge ``K`` to a tuple with the inclusion property, inside ``W``.

    For every component ``[a, b]`` of ``K_{i'k'}`` a closed interval ``S``
    around it is chosen inside ``W_{i'j} & W_{jk'}`` for all ``i' <= j <= k'``,
    and ``S`` is added to every entry ``(i, k)`` with ``i' <= i <= k <= k'``.
    Each such block satisfies the inclusion property and unions of blocks do
    too, so the finite union is the answer.
    """
    if K.p != W.p:
        raise PreconditionError(f"order mismatch: {K.p} vs {W.p}")
    if W.space != REAL:
        raise UnsupportedOperationError("exhaust is implemented for real tuples")
    p = W.p
    for ij in _index_pairs(p):
        if not K[ij].issubset(W[ij]):
            raise PreconditionError(f"K{ij} is not contained in W{ij}")
    w_ok = tuple_condition_check(W)
    if not w_ok:
        raise PreconditionError(f"W violates the tuple condition: {w_ok.detail}")

    out = {ij: RealCompactSet.empty() for ij in _index_pairs(p)}
    for i0, k0 in _index_pairs(p):
        if K[(i0, k0)].is_empty():
            continue
        room = RealOpenSet.whole()
        for j in range(i0, k0 + 1):
            room = room.intersect(W[(i0, j)]).intersect(W[(j, k0)])
        for a, b in K[(i0, k0)].intervals:
            lo, hi = next((lo, hi) for lo, hi in room.intervals if lo < a and b < hi)
            gap = min(a - lo, hi - b)
            delta = Fraction(1) if math.isinf(gap) else min(Fraction(1), gap / 2)
            S = RealCompactSet.of((a - delta, b + delta))
            for i in range(i0, k0 + 1):
                for k in range(i, k0 + 1):
                    out[(i, k)] = out[(i, k)].union(S)
    result = CompactTuple(p, out)
    assert K.issubset(result) and result.issubset(W)
    assert tuple_condition_check(result) and result.has_dense_interior()
    return result


def cover_compacts(K: CompactTuple, q: int):
    """``M_k = union over j - i = k of (K_ij + q + 1 - i)`` for ``k = 0..q``."""
    if K.p != q + 1:
        raise PreconditionError(f"expected a tuple of order {q + 1}, got {K.p}")
    M = []
    for k in range(q + 1):
        acc = RealCompactSet.empty()
        for i in range(1, q + 2 - k):
            acc = acc.union(K[(i, i + k)].shift(q + 1 - i))
        M.append(acc)
    return M
