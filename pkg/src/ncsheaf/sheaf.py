"""Locally polynomial sections over open subsets of Omega.

A section over ``V`` assigns one polynomial to every connected component of
every level ``V_q``.  This is the dense part of the function algebras built on
``prod_q C^inf(V_q)`` (real case) or ``prod_q O(V_q)`` (complex case); the
completions themselves are not represented.

The product is the one forced by the enveloping algebra,

    (s t)_q(l) = sum_{i+j=q} s_i(l) t_j(l - i),

and it only makes sense when ``V_q <= V_i`` and ``V_q <= V_j + i``, which is
what the shift condition on ``V`` guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domains import (TAIL_FULL, UNION, OmegaOpen, in_base, omega_combine,
                      omega_member, omega_validate, region_subset,
                      regions_overlap, require_valid)
from .errors import (FieldMismatchError, IncompatibleSectionsError,
                     InvalidOmegaError, NotASubsetError, OutOfDomainError,
                     PreconditionError)
from .uea import PBWElement, Polynomial, poly_eval, poly_shift


def _n_components(region):
    return 0 if region.is_empty() else len(region.components())


@dataclass(frozen=True, eq=False)
class Section:
    """Per-level tuples of polynomials, one per component of ``parent.level(q)``.

    For a parent with an empty tail there is one entry per listed level.  With
    a full tail the levels past the stored ones are zero.
    """

    parent: OmegaOpen
    levels: tuple = ()

    def __post_init__(self):
        field = self.parent.space
        levels = [tuple(lv) for lv in self.levels]
        listed = len(self.parent.levels)
        if self.parent.tail != TAIL_FULL and len(levels) > listed:
            extra = levels[listed:]
            if any(not f.is_zero() for lv in extra for f in lv):
                raise PreconditionError("section has data on levels where the parent is empty")
            levels = levels[:listed]
        while len(levels) < listed:
            levels.append(None)
        out = []
        for q, lv in enumerate(levels):
            n = _n_components(self.parent.level(q))
            if lv is None:
                lv = (Polynomial.zero(field),) * n
            if len(lv) != n:
                raise PreconditionError(
                    f"level {q}: {len(lv)} polynomials for {n} components")
            for f in lv:
                if f.field != field:
                    raise FieldMismatchError(f"{f.field} polynomial over {field} Omega")
            out.append(lv)
        while len(out) > listed and all(f.is_zero() for f in out[-1]):
            out.pop()
        object.__setattr__(self, "levels", tuple(out))

    @property
    def field(self):
        return self.parent.space

    @property
    def n_levels(self):
        return len(self.levels)

    @property
    def density_guaranteed(self):
        """True when polynomials are dense in every level algebra of the parent.

        Always true in the real case; in the complex case only for the basic
        disk neighbourhoods.  Elsewhere the product formula is still applied but
        is no longer pinned down by density.
        """
        return self.parent.space == "real" or in_base(self.parent)

    def level_polys(self, q):
        if q < len(self.levels):
            return self.levels[q]
        return (Polynomial.zero(self.field),) * _n_components(self.parent.level(q))

    def poly(self, q, k):
        return self.level_polys(q)[k]

    def at(self, q, x):
        """Polynomial of the component of level ``q`` containing the point ``x``."""
        k = self.parent.level(q).component_index(x)
        if k is None:
            raise OutOfDomainError(f"point {x} is not in level {q}")
        return self.poly(q, k)

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        if self.parent != other.parent:
            return False
        n = max(self.n_levels, other.n_levels)
        return all(self.level_polys(q) == other.level_polys(q) for q in range(n))

    __hash__ = None

    def _zip(self, other, op):
        if self.parent != other.parent:
            raise PreconditionError("sections live over different open sets")
        n = max(self.n_levels, other.n_levels)
        return Section(self.parent, tuple(
            tuple(op(f, g) for f, g in zip(self.level_polys(q), other.level_polys(q)))
            for q in range(n)))

    def __add__(self, other):
        return self._zip(other, lambda f, g: f + g)

    def __sub__(self, other):
        return self._zip(other, lambda f, g: f - g)

    def scale(self, c):
        return Section(self.parent, tuple(tuple(f.scale(c) for f in lv) for lv in self.levels))

    def __repr__(self):
        return f"Section({self.parent!r}, {list(self.levels)})"


def zero_section(V: OmegaOpen) -> Section:
    return Section(V, ())


def unit_section(V: OmegaOpen) -> Section:
    one = Polynomial.constant(1, V.space)
    return Section(V, ((one,) * _n_components(V.level(0)),))


def embed_u(a: PBWElement, V: OmegaOpen) -> Section:
    """Send ``sum_q f_q(e1) e2^q`` to the section that is ``f_q`` on all of ``V_q``."""
    require_valid(V)
    if a.field != V.space:
        raise FieldMismatchError(f"{a.field} element over {V.space} Omega")
    n = len(a.levels) if V.tail == TAIL_FULL else len(V.levels)
    n = max(n, len(V.levels))
    return Section(V, tuple((a.level(q),) * _n_components(V.level(q)) for q in range(n)))


def nc_mul(V: OmegaOpen, s: Section, t: Section) -> Section:
    check = omega_validate(V)
    if not check:
        raise InvalidOmegaError(
            f"multiplication needs V_(q+1) inside V_q & (V_q + 1); fails at level {check.level}",
            level=check.level)
    if s.parent != V or t.parent != V:
        raise PreconditionError("sections must live over V")
    if V.tail == TAIL_FULL:
        n = max(len(V.levels), s.n_levels + t.n_levels - 1)
    else:
        n = len(V.levels)
    field = V.space
    out = []
    for q in range(n):
        Vq = V.level(q)
        row = []
        for k in range(_n_components(Vq)):
            x = Vq.representative(k)
            acc = Polynomial.zero(field)
            for i in range(q + 1):
                j = q - i
                if i >= s.n_levels or j >= t.n_levels:
                    continue
                f = s.at(i, x)
                g = t.at(j, x - i)
                if f and g:
                    acc = acc + f * poly_shift(g, -i)
            row.append(acc)
        out.append(tuple(row))
    return Section(V, tuple(out))


def _require_subset(W: OmegaOpen, V: OmegaOpen):
    if V.space != W.space:
        raise FieldMismatchError("open sets over different fields")
    if W.tail == TAIL_FULL and V.tail != TAIL_FULL:
        raise NotASubsetError("W has a full tail but V does not")
    for q in range(max(len(V.levels), len(W.levels))):
        if not region_subset(W.level(q), V.level(q)):
            raise NotASubsetError(f"W_{q} is not contained in V_{q}")


def tau_restrict(V: OmegaOpen, W: OmegaOpen, s: Section) -> Section:
    """Restriction map from sections over ``V`` to sections over ``W <= V``."""
    require_valid(V)
    require_valid(W)
    if s.parent != V:
        raise PreconditionError("section does not live over V")
    _require_subset(W, V)
    n = max(len(W.levels), s.n_levels) if W.tail == TAIL_FULL else len(W.levels)
    out = []
    for q in range(n):
        Wq = W.level(q)
        out.append(tuple(s.at(q, Wq.representative(k)) for k in range(_n_components(Wq))))
    return Section(W, tuple(out))


def glue(cover, sections) -> Section:
    """Unique section over the union of ``cover`` restricting to each given section."""
    cover, sections = list(cover), list(sections)
    if not cover or len(cover) != len(sections):
        raise PreconditionError("need one section per cover member, at least one member")
    for k, (V, s) in enumerate(zip(cover, sections)):
        check = omega_validate(V)
        if not check:
            raise InvalidOmegaError(f"cover member {k} is invalid at level {check.level}",
                                    level=check.level)
        if s.parent != V:
            raise PreconditionError(f"section {k} does not live over cover member {k}")
    depth = max(max(len(V.levels) for V in cover), max(s.n_levels for s in sections))

    for a in range(len(cover)):
        for b in range(a + 1, len(cover)):
            for q in range(depth):
                A, B = cover[a].level(q), cover[b].level(q)
                if not regions_overlap(A, B):
                    continue
                for ka, ca in enumerate(A.components() if not A.is_empty() else []):
                    for kb, cb in enumerate(B.components() if not B.is_empty() else []):
                        if regions_overlap(ca, cb) and \
                                sections[a].poly(q, ka) != sections[b].poly(q, kb):
                            raise IncompatibleSectionsError(
                                f"sections {a} and {b} disagree at level {q} "
                                f"(components {ka} and {kb})",
                                pair=(a, b), level=q, component=(ka, kb))

    union = cover[0]
    for V in cover[1:]:
        union = omega_combine(union, V, UNION)
    n = depth if union.tail == TAIL_FULL else len(union.levels)
    out = []
    for q in range(n):
        Uq = union.level(q)
        row = [None] * _n_components(Uq)
        for V, s in zip(cover, sections):
            Vq = V.level(q)
            for k in range(_n_components(Vq)):
                c = Uq.component_index(Vq.representative(k))
                f = s.poly(q, k)
                if row[c] is None:
                    row[c] = f
                elif row[c] != f:
                    raise IncompatibleSectionsError(
                        f"component {c} of level {q} receives two different polynomials",
                        level=q, component=c)
        if any(f is None for f in row):
            raise AssertionError(f"level {q} of the union is not covered")
        out.append(tuple(row))
    return Section(union, tuple(out))


def section_eval(s: Section, q: int, x):
    if not omega_member(s.parent, x, q):
        raise OutOfDomainError(f"sigma_({x},{q}) is not in the open set")
    return poly_eval(s.at(q, x), x)
