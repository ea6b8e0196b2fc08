"""Finite-dimensional representations of aff(1) and triangular matrix algebras.

``sigma_{r,q}`` sends ``e1`` to ``diag(q, q-1, ..., 0) + r`` and ``e2`` to the
upper shift ``Y_q``.  Letting ``r`` vary gives the polynomial-matrix
representation ``pi_q(a)(l) = sigma_{l,q}(a)`` whose ``(i, j)`` entry is
``f_{j-i}(l + q + 1 - i)``; the entry lives on the domain ``W_ij`` built from
the open set ``V``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .domains import DomainTuple, OmegaOpen, build_w_tuple, tuple_condition_check, region_subset
from .errors import DegreeError, FieldMismatchError, OutOfDomainError, RangeError, ShapeError
from .uea import REAL, GaussianRational, PBWElement, Polynomial, poly_eval, poly_shift, to_scalar


@dataclass(frozen=True)
class LocalPoly:
    """One polynomial per connected component of an entry's domain."""

    polys: tuple

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))


def _pairs(p):
    return [(i, j) for i in range(1, p + 1) for j in range(i, p + 1)]


def _entry_polys(entry, region, field):
    n = 0 if region.is_empty() else len(region.components())
    if entry is None:
        return (Polynomial.zero(field),) * n
    if isinstance(entry, Polynomial):
        return (entry,) * n
    return entry.polys


def _lookup(entry, region, x, field):
    if entry is None:
        return Polynomial.zero(field)
    if isinstance(entry, Polynomial):
        return entry
    k = region.component_index(x)
    if k is None:
        raise OutOfDomainError(f"{x} is outside the entry domain")
    return entry.polys[k]


@dataclass(frozen=True, eq=False)
class TriMatrixElement:
    """Upper triangular matrix with entry ``(i, j)`` a function on ``domains[i, j]``.

    Entries are :class:`Polynomial` (global polynomial, restricted) or
    :class:`LocalPoly`.  Entries over empty domains are absent.
    """

    p: int
    domains: DomainTuple
    entries: dict = field(default_factory=dict)
    field: str = REAL

    def __post_init__(self):
        if self.domains.p != self.p:
            raise ShapeError(f"domain tuple of order {self.domains.p} for a matrix of order {self.p}")
        out = {}
        for ij in _pairs(self.p):
            dom = self.domains[ij]
            e = self.entries.get(ij)
            if dom.is_empty():
                if e is not None and any(not f.is_zero() for f in _as_list(e)):
                    raise ShapeError(f"entry {ij} is nonzero over an empty domain")
                continue
            if e is None:
                e = Polynomial.zero(self.field)
            if isinstance(e, LocalPoly) and len(e.polys) != len(dom.components()):
                raise ShapeError(f"entry {ij}: wrong number of component polynomials")
            for f in _as_list(e):
                if f.field != self.field:
                    raise FieldMismatchError(f"entry {ij} is over {f.field}")
            out[ij] = e
        extra = set(self.entries) - set(_pairs(self.p))
        if extra:
            raise ShapeError(f"entries outside the upper triangle: {sorted(extra)}")
        object.__setattr__(self, "entries", out)

    def entry(self, i, j):
        return self.entries.get((i, j))

    def __eq__(self, other):
        if not isinstance(other, TriMatrixElement):
            return NotImplemented
        if self.p != other.p or self.field != other.field or self.domains != other.domains:
            return False
        return all(_entry_polys(self.entry(*ij), self.domains[ij], self.field)
                   == _entry_polys(other.entry(*ij), other.domains[ij], other.field)
                   for ij in _pairs(self.p))

    __hash__ = None

    def evaluate(self, lam):
        """Exact matrix of values at ``lam``; absent entries are zero."""
        zero = to_scalar(0, self.field)
        rows = [[zero] * self.p for _ in range(self.p)]
        for (i, j), e in self.entries.items():
            f = _lookup(e, self.domains[(i, j)], lam, self.field)
            rows[i - 1][j - 1] = poly_eval(f, lam)
        return tuple(tuple(r) for r in rows)

    def evaluate_numeric(self, lam):
        return NumericTriMatrix(np.array([[complex(v) for v in row] for row in self.evaluate(lam)]))


def _as_list(e):
    return [e] if isinstance(e, Polynomial) else list(e.polys)


@dataclass(frozen=True, eq=False)
class NumericTriMatrix:
    """Complex double-precision upper triangular matrix."""

    data: np.ndarray

    def __post_init__(self):
        a = np.array(self.data, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ShapeError(f"expected a square matrix, got shape {a.shape}")
        if np.any(np.tril(a, -1) != 0):
            raise ShapeError("matrix has nonzero entries below the diagonal")
        object.__setattr__(self, "data", a)

    @property
    def p(self):
        return self.data.shape[0]

    def __matmul__(self, other):
        return NumericTriMatrix(self.data @ other.data)

    def __eq__(self, other):
        if not isinstance(other, NumericTriMatrix):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.all(self.data == other.data))

    __hash__ = None

    def norm(self):
        """Induced infinity norm (max absolute row sum)."""
        return float(np.max(np.sum(np.abs(self.data), axis=1))) if self.p else 0.0


# -- exact matrix helpers --------------------------------------------------------


def mat_mul(a, b):
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    return tuple(tuple(sum((a[i][t] * b[t][j] for t in range(m)), 0 * a[0][0]) for j in range(k))
                 for i in range(n))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_commutator(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def unit_matrix(p, i, j):
    """Exact ``E_ij`` (1-based)."""
    return tuple(tuple(Fraction(int(r == i - 1 and c == j - 1)) for c in range(p)) for r in range(p))


def triangular_basis(p):
    return [unit_matrix(p, i, j) for i, j in _pairs(p)]


# -- representations --------------------------------------------------------------


def sigma_exact(r, q, g, field=REAL):
    """Exact ``sigma_{r,q}(e1)`` or ``sigma_{r,q}(e2)`` as a tuple of rows."""
    if q < 0:
        raise RangeError("q must be non-negative")
    r = to_scalar(r, field)
    zero = to_scalar(0, field)
    n = q + 1
    rows = [[zero] * n for _ in range(n)]
    for k in range(n):
        if g == "e1":
            rows[k][k] = r + (q - k)
        elif g == "e2":
            if k + 1 < n:
                rows[k][k + 1] = to_scalar(1, field)
        else:
            raise ValueError(f"unknown generator {g!r}")
    return tuple(tuple(row) for row in rows)


def sigma_rep(r, q, g) -> NumericTriMatrix:
    """Numeric ``sigma_{r,q}(g)`` for ``g`` in ``{"e1", "e2"}``."""
    if q < 0:
        raise RangeError("q must be non-negative")
    n = q + 1
    if g == "e1":
        return NumericTriMatrix(np.diag([complex(r) + (q - k) for k in range(n)]))
    if g == "e2":
        return NumericTriMatrix(np.eye(n, k=1, dtype=complex))
    raise ValueError(f"unknown generator {g!r}")


def pi_tilde(a: PBWElement, q: int, V: OmegaOpen = None) -> TriMatrixElement:
    """Polynomial matrix ``l -> sigma_{l,q}(a)`` over the W-tuple of ``V``.

    ``V`` defaults to the whole of Omega, where every domain is the full line
    (or plane).
    """
    if q < 0:
        raise RangeError("q must be non-negative")
    if V is None:
        V = OmegaOpen.whole(a.field)
    if V.space != a.field:
        raise FieldMismatchError(f"{a.field} element over {V.space} Omega")
    dom = build_w_tuple(V, q)
    p = q + 1
    # the only function on an empty domain is zero
    entries = {(i, j): poly_shift(a.level(j - i), q + 1 - i) for i, j in _pairs(p)
               if not dom[(i, j)].is_empty()}
    return TriMatrixElement(p, dom, entries, a.field)


def tri_mul(A: TriMatrixElement, B: TriMatrixElement) -> TriMatrixElement:
    if A.p != B.p:
        raise ShapeError(f"order mismatch: {A.p} vs {B.p}")
    if A.field != B.field:
        raise FieldMismatchError(f"{A.field} times {B.field}")
    for ij in _pairs(A.p):
        if not region_subset(A.domains[ij], B.domains[ij]):
            raise ShapeError(f"domain {ij} of the right factor does not contain the left one")
    ok = tuple_condition_check(A.domains)
    if not ok:
        raise ShapeError(f"domains violate the tuple condition: {ok.detail}")
    p, fld = A.p, A.field
    out = {}
    for i, k in _pairs(p):
        D = A.domains[(i, k)]
        if D.is_empty():
            continue
        factors = [(A.entry(i, j), A.domains[(i, j)], B.entry(j, k), B.domains[(j, k)])
                   for j in range(i, k + 1)]
        if all(not isinstance(f, LocalPoly) and not isinstance(g, LocalPoly)
               for f, _, g, _ in factors):
            acc = Polynomial.zero(fld)
            for f, _, g, _ in factors:
                if f is not None and g is not None:
                    acc = acc + f * g
            out[(i, k)] = acc
            continue
        polys = []
        for c in range(len(D.components())):
            x = D.representative(c)
            acc = Polynomial.zero(fld)
            for f, df, g, dg in factors:
                acc = acc + _lookup(f, df, x, fld) * _lookup(g, dg, x, fld)
            polys.append(acc)
        out[(i, k)] = LocalPoly(tuple(polys))
    return TriMatrixElement(p, A.domains, out, fld)


def identity_element(domains: DomainTuple, field=REAL) -> TriMatrixElement:
    one = Polynomial.constant(1, field)
    return TriMatrixElement(domains.p, domains,
                            {(i, i): one for i in range(1, domains.p + 1)
                             if not domains[(i, i)].is_empty()}, field)


# -- solvability ---------------------------------------------------------------------


def _flatten(m):
    return tuple(x for row in m for x in row)


def row_space(vectors):
    """Reduced row echelon basis of the span of exact vectors."""
    basis = []
    pivots = []
    for v in vectors:
        v = list(v)
        for b, pc in zip(basis, pivots):
            if v[pc]:
                c = v[pc]
                v = [x - c * y for x, y in zip(v, b)]
        pc = next((k for k, x in enumerate(v) if x), None)
        if pc is None:
            continue
        lead = v[pc]
        v = [x / lead for x in v]
        for idx, b in enumerate(basis):
            if b[pc]:
                c = b[pc]
                basis[idx] = [x - c * y for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(pc)
    order = sorted(range(len(basis)), key=lambda k: pivots[k])
    return [tuple(basis[k]) for k in order]


@dataclass
class DerivedSeries:
    chain: list
    dims: tuple
    solvable: bool
    rationalized: bool = False


def rationalize(m, tol=1e-12):
    """Exact approximation of a numeric matrix, to within ``tol`` per entry."""
    den = max(1, int(round(1 / tol)))
    out = []
    for row in np.asarray(m.data if isinstance(m, NumericTriMatrix) else m, dtype=complex):
        vals = []
        for z in row:
            re = Fraction(float(z.real)).limit_denominator(den)
            im = Fraction(float(z.imag)).limit_denominator(den)
            vals.append(re if im == 0 else GaussianRational(re, im))
        out.append(tuple(vals))
    return tuple(out)


def derived_series(generators, tol=1e-12) -> DerivedSeries:
    """Derived series ``g^0 = span(gens)``, ``g^(k+1) = [g^k, g^k]``, computed exactly."""
    mats = []
    rationalized = False
    for g in generators:
        if isinstance(g, NumericTriMatrix) or isinstance(g, np.ndarray):
            g = rationalize(g, tol)
            rationalized = True
        mats.append(tuple(tuple(x if isinstance(x, GaussianRational) else Fraction(x) for x in row)
                          for row in g))
    if not mats:
        return DerivedSeries([[]], (0,), True, rationalized)
    n = len(mats[0])
    if any(len(m) != n for m in mats):
        raise ShapeError("generators have different orders")

    def unflatten(v):
        return tuple(tuple(v[r * n:(r + 1) * n]) for r in range(n))

    basis = row_space(_flatten(m) for m in mats)
    chain = [[unflatten(v) for v in basis]]
    while chain[-1]:
        cur = chain[-1]
        brackets = (_flatten(mat_commutator(cur[a], cur[b]))
                    for a in range(len(cur)) for b in range(a + 1, len(cur)))
        nxt = [unflatten(v) for v in row_space(brackets)]
        if len(nxt) == len(cur):
            break
        chain.append(nxt)
    dims = tuple(len(c) for c in chain)
    return DerivedSeries(chain, dims, dims[-1] == 0, rationalized)


def strict_nilpotency_check(p: int) -> int:
    """Nilpotency index of the strictly upper triangular ``p x p`` matrices.

    Products of matrix units are matrix units or zero, and products are
    multilinear, so the span of all length-``k`` products is spanned by the
    surviving unit products.  We track that set until it dies.
    """
    if p < 1:
        raise RangeError("p must be at least 1")
    strict = [(i, j) for i in range(1, p + 1) for j in range(i + 1, p + 1)]
    if not strict:
        return 1
    current = set(strict)
    length = 1
    while current:
        nxt = {(i, l) for i, j in current for jj, l in strict if j == jj}
        if not nxt:
            break
        current = nxt
        length += 1
    index = length + 1
    if index != p:
        raise AssertionError(f"nilpotency index {index} differs from the order {p}")
    # the surviving length-(p-1) product is E_1p, checked numerically as well
    prod = unit_matrix(p, 1, 2)
    for k in range(2, p):
        prod = mat_mul(prod, unit_matrix(p, k, k + 1))
    assert prod == unit_matrix(p, 1, p)
    return index


def corner_recover(a: PBWElement, p: int) -> Polynomial:
    """Read ``f_p`` back from the top right entry of the order ``p + 1`` matrix."""
    if p < 0 or p > a.degree:
        raise DegreeError(f"level {p} exceeds the e2-degree {a.degree}")
    corner = pi_tilde(a, p).entry(1, p + 1)
    f = poly_shift(corner, -p)
    assert f == a.level(p)
    return f
