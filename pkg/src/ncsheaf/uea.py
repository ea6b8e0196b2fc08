"""Exact scalars, univariate polynomials and the enveloping algebra of aff(1).

An element of U(aff1) is stored in PBW normal form ``sum_q f_q(e1) e2^q``.
The only relation is ``e1 e2 - e2 e1 = e2``, which gives ``e2 f(e1) = f(e1 - 1) e2``
and hence the product rule

    (f_i e2^i)(g_j e2^j) = f_i(l) g_j(l - i) e2^(i+j).

:func:`pbw_mul` uses that rule directly; :func:`pbw_mul_oracle` ignores it and
rewrites words letter by letter, so the two can check each other.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import FieldMismatchError, ParseError

REAL = "real"
COMPLEX = "complex"
FIELDS = (REAL, COMPLEX)


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Rational)):
            return GaussianRational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = o.norm2()
        if d == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        n = self * o.conjugate()
        return GaussianRational(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self):
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


I = GaussianRational(0, 1)


def to_scalar(x, field=REAL):
    """Coerce ``x`` into the exact scalar type of ``field``."""
    if field == REAL:
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise FieldMismatchError(f"non-real scalar {x} in real context")
            return x.re
        if isinstance(x, float):
            raise TypeError("floats are not exact scalars; pass a Fraction or str")
        return Fraction(x)
    if field == COMPLEX:
        if isinstance(x, complex):
            raise TypeError("complex floats are not exact scalars")
        if isinstance(x, float):
            raise TypeError("floats are not exact scalars; pass a Fraction or str")
        if isinstance(x, str):
            return GaussianRational(Fraction(x))
        return GaussianRational(x)
    raise ValueError(f"unknown field {field!r}")


def parse_rational(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ParseError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def parse_scalar(obj, field):
    if field == REAL:
        return parse_rational(obj)
    if isinstance(obj, dict):
        try:
            return GaussianRational(parse_rational(obj["re"]), parse_rational(obj["im"]))
        except KeyError as exc:
            raise ParseError(f"complex scalar needs 're' and 'im': {obj!r}") from exc
    return GaussianRational(parse_rational(obj))


def scalar_to_json(x, field):
    if field == REAL:
        return str(Fraction(x))
    x = GaussianRational(x)
    return {"re": str(x.re), "im": str(x.im)}


def _check_field(a, b):
    if a.field != b.field:
        raise FieldMismatchError(f"field mismatch: {a.field} vs {b.field}")


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``l**k``.

    The zero polynomial has no coefficients.  Coefficients are ``Fraction`` for
    ``field="real"`` and :class:`GaussianRational` for ``field="complex"``.
    """

    coeffs: tuple = ()
    field: str = REAL

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ValueError(f"unknown field {self.field!r}")
        cs = [to_scalar(c, self.field) for c in self.coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls, field=REAL):
        return cls((), field)

    @classmethod
    def constant(cls, c, field=REAL):
        return cls((c,), field)

    @classmethod
    def x(cls, field=REAL):
        return cls((0, 1), field)

    @property
    def degree(self):
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        _check_field(self, other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Polynomial(tuple(out), self.field)

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs), self.field)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        _check_field(self, other)
        if not self.coeffs or not other.coeffs:
            return Polynomial.zero(self.field)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(tuple(out), self.field)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = to_scalar(c, self.field)
        return Polynomial(tuple(c * a for a in self.coeffs), self.field)

    def __call__(self, x):
        return poly_eval(self, x)

    def shift(self, c):
        return poly_shift(self, c)

    def derivative(self, n=1):
        p = self
        for _ in range(n):
            p = poly_derivative(p)
        return p

    def to_complex(self):
        return Polynomial(self.coeffs, COMPLEX)

    def __repr__(self):
        if not self.coeffs:
            return f"Polynomial(0, {self.field})"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            terms.append(f"{c}" if k == 0 else f"{c}*l^{k}")
        return f"Polynomial({' + '.join(terms)}, {self.field})"


def poly_shift(p: Polynomial, c) -> Polynomial:
    """Return ``l -> p(l + c)``."""
    c = to_scalar(c, p.field)
    if not c:
        return p
    # Horner in the polynomial ring: acc <- acc*(l + c) + a_k
    acc = []
    for a in reversed(p.coeffs):
        nxt = [0] * (len(acc) + 1)
        for k, v in enumerate(acc):
            nxt[k + 1] = nxt[k + 1] + v
            nxt[k] = nxt[k] + c * v
        nxt[0] = nxt[0] + a
        acc = nxt
    return Polynomial(tuple(acc), p.field)


def poly_derivative(p: Polynomial) -> Polynomial:
    return Polynomial(tuple(k * c for k, c in enumerate(p.coeffs) if k), p.field)


def poly_eval(p: Polynomial, x):
    """Exact Horner evaluation."""
    x = to_scalar(x, p.field)
    acc = to_scalar(0, p.field)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class PBWElement:
    """Element ``sum_q levels[q](e1) * e2**q`` of U(aff1)."""

    levels: tuple = ()
    field: str = REAL

    def __post_init__(self):
        levels = []
        for f in self.levels:
            if not isinstance(f, Polynomial):
                f = Polynomial(tuple(f), self.field)
            elif f.field != self.field:
                raise FieldMismatchError(
                    f"level polynomial over {f.field} in {self.field} element")
            levels.append(f)
        while levels and levels[-1].is_zero():
            levels.pop()
        object.__setattr__(self, "levels", tuple(levels))

    @classmethod
    def zero(cls, field=REAL):
        return cls((), field)

    @classmethod
    def one(cls, field=REAL):
        return cls((Polynomial.constant(1, field),), field)

    @classmethod
    def scalar(cls, c, field=REAL):
        return cls((Polynomial.constant(c, field),), field)

    @classmethod
    def e1(cls, field=REAL):
        return cls((Polynomial.x(field),), field)

    @classmethod
    def e2(cls, field=REAL):
        return cls((Polynomial.zero(field), Polynomial.constant(1, field)), field)

    @property
    def degree(self):
        """Degree in ``e2``; ``-1`` for zero."""
        return len(self.levels) - 1

    def level(self, q) -> Polynomial:
        if 0 <= q < len(self.levels):
            return self.levels[q]
        return Polynomial.zero(self.field)

    def is_zero(self):
        return not self.levels

    def __add__(self, other):
        _check_field(self, other)
        n = max(len(self.levels), len(other.levels))
        return PBWElement(tuple(self.level(q) + other.level(q) for q in range(n)), self.field)

    def __neg__(self):
        return PBWElement(tuple(-f for f in self.levels), self.field)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PBWElement):
            return pbw_mul(self, other)
        return PBWElement(tuple(f.scale(other) for f in self.levels), self.field)

    def __rmul__(self, other):
        return PBWElement(tuple(f.scale(other) for f in self.levels), self.field)

    def __pow__(self, n):
        out = PBWElement.one(self.field)
        for _ in range(n):
            out = pbw_mul(out, self)
        return out


def pbw_mul(a: PBWElement, b: PBWElement) -> PBWElement:
    _check_field(a, b)
    field = a.field
    if a.is_zero() or b.is_zero():
        return PBWElement.zero(field)
    out = [Polynomial.zero(field)] * (len(a.levels) + len(b.levels) - 1)
    for i, f in enumerate(a.levels):
        if f.is_zero():
            continue
        for j, g in enumerate(b.levels):
            if g.is_zero():
                continue
            out[i + j] = out[i + j] + f * poly_shift(g, -i)
    return PBWElement(tuple(out), field)


# -- rewriting oracle -------------------------------------------------------

E1, E2 = 1, 2


@lru_cache(maxsize=None)
def _normal_form(word):
    """Normal form of a word over {e1, e2} as a tuple of ((a, b), coeff)."""
    for k in range(len(word) - 1):
        if word[k] == E2 and word[k + 1] == E1:
            # e2 e1 -> e1 e2 - e2
            head, tail = word[:k], word[k + 2:]
            acc = defaultdict(int)
            for key, c in _normal_form(head + (E1, E2) + tail):
                acc[key] += c
            for key, c in _normal_form(head + (E2,) + tail):
                acc[key] -= c
            return tuple((key, c) for key, c in sorted(acc.items()) if c)
    a = word.count(E1)
    return (((a, len(word) - a), 1),)


def _words(x: PBWElement):
    for q, f in enumerate(x.levels):
        for k, c in enumerate(f.coeffs):
            if c:
                yield (E1,) * k + (E2,) * q, c


def pbw_mul_oracle(a: PBWElement, b: PBWElement) -> PBWElement:
    """Multiply by word concatenation and the rewrite ``e2 e1 -> e1 e2 - e2``."""
    _check_field(a, b)
    field = a.field
    acc = defaultdict(lambda: to_scalar(0, field))
    for wa, ca in _words(a):
        for wb, cb in _words(b):
            for (p, q), c in _normal_form(wa + wb):
                acc[(p, q)] = acc[(p, q)] + c * ca * cb
    if not acc:
        return PBWElement.zero(field)
    top = max(q for _, q in acc)
    levels = [[] for _ in range(top + 1)]
    for (p, q), c in acc.items():
        row = levels[q]
        if len(row) <= p:
            row.extend([0] * (p + 1 - len(row)))
        row[p] = c
    return PBWElement(tuple(Polynomial(tuple(r), field) for r in levels), field)


def pbw_bracket(a: PBWElement, b: PBWElement) -> PBWElement:
    return pbw_mul(a, b) - pbw_mul(b, a)
