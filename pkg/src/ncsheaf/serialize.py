"""JSON forms of every value type.

Exact numbers are written as rational strings (``"3/2"``, ``"-inf"``); floats
are rounded to 12 significant digits.  Loaders ignore the top-level
``"format"`` and ``"type"`` keys added by the CLI.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .domains import (CompactTuple, DiskUnion, DomainTuple, OmegaOpen,
                      RealCompactSet, RealOpenSet, RectUnion, format_extended,
                      parse_extended)
from .errors import ParseError
from .growth import GrowthReport, GrowthThresholds
from .matrep import LocalPoly, NumericTriMatrix, TriMatrixElement
from .sheaf import Section
from .uea import (COMPLEX, FIELDS, REAL, GaussianRational, PBWElement,
                  Polynomial, parse_rational, parse_scalar, scalar_to_json)

FORMAT = "ncsheaf/1"


def num(x):
    """Float rounded to 12 significant digits; non-finite values as strings."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


def _get(obj, key):
    if not isinstance(obj, dict):
        raise ParseError(f"expected a JSON object with key {key!r}, got {type(obj).__name__}")
    try:
        return obj[key]
    except KeyError as exc:
        raise ParseError(f"missing key {key!r}") from exc


def _field(obj, default=REAL):
    f = obj.get("field", default) if isinstance(obj, dict) else default
    if f not in FIELDS:
        raise ParseError(f"unknown field {f!r}")
    return f


def _list(obj, what):
    if not isinstance(obj, list):
        raise ParseError(f"{what} must be a JSON array")
    return obj


# -- polynomials and PBW elements -------------------------------------------------


def poly_to_json(p: Polynomial):
    return [scalar_to_json(c, p.field) for c in p.coeffs]


def poly_from_json(obj, field=REAL) -> Polynomial:
    if isinstance(obj, dict):
        field = _field(obj, field)
        obj = _get(obj, "coeffs")
    return Polynomial(tuple(parse_scalar(c, field) for c in _list(obj, "coefficients")), field)


def pbw_to_json(a: PBWElement):
    return {"field": a.field, "levels": [poly_to_json(f) for f in a.levels]}


def pbw_from_json(obj) -> PBWElement:
    field = _field(obj)
    levels = _list(_get(obj, "levels"), "levels")
    return PBWElement(tuple(poly_from_json(lv, field) for lv in levels), field)


# -- regions ------------------------------------------------------------------------


def _gauss_to_json(z):
    return scalar_to_json(z, COMPLEX)


def region_to_json(r):
    if isinstance(r, RealOpenSet):
        return {"intervals": [[format_extended(lo), format_extended(hi)] for lo, hi in r.intervals]}
    if isinstance(r, RectUnion):
        return {"kind": "rect_union",
                "rects": [[format_extended(v) for v in rect] for rect in r.rects]}
    if isinstance(r, DiskUnion):
        return {"kind": "disk_union",
                "disks": [{"center": _gauss_to_json(c), "radius": str(rad)} for c, rad in r.disks]}
    raise TypeError(f"not a region: {r!r}")


def region_from_json(obj, space=REAL):
    if space == REAL:
        try:
            return RealOpenSet(tuple((parse_extended(lo), parse_extended(hi))
                                     for lo, hi in _list(_get(obj, "intervals"), "intervals")))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad interval list: {exc}") from exc
    kind = _get(obj, "kind")
    try:
        if kind == "rect_union":
            return RectUnion(tuple(tuple(parse_extended(v) for v in rect)
                                   for rect in _list(_get(obj, "rects"), "rects")))
        if kind == "disk_union":
            return DiskUnion(tuple((parse_scalar(_get(d, "center"), COMPLEX),
                                    parse_rational(_get(d, "radius")))
                                   for d in _list(_get(obj, "disks"), "disks")))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad {kind}: {exc}") from exc
    raise ParseError(f"unknown complex region kind {kind!r}")


def compact_to_json(K: RealCompactSet):
    return {"intervals": [[str(lo), str(hi)] for lo, hi in K.intervals]}


def compact_from_json(obj) -> RealCompactSet:
    try:
        return RealCompactSet(tuple((parse_rational(lo), parse_rational(hi))
                                    for lo, hi in _list(_get(obj, "intervals"), "intervals")))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad compact set: {exc}") from exc


def omega_to_json(V: OmegaOpen):
    return {"space": V.space, "levels": [region_to_json(lv) for lv in V.levels], "tail": V.tail}


def omega_from_json(obj) -> OmegaOpen:
    space = _get(obj, "space")
    if space not in FIELDS:
        raise ParseError(f"unknown space {space!r}")
    tail = obj.get("tail", "empty")
    if tail not in ("empty", "full"):
        raise ParseError(f"unknown tail {tail!r}")
    levels = tuple(region_from_json(lv, space) for lv in _list(_get(obj, "levels"), "levels"))
    return OmegaOpen(space, levels, tail)


def _key(ij):
    return f"{ij[0]},{ij[1]}"


def _parse_key(k):
    try:
        i, j = (int(x) for x in k.split(","))
    except ValueError as exc:
        raise ParseError(f"bad index key {k!r}") from exc
    return i, j


def domain_tuple_to_json(T: DomainTuple):
    return {"p": T.p, "space": T.space,
            "entries": {_key(ij): region_to_json(r) for ij, r in sorted(T.entries.items())}}


def domain_tuple_from_json(obj) -> DomainTuple:
    space = obj.get("space", REAL) if isinstance(obj, dict) else REAL
    entries = {_parse_key(k): region_from_json(v, space) for k, v in _get(obj, "entries").items()}
    try:
        return DomainTuple(int(_get(obj, "p")), entries)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def compact_tuple_to_json(K: CompactTuple):
    return {"p": K.p, "entries": {_key(ij): compact_to_json(c) for ij, c in sorted(K.entries.items())}}


def compact_tuple_from_json(obj) -> CompactTuple:
    entries = {_parse_key(k): compact_from_json(v) for k, v in _get(obj, "entries").items()}
    return CompactTuple(int(_get(obj, "p")), entries)


# -- sections and matrices -------------------------------------------------------------


def section_to_json(s: Section):
    return {"parent": omega_to_json(s.parent),
            "levels": [{"components": [poly_to_json(f) for f in lv]} for lv in s.levels]}


def section_from_json(obj) -> Section:
    parent = omega_from_json(_get(obj, "parent"))
    levels = tuple(tuple(poly_from_json(f, parent.space) for f in _get(lv, "components"))
                   for lv in _list(_get(obj, "levels"), "levels"))
    return Section(parent, levels)


def _entry_to_json(e):
    if isinstance(e, LocalPoly):
        return {"components": [poly_to_json(f) for f in e.polys]}
    return poly_to_json(e)


def trimatrix_to_json(A: TriMatrixElement):
    return {"p": A.p, "field": A.field, "domains": domain_tuple_to_json(A.domains),
            "entries": {_key(ij): _entry_to_json(e) for ij, e in sorted(A.entries.items())}}


def trimatrix_from_json(obj) -> TriMatrixElement:
    field = _field(obj)
    domains = domain_tuple_from_json(_get(obj, "domains"))
    entries = {}
    for k, v in _get(obj, "entries").items():
        if isinstance(v, dict) and "components" in v:
            entries[_parse_key(k)] = LocalPoly(tuple(poly_from_json(f, field) for f in v["components"]))
        else:
            entries[_parse_key(k)] = poly_from_json(v, field)
    return TriMatrixElement(int(_get(obj, "p")), domains, entries, field)


def numeric_to_json(M: NumericTriMatrix):
    n = M.p
    return {"p": n, "upper": [[num(M.data[i, j].real), num(M.data[i, j].imag)]
                              for i in range(n) for j in range(i, n)]}


def _float(x):
    if isinstance(x, str):
        try:
            return float(x)
        except ValueError as exc:
            raise ParseError(f"bad number {x!r}") from exc
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"bad number {x!r}")
    return float(x)


def numeric_from_json(obj) -> NumericTriMatrix:
    n = int(_get(obj, "p"))
    upper = _list(_get(obj, "upper"), "upper")
    if len(upper) != n * (n + 1) // 2:
        raise ParseError(f"upper triangle of order {n} needs {n * (n + 1) // 2} entries")
    data = np.zeros((n, n), dtype=complex)
    it = iter(upper)
    for i in range(n):
        for j in range(i, n):
            re, im = next(it)
            data[i, j] = complex(_float(re), _float(im))
    return NumericTriMatrix(data)


def growth_report_to_json(r: GrowthReport):
    return {"samples": [[num(s), num(v)] for s, v in r.samples],
            "alpha": num(r.alpha), "prefactor": num(r.prefactor), "residual": num(r.residual),
            "exp_slope": num(r.exp_slope), "exp_residual": num(r.exp_residual),
            "verdict": r.verdict,
            "thresholds": {"residual": r.thresholds.residual, "slope": r.thresholds.slope}}


def growth_report_from_json(obj) -> GrowthReport:
    th = obj.get("thresholds", {})
    return GrowthReport(
        samples=[(_float(s), _float(v)) for s, v in _get(obj, "samples")],
        alpha=_float(_get(obj, "alpha")), prefactor=_float(_get(obj, "prefactor")),
        residual=_float(_get(obj, "residual")), verdict=_get(obj, "verdict"),
        exp_slope=_float(obj.get("exp_slope", 0.0)), exp_residual=_float(obj.get("exp_residual", 0.0)),
        thresholds=GrowthThresholds(**th))


# -- exact matrices ------------------------------------------------------------------------


def exact_matrix_to_json(m, field=REAL):
    return [[scalar_to_json(x, field) for x in row] for row in m]


def exact_matrix_from_json(obj, field=REAL):
    return tuple(tuple(parse_scalar(x, field) for x in _list(row, "matrix row"))
                 for row in _list(obj, "matrix"))


# -- documents ------------------------------------------------------------------------------


def dumps(doc) -> str:
    """Canonical text: sorted keys, fixed separators, trailing newline."""
    return json.dumps({"format": FORMAT, **doc}, sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def loads(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if isinstance(obj, dict):
        fmt = obj.get("format", FORMAT)
        if fmt != FORMAT:
            raise ParseError(f"unsupported format {fmt!r}")
    return obj


def is_gaussian(x):
    return isinstance(x, GaussianRational)
