"""Seminorms, triangular exponentials and polynomial-growth estimates.

This is the only module that uses floating point.  Suprema of polynomials on
real compact sets are found from exact data: the candidates are the interval
endpoints and the real critical points, which are isolated by bisection with
exact integer sign tests before anything is rounded.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm

import numpy as np

from .domains import RealCompactSet
from .errors import PreconditionError, RangeError
from .matrep import NumericTriMatrix, TriMatrixElement
from .uea import COMPLEX, REAL, GaussianRational, Polynomial, poly_eval, poly_shift

ROOT_WIDTH = Fraction(1, 10 ** 12)

POLYNOMIAL = "polynomial"
EXPONENTIAL = "exponential"
INCONCLUSIVE = "inconclusive"


# -- exact real root isolation ---------------------------------------------------


def _integer_coeffs(coeffs):
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    return [int(c * den) for c in coeffs]


def _sign_at(icoeffs, x: Fraction):
    """Sign of the integer polynomial at a rational point, no rounding."""
    num, den = x.numerator, x.denominator
    acc = 0
    pw = 1
    for c in reversed(icoeffs):
        acc = acc * num + c * pw
        pw *= den
    # acc = den**deg * p(x); den > 0
    return (acc > 0) - (acc < 0)


def real_roots(coeffs, lo: Fraction, hi: Fraction, width: Fraction = ROOT_WIDTH):
    """Approximate real roots in ``[lo, hi]`` of a rational polynomial.

    The roots of the derivative split ``[lo, hi]`` into pieces on which the
    polynomial is monotone; each sign change on a piece is bisected down to
    ``width``.  Roots of even multiplicity without a sign change are skipped
    unless they land exactly on a sample point.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    if deg == 1:
        r = -Fraction(coeffs[0]) / coeffs[1]
        return [r] if lo <= r <= hi else []
    deriv = [k * c for k, c in enumerate(coeffs) if k]
    cuts = sorted({lo, hi, *real_roots(deriv, lo, hi, width)})
    ic = _integer_coeffs(coeffs)
    roots = []
    for a, b in zip(cuts, cuts[1:]):
        sa, sb = _sign_at(ic, a), _sign_at(ic, b)
        if sa == 0:
            roots.append(a)
            continue
        if sa * sb >= 0:
            continue
        while b - a > width:
            m = (a + b) / 2
            sm = _sign_at(ic, m)
            if sm == 0:
                a = b = m
                break
            if sm == sa:
                a = m
            else:
                b = m
        roots.append((a + b) / 2)
    if _sign_at(ic, cuts[-1]) == 0:
        roots.append(cuts[-1])
    return sorted(set(roots))


# -- seminorms ---------------------------------------------------------------------


def _require_compact(K):
    if not isinstance(K, RealCompactSet):
        raise TypeError("expected a RealCompactSet")
    if K.is_empty():
        raise PreconditionError("seminorms need a nonempty compact set")


def _abs_square_poly(h: Polynomial):
    """Real coefficients of ``|h(x)|^2`` for real ``x``."""
    if h.field == REAL:
        re, im = list(h.coeffs), []
    else:
        re = [c.re for c in h.coeffs]
        im = [c.im for c in h.coeffs]
    re_p = Polynomial(tuple(re))
    im_p = Polynomial(tuple(im))
    return re_p * re_p + im_p * im_p


def sup_abs(h: Polynomial, K: RealCompactSet) -> float:
    """``max |h|`` over ``K``."""
    _require_compact(K)
    if h.is_zero():
        return 0.0
    if h.field == REAL:
        crit = list(h.derivative().coeffs)

        def value(x):
            return abs(float(poly_eval(h, x)))
    else:
        sq = _abs_square_poly(h)
        crit = list(sq.derivative().coeffs)

        def value(x):
            return math.sqrt(float(poly_eval(sq, x)))
    best = 0.0
    for lo, hi in K.intervals:
        for x in [lo, hi, *real_roots(crit, lo, hi)]:
            best = max(best, value(x))
    return best


def seminorm_cn(f: Polynomial, K: RealCompactSet, n: int) -> float:
    """``max over K of |f^(n)|``."""
    if n < 0:
        raise RangeError("derivative order must be non-negative")
    return sup_abs(f.derivative(n), K)


def norm_weighted(f: Polynomial, K: RealCompactSet, n: int) -> float:
    """``sum_{k<=n} |f^(k)|_K / k!``; submultiplicative by the Leibniz rule."""
    _require_compact(K)
    return sum(seminorm_cn(f, K, k) / factorial(k) for k in range(n + 1))


def sup_disk(f: Polynomial, center, radius, tol=1e-8) -> float:
    """Max of ``|f|`` over the closed disk, attained on the boundary circle.

    Works with ``G(t) = |f(c + r e^{it})|^2``: intervals are refined until the
    bound ``G(mid) + |G'(mid)| h/2 + max|G''| h^2/8`` leaves no room above the
    best sample by more than the tolerance.
    """
    r = float(radius)
    if r < 0:
        raise RangeError("radius must be non-negative")
    fc = f if f.field == COMPLEX else f.to_complex()
    if fc.is_zero():
        return 0.0
    if isinstance(center, (complex, float)):
        b = _shift_numeric(np.array([complex(x) for x in fc.coeffs]), complex(center))
    else:
        b = np.array([complex(x) for x in poly_shift(fc, GaussianRational(center)).coeffs])
    if r == 0 or len(b) == 1:
        return float(abs(b[0]))
    k = np.arange(len(b))
    mags = np.abs(b) * r ** k
    m2 = float(np.sum(np.outer(mags, mags) * (k[:, None] - k[None, :]) ** 2))
    db = b[1:] * k[1:]

    def G_and_dG(theta):
        w = r * np.exp(1j * theta)
        g = np.polynomial.polynomial.polyval(w, b)
        dg = np.polynomial.polynomial.polyval(w, db)
        G = np.abs(g) ** 2
        dG = 2 * np.real(np.conj(g) * dg * 1j * w)
        return G, dG

    n0 = 256
    h = 2 * math.pi / n0
    mids = (np.arange(n0) + 0.5) * h
    G, dG = G_and_dG(mids)
    best = float(np.max(G))
    for _ in range(80):
        tol_g = max(2 * math.sqrt(best) * tol, tol * tol)
        ub = G + np.abs(dG) * h / 2 + m2 * h * h / 8
        keep = ub > best + tol_g
        if not np.any(keep):
            break
        h /= 2
        mids = np.concatenate([mids[keep] - h / 2, mids[keep] + h / 2])
        G, dG = G_and_dG(mids)
        best = max(best, float(np.max(G)))
    return math.sqrt(best)


def _shift_numeric(cs, c):
    """Coefficients of ``w -> p(w + c)``, Horner on coefficient arrays."""
    acc = np.zeros(0, dtype=complex)
    for a in cs[::-1]:
        nxt = np.zeros(len(acc) + 1, dtype=complex)
        nxt[1:] += acc
        nxt[:-1] += c * acc
        nxt[0] += a
        acc = nxt
    return acc


# -- triangular exponential ------------------------------------------------------------


CONFLUENT_GAP = 1.0


def _expm_dense(B):
    """Exponential of a small dense block by shifting, scaling and Taylor series."""
    n = B.shape[0]
    mu = np.trace(B) / n
    C = B - mu * np.eye(n)
    if not np.any(np.diag(C)):
        # shifted block is strictly upper triangular: the series terminates
        out = np.eye(n, dtype=complex)
        term = np.eye(n, dtype=complex)
        for k in range(1, n):
            term = term @ C / k
            out = out + term
        return np.exp(mu) * out
    norm = np.max(np.sum(np.abs(C), axis=0))
    sq = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0 else 0
    C = C / 2 ** sq
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ C / k
        out = out + term
        if np.max(np.abs(term)) < 1e-18 * np.max(np.abs(out)):
            break
    for _ in range(sq):
        out = out @ out
    return np.exp(mu) * out


def tri_exp(M: NumericTriMatrix, s: float) -> NumericTriMatrix:
    """``exp(i s M)`` for upper triangular ``M``.

    Parlett recurrence, filled one superdiagonal at a time:

        F_ij = (T_ij (F_jj - F_ii) + sum_k (T_ik F_kj - F_ik T_kj)) / (T_jj - T_ii)

    with ``T = i s M``.  When ``T_ii`` and ``T_jj`` are closer than
    ``CONFLUENT_GAP`` the quotient is replaced by its limit, computed as the
    corner of the exponential of the block ``T[i..j, i..j]`` (for a triangular
    matrix that block of ``exp(T)`` depends only on the same block of ``T``).
    """
    T = 1j * float(s) * np.asarray(M.data, dtype=complex)
    n = T.shape[0]
    F = np.zeros_like(T)
    for i in range(n):
        F[i, i] = np.exp(T[i, i])
    for d in range(1, n):
        for i in range(n - d):
            j = i + d
            gap = T[j, j] - T[i, i]
            if abs(gap) > CONFLUENT_GAP:
                acc = T[i, j] * (F[j, j] - F[i, i])
                for k in range(i + 1, j):
                    acc += T[i, k] * F[k, j] - F[i, k] * T[k, j]
                F[i, j] = acc / gap
            else:
                F[i, j] = _expm_dense(T[i:j + 1, i:j + 1])[0, -1]
    return NumericTriMatrix(F)


def exp_group_residual(M: NumericTriMatrix, s: float, t: float) -> float:
    """``|| e^{i(s+t)M} - e^{isM} e^{itM} ||_inf``; zero up to rounding."""
    lhs = tri_exp(M, s + t).data
    rhs = tri_exp(M, s).data @ tri_exp(M, t).data
    return float(np.max(np.sum(np.abs(lhs - rhs), axis=1)))


# -- growth fitting -------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthThresholds:
    residual: float = 0.25
    slope: float = 0.05


@dataclass
class GrowthReport:
    """Samples of ``s -> ||e^{isb}||`` and the fitted ``K (1 + |s|)^alpha``.

    ``residual`` is the largest deviation of the log-norm envelope from the
    fitted line in ``log(1 + |s|)``; ``exp_slope``/``exp_residual`` describe the
    competing fit that is affine in ``|s|``.
    """

    samples: list
    alpha: float
    prefactor: float
    residual: float
    verdict: str
    exp_slope: float = 0.0
    exp_residual: float = 0.0
    thresholds: GrowthThresholds = field(default_factory=GrowthThresholds)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "norm"])
        for s, v in self.samples:
            w.writerow([f"{s:.12g}", f"{v:.12g}"])
        return buf.getvalue()


def _envelope(samples):
    """``|s| -> max(norm(s), norm(-s))`` sorted by ``|s|``."""
    env = {}
    for s, v in samples:
        a = abs(s)
        if not math.isfinite(v):
            v = math.inf
        env[a] = max(env.get(a, 0.0), v)
    return sorted(env.items())


def _linfit(x, y):
    A = np.vstack([np.ones_like(x), x]).T
    (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.max(np.abs(y - (a + b * x)))) if len(x) else 0.0
    return float(a), float(b), resid


def _fit(samples, thresholds):
    env = _envelope(samples)
    s = np.array([a for a, _ in env], dtype=float)
    v = np.array([b for _, b in env], dtype=float)
    if not np.all(np.isfinite(v)):
        # overflow of a double: far beyond any polynomial bound at desk scale
        return dict(alpha=math.inf, prefactor=math.nan, residual=math.inf,
                    exp_slope=math.inf, exp_residual=math.nan, verdict=EXPONENTIAL)
    y = np.log(np.maximum(v, 1e-300))
    a, alpha, resid = _linfit(np.log1p(s), y)
    _, slope, eresid = _linfit(s, y)
    if resid < thresholds.residual:
        verdict = POLYNOMIAL
    elif slope > thresholds.slope and eresid < thresholds.residual:
        verdict = EXPONENTIAL
    else:
        verdict = INCONCLUSIVE
    return dict(alpha=alpha, prefactor=math.exp(a), residual=resid,
                exp_slope=slope, exp_residual=eresid, verdict=verdict)


def fit_samples(samples, thresholds: GrowthThresholds = None) -> GrowthReport:
    thresholds = thresholds or GrowthThresholds()
    samples = [(float(s), float(v)) for s, v in samples]
    if len(samples) < 8:
        raise PreconditionError("growth classification needs at least 8 samples")
    return GrowthReport(samples=samples, thresholds=thresholds, **_fit(samples, thresholds))


def classify_growth(report: GrowthReport, thresholds: GrowthThresholds = None) -> str:
    """Verdict recomputed from the report's samples."""
    thresholds = thresholds or report.thresholds
    if len(report.samples) < 8:
        raise PreconditionError("growth classification needs at least 8 samples")
    return _fit(report.samples, thresholds)["verdict"]


def s_grid(s_max, n_pts, s_min=1.0):
    """Symmetric grid, log-spaced in ``|s|`` over ``[s_min, s_max]``; 0 added if ``n_pts`` is odd."""
    m = n_pts // 2
    pos = np.logspace(math.log10(s_min), math.log10(s_max), m)
    mid = [0.0] if n_pts % 2 else []
    return [float(-x) for x in pos[::-1]] + mid + [float(x) for x in pos]


def _k_grid(K: RealCompactSet, per_component=64):
    pts = []
    for lo, hi in K.intervals:
        if lo == hi:
            pts.append(lo)
            continue
        pts.extend(lo + (hi - lo) * Fraction(k, per_component - 1) for k in range(per_component))
    return pts


def _threads():
    try:
        return max(1, int(os.environ.get("NCSHEAF_THREADS", "1")))
    except ValueError:
        return 1


def growth_fit(b, s_max: float, n_pts: int, K: RealCompactSet = None,
               s_min: float = None, thresholds: GrowthThresholds = None) -> GrowthReport:
    """Sample ``||e^{isb}||`` and fit a power of ``1 + |s|``.

    ``b`` is a :class:`NumericTriMatrix`, or a :class:`TriMatrixElement`
    together with a compact ``K`` inside every entry domain; in the second case
    the norm at ``s`` is the max over a 64-point grid per component of ``K``.
    The grid covers ``s_min <= |s| <= s_max``; ``s_min`` defaults to
    ``sqrt(s_max)`` so the fit sees the large-``|s|`` regime rather than the
    transient near zero.
    """
    if n_pts < 8:
        raise RangeError("n_pts must be at least 8")
    if not s_max > 1:
        raise RangeError("s_max must exceed 1")
    if s_min is None:
        s_min = math.sqrt(s_max)
    if not 0 < s_min < s_max:
        raise RangeError("s_min must lie in (0, s_max)")
    if isinstance(b, TriMatrixElement):
        if K is None:
            raise PreconditionError("a function-valued matrix needs a compact set")
        _require_compact(K)
        for ij, dom in b.domains.entries.items():
            if not dom.is_empty() and not K.issubset(dom):
                raise PreconditionError(f"K is not inside the domain of entry {ij}")
        mats = [b.evaluate_numeric(x) for x in _k_grid(K)]

        def norm_at(s):
            return max(tri_exp(m, s).norm() for m in mats)
    elif isinstance(b, NumericTriMatrix):
        def norm_at(s):
            return tri_exp(b, s).norm()
    else:
        raise TypeError("b must be a NumericTriMatrix or a TriMatrixElement")
    grid = s_grid(s_max, n_pts, s_min)
    with np.errstate(over="ignore", invalid="ignore"):
        workers = _threads()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                norms = list(pool.map(norm_at, grid))
        else:
            norms = [norm_at(s) for s in grid]
    return fit_samples(list(zip(grid, norms)), thresholds)
