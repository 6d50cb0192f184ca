"""Trigonometric secular equation and its roots on the hyperbola 2st = g.

Along the hyperbola the scan variable is the outer wavenumber k rather than
t: the map t -> k is monotone there, and recovering (s, t) from k avoids the
cancellation in t**2 - s**2 that spoils k at large g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from skimage.measure import find_contours

from .core import DomainError, SpectralRoot, WellConfig

SCAN_EPS = 1e-8  # relative offset above the spurious s = t root
ROOT_XTOL = 1e-12


@dataclass(frozen=True)
class OvalPoint:
    s: float
    t: float
    u: float
    k: float


def residual_skt(L, l, s, t, k):
    """Secular residual with k supplied; broadcasts over numpy arrays."""
    a = 2.0 * k * (L - l)
    sin_a, cos_a = np.sin(a), np.cos(a)
    sh, ch = np.sinh(2.0 * s * l), np.cosh(2.0 * s * l)
    sn, cs = np.sin(2.0 * t * l), np.cos(2.0 * t * l)
    return (
        k * sin_a * (s * s * ch + t * t * cs)
        - cos_a * (s**3 * sh - t**3 * sn)
        + s * t * t * sh
        - s * s * t * sn
    )


def residual_scale(L, l, s, t, k):
    """Sum of the magnitudes of the six terms; the natural size of a residual."""
    sh, ch = abs(math.sinh(2 * s * l)), math.cosh(2 * s * l)
    return (
        k * (s * s * ch + t * t)
        + s**3 * sh + t**3
        + s * t * t * sh + s * s * t
    )


def secular_residual(cfg: WellConfig, s: float, t: float) -> float:
    """Residual of the secular condition at (s, t); ``cfg.g`` is not used."""
    if not s > 0:
        raise DomainError(f"s must be positive, got {s}")
    if t < s:
        raise DomainError(f"need t >= s, got s={s}, t={t}")
    k = math.sqrt((t - s) * (t + s))
    return float(residual_skt(cfg.L, cfg.l, s, t, k))


def hyperbola_st(k, g):
    """(s, t) on 2st = g with t**2 - s**2 = k**2."""
    k = np.asarray(k, dtype=float)
    k2 = k * k
    t = np.sqrt(0.5 * (k2 + np.sqrt(k2 * k2 + g * g)))
    return 0.5 * g / t, t


def k_of_t(t, g):
    s = 0.5 * g / t
    return math.sqrt(max((t - s) * (t + s), 0.0))


def hyperbola_residual(cfg: WellConfig, k):
    s, t = hyperbola_st(k, cfg.g)
    return residual_skt(cfg.L, cfg.l, s, t, k)


def scan_step(L: float) -> float:
    return min(0.05, math.pi / (8.0 * L))


def _extremum_splits(f, ks, fs):
    """Split points for same-sign neighbours hiding a pair of close roots.

    At every discrete local minimum of |f| whose neighbours share its sign,
    minimize sign*f over the two adjacent cells; a negative minimum means
    the curve dips through zero twice, and its location separates the pair.
    """
    splits = []
    for i in range(1, len(ks) - 1):
        f0, f1, f2 = fs[i - 1], fs[i], fs[i + 1]
        if not (np.sign(f0) == np.sign(f1) == np.sign(f2) != 0):
            continue
        if not (abs(f1) <= abs(f0) and abs(f1) <= abs(f2)):
            continue
        sgn = np.sign(f1)
        res = minimize_scalar(
            lambda x: sgn * f(x),
            bounds=(ks[i - 1], ks[i + 1]),
            method="bounded",
            options={"xatol": 1e-13},
        )
        if res.fun < 0:
            splits.append((i, float(res.x), float(sgn * res.fun)))
    return splits


def bracket_roots(f, a: float, b: float, step: float):
    """Sign-change brackets of ``f`` on [a, b], including near-tangent pairs."""
    n = max(int(math.ceil((b - a) / step)), 2)
    ks = np.linspace(a, b, n + 1)
    fs = np.asarray(f(ks), dtype=float)
    brackets = []
    for i in range(n):
        if fs[i] == 0.0:
            brackets.append((ks[i], ks[i]))
        elif fs[i] * fs[i + 1] < 0:
            brackets.append((ks[i], ks[i + 1]))
    for i, xm, _ in _extremum_splits(lambda x: float(f(np.array([x]))[0]), ks, fs):
        brackets.append((ks[i - 1], xm))
        brackets.append((xm, ks[i + 1]))
    return sorted(set(brackets))


def refine_root(f, a: float, b: float, xtol: float = ROOT_XTOL) -> float:
    if a == b:
        return a
    g = lambda x: float(f(np.array([x]))[0])
    return brentq(g, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)


def root_from_k(cfg: WellConfig, k: float, index: int = 0) -> SpectralRoot:
    s, t = hyperbola_st(k, cfg.g)
    return SpectralRoot(s=float(s), t=float(t), k=float(k), E=float(k * k), index=index)


def find_roots_on_hyperbola(
    cfg: WellConfig,
    t_max: float,
    *,
    step: float | None = None,
    xtol: float = ROOT_XTOL,
    eps: float = SCAN_EPS,
) -> list[SpectralRoot]:
    """All real bound states with ``t <= t_max``, ascending in energy.

    An empty list means every level in the window has gone complex.
    """
    g = cfg.g
    if not g > 0:
        raise DomainError("find_roots_on_hyperbola needs g > 0")
    t0 = math.sqrt(0.5 * g) * (1.0 + eps)
    if not t_max > t0:
        raise DomainError(f"t_max={t_max} must exceed sqrt(g/2)={math.sqrt(0.5 * g)}")
    k_lo, k_hi = k_of_t(t0, g), k_of_t(t_max, g)
    f = lambda k: hyperbola_residual(cfg, k)
    ks = [refine_root(f, a, b, xtol) for a, b in bracket_roots(f, k_lo, k_hi, step or scan_step(cfg.L))]
    ks = sorted(k for k in ks if k > k_lo)
    return [root_from_k(cfg, k, i) for i, k in enumerate(ks)]


def root_diagnostics(cfg: WellConfig, root: SpectralRoot) -> tuple[float, float]:
    """(relative secular residual, constraint residual |2st - g|)."""
    r = float(residual_skt(cfg.L, cfg.l, root.s, root.t, root.k))
    scale = residual_scale(cfg.L, cfg.l, root.s, root.t, root.k)
    return abs(r) / scale, abs(2.0 * root.s * root.t - cfg.g)


def trace_semi_ovals(
    L: float,
    l: float,
    s_max: float,
    t_max: float,
    *,
    grid: int = 600,
    refine: bool = True,
) -> list[list[OvalPoint]]:
    """Zero-level curves of the residual in the (s, t) rectangle with t > s.

    Marching squares on a regular grid, then each vertex is moved onto the
    exact zero along the grid edge it lies on.
    """
    if not (s_max > 0 and t_max > 0):
        raise DomainError("s_max and t_max must be positive")
    ss = np.linspace(0.0, s_max, grid)
    ts = np.linspace(0.0, t_max, grid)
    S, T = np.meshgrid(ss, ts, indexing="ij")
    K = np.sqrt(np.clip((T - S) * (T + S), 0.0, None))
    F = residual_skt(L, l, S, T, K)
    # t = s is an identically-zero line of no physical content
    mask = (T - S) > 2.0 * (ts[1] - ts[0])
    F = np.where(mask, F, 1.0)
    curves = []
    for c in find_contours(F, 0.0, mask=mask):
        pts = []
        for i, j in c:
            s = np.interp(i, np.arange(grid), ss)
            t = np.interp(j, np.arange(grid), ts)
            if refine:
                s, t = _refine_vertex(L, l, ss, ts, i, j, s, t)
            k = math.sqrt(max((t - s) * (t + s), 0.0))
            pts.append(OvalPoint(s=float(s), t=float(t), u=float(s * t), k=k))
        if len(pts) >= 2:
            curves.append(pts)
    curves.sort(key=lambda c: (min(p.t for p in c), min(p.s for p in c)))
    return curves


def _edge_root(f, lo, hi, fallback):
    fa, fb = f(lo), f(hi)
    if fa == 0.0:
        return lo
    if fb == 0.0:
        return hi
    if fa * fb > 0:
        return fallback
    return brentq(f, lo, hi, xtol=1e-13)


def _refine_vertex(L, l, ss, ts, i, j, s, t):
    """Move a marching-squares vertex to the exact zero on its grid edge.

    Every vertex lies on a grid line in one coordinate (integer index) and
    between two nodes in the other.
    """

    def f_at(sv, tv):
        return float(residual_skt(L, l, sv, tv, math.sqrt(max((tv - sv) * (tv + sv), 0.0))))

    def cell(x, n):
        lo = min(int(math.floor(x)), n - 2)
        return lo, lo + 1

    if abs(i - round(i)) < 1e-9:
        sv = ss[int(round(i))]
        a, b = cell(j, len(ts))
        return float(sv), float(_edge_root(lambda x: f_at(sv, x), ts[a], ts[b], t))
    tv = ts[int(round(j))]
    a, b = cell(i, len(ss))
    return float(_edge_root(lambda x: f_at(x, tv), ss[a], ss[b], s)), float(tv)


def oval_hyperbola_crossings(curves, g: float) -> list[float]:
    """Energies k**2 where the polylines cross u = s t = g/2, by linear interpolation."""
    u0 = 0.5 * g
    out = []
    for c in curves:
        for p, q in zip(c[:-1], c[1:]):
            du0, du1 = p.u - u0, q.u - u0
            if du0 == 0.0:
                out.append(p.k * p.k)
            elif du0 * du1 < 0:
                w = du0 / (du0 - du1)
                k = p.k + w * (q.k - p.k)
                out.append(k * k)
    return sorted(out)
