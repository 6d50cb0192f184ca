"""Energy levels, high-n asymptotics and the critical coupling g_c(l)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .core import DomainError, WellConfig
from .secular import (
    ROOT_XTOL,
    find_roots_on_hyperbola,
    hyperbola_residual,
    hyperbola_st,
    k_of_t,
    SCAN_EPS,
)

log = logging.getLogger(__name__)

# The lowest oval joins k = pi/2L and k = pi/L at g = 0; the next one starts
# at 3pi/2L.  Counting roots below the gap keeps higher levels out of the
# merge test however far they drift.
LOWEST_PAIR_WINDOW = 1.25 * math.pi


class CriticalCouplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class CriticalCoupling:
    l: float
    L: float
    g_c: float
    merge_energy: float
    bracket_width: float

    def as_row(self) -> dict:
        return {
            "l": self.l,
            "g_c": self.g_c,
            "merge_energy": self.merge_energy,
            "bracket_width": self.bracket_width,
        }


def t_window_for_levels(cfg: WellConfig, n_levels: int) -> float:
    """A t_max that comfortably contains ``n_levels`` real levels when they exist."""
    k_max = (n_levels + 1.5) * math.pi / (2.0 * cfg.L) + 4.0 / cfg.L
    _, t = hyperbola_st(k_max, cfg.g)
    return float(t)


def energies(cfg: WellConfig, n_levels: int, *, t_max: float | None = None) -> list[float]:
    """Lowest ``n_levels`` real energies, ascending.

    Fewer are returned (with a log message) when PT symmetry is broken for
    some of them.
    """
    if n_levels < 1:
        raise DomainError("n_levels must be positive")
    if cfg.g == 0:
        return [(n * math.pi / (2 * cfg.L)) ** 2 for n in range(1, n_levels + 1)]
    if t_max is not None:
        roots = find_roots_on_hyperbola(cfg, t_max)
    else:
        # broken pairs thin out the low spectrum; widen the window a few times
        extra = 0
        for _ in range(6):
            roots = find_roots_on_hyperbola(cfg, t_window_for_levels(cfg, n_levels + extra))
            if len(roots) >= n_levels:
                break
            extra = 2 * extra + 2 * (n_levels - len(roots))
    if len(roots) < n_levels:
        log.info("only %d real levels found below requested %d", len(roots), n_levels)
    return [r.E for r in roots[:n_levels]]


def asymptotic_wavenumber(cfg: WellConfig, n: int, *, corrected: bool = False) -> float:
    """Large-n wavenumber of level n (n = 1 is the ground state).

    The default is the standard first-order formula with coefficient
    2 (-1)^(n+1).  Keeping the O(1) term s^2 l t^2 cos(2kL) that this formula
    drops gives coefficient 2 (-1)^(n+1) - 1 instead; ``corrected=True``
    selects it.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    L, l, g = cfg.L, cfg.l, cfg.g
    coef = _shift_coefficient(n, corrected)
    return n * math.pi / (2 * L) + coef * g * g * l * L * L / (math.pi**3 * n**3)


def asymptotic_energy(cfg: WellConfig, n: int, *, corrected: bool = False) -> float:
    """Large-n energy of level n; see ``asymptotic_wavenumber``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    L, l, g = cfg.L, cfg.l, cfg.g
    coef = _shift_coefficient(n, corrected)
    return (n * math.pi / (2 * L)) ** 2 + coef * g * g * l * L / (math.pi**2 * n**2)


def _shift_coefficient(n: int, corrected: bool) -> float:
    sign = 1.0 if n % 2 else -1.0
    return 2.0 * sign - 1.0 if corrected else 2.0 * sign


def exact_level(cfg: WellConfig, n: int, *, half_width: float | None = None) -> float:
    """Exact wavenumber of the real level nearest the unperturbed n*pi/2L."""
    k0 = n * math.pi / (2 * cfg.L)
    hw = half_width or 0.45 * math.pi / (2 * cfg.L)
    f = lambda k: hyperbola_residual(cfg, k)
    from .secular import bracket_roots, refine_root

    ks = [refine_root(f, a, b) for a, b in bracket_roots(f, k0 - hw, k0 + hw, hw / 50)]
    if not ks:
        raise CriticalCouplingError(f"no real root near level {n}")
    return min(ks, key=lambda k: abs(k - k0))


def _lowest_pair(L: float, l: float, g: float, samples: int = 400):
    """Whether the two lowest levels are real at coupling g.

    Returns (present, k_near_merge).  Present means the residual on the
    hyperbola changes sign inside the lowest-oval window; near the fold the
    two roots are too close to bracket on any grid, so every local extremum
    is minimized and a sign change there counts.
    """
    cfg = WellConfig(L, l, g)
    k_lo = k_of_t(math.sqrt(0.5 * g) * (1 + SCAN_EPS), g)
    k_hi = LOWEST_PAIR_WINDOW / L
    ks = np.linspace(k_lo, k_hi, samples)
    fs = hyperbola_residual(cfg, ks)
    ref = np.sign(fs[-1])
    flips = np.nonzero(np.sign(fs[:-1]) * np.sign(fs[1:]) < 0)[0]
    f1 = lambda k: ref * float(hyperbola_residual(cfg, np.array([k]))[0])
    if len(flips) >= 2:
        res = minimize_scalar(
            f1, bounds=(ks[flips[0]], ks[flips[1] + 1]), method="bounded",
            options={"xatol": ROOT_XTOL},
        )
        return True, float(res.x)
    # fold search: local minima of ref * f
    best_k, best_v = None, np.inf
    vals = ref * fs
    for i in range(1, samples - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            res = minimize_scalar(
                f1,
                bounds=(ks[i - 1], ks[i + 1]),
                method="bounded",
                options={"xatol": ROOT_XTOL},
            )
            if res.fun < best_v:
                best_k, best_v = float(res.x), float(res.fun)
    return best_v < 0, best_k


def critical_coupling(
    l: float,
    L: float = 1.0,
    tol_rel: float = 1e-5,
    *,
    g_upper: float = 1e9,
) -> CriticalCoupling:
    """Coupling at which the two lowest levels merge, by bisection on g."""
    if not 0 < l < L:
        raise DomainError(f"need 0 < l < L, got l={l}, L={L}")
    if tol_rel < 1e-6:
        raise DomainError("tol_rel must be >= 1e-6")
    base = (L / max(l, 1e-3)) ** 1.2 / (L * L)
    g_lo, g_hi = base, 8.0 * base
    while not _lowest_pair(L, l, g_lo)[0]:
        g_hi, g_lo = g_lo, g_lo / 2
        if g_lo < 1e-12:
            raise CriticalCouplingError("lowest pair not real even at tiny g")
    while _lowest_pair(L, l, g_hi)[0]:
        g_lo, g_hi = g_hi, 2 * g_hi
        if g_hi > g_upper:
            raise CriticalCouplingError(
                f"no merge below g_upper={g_upper:g}; g_c grows faster than 1/l, raise g_upper"
            )
    k_merge = None
    while (g_hi - g_lo) > tol_rel * g_lo:
        g_mid = 0.5 * (g_lo + g_hi)
        ok, k = _lowest_pair(L, l, g_mid)
        if ok:
            g_lo, k_merge = g_mid, k
        else:
            g_hi = g_mid
    if k_merge is None:
        k_merge = _lowest_pair(L, l, g_lo)[1]
    return CriticalCoupling(
        l=l,
        L=L,
        g_c=0.5 * (g_lo + g_hi),
        merge_energy=float(k_merge) ** 2,
        bracket_width=g_hi - g_lo,
    )


def gc_sweep(L: float, l_values, tol_rel: float = 1e-5, **kw) -> list:
    """``critical_coupling`` per l, in input order; failures are kept as exceptions."""
    out = []
    for l in l_values:
        try:
            out.append(critical_coupling(l, L, tol_rel, **kw))
        except (CriticalCouplingError, DomainError) as exc:
            log.warning("critical coupling failed at l=%g: %s", l, exc)
            out.append(exc)
    return out
