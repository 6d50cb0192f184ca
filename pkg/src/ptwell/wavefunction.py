"""Piecewise bound-state eigenfunctions of the step-barrier well.

Normalization is B = 1 (value at the origin).  B and C are real, and the
left branches carry conjugated constants (conj A, conj kappa).  Each region
has its own closed form, so PT symmetry is a checkable property rather than
a construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, Region, SpectralRoot, WellConfig


class DegenerateMatching(RuntimeError):
    """The matching denominator vanishes; the root is suspect."""


@dataclass(frozen=True)
class WaveCoefficients:
    A: complex
    B: float
    C: float
    root: SpectralRoot
    C_imag_residual: float = 0.0

    def scaled(self, factor: float) -> "WaveCoefficients":
        return WaveCoefficients(
            self.A * factor, self.B * factor, self.C * factor, self.root,
            self.C_imag_residual,
        )


def _matching_terms(cfg: WellConfig, root: SpectralRoot):
    k, kap = root.k, root.kappa
    w = k * (cfg.L - cfg.l)
    sn, cs = math.sin(w), math.cos(w)
    sh, ch = cmath.sinh(kap * cfg.l), cmath.cosh(kap * cfg.l)
    # (k cot[k(L-l)] + kappa coth(kappa l)) * sin[k(L-l)] sinh(kappa l)
    den = k * cs * sh + kap * sn * ch
    # (k cot coth + kappa) * sin sinh
    num_c = k * cs * ch + kap * sn * sh
    return den, num_c, sn, sh


def coefficients(
    cfg: WellConfig, root: SpectralRoot, B: float = 1.0, *, den_tol: float = 1e-13
) -> WaveCoefficients:
    """A and C from B via the x = l matching conditions."""
    den, num_c, _, _ = _matching_terms(cfg, root)
    kap = root.kappa
    scale = abs(root.k) + abs(kap)
    if abs(den) < den_tol * scale:
        raise DegenerateMatching(f"matching denominator {abs(den):.3g} vanishes at E={root.E}")
    A = B * kap / den
    C_full = 1j * kap * cfg.l * B * num_c / den
    imag_res = abs(C_full.imag) / max(abs(C_full), abs(B) * cfg.l * abs(kap), 1e-300)
    return WaveCoefficients(A=complex(A), B=float(B), C=float(C_full.real), root=root,
                            C_imag_residual=float(imag_res))


def _check_x(cfg, x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > cfg.L):
        raise DomainError(f"x outside [-{cfg.L}, {cfg.L}]")
    return x


def _cosh_branch(kap, B, q, x, order):
    """d^order/dx^order of B cosh(kap x) + q sinh(kap x)."""
    ch, sh = np.cosh(kap * x), np.sinh(kap * x)
    if order % 2 == 0:
        return kap**order * (B * ch + q * sh)
    return kap**order * (B * sh + q * ch)


def _sin_branch(k, amp, y, direction, order):
    """d^order/dx^order of amp sin(k y) with y = L + direction * x."""
    phase = [np.sin, np.cos, np.sin, np.cos][order % 4](k * y)
    sign = [1, 1, -1, -1][order % 4]
    return amp * sign * (direction * k) ** order * phase


def branch_derivative(cfg: WellConfig, coeffs: WaveCoefficients, region: Region, x, order: int = 0):
    """``order``-th derivative of one region's closed form, evaluated anywhere."""
    r = coeffs.root
    k, kap, l, L = r.k, r.kappa, cfg.l, cfg.L
    x = np.asarray(x, dtype=float)
    if region is Region.R2:
        return _sin_branch(k, coeffs.A, L - x, -1, order)
    if region is Region.L2:
        return _sin_branch(k, np.conj(coeffs.A), L + x, 1, order)
    if region is Region.R1:
        return _cosh_branch(kap, coeffs.B, 1j * coeffs.C / (kap * l), x, order)
    kc = np.conj(kap)
    return _cosh_branch(kc, coeffs.B, 1j * coeffs.C / (kc * l), x, order)


def region_of(cfg: WellConfig, x) -> np.ndarray:
    """Region index per point, taking the right-hand region at a matching point."""
    x = np.asarray(x, dtype=float)
    return np.select([x < -cfg.l, x < 0, x < cfg.l], [0, 1, 2], 3)


REGION_ORDER = (Region.L2, Region.L1, Region.R1, Region.R2)


def piecewise(cfg: WellConfig, branch, x):
    """Evaluate ``branch(region, xs)`` region by region over an array of x."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    idx = region_of(cfg, x)
    out = np.empty(x.shape, dtype=complex)
    for i, region in enumerate(REGION_ORDER):
        sel = idx == i
        if np.any(sel):
            out[sel] = branch(region, x[sel])
    return complex(out[0]) if scalar else out


def eigenfunction_value(cfg: WellConfig, coeffs: WaveCoefficients, x):
    x = _check_x(cfg, x)
    return piecewise(cfg, lambda reg, xs: branch_derivative(cfg, coeffs, reg, xs, 0), x)


def eigenfunction_derivative(cfg: WellConfig, coeffs: WaveCoefficients, x, order: int = 1):
    """``order``-th derivative from the branch formulas (any order >= 1)."""
    x = _check_x(cfg, x)
    return piecewise(cfg, lambda reg, xs: branch_derivative(cfg, coeffs, reg, xs, order), x)


MATCHING_REGIONS = {"-l": (Region.L2, Region.L1), "0": (Region.L1, Region.R1), "l": (Region.R1, Region.R2)}


def matching_point(cfg: WellConfig, name: str) -> float:
    return {"-l": -cfg.l, "0": 0.0, "l": cfg.l}[name]


def branch_values(cfg: WellConfig, coeffs: WaveCoefficients, name: str, order: int = 0):
    """(left-region, right-region) values at the matching point ``name``."""
    left, right = MATCHING_REGIONS[name]
    x = matching_point(cfg, name)
    return (
        complex(branch_derivative(cfg, coeffs, left, x, order)),
        complex(branch_derivative(cfg, coeffs, right, x, order)),
    )
