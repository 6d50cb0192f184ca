"""Superpotential, SUSY partner potential and partner eigenfunctions.

The factorization energy is the ground-state energy E0 = k0**2 of the
step-barrier well (H+), so SUSY is unbroken: A = d/dx + W annihilates the
ground state and A maps the excited states of H+ onto the states of H-.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import DomainError, Region, SpectralRoot, WellConfig
from .wavefunction import (
    MATCHING_REGIONS,
    REGION_ORDER,
    WaveCoefficients,
    _matching_terms,
    branch_derivative,
    coefficients,
    matching_point,
    piecewise,
)

POLE_EPS = 1e-8
SPLIT_TOL = 1e-9


class PoleError(DomainError):
    """Evaluation too close to the x = +-L singularity of W and V-."""


class SusyConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class SusyParameters:
    k0: float
    kappa0: complex
    E0: float
    x_L2: float
    x_R2: float
    x_R1: complex
    x_L1: complex
    g: float = 0.0
    split_residuals: tuple[float, float] = (0.0, 0.0)
    branch_shift: int = 0
    alternatives: tuple[complex, ...] = field(default=())


@dataclass
class SusyVerificationReport:
    annihilation_residual: float
    factorization_residual: float
    intertwining_residual: float
    partner_matching_residuals: dict
    discontinuity_jumps: dict
    isospectral_residual: float = 0.0
    scales: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "annihilation_residual": self.annihilation_residual,
            "factorization_residual": self.factorization_residual,
            "intertwining_residual": self.intertwining_residual,
            "isospectral_residual": self.isospectral_residual,
            "partner_matching_residuals": self.partner_matching_residuals,
            "discontinuity_jumps": {
                k: [v.real, v.imag] for k, v in self.discontinuity_jumps.items()
            },
            "scales": self.scales,
        }


def split_terms(cfg: WellConfig, ground: SpectralRoot) -> tuple[float, float, float]:
    """(N^r, N^i, D): tanh(kappa0 x_R1) = (N^r + i N^i) / D."""
    s, t, k = ground.s, ground.t, ground.k
    l = cfg.l
    a = 2.0 * k * (cfg.L - l)
    c2, s2 = math.cos(a), math.sin(a)
    sh, ch = math.sinh(2 * s * l), math.cosh(2 * s * l)
    sn, cs = math.sin(2 * t * l), math.cos(2 * t * l)
    Nr = (-s * s * c2 + t * t) * sh + k * s * s2 * ch
    Ni = (s * s - t * t * c2) * sn - k * t * s2 * cs
    D = (-s * s * c2 + t * t) * ch + (s * s - t * t * c2) * cs + k * s2 * (s * sh + t * sn)
    return Nr, Ni, D


def split_residuals(cfg: WellConfig, ground: SpectralRoot, x_R1: complex) -> tuple[float, float]:
    """Residuals of the real and imaginary parts of the x_R1 condition."""
    Nr, Ni, D = split_terms(cfg, ground)
    z = ground.kappa * x_R1
    X, Y = z.real, z.imag
    den = math.cosh(X) ** 2 * math.cos(Y) ** 2 + math.sinh(X) ** 2 * math.sin(Y) ** 2
    lhs_r = math.sinh(X) * math.cosh(X) / den
    lhs_i = math.sin(Y) * math.cos(Y) / den
    return abs(lhs_r - Nr / D), abs(lhs_i - Ni / D)


def tanh_target(cfg: WellConfig, ground: SpectralRoot) -> complex:
    """Required value of tanh(kappa0 x_R1), i.e. -i C0 / (kappa0 l B0)."""
    den, num_c, _, _ = _matching_terms(cfg, ground)
    return complex(num_c / den)


def susy_parameters(cfg: WellConfig, ground: SpectralRoot, *, tol: float = SPLIT_TOL) -> SusyParameters:
    k0, kap0 = ground.k, ground.kappa
    _, _, D = split_terms(cfg, ground)
    if abs(D) < 1e-14 * (ground.t**2 + ground.s**2):
        raise SusyConstructionError("shared denominator D vanishes")
    z0 = cmath.atanh(tanh_target(cfg, ground))
    period = 1j * math.pi
    candidates = []
    for m in (0, -1, 1, -2, 2):
        x = (z0 + m * period) / kap0
        res = split_residuals(cfg, ground, x)
        candidates.append((abs((kap0 * x).imag), m, x, res))
    candidates.sort(key=lambda c: c[0])
    ok = [c for c in candidates if max(c[3]) < tol]
    if not ok:
        best = min(candidates, key=lambda c: max(c[3]))
        raise SusyConstructionError(
            f"no artanh branch satisfies the split equations to {tol}; best residuals {best[3]}"
        )
    _, m, x_R1, res = ok[0]
    alts = tuple(c[2] for c in ok[1:])
    return SusyParameters(
        k0=k0,
        kappa0=kap0,
        E0=k0 * k0,
        x_L2=cfg.L + math.pi / (2 * k0),
        x_R2=cfg.L - math.pi / (2 * k0),
        x_R1=complex(x_R1),
        x_L1=complex(x_R1).conjugate(),
        g=cfg.g,
        split_residuals=res,
        branch_shift=m,
        alternatives=alts,
    )


def _guard_poles(cfg, x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > cfg.L):
        raise DomainError(f"x outside [-{cfg.L}, {cfg.L}]")
    if np.any(cfg.L - np.abs(x) < POLE_EPS * cfg.L):
        raise PoleError("W and V- are singular at x = +-L")
    return x


def superpotential_branch(p: SusyParameters, cfg: WellConfig, region: Region, x, order: int = 0):
    """W and its first two derivatives from one region's closed form."""
    x = np.asarray(x, dtype=float)
    L, k0 = cfg.L, p.k0
    if region in (Region.L2, Region.R2):
        th = k0 * (x + L) if region is Region.L2 else k0 * (x - L)
        cot = 1.0 / np.tan(th)
        csc2 = 1.0 + cot * cot
        return ([-k0 * cot, k0**2 * csc2, -2.0 * k0**3 * csc2 * cot][order]).astype(complex)
    if region is Region.R1:
        kap, shift = p.kappa0, -p.x_R1
    else:
        kap, shift = np.conj(p.kappa0), p.x_L1
    T = np.tanh(kap * (x + shift))
    sech2 = 1.0 - T * T
    return [-kap * T, -kap**2 * sech2, 2.0 * kap**3 * T * sech2][order]


def superpotential_value(p: SusyParameters, cfg: WellConfig, x):
    x = _guard_poles(cfg, x)
    return piecewise(cfg, lambda reg, xs: superpotential_branch(p, cfg, reg, xs), x)


def _partner_branch(p: SusyParameters, cfg: WellConfig, region: Region, x):
    x = np.asarray(x, dtype=float)
    L, k0, g = cfg.L, p.k0, cfg.g
    if region in (Region.L2, Region.R2):
        th = k0 * (x + L) if region is Region.L2 else k0 * (x - L)
        return (2.0 * k0**2 / np.sin(th) ** 2).astype(complex)
    if region is Region.R1:
        kap, shift, vi = p.kappa0, -p.x_R1, 1j * g
    else:
        kap, shift, vi = np.conj(p.kappa0), p.x_L1, -1j * g
    return -2.0 * kap**2 / np.cosh(kap * (x + shift)) ** 2 + vi


def _with_jump_means(p, cfg, x, out, atol):
    for name, (left, right) in MATCHING_REGIONS.items():
        x0 = matching_point(cfg, name)
        at = np.abs(x - x0) <= atol
        if np.any(at):
            out[at] = 0.5 * (_partner_branch(p, cfg, left, x0) + _partner_branch(p, cfg, right, x0))
    return out


def partner_potential_value(p: SusyParameters, cfg: WellConfig, x):
    """V-(x); at a matching point the mean of the one-sided limits."""
    x = _guard_poles(cfg, x)
    scalar = x.ndim == 0
    xa = np.atleast_1d(x)
    out = np.atleast_1d(piecewise(cfg, lambda reg, xs: _partner_branch(p, cfg, reg, xs), xa))
    out = _with_jump_means(p, cfg, xa, out, 0.0)
    return complex(out[0]) if scalar else out


def partner_potential_array(p: SusyParameters, cfg: WellConfig, x, jump_atol: float = 0.0) -> np.ndarray:
    """Vectorized V- without the pole guard, for grid samplers."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.atleast_1d(piecewise(cfg, lambda reg, xs: _partner_branch(p, cfg, reg, xs), xa))
    return _with_jump_means(p, cfg, xa, out, jump_atol)


def _plus_potential(cfg: WellConfig, region: Region) -> complex:
    return {Region.L2: 0.0, Region.L1: -1j * cfg.g, Region.R1: 1j * cfg.g, Region.R2: 0.0}[region]


PARTNER_CONSTANT = 1j


def partner_eigenfunction_branch(
    cfg: WellConfig,
    p: SusyParameters,
    coeffs: WaveCoefficients,
    region: Region,
    x,
    *,
    C_minus: complex = PARTNER_CONSTANT,
):
    """Closed-form partner state in one region (value only)."""
    x = np.asarray(x, dtype=float)
    r = coeffs.root
    k, kap, l, L, k0 = r.k, r.kappa, cfg.l, cfg.L, p.k0
    if region in (Region.L2, Region.R2):
        y = L + x if region is Region.L2 else L - x
        amp = np.conj(coeffs.A) if region is Region.L2 else coeffs.A
        sign = 1.0 if region is Region.L2 else -1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(y == 0, k / k0, np.sin(k * y) / np.tan(k0 * y))
        return C_minus * amp * sign * (k * np.cos(k * y) - k0 * ratio)
    if region is Region.R1:
        kp, k0p, shift = kap, p.kappa0, -p.x_R1
    else:
        kp, k0p, shift = np.conj(kap), np.conj(p.kappa0), p.x_L1
    T = np.tanh(k0p * (x + shift))
    ch, sh = np.cosh(kp * x), np.sinh(kp * x)
    q = 1j * coeffs.C / (kp * l)
    return C_minus * (
        coeffs.B * (kp * sh - k0p * T * ch) + q * (kp * ch - k0p * T * sh)
    )


def partner_eigenfunction_value(
    cfg: WellConfig,
    p: SusyParameters,
    excited: SpectralRoot,
    coeffs: WaveCoefficients,
    x,
    *,
    C_minus: complex = PARTNER_CONSTANT,
):
    """psi-_n(x) built from the (n+1)-th state of H+; zero at x = +-L."""
    if coeffs.root != excited:
        raise ValueError("coefficients belong to a different root")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > cfg.L):
        raise DomainError(f"x outside [-{cfg.L}, {cfg.L}]")
    return piecewise(
        cfg, lambda reg, xs: partner_eigenfunction_branch(cfg, p, coeffs, reg, xs, C_minus=C_minus), x
    )


def apply_A_branch(cfg, p, coeffs, region, x, order: int = 0, C_minus: complex = 1.0):
    """d^order/dx^order of C_minus (psi' + W psi) for one region, order <= 2."""
    psi = [branch_derivative(cfg, coeffs, region, x, m) for m in range(order + 2)]
    W = [superpotential_branch(p, cfg, region, x, m) for m in range(order + 1)]
    if order == 0:
        val = psi[1] + W[0] * psi[0]
    elif order == 1:
        val = psi[2] + W[1] * psi[0] + W[0] * psi[1]
    elif order == 2:
        val = psi[3] + W[2] * psi[0] + 2.0 * W[1] * psi[1] + W[0] * psi[2]
    else:
        raise ValueError("order must be 0, 1 or 2")
    return C_minus * val


def discontinuity_noncontinuity_certificates(p: SusyParameters, cfg: WellConfig) -> tuple[complex, complex]:
    """Mismatches that would have to vanish for V- to be continuous.

    (i) at x = l: (-kappa0^2 + i g/2) - k0^2;
    (ii) at x = 0: (-kappa0^2 + i g/2) - (-conj(kappa0)^2 - i g/2).
    Both are taken R1-side minus neighbour and reduce to -i g/2 and -i g.
    """
    kap2 = p.kappa0**2
    g = cfg.g
    r1_side = -kap2 + 0.5j * g
    cert_l = r1_side - p.k0**2
    cert_0 = r1_side - (-np.conj(p.kappa0) ** 2 - 0.5j * g)
    return complex(cert_l), complex(cert_0)


def residual_sample_points(cfg: WellConfig, per_region: int = 64) -> dict:
    """Chebyshev points inside each region, kept 1e-6 L off the matching points."""
    gap = 1e-6 * cfg.L
    j = np.arange(per_region)
    cheb = 0.5 * (1 - np.cos((2 * j + 1) * np.pi / (2 * per_region)))
    out = {}
    for region in REGION_ORDER:
        a, b = region.interval(cfg)
        lo = a + gap if region is not Region.L2 else a + 1e-3 * cfg.L
        hi = b - gap if region is not Region.R2 else b - 1e-3 * cfg.L
        out[region] = lo + (hi - lo) * cheb
    return out


def _max_ratio(num, den):
    return float(np.max(np.abs(num)) / max(float(np.max(np.abs(den))), 1e-300))


def verify_susy(
    cfg: WellConfig,
    p: SusyParameters,
    roots: list,
    *,
    per_region: int = 64,
) -> SusyVerificationReport:
    """Residuals of annihilation, factorization, intertwining and matching.

    All residuals are relative: each maximum is divided by the largest
    magnitude among the terms being compared on the same sample set.
    """
    if not roots:
        raise ValueError("need at least the ground state")
    pts = residual_sample_points(cfg, per_region)
    coeffs = [coefficients(cfg, r) for r in roots]
    E0 = p.E0

    ann_num, ann_den = [], []
    fac_num, fac_den = [], []
    tw_num, tw_den = [], []
    iso = 0.0
    for region, xs in pts.items():
        c0 = coeffs[0]
        ann_num.append(branch_derivative(cfg, c0, region, xs, 1) + superpotential_branch(p, cfg, region, xs) * branch_derivative(cfg, c0, region, xs, 0))
        ann_den.append(branch_derivative(cfg, c0, region, xs, 1))
        Vp = _plus_potential(cfg, region)
        W = superpotential_branch(p, cfg, region, xs, 0)
        W1 = superpotential_branch(p, cfg, region, xs, 1)
        Vm = _partner_branch(p, cfg, region, xs)
        for c in coeffs:
            psi = [branch_derivative(cfg, c, region, xs, m) for m in range(4)]
            lhs = -psi[2] + (Vp - E0) * psi[0]
            rhs = -psi[2] + (W * W - W1) * psi[0]
            fac_num.append(lhs - rhs)
            fac_den.append(np.abs(psi[2]) + np.abs((Vp - E0) * psi[0]))
            # A(H+ psi) with V+ constant in the region
            Hpsi_d0 = -psi[2] + (Vp - E0) * psi[0]
            Hpsi_d1 = -psi[3] + (Vp - E0) * psi[1]
            A_H = Hpsi_d1 + W * Hpsi_d0
            Apsi = apply_A_branch(cfg, p, c, region, xs, 0)
            Apsi2 = apply_A_branch(cfg, p, c, region, xs, 2)
            H_A = -Apsi2 + (Vm - E0) * Apsi
            tw_num.append(A_H - H_A)
            tw_den.append(np.abs(A_H) + np.abs(Apsi2) + np.abs((Vm - E0) * Apsi))
        for c in coeffs[1:]:
            Apsi = apply_A_branch(cfg, p, c, region, xs, 0)
            Apsi2 = apply_A_branch(cfg, p, c, region, xs, 2)
            res = -Apsi2 + (Vm - E0) * Apsi - (c.root.E - E0) * Apsi
            iso = max(iso, _max_ratio(res, np.abs(Apsi2) + np.abs((Vm - E0) * Apsi)))

    ann = _max_ratio(np.concatenate(ann_num), np.concatenate(ann_den))
    fac = _max_ratio(np.concatenate(fac_num), np.concatenate(fac_den))
    tw = _max_ratio(np.concatenate(tw_num), np.concatenate(tw_den))
    matching = partner_matching_residuals(cfg, p, coeffs[1:])
    return SusyVerificationReport(
        annihilation_residual=ann,
        factorization_residual=fac,
        intertwining_residual=tw,
        partner_matching_residuals=matching,
        discontinuity_jumps=partner_jumps(p, cfg),
        isospectral_residual=iso,
        scales={"normalization": "B=1", "C_minus": "i", "relative": True},
    )


def partner_scale(cfg, p, coeffs, n_samples: int = 2001) -> float:
    x = np.linspace(-cfg.L, cfg.L, n_samples)[1:-1]
    return float(np.max(np.abs(partner_eigenfunction_value(cfg, p, coeffs.root, coeffs, x))))


def partner_matching_residuals(cfg: WellConfig, p: SusyParameters, excited_coeffs) -> dict:
    """Worst value/derivative mismatch of each partner state at -l, 0, l.

    Keys are "-l", "0", "l"; values and derivatives are both measured
    relative to max |psi-_n| over the well.
    """
    out = {name: 0.0 for name in MATCHING_REGIONS}
    for c in excited_coeffs:
        scale = partner_scale(cfg, p, c)
        for name, (left, right) in MATCHING_REGIONS.items():
            x = matching_point(cfg, name)
            v = abs(partner_eigenfunction_branch(cfg, p, c, left, x) - partner_eigenfunction_branch(cfg, p, c, right, x))
            d = abs(apply_A_branch(cfg, p, c, left, x, 1) - apply_A_branch(cfg, p, c, right, x, 1))
            out[name] = max(out[name], float(v) / scale, float(d) / scale)
    return out


def partner_jumps(p: SusyParameters, cfg: WellConfig) -> dict:
    """V-(x+) - V-(x-) at each matching point."""
    out = {}
    for name, (left, right) in MATCHING_REGIONS.items():
        x = matching_point(cfg, name)
        out[name] = complex(_partner_branch(p, cfg, right, x) - _partner_branch(p, cfg, left, x))
    return out


def partner_oracle_spectrum(
    cfg: WellConfig,
    p: SusyParameters,
    *,
    N: int = 4000,
    n_levels: int = 4,
    delta: float = 1e-3,
    richardson: bool = True,
):
    """FD eigenvalues of H- - on (-L+delta, L-delta) with Dirichlet ends.

    The csc^2 walls are cut at delta; eigenvalues are E_{n+1} - E0.
    """
    from .oracle import fd_spectrum

    L_eff = cfg.L - delta * cfg.L
    h = 2.0 * L_eff / (N + 1)
    sampler = lambda x: partner_potential_array(p, cfg, x, jump_atol=1e-6 * h) - p.E0
    return fd_spectrum(sampler, L_eff, N, n_levels, richardson=richardson)
