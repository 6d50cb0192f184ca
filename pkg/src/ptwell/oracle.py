"""Finite-difference eigenvalues of -d^2/dx^2 + V on a uniform grid.

This is the independent check on the secular-equation solver: it knows
nothing about the piecewise analytic solution, only the sampled potential.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from . import _tridiag
from .core import WellConfig, potential_array

log = logging.getLogger(__name__)


class PairingError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleSpectrum:
    grid_size: int
    eigenvalues: np.ndarray  # all of them, sorted by real part
    n_levels: int
    imag_threshold: float = 1e-6
    richardson_eigenvalues: np.ndarray | None = None
    fine_eigenvalues: np.ndarray | None = None
    polished: bool = field(default=False)

    @property
    def lowest(self) -> np.ndarray:
        return self.eigenvalues[: self.n_levels]

    @property
    def best(self) -> np.ndarray:
        """Richardson values when available, else the lowest levels."""
        if self.richardson_eigenvalues is not None:
            return self.richardson_eigenvalues
        return self.lowest


def grid_nodes(L_eff: float, N: int, center: float = 0.0) -> tuple[np.ndarray, float]:
    h = 2.0 * L_eff / (N + 1)
    return center - L_eff + h * np.arange(1, N + 1), h


def exact_fit_grid_size(cfg: WellConfig, approx_N: int, search: int = 2000) -> int:
    """Grid size near ``approx_N`` whose nodes land on -l, 0 and l.

    With h = L/M the nodes hit 0 and +-L; they also hit +-l when l M / L is
    an integer.  Falls back to ``approx_N`` if no such M is found nearby.
    """
    M0 = max((approx_N + 1) // 2, 1)
    ratio = cfg.l / cfg.L
    for dM in range(search):
        for M in (M0 + dM, M0 - dM):
            if M > 0 and abs(ratio * M - round(ratio * M)) < 1e-9 * M:
                return 2 * M - 1
    log.info("no exact-fit grid near N=%d; using generic grid", approx_N)
    return approx_N


def _eigvals(diag, off, method: str) -> np.ndarray:
    if method == "ql":
        try:
            return _tridiag.tridiagonal_eigvals(diag, off)
        except _tridiag.TridiagonalBreakdown as exc:
            log.warning("%s; falling back to dense LAPACK", exc)
            method = "lapack"
    if method == "lapack":
        H = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
        return scipy.linalg.eigvals(H, overwrite_a=True, check_finite=False)
    raise ValueError(f"unknown eigensolver {method!r}")


def _solve_grid(sampler, L_eff, N, n_levels, method, polish, center):
    x, h = grid_nodes(L_eff, N, center)
    diag = 2.0 / h**2 + np.asarray(sampler(x), dtype=complex)
    off = np.full(N - 1, -1.0 / h**2, dtype=complex)
    w = _eigvals(diag, off, method)
    if not np.all(np.isfinite(w)):
        raise RuntimeError("eigensolve produced non-finite values")
    w = w[np.lexsort((w.imag, w.real))]
    if polish:
        low = np.array([_tridiag.polish_eigenvalue(diag, off, z) for z in w[:n_levels]])
        w = np.concatenate([low, w[n_levels:]])
        w = w[np.lexsort((w.imag, w.real))]
    return w


def pair_levels(coarse: np.ndarray, fine: np.ndarray, rel_gap: float = 0.1) -> np.ndarray:
    """Index into ``fine`` of the partner of each ``coarse`` level.

    Nearest neighbour in the complex plane, accepted only if closer than
    ``rel_gap`` times the distance from the coarse level to its nearest
    coarse neighbour.
    """
    idx = np.empty(len(coarse), dtype=int)
    for i, z in enumerate(coarse):
        others = np.delete(coarse, i)
        gap = np.min(np.abs(others - z)) if others.size else np.inf
        j = int(np.argmin(np.abs(fine - z)))
        if abs(fine[j] - z) > rel_gap * gap:
            raise PairingError(
                f"level {z} has no partner within {rel_gap} of its gap {gap:g}"
            )
        idx[i] = j
    if len(set(idx.tolist())) != len(idx):
        raise PairingError("two coarse levels claim the same fine level")
    return idx


def fd_spectrum(
    potential_sampler: Callable[[np.ndarray], np.ndarray],
    L_eff: float,
    N: int,
    n_levels: int,
    *,
    richardson: bool = False,
    method: str = "ql",
    polish: bool = True,
    imag_threshold: float = 1e-6,
    center: float = 0.0,
) -> OracleSpectrum:
    """Three-point discretization on N interior nodes of (center-L_eff, center+L_eff).

    With ``richardson`` the grid is refined to 2N+1 nodes (h halved exactly)
    and each of the lowest levels is extrapolated as (4 E_fine - E_coarse)/3.
    """
    if N < 200:
        raise ValueError("N must be at least 200")
    w = _solve_grid(potential_sampler, L_eff, N, n_levels, method, polish, center)
    if not richardson:
        return OracleSpectrum(N, w, n_levels, imag_threshold, polished=polish)
    n2 = 2 * N + 1
    w2 = _solve_grid(potential_sampler, L_eff, n2, n_levels + 2, method, polish, center)
    coarse = w[:n_levels]
    idx = pair_levels(coarse, w2[: n_levels + 2])
    fine = w2[idx]
    rich = (4.0 * fine - coarse) / 3.0
    return OracleSpectrum(
        N, w, n_levels, imag_threshold,
        richardson_eigenvalues=rich, fine_eigenvalues=fine, polished=polish,
    )


def well_spectrum(
    cfg: WellConfig,
    N: int = 4000,
    n_levels: int = 6,
    *,
    richardson: bool = True,
    exact_fit: bool = True,
    **kw,
) -> OracleSpectrum:
    """``fd_spectrum`` for the step potential itself."""
    if exact_fit:
        N = exact_fit_grid_size(cfg, N)
    h = 2.0 * cfg.L / (N + 1)
    sampler = lambda x: potential_array(cfg, x, jump_atol=1e-6 * h)
    return fd_spectrum(sampler, cfg.L, N, n_levels, richardson=richardson, **kw)


@dataclass(frozen=True)
class RealityCensus:
    near_real: int
    complex_pairs: list
    unstable: list


def oracle_reality_census(
    cfg: WellConfig,
    N: int = 2000,
    imag_threshold: float = 1e-6,
    n_levels: int = 8,
    *,
    spectrum: OracleSpectrum | None = None,
) -> RealityCensus:
    """Split the lowest oracle levels into near-real ones and conjugate pairs."""
    osp = spectrum or well_spectrum(cfg, N, n_levels, richardson=False)
    levels = osp.best[:n_levels]
    im = np.abs(levels.imag)
    unstable = [complex(z) for z, a in zip(levels, im) if imag_threshold / 10 < a < 10 * imag_threshold]
    if unstable:
        log.warning("eigenvalues near the reality threshold: %s", unstable)
    real_mask = im < imag_threshold
    cplx = list(levels[~real_mask])
    pairs = []
    while cplx:
        z = cplx.pop(0)
        if not cplx:
            pairs.append((complex(z), None))
            break
        j = int(np.argmin([abs(w - np.conj(z)) for w in cplx]))
        w = cplx.pop(j)
        pairs.append((complex(z), complex(w)))
    return RealityCensus(int(real_mask.sum()), pairs, unstable)
