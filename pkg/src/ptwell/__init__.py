"""PT-symmetric square well with an imaginary step barrier.

Bound-state spectrum from the transcendental matching condition, the
critical coupling where the lowest pair turns complex, the unbroken-SUSY
partner built on the ground state, and a finite-difference cross-check.
"""

from .core import DomainError, Region, SpectralRoot, WellConfig, potential_value
from .secular import find_roots_on_hyperbola, secular_residual, trace_semi_ovals
from .spectrum import (
    CriticalCoupling,
    CriticalCouplingError,
    asymptotic_energy,
    critical_coupling,
    energies,
)
from .wavefunction import coefficients, eigenfunction_value
from .oracle import fd_spectrum, oracle_reality_census, well_spectrum
from .susy import (
    SusyParameters,
    SusyVerificationReport,
    discontinuity_noncontinuity_certificates,
    partner_eigenfunction_value,
    partner_potential_value,
    superpotential_value,
    susy_parameters,
    verify_susy,
)

__version__ = "0.1.0"

__all__ = [
    "CriticalCoupling",
    "CriticalCouplingError",
    "DomainError",
    "Region",
    "SpectralRoot",
    "SusyParameters",
    "SusyVerificationReport",
    "WellConfig",
    "asymptotic_energy",
    "coefficients",
    "critical_coupling",
    "discontinuity_noncontinuity_certificates",
    "eigenfunction_value",
    "energies",
    "fd_spectrum",
    "find_roots_on_hyperbola",
    "oracle_reality_census",
    "partner_eigenfunction_value",
    "partner_potential_value",
    "potential_value",
    "secular_residual",
    "superpotential_value",
    "susy_parameters",
    "trace_semi_ovals",
    "verify_susy",
    "well_spectrum",
]
