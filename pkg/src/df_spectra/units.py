"""Physical constants and unit conversions.

The constants are the exact decimal literals used to produce the published
energy tables, not CODATA values, so that tabulated energies reproduce at
the printed precision.
"""

from dataclasses import dataclass

from .errors import InvalidInput


@dataclass(frozen=True)
class PhysicalConstants:
    hbar_c: float = 1973.29  # eV * Angstrom
    cm_inv_to_ev: float = 1.239841875e-4  # eV per cm^-1
    amu_to_mev: float = 931.494028  # MeV per amu


CONSTANTS = PhysicalConstants()


def cm_inv_to_ev(x):
    """Convert a wavenumber in cm^-1 to energy in eV."""
    return x * CONSTANTS.cm_inv_to_ev


def ev_to_cm_inv(e):
    """Convert an energy in eV to a wavenumber in cm^-1."""
    return e / CONSTANTS.cm_inv_to_ev


def reduced_mass_to_ev(mu):
    """Rest energy mu*c^2 in eV of a mass given in amu."""
    if not mu > 0:
        raise InvalidInput(f"mass must be positive, got {mu!r}")
    return mu * CONSTANTS.amu_to_mev * 1e6


def kappa(mu, alpha):
    """Dimensionless-energy scale 2 mu c^2 / (alpha^2 (hbar c)^2), in 1/eV.

    Multiplying an energy in eV by this factor gives the dimensionless
    energy used by the closed-form solution.
    """
    if not alpha > 0:
        raise InvalidInput(f"alpha must be positive, got {alpha!r}")
    return 2.0 * reduced_mass_to_ev(mu) / (alpha * alpha * CONSTANTS.hbar_c ** 2)


def radial_scale(mu):
    """2 mu c^2 / (hbar c)^2 in 1/(eV Angstrom^2); converts eV to Angstrom^-2."""
    return 2.0 * reduced_mass_to_ev(mu) / CONSTANTS.hbar_c ** 2
