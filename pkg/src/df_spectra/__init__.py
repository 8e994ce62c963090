"""Bound-state spectra of the Deng-Fan potential via a fractional Nikiforov-Uvarov solution."""

from .errors import (
    ConvergenceError,
    DFSpectraError,
    InvalidInput,
    NoBoundState,
    NumericalError,
    ParseError,
    PoleError,
)
from .gfd import FractionalConfig, gamma_fn, q_factor
from .molecules import MoleculeDatabase, MoleculeParams, builtin_molecules, load_molecules
from .nu import PotentialSpec, QuantumState, Variant, energy, n_max, nu_residual

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DFSpectraError",
    "FractionalConfig",
    "InvalidInput",
    "MoleculeDatabase",
    "MoleculeParams",
    "NoBoundState",
    "NumericalError",
    "ParseError",
    "PoleError",
    "PotentialSpec",
    "QuantumState",
    "Variant",
    "builtin_molecules",
    "energy",
    "gamma_fn",
    "load_molecules",
    "n_max",
    "nu_residual",
    "q_factor",
]
