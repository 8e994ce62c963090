"""Finite-difference eigensolver for the classical (delta = 1) radial equation.

Discretizes ``-F'' + U(r) F = k E F`` with three-point central differences
and Dirichlet ends, ``k = 2 mu c^2 / (hbar c)^2``. The lowest eigenvalues of
the symmetric tridiagonal matrix are found by Sturm-sequence bisection.
The centrifugal term is either exact, ``(eta^2 - 1/4)/r^2``, or the same
Pekeris-type approximation used by the closed form; the latter certifies
the closed form, the former measures the cost of the approximation.
"""

import enum
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import units
from .errors import InvalidInput, NumericalError
from .nu import FractionalConfig, NoBoundState, QuantumState, energy

MAX_BISECTIONS = 200
MAX_COUNT = 20


class Mode(enum.Enum):
    EXACT_CENTRIFUGAL = "exact"
    PEKERIS = "pekeris"


@dataclass(frozen=True)
class GridSpec:
    r_min: float
    r_max: float
    points: int = 20000

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise InvalidInput(f"need 0 < r_min < r_max, got {self.r_min!r}, {self.r_max!r}")
        if self.points < 100:
            raise InvalidInput(f"need at least 100 interior points, got {self.points!r}")

    @classmethod
    def default(cls, molecule, points=20000):
        return cls(1e-3 / molecule.alpha, molecule.r_e + 30.0 / molecule.alpha, points)

    @property
    def spacing(self):
        return (self.r_max - self.r_min) / (self.points + 1)

    def nodes(self):
        return self.r_min + self.spacing * np.arange(1, self.points + 1)

    def refined(self):
        """Same interval with half the spacing."""
        return GridSpec(self.r_min, self.r_max, 2 * self.points + 1)


@dataclass(frozen=True)
class OracleResult:
    eigenvalues: tuple
    mode: Mode
    grid: GridSpec
    estimated_error: float


@njit(cache=True)
def _sturm_count(diag, off2, x):
    """Number of eigenvalues strictly below ``x``."""
    count = 0
    q = diag[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        if q == 0.0:
            q = 1e-300
        q = diag[i] - x - off2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect_lowest(diag, off2, count, lo, hi, max_iter):
    """Lowest ``count`` eigenvalues; the last slot of ``ok`` flags convergence."""
    out = np.empty(count)
    ok = True
    scale = max(abs(lo), abs(hi))
    for k in range(count):
        a, b = lo, hi
        if k > 0:
            a = out[k - 1]
        converged = False
        for _ in range(max_iter):
            mid = 0.5 * (a + b)
            if _sturm_count(diag, off2, mid) > k:
                b = mid
            else:
                a = mid
            if b - a <= 4.0 * 2.220446049250313e-16 * (abs(a) + abs(b)) + 1e-300 * scale:
                converged = True
                break
        if not converged:
            ok = False
        out[k] = 0.5 * (a + b)
    return out, ok


def tridiagonal_eigenvalues(diag, offdiag, count):
    """Lowest ``count`` eigenvalues of a symmetric tridiagonal matrix, ascending.

    Raises
    ------
    NumericalError
        If a bisection fails to converge within 200 halvings.
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    offdiag = np.ascontiguousarray(offdiag, dtype=float)
    if offdiag.shape[0] != diag.shape[0] - 1:
        raise InvalidInput("off-diagonal must be one shorter than the diagonal")
    if not 1 <= count <= diag.shape[0]:
        raise InvalidInput(f"count must be in [1, {diag.shape[0]}], got {count!r}")
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(offdiag)
    radius[1:] += np.abs(offdiag)
    lo = float(np.min(diag - radius))
    hi = float(np.max(diag + radius))
    values, ok = _bisect_lowest(diag, offdiag * offdiag, count, lo, hi, MAX_BISECTIONS)
    if not ok:
        raise NumericalError(f"Sturm bisection did not converge in {MAX_BISECTIONS} iterations")
    return values


def effective_potential(spec, l, dim, mode, r):
    """U(r) in Angstrom^-2: scaled potential plus centrifugal term."""
    mol = spec.molecule
    state = QuantumState(0, l, dim)
    x = mol.alpha * r
    u = 1.0 / np.expm1(x)  # rho / (1 - rho)
    v = spec.d_e_ev * (1.0 - spec.b * u) ** 2 + spec.v0
    g = state.centrifugal
    if Mode(mode) is Mode.EXACT_CENTRIFUGAL:
        cen = g / (r * r)
    else:
        cen = g * mol.alpha ** 2 * (1.0 / 12.0 + u + u * u)
    return units.radial_scale(mol.mu) * v + cen


def _spectrum_on(spec, l, dim, mode, grid, count):
    r = grid.nodes()
    h = grid.spacing
    diag = 2.0 / h ** 2 + effective_potential(spec, l, dim, mode, r)
    off = np.full(grid.points - 1, -1.0 / h ** 2)
    return tridiagonal_eigenvalues(diag, off, count) / units.radial_scale(spec.molecule.mu)


def fd_spectrum(spec, l, dim=3, mode=Mode.PEKERIS, grid=None, count=4, estimate_error=True):
    """Lowest ``count`` finite-difference energies in eV.

    ``estimated_error`` is twice the largest change between this grid and one
    with half the spacing (about 1.5x the leading-order error of the coarse
    grid for a second-order scheme); 0 when ``estimate_error`` is false.
    """
    if not 1 <= count <= MAX_COUNT:
        raise InvalidInput(f"count must be between 1 and {MAX_COUNT}, got {count!r}")
    mode = Mode(mode)
    grid = grid or GridSpec.default(spec.molecule)
    coarse = _spectrum_on(spec, l, dim, mode, grid, count)
    err = 0.0
    if estimate_error:
        fine = _spectrum_on(spec, l, dim, mode, grid.refined(), count)
        err = 2.0 * float(np.max(np.abs(coarse - fine)))
    return OracleResult(tuple(float(e) for e in coarse), mode, grid, err)


def harmonic_sanity(count=4, half_width=10.0, points=20000):
    """Eigenvalues of ``-F'' + x^2 F`` on [-half_width, half_width]; exact values 1, 3, 5, ..."""
    h = 2.0 * half_width / (points + 1)
    x = -half_width + h * np.arange(1, points + 1)
    diag = 2.0 / h ** 2 + x * x
    off = np.full(points - 1, -1.0 / h ** 2)
    return tridiagonal_eigenvalues(diag, off, count)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    l: int
    dim: int
    e_closed: float
    e_fd_pekeris: float
    e_fd_exact: float
    estimated_error: float

    @property
    def delta_pekeris(self):
        return self.e_fd_pekeris - self.e_closed

    @property
    def delta_exact(self):
        return self.e_fd_exact - self.e_closed


def compare_with_closed_form(spec, l_values, dim=3, n_range=range(4), grid=None):
    """Closed-form energies (delta = 1) beside both finite-difference modes.

    One row per (l, n); states the closed form rejects get NaN energies.
    """
    n_values = list(n_range)
    l_values = [l_values] if isinstance(l_values, int) else list(l_values)
    if not n_values:
        return []
    count = max(n_values) + 1
    cfg = FractionalConfig()
    rows = []
    for l in l_values:
        pek = fd_spectrum(spec, l, dim, Mode.PEKERIS, grid, count)
        exact = fd_spectrum(spec, l, dim, Mode.EXACT_CENTRIFUGAL, grid, count, estimate_error=False)
        for n in n_values:
            try:
                e = energy(spec, QuantumState(n, l, dim), cfg).e_ev
            except NoBoundState:
                e = float("nan")
            rows.append(ComparisonRow(n, l, dim, e, pek.eigenvalues[n], exact.eigenvalues[n], pek.estimated_error))
    return rows
