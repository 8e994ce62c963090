"""Closed-form bound states of the (shifted) Deng-Fan potential.

The radial equation is mapped to ``rho = exp(-alpha r)`` with the
centrifugal term replaced by the Pekeris-type expression
``alpha**2 [c0 + rho/(1-rho) + rho**2/(1-rho)**2]`` (``c0 = 1/12``). The
generalized fractional Nikiforov-Uvarov construction then yields the
energies in closed form. Everything here works in dimensionless energy
``eps = kappa * E`` internally and reports eV.
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import units
from .errors import InvalidInput, NoBoundState
from .gfd import FractionalConfig
from .molecules import MoleculeParams

C0 = float(Fraction(1, 12))


class Variant(enum.Enum):
    DENG_FAN = "df"
    SHIFTED_DENG_FAN = "sdf"
    GENERAL = "general"


@dataclass(frozen=True)
class PotentialSpec:
    """A Deng-Fan family potential ``V(r) = D_e (1 - b e^{-ar}/(1 - e^{-ar}))**2 + v0``.

    Use the :meth:`deng_fan`, :meth:`shifted` and :meth:`general`
    constructors; they enforce the variant's ``v0``.
    """

    molecule: MoleculeParams
    v0: float
    variant: Variant

    def __post_init__(self):
        if not math.isfinite(self.v0):
            raise InvalidInput(f"v0 must be finite, got {self.v0!r}")
        if self.variant is Variant.DENG_FAN and self.v0 != 0.0:
            raise InvalidInput("Deng-Fan variant requires v0 = 0")
        if self.variant is Variant.SHIFTED_DENG_FAN and self.v0 != -self.d_e_ev:
            raise InvalidInput("shifted variant requires v0 = -D_e")

    @classmethod
    def deng_fan(cls, molecule):
        return cls(molecule, 0.0, Variant.DENG_FAN)

    @classmethod
    def shifted(cls, molecule):
        return cls(molecule, -units.cm_inv_to_ev(molecule.d_e), Variant.SHIFTED_DENG_FAN)

    @classmethod
    def general(cls, molecule, v0):
        return cls(molecule, float(v0), Variant.GENERAL)

    @classmethod
    def from_variant(cls, molecule, variant, v0=None):
        variant = Variant(variant)
        if variant is Variant.DENG_FAN:
            return cls.deng_fan(molecule)
        if variant is Variant.SHIFTED_DENG_FAN:
            return cls.shifted(molecule)
        if v0 is None:
            raise InvalidInput("general variant needs an explicit v0")
        return cls.general(molecule, v0)

    @property
    def d_e_ev(self):
        return units.cm_inv_to_ev(self.molecule.d_e)

    @property
    def b(self):
        return math.expm1(self.molecule.alpha * self.molecule.r_e)

    @property
    def kappa(self):
        """Converts eV to the dimensionless energy scale of the closed form."""
        return units.kappa(self.molecule.mu, self.molecule.alpha)


@dataclass(frozen=True)
class QuantumState:
    n: int
    l: int
    dim: int = 3

    def __post_init__(self):
        for name, lo in (("n", 0), ("l", 0), ("dim", 2)):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < lo:
                raise InvalidInput(f"{name} must be an integer >= {lo}, got {value!r}")

    @property
    def eta(self):
        return self.l + (self.dim - 2) / 2.0

    @property
    def centrifugal(self):
        """eta**2 - 1/4; equals l(l+1) in three dimensions."""
        if self.dim == 3:
            return float(self.l * (self.l + 1))
        eta = self.eta
        return eta * eta - 0.25


@dataclass(frozen=True)
class XiCoefficients:
    xi1: float
    xi2: float
    xi3: float

    @property
    def s(self):
        return self.xi1 + self.xi2 + self.xi3


@dataclass(frozen=True)
class EnergyResult:
    e_ev: float
    epsilon: float
    sqrt_s: float
    root: float
    numerator: float
    denominator: float
    xi: XiCoefficients


@dataclass(frozen=True)
class NuIntermediates:
    """Coefficients of the Nikiforov-Uvarov construction at a trial energy.

    Functions of rho are stored as coefficient pairs: ``pi_minus`` and
    ``tau_gf`` are ``(constant, coefficient of rho**delta)``; ``k_minus``,
    ``lambda_const`` and ``lambda_n_const`` multiply ``rho**(delta - 1)``.
    """

    a_coef: float
    b_coef: float
    c_coef: float
    t1: float
    t2: float
    t3: float
    k_minus: float
    pi_minus: tuple
    tau_gf: tuple
    lambda_const: float
    lambda_n_const: float


def potential_eval(spec, r):
    """Potential energy in eV at separation ``r`` (Angstrom); scalar or array."""
    r_arr = np.asarray(r, dtype=float)
    if not np.all(r_arr > 0):
        raise InvalidInput(f"r must be positive, got {r!r}")
    # b e^{-x} / (1 - e^{-x}) == b / expm1(x)
    frac = spec.b / np.expm1(spec.molecule.alpha * r_arr)
    v = spec.d_e_ev * (1.0 - frac) ** 2 + spec.v0
    return float(v) if v.ndim == 0 else v


def pekeris_inverse_r2(r, alpha):
    """Exponential stand-in for ``1/r**2``; scalar or array.

    ``alpha**2 [c0 + rho/(1-rho) + rho**2/(1-rho)**2]`` with ``rho = exp(-alpha r)``.
    It equals ``1/r**2 + O(alpha**2)`` for small ``alpha r`` and tends to
    ``alpha**2 c0`` at large ``r``; near a typical equilibrium distance
    (``alpha r_e`` of 2 to 5) it is off by tens of percent.
    """
    r_arr = np.asarray(r, dtype=float)
    u = 1.0 / np.expm1(alpha * r_arr)  # rho / (1 - rho)
    out = alpha * alpha * (C0 + u + u * u)
    return float(out) if out.ndim == 0 else out


def _shift_terms(spec):
    """kappa-scaled potential parts entering the xi coefficients."""
    k = spec.kappa
    de = spec.d_e_ev
    bp1 = spec.b + 1.0
    return k, k * (spec.v0 + de * bp1 * bp1), k * (spec.v0 + de * bp1), k * (de + spec.v0)


def _xi_parts(spec, g, qd):
    """xi1, xi2, xi3 for centrifugal factor ``g`` and ``qd = Q delta``; array friendly."""
    _, p1, p2, p3 = _shift_terms(spec)
    xi1 = (1.0 - 2.0 * qd) ** 2 / 4.0 + C0 * g + p1
    xi2 = (qd - 1.0) * (1.0 - 2.0 * qd) / 2.0 - (2.0 * C0 - 1.0) * g - 2.0 * p2
    xi3 = (qd - 1.0) ** 2 / 4.0 + C0 * g + p3
    return xi1, xi2, xi3


def xi_coefficients(spec, state, cfg):
    return XiCoefficients(*_xi_parts(spec, state.centrifugal, cfg.q * cfg.delta))


def _quantization(xi1, xi2, xi3, sqrt_s, n, d, q):
    """Numerator and denominator of the quantization root sqrt(xi3 - eps)."""
    lam = 1.0 / q
    # The Lambda(xi2 + 2 xi3) term sits outside the delta factor; this follows
    # from solving lambda = lambda_n for sqrt(T3) (checked by nu_residual).
    numerator = (
        d * (0.5 * (1.0 - 2.0 * q * d - q * n * (n + 1) * (d + 1.0)) - (2 * n + 1) * sqrt_s)
        - lam * (xi2 + 2.0 * xi3)
    )
    denominator = d * (2 * n + 1) + 2.0 * lam * sqrt_s
    return numerator, denominator


def _discriminant(xi):
    s = xi.s
    if s < 0:
        raise NoBoundState("discriminant", f"xi1 + xi2 + xi3 = {s!r} < 0")
    return math.sqrt(s)


def energy(spec, state, cfg=None):
    """Bound-state energy of ``state`` in eV.

    Raises
    ------
    NoBoundState
        If the discriminant ``xi1 + xi2 + xi3`` is negative, or the
        quantization root is negative.
    """
    cfg = cfg or FractionalConfig()
    xi = xi_coefficients(spec, state, cfg)
    sqrt_s = _discriminant(xi)
    n = state.n
    numerator, denominator = _quantization(xi.xi1, xi.xi2, xi.xi3, sqrt_s, n, cfg.delta, cfg.q)
    root = numerator / denominator
    if root < 0:
        raise NoBoundState("quantization root negative", f"n={n}, l={state.l}, N={state.dim}")
    eps = xi.xi3 - root * root
    return EnergyResult(
        e_ev=eps / spec.kappa,
        epsilon=eps,
        sqrt_s=sqrt_s,
        root=root,
        numerator=numerator,
        denominator=denominator,
        xi=xi,
    )


def energy_on_q_grid(spec, state, delta, q_values):
    """Energies (eV) for an array of Q values at fixed delta; NaN where unbound.

    Vectorized form of :func:`energy` used by the gamma calibration scan.
    """
    q = np.asarray(q_values, dtype=float)
    xi1, xi2, xi3 = _xi_parts(spec, state.centrifugal, q * delta)
    s = xi1 + xi2 + xi3
    with np.errstate(invalid="ignore"):
        sqrt_s = np.sqrt(s)
        numerator, denominator = _quantization(xi1, xi2, xi3, sqrt_s, state.n, delta, q)
        root = numerator / denominator
        eps = xi3 - root * root
    return np.where((s >= 0) & (root >= 0), eps / spec.kappa, np.nan)


def epsilon_of_energy(e_ev, spec):
    return e_ev * spec.kappa


def energy_of_epsilon(eps, spec):
    return eps / spec.kappa


def nu_intermediates(spec, state, cfg, e_ev):
    """Build the NU coefficient records for a trial energy ``e_ev``.

    Raises
    ------
    NoBoundState
        If ``T3`` or ``T1 + T2 + T3`` is negative.
    """
    eps = epsilon_of_energy(e_ev, spec)
    d, q, lam, n = cfg.delta, cfg.q, cfg.lam, state.n
    qd = q * d
    g = state.centrifugal
    k, p1, p2, p3 = _shift_terms(spec)
    a_coef = C0 * g + p1 - eps
    b_coef = (2.0 * C0 - 1.0) * g + 2.0 * p2 - 2.0 * eps
    c_coef = C0 * g + p3 - eps
    t1 = (1.0 - 2.0 * qd) ** 2 / 4.0 + a_coef
    t2 = (qd - 1.0) * (1.0 - 2.0 * qd) / 2.0 - b_coef
    t3 = (qd - 1.0) ** 2 / 4.0 + c_coef
    s = t1 + t2 + t3
    if t3 < 0:
        raise NoBoundState("quantization root negative", f"T3 = {t3!r} < 0")
    if s < 0:
        raise NoBoundState("discriminant", f"T1 + T2 + T3 = {s!r} < 0")
    rt3, rs = math.sqrt(t3), math.sqrt(s)
    k_minus = -lam * (t2 + 2.0 * t3 + 2.0 * rt3 * rs)
    pi_minus = ((qd - 1.0) / 2.0 + rt3, (1.0 - 2.0 * qd) / 2.0 - (rt3 + rs))
    tau_gf = (2.0 * rt3 + q, -(q * (d + 1.0) + 2.0 * (rt3 + rs)))
    # lambda = k_- + d(pi_-)/d rho; the derivative of the rho**delta term brings delta
    lambda_const = k_minus + d * pi_minus[1]
    lambda_n_const = n * d * (q * (n + 1) * (d + 1.0) / 2.0 + 2.0 * (rt3 + rs))
    return NuIntermediates(
        a_coef=a_coef,
        b_coef=b_coef,
        c_coef=c_coef,
        t1=t1,
        t2=t2,
        t3=t3,
        k_minus=k_minus,
        pi_minus=pi_minus,
        tau_gf=tau_gf,
        lambda_const=lambda_const,
        lambda_n_const=lambda_n_const,
    )


def nu_residual(spec, state, cfg, e_ev):
    """lambda - lambda_n (coefficients of rho**(delta-1)); zero at an eigenvalue."""
    nu = nu_intermediates(spec, state, cfg, e_ev)
    return nu.lambda_const - nu.lambda_n_const


def residual_scale(nu, cfg):
    """Sum of the magnitudes of the terms balanced in ``lambda = lambda_n``.

    At ``n = 0`` ``lambda_n`` vanishes while the terms forming ``lambda`` can be
    of order 1e6 for heavy molecules, so this is the natural denominator for a
    relative residual.
    """
    rt3 = math.sqrt(nu.t3)
    rs = math.sqrt(nu.t1 + nu.t2 + nu.t3)
    k_terms = cfg.lam * (abs(nu.t2) + 2.0 * abs(nu.t3) + 2.0 * rt3 * rs)
    return max(1.0, abs(nu.lambda_n_const), k_terms + cfg.delta * abs(nu.pi_minus[1]))


def relative_nu_residual(spec, state, cfg, e_ev):
    """nu_residual divided by :func:`residual_scale`."""
    nu = nu_intermediates(spec, state, cfg, e_ev)
    return (nu.lambda_const - nu.lambda_n_const) / residual_scale(nu, cfg)


def n_max(spec, l, dim, cfg=None, limit=100000):
    """Largest vibrational quantum number with a bound state.

    Raises
    ------
    NoBoundState
        If even ``n = 0`` is unbound.
    """
    cfg = cfg or FractionalConfig()
    energy(spec, QuantumState(0, l, dim), cfg)
    # the quantization root decreases monotonically in n, so scan until it fails
    n = 0
    while n < limit:
        try:
            energy(spec, QuantumState(n + 1, l, dim), cfg)
        except NoBoundState:
            return n
        n += 1
    raise InvalidInput(f"no upper bound on n found below {limit}")
