"""Radial eigenfunctions of the closed-form solution.

In the variable ``u = rho**delta`` the Rodrigues kernel
``rho**(n + a) (1 - u)**(n + beta)`` differentiated ``n`` times equals
``rho**a (1 - u)**beta`` times a degree-``n`` polynomial in ``u``: each
derivative of ``rho**s (1 - u)**t u**m`` is
``rho**(s-1) (1 - u)**(t-1) u**m [(s + delta m) - (s + delta m + delta t) u]``.
So ``V_n`` is a finite sum of monomials ``rho**(delta m)``. Together with
``chi`` this gives ``F = chi * V_n`` and ``phi(r) = r**(-(N-1)/2) F``.

Values are carried in log form because ``chi`` underflows double precision
for heavy molecules (I2 ground state peaks near exp(-600)).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NoBoundState, NumericalError
from .gfd import FractionalConfig
from .nu import QuantumState, energy, epsilon_of_energy, xi_coefficients

DEFAULT_QUADRATURE_POINTS = 4000
_GL_ORDER = 20


def _radicands(spec, state, cfg, e_ev):
    xi = xi_coefficients(spec, state, cfg)
    t3 = xi.xi3 - epsilon_of_energy(e_ev, spec)
    s = xi.s
    if s < 0:
        raise NoBoundState("discriminant", f"xi1 + xi2 + xi3 = {s!r} < 0")
    if t3 < 0:
        # a sub-ulp negative radicand at an exact eigenvalue is rounding, not physics
        if t3 > -1e-12 * max(1.0, abs(xi.xi3)):
            t3 = 0.0
        else:
            raise NoBoundState("quantization root negative", f"xi3 - eps = {t3!r} < 0")
    return math.sqrt(t3), math.sqrt(s)


def chi(spec, state, cfg, e_ev):
    """Exponents ``(on rho, on 1 - rho**delta)`` of the factor chi(rho)."""
    rt3, rs = _radicands(spec, state, cfg, e_ev)
    return (cfg.q * cfg.delta - 1.0) / 2.0 + rt3, 0.5 + cfg.lam / cfg.delta * rs


def weight(spec, state, cfg, e_ev):
    """Weight function ``Lambda rho**p (1 - rho**delta)**q``; returns ``(Lambda, p, q)``."""
    rt3, rs = _radicands(spec, state, cfg, e_ev)
    lam = cfg.lam
    return lam, 2.0 * lam * rt3, 2.0 * lam / cfg.delta * rs


def rodrigues_series(spec, state, cfg, e_ev):
    """Monomials ``(coefficient, power)`` of ``V_n(rho)`` with ``G_n = 1``.

    The ``n`` derivatives are carried out exactly on the polynomial factor,
    so the result has ``n + 1`` terms with powers ``0, delta, ..., n delta``.
    """
    _, a, beta = weight(spec, state, cfg, e_ev)
    n, d = state.n, cfg.delta
    s, t = n + a, n + beta
    poly = [1.0]
    for _ in range(n):
        nxt = [0.0] * (len(poly) + 1)
        for m, c in enumerate(poly):
            sm = s + d * m
            nxt[m] += c * sm
            nxt[m + 1] -= c * (sm + d * t)
        poly = nxt
        s -= 1.0
        t -= 1.0
    scale = cfg.q ** n
    return tuple((scale * c, d * m) for m, c in enumerate(poly))


@dataclass(frozen=True)
class RadialWavefunction:
    """Radial eigenfunction ``phi(r)``; build with :func:`build_wavefunction`.

    ``log_norm`` is ``log(g_n)``; it is kept as a logarithm because ``g_n``
    itself can overflow.
    """

    spec: object
    state: QuantumState
    cfg: FractionalConfig
    e_ev: float
    exp_rho: float
    exp_one_minus: float
    series: tuple
    log_norm: float = 0.0

    @property
    def g_n(self):
        return math.exp(self.log_norm)

    @property
    def experimental(self):
        """Fractional-order eigenfunctions are not checked against an independent solver."""
        return not self.cfg.is_classical

    def rho(self, r):
        return np.exp(-self.spec.molecule.alpha * np.asarray(r, dtype=float))

    def _sign_log_f(self, r):
        """sign(F) and log|F| at radii ``r``."""
        r = np.asarray(r, dtype=float)
        alpha, d = self.spec.molecule.alpha, self.cfg.delta
        log_rho = -alpha * r
        u = np.exp(d * log_rho)
        with np.errstate(divide="ignore"):
            log_chi = self.exp_rho * log_rho + self.exp_one_minus * np.log(-np.expm1(d * log_rho))
        poly = np.zeros_like(r)
        for coeff, power in reversed(self.series):
            poly = poly * u + coeff
        with np.errstate(divide="ignore"):
            log_abs = log_chi + np.log(np.abs(poly)) + self.log_norm
        return np.sign(poly), log_abs

    def radial_f(self, r):
        """F(r) = g_n chi(rho) V_n(rho)."""
        sign, log_abs = self._sign_log_f(r)
        return sign * np.exp(log_abs)

    def __call__(self, r):
        return evaluate(self, r)


def build_wavefunction(spec, state, cfg=None, e_ev=None, normalized=True,
                       quadrature_points=DEFAULT_QUADRATURE_POINTS):
    """Eigenfunction for ``state``; the energy defaults to the closed-form value."""
    cfg = cfg or FractionalConfig()
    if e_ev is None:
        e_ev = energy(spec, state, cfg).e_ev
    exp_rho, exp_one_minus = chi(spec, state, cfg, e_ev)
    wf = RadialWavefunction(
        spec=spec,
        state=state,
        cfg=cfg,
        e_ev=e_ev,
        exp_rho=exp_rho,
        exp_one_minus=exp_one_minus,
        series=rodrigues_series(spec, state, cfg, e_ev),
    )
    return normalize(wf, quadrature_points) if normalized else wf


def evaluate(wf, r):
    """phi(r) = r**(-(N-1)/2) F(r); scalar in, scalar out."""
    r_arr = np.asarray(r, dtype=float)
    sign, log_abs = wf._sign_log_f(r_arr)
    log_abs = log_abs - 0.5 * (wf.state.dim - 1) * np.log(r_arr)
    out = sign * np.exp(log_abs)
    return float(out) if out.ndim == 0 else out


def quadrature_rule(r_cut, points):
    """Composite Gauss-Legendre nodes and weights on (0, r_cut]."""
    panels = max(1, int(round(points / _GL_ORDER)))
    x, w = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = np.linspace(0.0, r_cut, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def cutoff_radius(spec):
    mol = spec.molecule
    return mol.r_e + 40.0 / mol.alpha


def _scaled_norm_integral(wf, quadrature_points):
    nodes, weights = quadrature_rule(cutoff_radius(wf.spec), quadrature_points)
    _, log_abs = wf._sign_log_f(nodes)
    peak = np.max(log_abs)
    if not np.isfinite(peak):
        raise NumericalError("wavefunction vanishes on every quadrature node")
    total = np.sum(weights * np.exp(2.0 * (log_abs - peak)))
    return total, 2.0 * peak


def norm_integral(wf, quadrature_points=DEFAULT_QUADRATURE_POINTS):
    """Integral of phi**2 r**(N-1) dr = integral of F**2 dr over (0, r_cut]."""
    total, log_scale = _scaled_norm_integral(wf, quadrature_points)
    return total * math.exp(log_scale)


def normalize(wf, quadrature_points=DEFAULT_QUADRATURE_POINTS):
    """Return a copy of ``wf`` with g_n chosen so the norm integral is 1."""
    total, log_scale = _scaled_norm_integral(wf, quadrature_points)
    if not (np.isfinite(total) and total > 0):
        raise NumericalError(f"normalization integral is {total!r}")
    log_integral = math.log(total) + log_scale
    return replace(wf, log_norm=wf.log_norm - 0.5 * log_integral)


def find_nodes(wf, r_lo, r_hi, samples=4000, tol=1e-12):
    """Radii of the sign changes of phi on [r_lo, r_hi], refined by bisection."""
    if not r_lo < r_hi:
        raise ValueError("need r_lo < r_hi")
    grid = np.linspace(r_lo, r_hi, samples)
    sign, log_abs = wf._sign_log_f(grid)
    nodes = []
    prev_i = None
    for i in range(len(grid)):
        if sign[i] == 0 or not np.isfinite(log_abs[i]):
            continue
        if prev_i is not None and sign[i] != sign[prev_i]:
            root = _bisect_sign(wf, grid[prev_i], grid[i], sign[prev_i], tol)
            if root is not None:
                nodes.append(root)
        prev_i = i
    return nodes


def _bisect_sign(wf, lo, hi, sign_lo, tol):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        s = wf._sign_log_f(np.array([mid]))[0][0]
        if s == 0:
            return mid
        if s == sign_lo:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    # confirm the bracket still straddles a sign change
    s_lo = wf._sign_log_f(np.array([lo]))[0][0]
    s_hi = wf._sign_log_f(np.array([hi]))[0][0]
    return 0.5 * (lo + hi) if s_lo * s_hi < 0 or s_lo == 0 or s_hi == 0 else None


def count_nodes(wf, r_lo, r_hi, samples=4000):
    return len(find_nodes(wf, r_lo, r_hi, samples))
