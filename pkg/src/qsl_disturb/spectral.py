"""Decoherence functions of a dephasing qubit for Ohmic and Lorentzian baths.

Times are elapsed times measured from the start of the system-bath
interaction, with hbar = 1.  For a zero-temperature bosonic bath with spectral
density J(w) the two building blocks are

    G_R(t) = int dw J(w) (1 - cos wt) / w**2
    psi(t) = int dw J(w) sin(wt) / w**2

``G_R`` damps the coherence, while ``psi`` enters the cross term generated by
an auxiliary qubit that disturbed the bath beforehand.  Closed forms are
provided for both bath families and :func:`oracle_quadrature` evaluates the
defining integrals numerically so that the closed forms can be checked.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
from scipy import integrate, special

ArrayLike = Union[float, np.ndarray]

#: s values closer than this to 1 use the logarithmic Ohmic branch.
S_ONE_TOL = 1e-12

QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-9
QUAD_LIMIT = 500


class QuadratureError(RuntimeError):
    """The numerical oracle failed to converge (distinct from a mismatch)."""


def _check_times(t: ArrayLike) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(~np.isfinite(arr)):
        raise ValueError(f"elapsed time must be finite and >= 0, got {t!r}")
    return arr


def _out(arr: np.ndarray, like: ArrayLike) -> ArrayLike:
    return np.asarray(arr).item() if np.ndim(like) == 0 else arr


@dataclass(frozen=True)
class Ohmic:
    """Ohmic-family spectral density ``J(w) = eta w**s / wc**(s-1) exp(-w/wc)``.

    Args:
        eta: dimensionless coupling, >= 0.
        s: Ohmicity; s < 1 sub-Ohmic, s = 1 Ohmic, s > 1 super-Ohmic.
        omega_c: cutoff angular frequency.
    """

    eta: float
    s: float = 1.0
    omega_c: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.eta) and self.eta >= 0):
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if not (np.isfinite(self.s) and self.s > 0):
            raise ValueError(f"s must be > 0, got {self.s}")
        if not (np.isfinite(self.omega_c) and self.omega_c > 0):
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")

    @property
    def is_log_branch(self) -> bool:
        return abs(self.s - 1.0) < S_ONE_TOL

    def spectral_density(self, omega: ArrayLike) -> ArrayLike:
        w = np.asarray(omega, dtype=float)
        wp = np.where(w > 0, w, 0.0)
        j = self.eta * wp**self.s / self.omega_c ** (self.s - 1) * np.exp(-wp / self.omega_c)
        return _out(np.where(w > 0, j, 0.0), omega)

    def g_real(self, t: ArrayLike) -> ArrayLike:
        x = self.omega_c * _check_times(t)
        if self.is_log_branch:
            g = 0.5 * self.eta * np.log1p(x * x)
        else:
            a = self.s - 1.0
            g = self.eta * special.gamma(a) * (
                1.0 - np.cos(a * np.arctan(x)) / (1.0 + x * x) ** (a / 2)
            )
        return _out(g, t)

    def psi(self, t: ArrayLike) -> ArrayLike:
        x = self.omega_c * _check_times(t)
        if self.is_log_branch:
            p = self.eta * np.arctan(x)
        else:
            a = self.s - 1.0
            p = self.eta * special.gamma(a) * np.sin(a * np.arctan(x)) / (1.0 + x * x) ** (a / 2)
        return _out(p, t)

    # d/dt of the above: int J sin(wt)/w and int J cos(wt)/w.  One formula
    # covers s = 1 too since Gamma(1) = 1.
    def g_real_rate(self, t: ArrayLike) -> ArrayLike:
        x = self.omega_c * _check_times(t)
        s = self.s
        r = self.eta * self.omega_c * special.gamma(s) * np.sin(s * np.arctan(x)) / (1.0 + x * x) ** (s / 2)
        return _out(r, t)

    def psi_rate(self, t: ArrayLike) -> ArrayLike:
        x = self.omega_c * _check_times(t)
        s = self.s
        r = self.eta * self.omega_c * special.gamma(s) * np.cos(s * np.arctan(x)) / (1.0 + x * x) ** (s / 2)
        return _out(r, t)


@dataclass(frozen=True)
class Lorentzian:
    """Lorentzian spectral density ``J(w) = gamma/(2 pi) lam**2 / ((w - delta)**2 + lam**2)``.

    The closed forms below are the full-line (-inf, inf) integrals, obtained by
    closing the contour in the upper half plane.  Both oscillating terms carry
    the damping factor ``exp(-lam t)``.

    ``backend="quadrature"`` evaluates ``g_real``/``psi`` with
    :func:`oracle_quadrature` instead (slow; meant for cross-checks).
    """

    gamma: float
    lam: float = 1.0
    delta: float = 0.0
    backend: Literal["closed", "quadrature"] = "closed"

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be > 0, got {self.lam}")
        if not (np.isfinite(self.delta) and self.delta >= 0):
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.backend not in ("closed", "quadrature"):
            raise ValueError(f"unknown Lorentzian backend {self.backend!r}")

    def spectral_density(self, omega: ArrayLike) -> ArrayLike:
        w = np.asarray(omega, dtype=float)
        j = self.gamma / (2 * np.pi) * self.lam**2 / ((w - self.delta) ** 2 + self.lam**2)
        return _out(j, omega)

    def _coeffs(self):
        r = self.delta / self.lam
        pre = self.gamma / (2 * self.lam) / (1 + r * r)
        a = (1 - r * r) / (1 + r * r)
        b = 2 * r / (1 + r * r)
        return pre, a, b

    def _quad(self, kernel: str, t: np.ndarray) -> np.ndarray:
        flat = [oracle_quadrature(self, kernel, float(ti), domain="full") for ti in t.ravel()]
        return np.asarray(flat).reshape(t.shape)

    def g_real(self, t: ArrayLike) -> ArrayLike:
        tt = _check_times(t)
        if self.backend == "quadrature":
            return _out(self._quad("gr_kernel", tt), t)
        pre, a, b = self._coeffs()
        lam, dlt = self.lam, self.delta
        damp = np.exp(-lam * tt)
        g = pre * (lam * tt - a * (1 - damp * np.cos(dlt * tt)) - b * damp * np.sin(dlt * tt))
        return _out(g, t)

    def psi(self, t: ArrayLike) -> ArrayLike:
        tt = _check_times(t)
        if self.backend == "quadrature":
            return _out(self._quad("psi_kernel", tt), t)
        pre, a, b = self._coeffs()
        damp = np.exp(-self.lam * tt)
        p = pre * (b * (1 - damp * np.cos(self.delta * tt)) - a * damp * np.sin(self.delta * tt))
        return _out(p, t)

    def g_real_rate(self, t: ArrayLike) -> ArrayLike:
        tt = _check_times(t)
        pre, _, _ = self._coeffs()
        lam, dlt = self.lam, self.delta
        r = pre * (lam + np.exp(-lam * tt) * (dlt * np.sin(dlt * tt) - lam * np.cos(dlt * tt)))
        return _out(r, t)

    def psi_rate(self, t: ArrayLike) -> ArrayLike:
        tt = _check_times(t)
        pre, _, _ = self._coeffs()
        lam, dlt = self.lam, self.delta
        r = pre * np.exp(-lam * tt) * (dlt * np.cos(dlt * tt) + lam * np.sin(dlt * tt))
        return _out(r, t)

    def printed_forms(self, t: ArrayLike) -> tuple[ArrayLike, ArrayLike]:
        """G_R and psi exactly as commonly printed, with only the exponent sign flipped.

        Kept for auditing: here the ``sin(delta t)`` term of G_R is undamped
        and psi has the opposite sign plus a constant offset.  Not used by
        the dynamics.
        """
        tt = _check_times(t)
        pre, a, b = self._coeffs()
        lam, dlt = self.lam, self.delta
        damp = np.exp(-lam * tt)
        g = pre * (lam * tt - a * (1 - damp * np.cos(dlt * tt)) - b * np.sin(dlt * tt))
        p = pre * damp * (a * np.sin(dlt * tt) + b * np.cos(dlt * tt))
        return _out(g, t), _out(p, t)


SpectralDensity = Union[Ohmic, Lorentzian]


@dataclass(frozen=True)
class DisturbanceConfig:
    """Auxiliary qubit A that interacted with the bath for ``t_a`` just before S.

    ``sz_a`` is <sigma_z> of A's initial state.  The disturbance is strongest
    at ``sz_a = 0`` and has no effect on |f| at ``sz_a = +-1``.
    """

    enabled: bool = False
    t_a: float = 0.0
    sz_a: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.t_a) and self.t_a >= 0):
            raise ValueError(f"t_a must be >= 0, got {self.t_a}")
        if not (np.isfinite(self.sz_a) and abs(self.sz_a) <= 1):
            raise ValueError(f"sz_a must lie in [-1, 1], got {self.sz_a}")

    @property
    def active(self) -> bool:
        return self.enabled and self.t_a > 0


def g_real(bath: SpectralDensity, t: ArrayLike) -> ArrayLike:
    """Real decoherence function G_R(t); G_R(0) = 0."""
    return bath.g_real(t)


def psi(bath: SpectralDensity, t: ArrayLike) -> ArrayLike:
    """Sine transform int J(w) sin(wt)/w**2 dw; psi(0) = 0."""
    return bath.psi(t)


def g_imag_cross(bath: SpectralDensity, dist: DisturbanceConfig, t: ArrayLike) -> ArrayLike:
    """Cross term ``psi(t + T_A) - psi(t) - psi(T_A)`` left in the bath by qubit A.

    Identically zero when the disturbance is disabled or ``T_A = 0``.
    """
    tt = _check_times(t)
    if not dist.active:
        return _out(np.zeros_like(tt), t)
    ta = dist.t_a
    gi = np.asarray(bath.psi(tt + ta)) - np.asarray(bath.psi(tt)) - bath.psi(ta)
    return _out(gi, t)


def g_imag_cross_rate(bath: SpectralDensity, dist: DisturbanceConfig, t: ArrayLike) -> ArrayLike:
    tt = _check_times(t)
    if not dist.active:
        return _out(np.zeros_like(tt), t)
    if isinstance(bath, Lorentzian) and bath.backend == "quadrature":
        return _out(_central_diff(lambda u: g_imag_cross(bath, dist, u), tt), t)
    rate = np.asarray(bath.psi_rate(tt + dist.t_a)) - np.asarray(bath.psi_rate(tt))
    return _out(rate, t)


def g_real_rate(bath: SpectralDensity, t: ArrayLike) -> ArrayLike:
    """Decoherence rate dG_R/dt."""
    tt = _check_times(t)
    if isinstance(bath, Lorentzian) and bath.backend == "quadrature":
        return _out(_central_diff(bath.g_real, tt), t)
    return bath.g_real_rate(t)


def _central_diff(fun, t: np.ndarray, rel_step: float = 1e-5) -> np.ndarray:
    h = rel_step * np.maximum(1.0, t)
    lo = np.maximum(t - h, 0.0)
    hi = t + h
    return (np.asarray(fun(hi)) - np.asarray(fun(lo))) / (hi - lo)


Kernel = Literal["gr_kernel", "psi_kernel"]


def oracle_quadrature(
    bath: SpectralDensity,
    kernel: Kernel,
    t: float,
    *,
    domain: Literal["half", "full"] | None = None,
    epsabs: float = QUAD_EPSABS,
    epsrel: float = QUAD_EPSREL,
    limit: int = QUAD_LIMIT,
) -> float:
    """Evaluate the defining spectral integral of G_R or psi by adaptive quadrature.

    ``domain="half"`` integrates w over [0, inf), ``"full"`` over (-inf, inf);
    the default is ``"half"`` for Ohmic and ``"full"`` for Lorentzian baths.
    The full-line psi integral is a principal value, handled by folding
    negative frequencies onto the positive axis.

    The frequency axis is split at ``a``: below it the full integrand is
    integrated directly, above it the oscillating factor is handled by QUADPACK's
    Fourier-weighted routine on the semi-infinite interval.

    Raises:
        QuadratureError: if the integral diverges or QUADPACK reports
            non-convergence within ``limit`` subdivisions.
    """
    if kernel not in ("gr_kernel", "psi_kernel"):
        raise ValueError(f"unknown kernel {kernel!r}")
    t = float(t)
    if t < 0 or not np.isfinite(t):
        raise ValueError(f"elapsed time must be finite and >= 0, got {t}")
    if domain is None:
        domain = "half" if isinstance(bath, Ohmic) else "full"
    if domain not in ("half", "full"):
        raise ValueError(f"unknown domain {domain!r}")

    jd = bath.spectral_density
    if domain == "full":
        if kernel == "gr_kernel":
            def jfold(w):
                return jd(w) + jd(-w)
        else:
            def jfold(w):
                return jd(w) - jd(-w)
    else:
        jfold = jd
        if kernel == "psi_kernel" and jd(0.0) > 0 and t > 0:
            raise QuadratureError("psi integral over [0, inf) diverges since J(0) > 0")

    if t == 0.0:
        return 0.0

    a = 0.5 / t
    if isinstance(bath, Ohmic):
        a = min(a, 0.5 * bath.omega_c)

    opts = dict(epsabs=epsabs, epsrel=epsrel, limit=limit)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if kernel == "gr_kernel":
                low = integrate.quad(lambda w: jfold(w) * (1 - np.cos(w * t)) / (w * w), 0.0, a, **opts)[0]
                plain = integrate.quad(lambda w: jfold(w) / (w * w), a, np.inf, **opts)[0]
                osc = integrate.quad(
                    lambda w: jfold(w) / (w * w), a, np.inf, weight="cos", wvar=t,
                    epsabs=epsabs, limlst=100, limit=limit,
                )[0]
                return low + plain - osc
            low = integrate.quad(lambda w: jfold(w) * np.sin(w * t) / (w * w), 0.0, a, **opts)[0]
            osc = integrate.quad(
                lambda w: jfold(w) / (w * w), a, np.inf, weight="sin", wvar=t,
                epsabs=epsabs, limlst=100, limit=limit,
            )[0]
            return low + osc
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature failed for {kernel} at t={t}: {exc}") from exc
