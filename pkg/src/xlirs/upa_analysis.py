"""Integral-form SNR, disk bounds, boresight closed forms and asymptotes (planar panel).

The summation over elements is replaced by an integral over the panel
rectangle.  Because the integrand is positive, integrating over the inscribed
and circumscribed disks instead gives a lower and an upper bound.  Near
boresight the disk integrals collapse to a one-dimensional integral ``G`` that
has closed forms for q' = 1/2 (incomplete elliptic integral) and q' = 1
(logarithm).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import numerics
from .channel import Scenario, _prefactor
from .geometry import BORESIGHT_MARGIN, boresight_margin, distance_ratio
from .numerics import incomplete_elliptic_F

__all__ = [
    "SnrBounds",
    "SnrReport",
    "RHO_ONE_THRESHOLD",
    "link_kernel",
    "integral_snr",
    "bound_function_f",
    "boresight_G",
    "closed_G_half",
    "closed_G_one",
    "rho_one_half_snr",
    "boresight_bound",
    "snr_bounds",
    "asymptotic_snr",
    "to_db",
]

# |1 - rho| below this uses the rho = 1 formulas
RHO_ONE_THRESHOLD = 1e-6


def to_db(x: Optional[float]) -> Optional[float]:
    """Power dB; negative inputs (a signed array factor) give nan, zero gives -inf."""
    if x is None:
        return None
    if x == math.inf:
        return math.inf
    if x < 0 or math.isnan(x):
        return math.nan
    if x == 0:
        return -math.inf
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class SnrBounds:
    lower: float
    upper: float
    regime: str  # "generic" or "boresight-closed-form"

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower!r} exceeds upper bound {self.upper!r}")

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower * (1 - slack) <= value <= self.upper * (1 + slack)


@dataclass(frozen=True)
class SnrReport:
    """Linear SNR values for one scenario; ``None`` marks a missing entry."""

    exact: Optional[float] = None
    integral: Optional[float] = None
    lower: Optional[float] = None
    upper: Optional[float] = None
    asymptote: Optional[float] = None
    upw: Optional[float] = None
    errors: dict = field(default_factory=dict)

    FIELDS = ("exact", "integral", "lower", "upper", "asymptote", "upw")

    def db(self, name: str) -> Optional[float]:
        return to_db(getattr(self, name))

    @property
    def asymptote_unbounded(self) -> bool:
        return self.asymptote == math.inf

    def as_dict(self) -> dict:
        out = {}
        for name in self.FIELDS:
            value = getattr(self, name)
            if name == "asymptote" and self.asymptote_unbounded:
                out[name] = {"linear": "unbounded", "db": "unbounded"}
            else:
                out[name] = {"linear": value, "db": self.db(name)}
        if self.errors:
            out["errors"] = dict(self.errors)
        return out


def link_kernel(y, z, r, phi, theta, expo):
    """[1 - 2 y Phi / r - 2 z Theta / r + (y^2 + z^2) / r^2] ** (-expo)."""
    return _normalized(y, z, r, phi, theta) ** (-expo)


def _normalized(y, z, r, phi, theta):
    return 1.0 - 2.0 * y * phi / r - 2.0 * z * theta / r + (y * y + z * z) / (r * r)


def _pair_kernel(scn: Scenario):
    q, p = scn.bs, scn.user
    expo = 0.5 * (scn.pattern.q + 1.0)

    def f(y, z):
        return (_normalized(y, z, q.range, q.phi, q.theta)
                * _normalized(y, z, p.range, p.phi, p.theta)) ** (-expo)
    return f


def integral_snr(scn: Scenario, tol: float = numerics.DEFAULT_TOL) -> float:
    """SNR with the element sum replaced by an integral over the panel."""
    panel = scn.panel
    hy, hz = 0.5 * panel.length_y, 0.5 * panel.length_z
    res = numerics.integrate_2d_rect(_pair_kernel(scn), (-hy, hy), (-hz, hz), tol)
    return _prefactor(scn) / panel.spacing ** 4 * res.value ** 2


def bound_function_f(scn: Scenario, radius: float, tol: float = numerics.DEFAULT_TOL) -> float:
    """Integral SNR over a centered disk of the given radius."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    kern = _pair_kernel(scn)

    def f(r, zeta):
        return r * kern(r * np.cos(zeta), r * np.sin(zeta))

    res = numerics.polar_disk_integrate(f, radius, tol)
    return _prefactor(scn) / scn.panel.spacing ** 4 * res.value ** 2


def boresight_G(rho: float, r_near: float, radius: float, q: float,
                tol: float = numerics.DEFAULT_TOL) -> float:
    """Boresight disk factor by quadrature.

    Evaluated in the variable u = cos(alpha), which turns the integrand into
    u**(2q - 1) / (rho^2 + (1 - rho^2) u^2)**((q + 1) / 2) on [cos A, 1]
    with A = arctan(radius / r_near).
    """
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    if radius < 0 or r_near <= 0:
        raise ValueError("radius must be >= 0 and r_near > 0")
    lo = _cos_atan(radius / r_near)
    if lo >= 1.0:
        return 0.0
    r2 = rho * rho

    def f(u):
        return u ** (2.0 * q - 1.0) / (r2 + (1.0 - r2) * u * u) ** (0.5 * (q + 1.0))

    res = numerics.integrate_1d(f, lo, 1.0, tol)
    return (rho * res.value) ** 2


def _cos_atan(t):
    return 1.0 / math.sqrt(1.0 + t * t)


def closed_G_half(rho: float, r_near: float, radius: float) -> float:
    """Closed form of the boresight factor for the cosine pattern (q' = 1/2)."""
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    c = _cos_atan(radius / r_near)
    if 1.0 - rho < RHO_ONE_THRESHOLD:
        return (1.0 - c) ** 2
    x = math.sqrt(1.0 - rho * rho) / rho
    diff = incomplete_elliptic_F(0.5 * math.atan(x), 2.0) - incomplete_elliptic_F(0.5 * math.atan(x * c), 2.0)
    return 4.0 * rho / (1.0 - rho * rho) * diff * diff


def closed_G_one(rho: float, r_near: float, radius: float) -> float:
    """Closed form of the boresight factor for the cosine-square pattern (q' = 1)."""
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    c2 = _cos_atan(radius / r_near) ** 2
    if 1.0 - rho < RHO_ONE_THRESHOLD:
        return 0.25 * (c2 - 1.0) ** 2
    r2 = rho * rho
    return r2 / (4.0 * (1.0 - r2) ** 2) * math.log(r2 + (1.0 - r2) * c2) ** 2


def rho_one_half_snr(scn: Scenario) -> float:
    """Exact rectangle SNR for q' = 1/2 with both ends on boresight at equal range."""
    mu = scn.pattern.aperture(scn.wavelength)
    r = scn.bs.range
    a = scn.panel.length_y / (2.0 * r)
    b = scn.panel.length_z / (2.0 * r)
    ang = math.atan(a * b / math.sqrt(a * a + b * b + 1.0))
    return mu ** 2 * scn.transmit_snr / (math.pi ** 2 * scn.panel.spacing ** 4) * ang ** 2


def _G(rho, r_near, radius, q, tol):
    if q == 0.5:
        return closed_G_half(rho, r_near, radius)
    if q == 1.0:
        return closed_G_one(rho, r_near, radius)
    return boresight_G(rho, r_near, radius, q, tol)


def boresight_bound(scn: Scenario, radius: float, tol: float = numerics.DEFAULT_TOL) -> float:
    """Disk SNR under the boresight approximation, mu^2 P / (4 d^4) * G.

    The directivity factor Psi_q^{2q'} Psi_p^{2q'} is kept; it equals one
    exactly on the axis.
    """
    rho, near = distance_ratio(scn.bs.range, scn.user.range)
    r_near = scn.bs.range if near == "bs" else scn.user.range
    mu = scn.pattern.aperture(scn.wavelength)
    q2 = 2.0 * scn.pattern.q
    directivity = scn.bs.psi ** q2 * scn.user.psi ** q2
    return (mu ** 2 * scn.transmit_snr / (4.0 * scn.panel.spacing ** 4) * directivity
            * _G(rho, r_near, radius, scn.pattern.q, tol))


def snr_bounds(scn: Scenario, tol: float = numerics.DEFAULT_TOL) -> SnrBounds:
    r1 = scn.panel.inscribed_radius
    r2 = scn.panel.circumscribed_radius
    margin = boresight_margin(scn.panel, scn.bs, scn.user)
    if margin <= BORESIGHT_MARGIN and scn.pattern.q in (0.5, 1.0):
        return SnrBounds(boresight_bound(scn, r1, tol), boresight_bound(scn, r2, tol),
                         "boresight-closed-form")
    return SnrBounds(bound_function_f(scn, r1, tol), bound_function_f(scn, r2, tol), "generic")


def asymptotic_snr(rho: float, q: float, wavelength: float, spacing: float,
                   transmit_snr: float, tol: float = numerics.DEFAULT_TOL) -> float:
    """Limit of the boresight SNR as the panel grows without bound.

    Returns ``math.inf`` for q' = 0 (semi-isotropic elements collect unbounded
    power).
    """
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    if q < 0:
        raise ValueError("q must be >= 0")
    if q == 0:
        return math.inf
    lam4 = wavelength ** 4 / spacing ** 4
    if 1.0 - rho < RHO_ONE_THRESHOLD:
        return lam4 / (64.0 * math.pi ** 2) * (2.0 + 1.0 / q) ** 2 * transmit_snr
    r2 = rho * rho
    if q == 0.5:
        F = incomplete_elliptic_F(0.5 * math.atan(math.sqrt(1.0 - r2) / rho), 2.0)
        return rho / (1.0 - r2) * lam4 / math.pi ** 2 * transmit_snr * F * F
    if q == 1.0:
        # mu^2 P / (4 d^4) * G(inf, 1); continuous with the rho = 1 branch
        return 9.0 * lam4 / (16.0 * math.pi ** 2) * r2 * math.log(rho) ** 2 / (1.0 - r2) ** 2 * transmit_snr

    def f(u):
        return u ** (2.0 * q - 1.0) / (r2 + (1.0 - r2) * u * u) ** (0.5 * (q + 1.0))

    integral = numerics.integrate_1d(f, 0.0, 1.0, tol).value
    return lam4 * r2 / (16.0 * math.pi ** 2) * (2.0 * q + 1.0) ** 2 * transmit_snr * integral ** 2
