"""Linear panel (one column, m_y = 1): integral SNR, angular span closed form, asymptote."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from . import numerics
from .channel import ConfigurationError, Scenario, _prefactor
from .numerics import incomplete_elliptic_F

__all__ = [
    "ApplicabilityWarning",
    "AngularSpan",
    "NEAR_RATIO_LIMIT",
    "ula_integral_snr",
    "angular_span",
    "ula_closed_snr",
    "ula_asymptotic_snr",
    "elliptic_constant",
]

# distance ratio up to which the near endpoint is treated as "much closer"
NEAR_RATIO_LIMIT = 0.2


class ApplicabilityWarning(UserWarning):
    """A closed form is evaluated outside the regime it was derived for."""


@dataclass(frozen=True)
class AngularSpan:
    alpha1: float
    alpha2: float

    @property
    def total(self) -> float:
        return self.alpha1 + self.alpha2


def _require_linear(scn: Scenario):
    if scn.panel.m_y != 1:
        raise ConfigurationError(f"linear-panel analysis needs m_y == 1, got {scn.panel.m_y}")


def ula_integral_snr(scn: Scenario, tol: float = numerics.DEFAULT_TOL) -> float:
    """Integral SNR for a single column: y = 0 and one cell width in y.

    Equivalent to the planar integral form with the y-integral collapsed to a
    factor d, so the prefactor carries d^2 instead of d^4.
    """
    _require_linear(scn)
    q, p = scn.bs, scn.user
    expo = 0.5 * (scn.pattern.q + 1.0)

    def f(z):
        xq = 1.0 - 2.0 * z * q.theta / q.range + z * z / (q.range * q.range)
        xp = 1.0 - 2.0 * z * p.theta / p.range + z * z / (p.range * p.range)
        return (xq * xp) ** (-expo)

    hz = 0.5 * scn.panel.length_z
    res = numerics.integrate_1d(f, -hz, hz, tol)
    return _prefactor(scn) / scn.panel.spacing ** 2 * res.value ** 2


def angular_span(r: float, zenith: float, length_z: float) -> AngularSpan:
    """Angles from the foot of the perpendicular to the two ends of the line."""
    if r <= 0 or length_z <= 0:
        raise ValueError("range and length must be positive")
    s = math.sin(zenith)
    if not 0 < zenith < math.pi or s <= 0:
        raise ValueError("zenith must lie strictly inside (0, pi)")
    c = math.cos(zenith)
    half = 0.5 * length_z
    return AngularSpan(math.atan((half + r * c) / (r * s)), math.atan((half - r * c) / (r * s)))


def _near_far(scn: Scenario):
    q, p = scn.bs, scn.user
    if q.range <= p.range:
        return q, p
    return p, q


def _check_regime(scn: Scenario, near, far):
    if scn.pattern.q != 0.5:
        raise ConfigurationError("closed form exists for the cosine pattern (q' = 1/2) only")
    ratio = near.range / far.range
    if ratio > NEAR_RATIO_LIMIT:
        warnings.warn(f"distance ratio {ratio:.3g} exceeds {NEAR_RATIO_LIMIT}; "
                      "closed form assumes one end much nearer", ApplicabilityWarning, stacklevel=3)


def _scale(scn: Scenario, near, far) -> float:
    return (scn.wavelength ** 4 * scn.transmit_snr * far.psi * math.cos(near.direction.azimuth)
            / (math.pi ** 4 * scn.panel.spacing ** 2 * far.range ** 2))


def ula_closed_snr(scn: Scenario) -> float:
    """Closed form in terms of the angular span seen from the nearer endpoint."""
    _require_linear(scn)
    near, far = _near_far(scn)
    _check_regime(scn, near, far)
    span = angular_span(near.range, near.direction.zenith, scn.panel.length_z)
    total = incomplete_elliptic_F(0.5 * span.alpha1, 2.0) + incomplete_elliptic_F(0.5 * span.alpha2, 2.0)
    return 0.25 * _scale(scn, near, far) * total * total


def elliptic_constant() -> float:
    """[F(pi/4 | 2)]^2, the saturation constant of the linear panel."""
    return incomplete_elliptic_F(0.25 * math.pi, 2.0) ** 2


def ula_asymptotic_snr(scn: Scenario) -> float:
    """Limit of the closed form as the line length grows without bound."""
    near, far = _near_far(scn)
    _check_regime(scn, near, far)
    return elliptic_constant() * _scale(scn, near, far)
