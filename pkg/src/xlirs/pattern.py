"""Element directivity, Friis power ratios and per-element channel power gains.

The element pattern is ``gamma' * cos(eps)**(2 q')`` on the front hemisphere
and zero behind the surface, with ``gamma' = 2 (2 q' + 1)`` so that the
pattern radiates exactly 4*pi over the hemisphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numerics
from .geometry import BsArray, IrsPanel, Placement, element_position

__all__ = [
    "GainPattern",
    "SEMI_ISOTROPIC",
    "COSINE",
    "COSINE_SQUARE",
    "gamma_prime",
    "effective_aperture",
    "element_gain",
    "hemisphere_power",
    "friis_ratio",
    "incidence_cosine",
    "channel_power_gain",
    "channel_power_gain_friis",
    "miso_channel_power_gain",
    "miso_channel_power_gain_friis",
]


def gamma_prime(q: float) -> float:
    if q < 0:
        raise ValueError(f"directivity exponent must be >= 0, got {q!r}")
    return 2.0 * (2.0 * q + 1.0)


@dataclass(frozen=True)
class GainPattern:
    q: float

    def __post_init__(self):
        gamma_prime(self.q)

    @property
    def peak_gain(self) -> float:
        return gamma_prime(self.q)

    def aperture(self, wavelength: float) -> float:
        return effective_aperture(self, wavelength)


SEMI_ISOTROPIC = GainPattern(0.0)
COSINE = GainPattern(0.5)
COSINE_SQUARE = GainPattern(1.0)


def effective_aperture(pat: GainPattern, wavelength: float) -> float:
    """Maximum effective aperture lambda^2 gamma' / (4 pi) in m^2."""
    return wavelength ** 2 * pat.peak_gain / (4.0 * math.pi)


def element_gain(pat: GainPattern, eps, psi=0.0):
    """Element gain at elevation ``eps`` from the normal.

    ``psi`` (azimuth around the normal) does not enter the pattern.
    """
    eps = np.asarray(eps, dtype=float)
    front = (eps >= 0) & (eps < 0.5 * math.pi)
    c = np.cos(np.where(front, eps, 0.0))
    g = np.where(front, pat.peak_gain * c ** (2.0 * pat.q), 0.0)
    return float(g) if g.ndim == 0 else g


def hemisphere_power(pat: GainPattern, tol: float = 1e-10) -> float:
    """Numerically integrate the pattern over the front hemisphere (steradians)."""
    res = numerics.integrate_2d_rect(
        lambda eps, az: element_gain(pat, np.broadcast_to(eps, np.broadcast(eps, az).shape)) * np.sin(eps),
        (0.0, 0.5 * math.pi), (0.0, 2.0 * math.pi), tol)
    return float(res.value)


def friis_ratio(wavelength: float, r, g_t=1.0, g_e=1.0):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("link distance must be positive")
    out = (wavelength / (4.0 * math.pi * r)) ** 2 * g_t * g_e
    return float(out) if out.ndim == 0 else out


def incidence_cosine(src, elem) -> float:
    """Cosine between ``src - elem`` and the panel normal."""
    src_pt = src.point if isinstance(src, Placement) else np.asarray(src, dtype=float)
    v = src_pt - np.asarray(elem, dtype=float)
    n = float(np.linalg.norm(v))
    if n == 0:
        raise ValueError("source coincides with the element")
    return float(v[0] / n)


def _require_front(src: Placement):
    if not src.psi > 0:
        raise ValueError("source is behind or in the plane of the surface (Psi <= 0)")


def channel_power_gain(pat: GainPattern, wavelength: float, src: Placement,
                       panel: IrsPanel, i_y, i_z):
    """Closed-form power gain between ``src`` and element (i_y, i_z).

    Index arguments may be arrays (no range check is done for arrays).
    """
    _require_front(src)
    if np.ndim(i_y) == 0 and np.ndim(i_z) == 0:
        panel.check_index(i_y, i_z)
    eps = panel.spacing / src.range
    x = (1.0 - 2.0 * np.multiply(i_y, eps) * src.phi - 2.0 * np.multiply(i_z, eps) * src.theta
         + (np.square(i_y) + np.square(i_z)) * eps * eps)
    base = (wavelength / (4.0 * math.pi * src.range)) ** 2 * pat.peak_gain * src.psi ** (2.0 * pat.q)
    out = base / np.power(x, pat.q + 1.0)
    return float(out) if np.ndim(out) == 0 else out


def channel_power_gain_friis(pat: GainPattern, wavelength: float, src: Placement,
                             panel: IrsPanel, i_y: int, i_z: int) -> float:
    """Same gain built from Friis and the pattern at the true incidence angle."""
    _require_front(src)
    elem = element_position(panel, i_y, i_z)
    dist = float(np.linalg.norm(src.point - elem))
    eps = math.acos(min(1.0, incidence_cosine(src, elem)))
    return friis_ratio(wavelength, dist, 1.0, element_gain(pat, eps))


def miso_channel_power_gain(pat: GainPattern, wavelength: float, bs: BsArray, n_y, n_z,
                            panel: IrsPanel, i_y, i_z):
    """Power gain between BS antenna (n_y, n_z) and element (i_y, i_z)."""
    c = bs.center
    _require_front(c)
    if all(np.ndim(v) == 0 for v in (n_y, n_z, i_y, i_z)):
        bs.check_index(n_y, n_z)
        panel.check_index(i_y, i_z)
    oy = (np.multiply(n_y, bs.spacing) - np.multiply(i_y, panel.spacing)) / c.range
    oz = (np.multiply(n_z, bs.spacing) - np.multiply(i_z, panel.spacing)) / c.range
    x = 1.0 + 2.0 * oy * c.phi + 2.0 * oz * c.theta + oy * oy + oz * oz
    base = (wavelength / (4.0 * math.pi * c.range)) ** 2 * pat.peak_gain * c.psi ** (2.0 * pat.q)
    out = base / np.power(x, pat.q + 1.0)
    return float(out) if np.ndim(out) == 0 else out


def miso_channel_power_gain_friis(pat, wavelength, bs: BsArray, n_y, n_z,
                                  panel: IrsPanel, i_y, i_z) -> float:
    _require_front(bs.center)
    ant = bs.antenna_position(n_y, n_z)
    elem = element_position(panel, i_y, i_z)
    dist = float(np.linalg.norm(ant - elem))
    eps = math.acos(min(1.0, incidence_cosine(ant, elem)))
    return friis_ratio(wavelength, dist, 1.0, element_gain(pat, eps))
