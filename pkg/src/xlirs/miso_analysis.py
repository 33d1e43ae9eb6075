"""Multi-antenna BS in the far field: integral SNR, disk bounds and the q' = 1/2 closed form.

Only the user-side kernel varies over the panel; the BS side contributes the
constant far-field gain lambda^2 gamma' Psi_q^{2q'} / (16 pi^2 r_q^2) and the
array gain N.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from . import numerics
from .channel import Scenario, _prefactor, _require_array
from .geometry import BORESIGHT_MARGIN
from .ula_analysis import ApplicabilityWarning

__all__ = ["miso_integral_snr", "bound_function_U", "closed_U_half", "miso_bounds"]


def _user_kernel(scn: Scenario):
    p = scn.user
    expo = 0.5 * (scn.pattern.q + 1.0)
    r = p.range

    def f(y, z):
        return (1.0 - 2.0 * y * p.phi / r - 2.0 * z * p.theta / r + (y * y + z * z) / (r * r)) ** (-expo)
    return f


def miso_integral_snr(scn: Scenario, tol: float = numerics.DEFAULT_TOL) -> float:
    arr = _require_array(scn)
    hy, hz = 0.5 * scn.panel.length_y, 0.5 * scn.panel.length_z
    res = numerics.integrate_2d_rect(_user_kernel(scn), (-hy, hy), (-hz, hz), tol)
    return arr.count * _prefactor(scn) / scn.panel.spacing ** 4 * res.value ** 2


def bound_function_U(scn: Scenario, radius: float, tol: float = numerics.DEFAULT_TOL) -> float:
    arr = _require_array(scn)
    kern = _user_kernel(scn)
    res = numerics.polar_disk_integrate(
        lambda r, zeta: r * kern(r * np.cos(zeta), r * np.sin(zeta)), radius, tol)
    return arr.count * _prefactor(scn) / scn.panel.spacing ** 4 * res.value ** 2


def closed_U_half(scn: Scenario, radius: float) -> float:
    """Disk bound for a boresight user and cosine elements (q' = 1/2)."""
    arr = _require_array(scn)
    p, q = scn.user, scn.bs
    margin = max(abs(p.phi) * scn.panel.length_y, abs(p.theta) * scn.panel.length_z) / p.range
    if scn.pattern.q != 0.5 or margin > BORESIGHT_MARGIN:
        warnings.warn("closed-form MISO bound needs q' = 1/2 and a boresight user",
                      ApplicabilityWarning, stacklevel=2)
    gp = scn.pattern.peak_gain
    root = (radius * radius / (p.range * p.range) + 1.0) ** 0.25 - 1.0
    return (arr.count * scn.transmit_snr * scn.wavelength ** 4 * gp * gp * q.psi * p.range ** 2
            / (16.0 * math.pi ** 2 * scn.panel.spacing ** 4 * q.range ** 2) * root * root)


def miso_bounds(scn: Scenario, closed: bool = False, tol: float = numerics.DEFAULT_TOL):
    """(lower, upper) from the inscribed and circumscribed disks."""
    r1, r2 = scn.panel.inscribed_radius, scn.panel.circumscribed_radius
    if closed:
        return closed_U_half(scn, r1), closed_U_half(scn, r2)
    return bound_function_U(scn, r1, tol), bound_function_U(scn, r2, tol)
