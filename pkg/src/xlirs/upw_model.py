"""Uniform plane wave baseline: array factor and the square power scaling law."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .channel import Scenario
from .geometry import Direction, IrsPanel

__all__ = ["UpwParams", "array_factor", "upw_snr", "default_reference_gain"]


@dataclass(frozen=True)
class UpwParams:
    """``reference_gain`` is the channel power gain at 1 m (beta_0)."""

    reference_gain: float

    def __post_init__(self):
        if not self.reference_gain > 0:
            raise ValueError("reference gain must be positive")


def default_reference_gain(wavelength: float) -> float:
    return (wavelength / (4.0 * math.pi)) ** 2


def _dirichlet(count: int, x: float) -> float:
    """sin(count x) / sin(x) with its limit where sin(x) vanishes."""
    s = math.sin(x)
    if abs(s) < 1e-12:
        return count * math.cos(count * x) / math.cos(x)
    return math.sin(count * x) / s


def array_factor(panel: IrsPanel, direction: Direction, wavelength: float) -> float:
    """Normalized (signed) array factor of the panel toward ``direction``."""
    kd = 2.0 * math.pi / wavelength * panel.spacing
    return (_dirichlet(panel.m_y, 0.5 * kd * direction.phi)
            * _dirichlet(panel.m_z, 0.5 * kd * direction.theta) / panel.count)


def upw_snr(scn: Scenario, params: Optional[UpwParams] = None) -> float:
    """Far-field SNR: every element sees the same angle and distance.

    The pattern term is gamma' Psi^{2q'} for each end; the array factor enters
    linearly, not squared.
    """
    beta0 = (params.reference_gain if params is not None
             else default_reference_gain(scn.wavelength))
    q, p = scn.bs, scn.user
    gp = scn.pattern.peak_gain
    q2 = 2.0 * scn.pattern.q
    m = scn.panel.count
    ge_q = gp * q.psi ** q2
    ge_p = gp * p.psi ** q2
    af_q = array_factor(scn.panel, q.direction, scn.wavelength)
    af_p = array_factor(scn.panel, p.direction, scn.wavelength)
    return (float(m) ** 2 * beta0 ** 2 * scn.transmit_snr / (q.range ** 2 * p.range ** 2)
            * ge_q * af_q * ge_p * af_p)
