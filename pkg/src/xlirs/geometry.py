"""Placements, panel layout and link distances.

The reflecting surface lies in the y-z plane, centered at the origin, with its
normal along +x.  Elements are indexed symmetrically around the center, so
element counts along both axes must be odd.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Direction",
    "Placement",
    "IrsPanel",
    "BsArray",
    "odd_count_for",
    "element_position",
    "element_distance",
    "miso_element_distance",
    "distance_ratio",
    "boresight_margin",
    "BORESIGHT_MARGIN",
]

# margin at or below which both endpoints count as "near the x-axis"
BORESIGHT_MARGIN = 0.1


@dataclass(frozen=True)
class Direction:
    """Zenith/azimuth pair and its direction cosines (Psi, Phi, Theta)."""

    zenith: float
    azimuth: float
    psi: float = field(init=False)
    phi: float = field(init=False)
    theta: float = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.zenith <= math.pi:
            raise ValueError(f"zenith {self.zenith!r} outside [0, pi]")
        if not -0.5 * math.pi <= self.azimuth <= 0.5 * math.pi:
            raise ValueError(f"azimuth {self.azimuth!r} outside [-pi/2, pi/2]")
        st = math.sin(self.zenith)
        object.__setattr__(self, "psi", max(st * math.cos(self.azimuth), 0.0))
        object.__setattr__(self, "phi", st * math.sin(self.azimuth))
        object.__setattr__(self, "theta", math.cos(self.zenith))


@dataclass(frozen=True)
class Placement:
    """A point at ``range`` meters from the panel center along ``direction``."""

    range: float
    direction: Direction

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError(f"range must be positive, got {self.range!r}")

    @classmethod
    def from_angles(cls, range, zenith, azimuth):
        return cls(float(range), Direction(float(zenith), float(azimuth)))

    @property
    def point(self) -> np.ndarray:
        d = self.direction
        return self.range * np.array([d.psi, d.phi, d.theta])

    @property
    def psi(self):
        return self.direction.psi

    @property
    def phi(self):
        return self.direction.phi

    @property
    def theta(self):
        return self.direction.theta


def _odd_count(n, name):
    if int(n) != n or n < 1 or int(n) % 2 == 0:
        raise ValueError(f"{name} must be an odd positive integer, got {n!r}")
    return int(n)


def odd_count_for(length: float, spacing: float) -> int:
    """Odd element count whose span ``count * spacing`` is nearest ``length``."""
    n = int(round((length / spacing - 1.0) / 2.0))
    return 2 * max(n, 0) + 1


@dataclass(frozen=True)
class IrsPanel:
    """Uniform planar array of reflecting elements in the y-z plane."""

    m_y: int
    m_z: int
    spacing: float

    def __post_init__(self):
        object.__setattr__(self, "m_y", _odd_count(self.m_y, "m_y"))
        object.__setattr__(self, "m_z", _odd_count(self.m_z, "m_z"))
        if not self.spacing > 0:
            raise ValueError("element spacing must be positive")

    @classmethod
    def from_size(cls, length_y, length_z, spacing):
        """Panel with odd counts whose extents are closest to the requested ones."""
        return cls(odd_count_for(length_y, spacing), odd_count_for(length_z, spacing), spacing)

    @property
    def count(self) -> int:
        return self.m_y * self.m_z

    @property
    def length_y(self) -> float:
        return self.m_y * self.spacing

    @property
    def length_z(self) -> float:
        return self.m_z * self.spacing

    @property
    def half_y(self) -> int:
        return (self.m_y - 1) // 2

    @property
    def half_z(self) -> int:
        return (self.m_z - 1) // 2

    @property
    def inscribed_radius(self) -> float:
        return 0.5 * min(self.length_y, self.length_z)

    @property
    def circumscribed_radius(self) -> float:
        return 0.5 * math.hypot(self.length_y, self.length_z)

    def indices(self):
        """Signed (i_y, i_z) index grids, i_z-major, each of shape (m_z, m_y)."""
        iy = np.arange(-self.half_y, self.half_y + 1)
        iz = np.arange(-self.half_z, self.half_z + 1)
        return np.meshgrid(iy, iz, indexing="xy")

    def check_index(self, i_y, i_z):
        if abs(i_y) > self.half_y:
            raise IndexError(f"i_y={i_y} outside +-{self.half_y}")
        if abs(i_z) > self.half_z:
            raise IndexError(f"i_z={i_z} outside +-{self.half_z}")


@dataclass(frozen=True)
class BsArray:
    """Planar BS antenna array parallel to the panel, centered at ``center``."""

    n_y: int
    n_z: int
    spacing: float
    center: Placement

    def __post_init__(self):
        object.__setattr__(self, "n_y", _odd_count(self.n_y, "n_y"))
        object.__setattr__(self, "n_z", _odd_count(self.n_z, "n_z"))
        if not self.spacing > 0:
            raise ValueError("antenna spacing must be positive")

    @property
    def count(self) -> int:
        return self.n_y * self.n_z

    @property
    def half_y(self) -> int:
        return (self.n_y - 1) // 2

    @property
    def half_z(self) -> int:
        return (self.n_z - 1) // 2

    def indices(self):
        ny = np.arange(-self.half_y, self.half_y + 1)
        nz = np.arange(-self.half_z, self.half_z + 1)
        return np.meshgrid(ny, nz, indexing="xy")

    def check_index(self, n_y, n_z):
        if abs(n_y) > self.half_y:
            raise IndexError(f"n_y={n_y} outside +-{self.half_y}")
        if abs(n_z) > self.half_z:
            raise IndexError(f"n_z={n_z} outside +-{self.half_z}")

    def antenna_position(self, n_y, n_z) -> np.ndarray:
        self.check_index(n_y, n_z)
        return self.center.point + np.array([0.0, n_y * self.spacing, n_z * self.spacing])


def element_position(panel: IrsPanel, i_y: int, i_z: int) -> np.ndarray:
    panel.check_index(i_y, i_z)
    return np.array([0.0, i_y * panel.spacing, i_z * panel.spacing])


def _normalized_sq_distance(eps, phi, theta, i_y, i_z):
    """Squared element distance over r^2 for integer (or array) offsets."""
    return 1.0 - 2.0 * i_y * eps * phi - 2.0 * i_z * eps * theta + (i_y * i_y + i_z * i_z) * eps * eps


def element_distance(src: Placement, panel: IrsPanel, i_y: int, i_z: int) -> float:
    """Distance from ``src`` to element (i_y, i_z)."""
    panel.check_index(i_y, i_z)
    eps = panel.spacing / src.range
    return src.range * math.sqrt(_normalized_sq_distance(eps, src.phi, src.theta, i_y, i_z))


def miso_element_distance(bs: BsArray, n_y: int, n_z: int, panel: IrsPanel,
                          i_y: int, i_z: int) -> float:
    """Distance from BS antenna (n_y, n_z) to element (i_y, i_z)."""
    bs.check_index(n_y, n_z)
    panel.check_index(i_y, i_z)
    r = bs.center.range
    oy = n_y * bs.spacing / r - i_y * panel.spacing / r
    oz = n_z * bs.spacing / r - i_z * panel.spacing / r
    c = bs.center
    return r * math.sqrt(1.0 + 2.0 * oy * c.phi + 2.0 * oz * c.theta + oy * oy + oz * oz)


def distance_ratio(r_q: float, r_p: float):
    """Return ``(rho, nearer)`` with rho = min/max in (0, 1].

    ``nearer`` is ``"bs"`` when r_q <= r_p, else ``"user"``.
    """
    if r_q <= 0 or r_p <= 0:
        raise ValueError("link distances must be positive")
    if r_q <= r_p:
        return r_q / r_p, "bs"
    return r_p / r_q, "user"


def boresight_margin(panel: IrsPanel, bs: Placement, user: Placement) -> float:
    return max(
        abs(bs.phi) * panel.length_y / bs.range,
        abs(bs.theta) * panel.length_z / bs.range,
        abs(user.phi) * panel.length_y / user.range,
        abs(user.theta) * panel.length_z / user.range,
    )
