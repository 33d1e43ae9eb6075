"""Channel vectors, passive phasing, MRT and exact (summation) SNR.

Vectors over the panel are flattened i_z-major: entry ``k`` corresponds to
``i_z = k // m_y - half_z`` and ``i_y = k % m_y - half_y``.  The same order is
used by every summation so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import kernels
from .geometry import BsArray, IrsPanel, Placement
from .pattern import GainPattern, channel_power_gain, miso_channel_power_gain

__all__ = [
    "ConfigurationError",
    "FarFieldWarning",
    "Scenario",
    "PhaseProfile",
    "ChannelVector",
    "SimulationResult",
    "channel_vector",
    "optimal_phases",
    "received_snr",
    "exact_max_snr",
    "miso_channel_matrix",
    "receive_response",
    "transmit_response",
    "rank_one_far_channel",
    "mrt_beamformer",
    "miso_optimal_phases",
    "miso_received_snr",
    "miso_exact_max_snr",
    "simulate",
]


class ConfigurationError(ValueError):
    """Scenario does not carry what the requested operation needs."""


class FarFieldWarning(UserWarning):
    """The BS is closer than the Rayleigh distance assumed by the rank-one model."""


@dataclass(frozen=True)
class Scenario:
    """Complete link description; ``transmit_snr`` is P/sigma^2, linear."""

    wavelength: float
    transmit_snr: float
    panel: IrsPanel
    pattern: GainPattern
    bs: Placement
    user: Placement
    bs_array: Optional[BsArray] = None

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        if self.panel.spacing > 0.5 * self.wavelength * (1 + 1e-12):
            raise ValueError("spacing exceeds half wavelength")
        if not self.transmit_snr > 0:
            raise ValueError("transmit SNR must be positive")
        if not self.bs.psi > 0:
            raise ValueError("BS is behind the surface (Psi_q <= 0)")
        if not self.user.psi > 0:
            raise ValueError("user is behind the surface (Psi_p <= 0)")
        if self.bs_array is not None and self.bs_array.center != self.bs:
            raise ValueError("bs_array must be centered at the BS placement")

    def replace(self, **changes) -> "Scenario":
        if "bs" in changes and self.bs_array is not None and "bs_array" not in changes:
            changes["bs_array"] = replace(self.bs_array, center=changes["bs"])
        return replace(self, **changes)

    def swapped(self) -> "Scenario":
        """BS and user exchanged (SISO only)."""
        return replace(self, bs=self.user, user=self.bs, bs_array=None)

    @property
    def transmit_snr_db(self) -> float:
        return 10.0 * math.log10(self.transmit_snr)


@dataclass(frozen=True)
class PhaseProfile:
    phases: np.ndarray

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float).ravel()
        if not np.all(np.isfinite(ph)):
            raise ValueError("phase profile contains non-finite values")
        object.__setattr__(self, "phases", ph)

    def __len__(self):
        return self.phases.size

    @property
    def diagonal(self) -> np.ndarray:
        return np.exp(1j * self.phases)


@dataclass(frozen=True)
class ChannelVector:
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex).ravel()
        if not np.all(np.isfinite(e)):
            raise ValueError("channel vector contains non-finite values")
        object.__setattr__(self, "entries", e)

    def __len__(self):
        return self.entries.size


@dataclass(frozen=True)
class SimulationResult:
    received: np.ndarray = field(repr=False)
    symbols: np.ndarray = field(repr=False)
    noise: np.ndarray = field(repr=False)
    signal_power: float
    noise_power: float

    @property
    def empirical_snr(self) -> float:
        if self.noise_power == 0:
            return math.inf
        return self.signal_power / self.noise_power


def _flat_indices(panel: IrsPanel):
    iy, iz = panel.indices()
    return iy.ravel(), iz.ravel()


def _distances(src: Placement, panel: IrsPanel, iy, iz):
    eps = panel.spacing / src.range
    x = (1.0 - 2.0 * iy * eps * src.phi - 2.0 * iz * eps * src.theta
         + (iy * iy + iz * iz) * eps * eps)
    return src.range * np.sqrt(x)


def channel_vector(scn: Scenario, side: str) -> ChannelVector:
    """Near-field channel between the panel and the BS (``"bs"``) or user."""
    if side not in ("bs", "user"):
        raise ValueError("side must be 'bs' or 'user'")
    src = scn.bs if side == "bs" else scn.user
    iy, iz = _flat_indices(scn.panel)
    gain = channel_power_gain(scn.pattern, scn.wavelength, src, scn.panel, iy, iz)
    dist = _distances(src, scn.panel, iy, iz)
    return ChannelVector(np.sqrt(gain) * np.exp(-2j * math.pi / scn.wavelength * dist))


def optimal_phases(scn: Scenario) -> PhaseProfile:
    """Per-element phases that co-phase every two-hop path."""
    iy, iz = _flat_indices(scn.panel)
    total = _distances(scn.bs, scn.panel, iy, iz) + _distances(scn.user, scn.panel, iy, iz)
    return PhaseProfile(np.mod(2.0 * math.pi / scn.wavelength * total, 2.0 * math.pi))


def received_snr(scn: Scenario, profile: PhaseProfile, h: ChannelVector | None = None,
                 g: ChannelVector | None = None) -> float:
    """P * |g^T diag(e^{j theta}) h|^2 / sigma^2 (plain transpose, as modelled)."""
    h = channel_vector(scn, "bs") if h is None else h
    g = channel_vector(scn, "user") if g is None else g
    if len(profile) != len(h) or len(g) != len(h):
        raise ValueError(f"phase profile has {len(profile)} entries, panel has {len(h)}")
    amp = np.sum(g.entries * profile.diagonal * h.entries)
    return scn.transmit_snr * abs(amp) ** 2


def _prefactor(scn: Scenario) -> float:
    lam4 = (scn.wavelength / (4.0 * math.pi)) ** 4
    gp = scn.pattern.peak_gain
    q2 = 2.0 * scn.pattern.q
    directivity = (scn.bs.psi ** q2) * (scn.user.psi ** q2)
    return lam4 * gp * gp * scn.transmit_snr * directivity / ((scn.bs.range ** 2) * (scn.user.range ** 2))


def _amplitude_sum(scn: Scenario, bs_side: bool = True, backend=None) -> float:
    d = scn.panel.spacing
    q, p = scn.bs, scn.user
    eps_q = d / q.range if bs_side else 0.0
    return kernels.kernel_sum(eps_q, q.phi, q.theta, d / p.range, p.phi, p.theta,
                              scn.panel.half_y, scn.panel.half_z,
                              0.5 * (scn.pattern.q + 1.0), backend=backend)


def exact_max_snr(scn: Scenario, backend=None) -> float:
    """Maximum SNR by direct summation over every element."""
    s = _amplitude_sum(scn, True, backend)
    return _prefactor(scn) * s * s


def _require_array(scn: Scenario) -> BsArray:
    if scn.bs_array is None:
        raise ConfigurationError("operation needs a BS antenna array (bs_array)")
    return scn.bs_array


def miso_channel_matrix(scn: Scenario) -> np.ndarray:
    """Exact M x N near-field BS-panel channel."""
    arr = _require_array(scn)
    iy, iz = _flat_indices(scn.panel)
    ny, nz = arr.indices()
    ny, nz = ny.ravel(), nz.ravel()
    IY, NY = np.meshgrid(iy, ny, indexing="ij")
    IZ, NZ = np.meshgrid(iz, nz, indexing="ij")
    gain = miso_channel_power_gain(scn.pattern, scn.wavelength, arr, NY, NZ, scn.panel, IY, IZ)
    c = arr.center
    oy = (NY * arr.spacing - IY * scn.panel.spacing) / c.range
    oz = (NZ * arr.spacing - IZ * scn.panel.spacing) / c.range
    dist = c.range * np.sqrt(1.0 + 2.0 * oy * c.phi + 2.0 * oz * c.theta + oy * oy + oz * oz)
    return np.sqrt(gain) * np.exp(-2j * math.pi / scn.wavelength * dist)


def _steering(spacing, wavelength, direction, n_y, n_z):
    ky = np.exp(2j * math.pi / wavelength * np.arange(-(n_y // 2), n_y // 2 + 1) * spacing * direction.phi)
    kz = np.exp(2j * math.pi / wavelength * np.arange(-(n_z // 2), n_z // 2 + 1) * spacing * direction.theta)
    # i_z-major flattening: z is the slow axis
    return np.kron(kz, ky)


def receive_response(scn: Scenario) -> np.ndarray:
    """Plane-wave response of the panel toward the BS direction."""
    p = scn.panel
    return _steering(p.spacing, scn.wavelength, scn.bs.direction, p.m_y, p.m_z)


def transmit_response(scn: Scenario) -> np.ndarray:
    arr = _require_array(scn)
    return _steering(arr.spacing, scn.wavelength, scn.bs.direction, arr.n_y, arr.n_z)


def _check_far_field(scn: Scenario):
    arr = scn.bs_array
    aperture = math.hypot(scn.panel.length_y, scn.panel.length_z)
    aperture += math.hypot(arr.n_y * arr.spacing, arr.n_z * arr.spacing)
    rayleigh = 2.0 * aperture ** 2 / scn.wavelength
    if scn.bs.range < rayleigh:
        warnings.warn(f"BS range {scn.bs.range:g} m is inside the Rayleigh distance "
                      f"{rayleigh:g} m of the joint aperture", FarFieldWarning, stacklevel=3)


def _far_gain(scn: Scenario) -> float:
    q = scn.bs
    return (scn.wavelength ** 2 * scn.pattern.peak_gain * q.psi ** (2.0 * scn.pattern.q)
            / (16.0 * math.pi ** 2 * q.range ** 2))


def rank_one_far_channel(scn: Scenario) -> np.ndarray:
    """Far-field BS approximation: scaled outer product of array responses."""
    _require_array(scn)
    _check_far_field(scn)
    scale = math.sqrt(_far_gain(scn)) * np.exp(-2j * math.pi / scn.wavelength * scn.bs.range)
    return scale * np.outer(receive_response(scn), transmit_response(scn).conj())


def mrt_beamformer(scn: Scenario) -> np.ndarray:
    a_t = transmit_response(scn)
    return a_t / math.sqrt(a_t.size)


def miso_optimal_phases(scn: Scenario, H: np.ndarray, v: np.ndarray,
                        g: ChannelVector | None = None) -> PhaseProfile:
    """Phases that co-phase ``g_m (H v)_m`` for a fixed beamformer."""
    g = channel_vector(scn, "user") if g is None else g
    return PhaseProfile(np.mod(-np.angle(g.entries * (H @ v)), 2.0 * math.pi))


def miso_received_snr(scn: Scenario, profile: PhaseProfile, v: np.ndarray,
                      H: np.ndarray | None = None, g: ChannelVector | None = None) -> float:
    H = rank_one_far_channel(scn) if H is None else H
    g = channel_vector(scn, "user") if g is None else g
    v = np.asarray(v, dtype=complex)
    if len(profile) != H.shape[0] or v.size != H.shape[1]:
        raise ValueError("profile/beamformer shape does not match the channel matrix")
    amp = np.sum(g.entries * profile.diagonal * (H @ v))
    return scn.transmit_snr * abs(amp) ** 2


def miso_exact_max_snr(scn: Scenario, backend=None) -> float:
    """Far-field-BS MISO SNR with MRT and optimal phasing, by summation."""
    arr = _require_array(scn)
    s = _amplitude_sum(scn, False, backend)
    return arr.count * _prefactor(scn) * s * s


def simulate(scn: Scenario, profile: PhaseProfile, symbol_count: int, seed,
             noiseless: bool = False) -> SimulationResult:
    """Draw unit-power QPSK symbols through the SISO link with unit-variance noise."""
    if symbol_count < 1:
        raise ValueError("symbol_count must be >= 1")
    rng = np.random.default_rng(seed)
    h = channel_vector(scn, "bs")
    g = channel_vector(scn, "user")
    if len(profile) != len(h):
        raise ValueError("phase profile length does not match the panel")
    coeff = np.sum(g.entries * profile.diagonal * h.entries)
    bits = rng.integers(0, 4, size=symbol_count)
    s = np.exp(1j * (0.5 * math.pi * bits + 0.25 * math.pi))
    if noiseless:
        n = np.zeros(symbol_count, dtype=complex)
    else:
        n = (rng.standard_normal(symbol_count) + 1j * rng.standard_normal(symbol_count)) / math.sqrt(2.0)
    signal = coeff * math.sqrt(scn.transmit_snr) * s
    return SimulationResult(
        received=signal + n,
        symbols=s,
        noise=n,
        signal_power=float(np.mean(np.abs(signal) ** 2)),
        noise_power=float(np.mean(np.abs(n) ** 2)),
    )
