"""Near-field SNR of links through extremely large reflecting surfaces."""

from .channel import (ConfigurationError, FarFieldWarning, Scenario, exact_max_snr,
                      miso_exact_max_snr, optimal_phases, received_snr)
from .geometry import BsArray, Direction, IrsPanel, Placement
from .kernels import BACKEND
from .numerics import QuadratureError
from .pattern import COSINE, COSINE_SQUARE, SEMI_ISOTROPIC, GainPattern

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BsArray",
    "COSINE",
    "COSINE_SQUARE",
    "ConfigurationError",
    "Direction",
    "FarFieldWarning",
    "GainPattern",
    "IrsPanel",
    "Placement",
    "QuadratureError",
    "SEMI_ISOTROPIC",
    "Scenario",
    "exact_max_snr",
    "miso_exact_max_snr",
    "optimal_phases",
    "received_snr",
]
