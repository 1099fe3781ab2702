"""Shared helpers for the test suite."""
from __future__ import annotations

import math

from risfso.channel import DetectionMode, cascade_from_constants
from risfso.statistics import RisElement, SnrDistribution

# (level, alpha, beta): the three turbulence rows used by the sweeps
TABLE2_LEVELS = [
    ("strong", 10.9537, 2.9833),
    ("moderate", 4.9477, 1.2310),
    ("weak", 2.9428, 2.5605),
]

# color -> (alpha, beta) as labeled by the three-color comparison figure
FIG_COLORS = {
    "red": (10.9537, 2.9833),
    "green": (12.5331, 4.6787),
    "blue": (13.2818, 5.7795),
}


def make_dist(alpha: float, beta: float, zeta: float, a: int,
              mean_snr_db: float, mu: float = 1.0) -> SnrDistribution:
    """Distribution from constants; mean_snr_db is the product mean SNR."""
    mode = DetectionMode.HD if a == 1 else DetectionMode.IM_DD
    gbar = 10.0 ** (mean_snr_db / 10.0)
    params = cascade_from_constants(alpha, beta, zeta, mode,
                                    math.sqrt(gbar), math.sqrt(gbar))
    return SnrDistribution(params, RisElement(mu=mu))
