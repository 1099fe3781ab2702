"""Physical link description and derived analytical parameters.

Translates a free-space-optical hop (geometry, wavelength, refractive
index structure, pointing) into the turbulence shape parameters, the
pointing-error parameters, and the cascade parameter bundle that every
closed-form statistic of the reflected two-hop link consumes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .special import erf

__all__ = [
    "CascadeParams",
    "DetectionMode",
    "LinkScenario",
    "PointingState",
    "TurbulenceState",
    "alpha_beta",
    "cascade_from_constants",
    "cascade_params",
    "path_loss",
    "pointing_state",
    "rytov_variance",
]


class DetectionMode(enum.Enum):
    """Receiver front end: heterodyne or intensity-modulation direct
    detection.  The SNR exponent ``a`` and the capacity scale ``chi``
    are bound to the mode by construction."""

    HD = 1
    IM_DD = 2

    @property
    def a(self) -> int:
        return self.value

    @property
    def chi(self) -> float:
        return 1.0 if self is DetectionMode.HD else math.e / (2.0 * math.pi)

    @classmethod
    def from_name(cls, name: str) -> "DetectionMode":
        key = name.strip().lower().replace("/", "").replace("-", "").replace("_", "")
        if key == "hd":
            return cls.HD
        if key in ("imdd", "im"):
            return cls.IM_DD
        raise ValueError(f"unknown detection mode {name!r} (use 'hd' or 'imdd')")


@dataclass(frozen=True)
class LinkScenario:
    """One sub-channel of the reflected link.

    All lengths in meters, ``cn2`` in m^(-2/3), ``attenuation`` in 1/m.
    ``zeta`` (equivalent beam radius over pointing jitter) is a direct
    input: sweeps vary it without deriving it from a jitter sigma.
    """

    wavelength: float
    distance: float
    aperture_diameter: float
    cn2: float
    receiver_radius: float
    beam_waist: float
    attenuation: float
    zeta: float
    detection: DetectionMode = DetectionMode.HD

    def __post_init__(self) -> None:
        for name in ("wavelength", "distance", "aperture_diameter",
                     "receiver_radius", "beam_waist", "zeta"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not 1e-17 <= self.cn2 <= 1e-9:
            raise ValueError(f"cn2 outside the supported range [1e-17, 1e-9]: {self.cn2!r}")
        if self.attenuation < 0.0:
            raise ValueError(f"attenuation must be nonnegative, got {self.attenuation!r}")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength


@dataclass(frozen=True)
class TurbulenceState:
    """Rytov variance, aperture parameter and the two gamma shapes."""

    rytov: float
    d: float
    alpha: float
    beta: float
    saturated: bool = False


@dataclass(frozen=True)
class PointingState:
    v: float
    a0: float
    zeta: float

    def __post_init__(self) -> None:
        # a0 = 1 is the wide-receiver limit where erf saturates
        if not 0.0 < self.a0 <= 1.0:
            raise ValueError(f"a0 must lie in (0, 1], got {self.a0!r}")
        if not self.zeta > 0.0:
            raise ValueError(f"zeta must be positive, got {self.zeta!r}")


@dataclass(frozen=True)
class CascadeParams:
    """Constants of the two-hop closed forms.

    ``delta1``/``delta2`` are the 2a- and 6a-entry parameter lists of
    the CDF-level G-function; ``mean_snr`` is the product of the two
    per-hop mean SNRs with path loss already folded in.
    """

    zeta2: float
    alpha: float
    beta: float
    a: int
    mean_snr: float
    big_m: float
    big_q: float
    m0: float
    q0: float
    delta1: tuple[float, ...]
    delta2: tuple[float, ...]

    @property
    def chi(self) -> float:
        return 1.0 if self.a == 1 else math.e / (2.0 * math.pi)

    def with_mean_snr(self, mean_snr: float) -> "CascadeParams":
        if not mean_snr > 0.0:
            raise ValueError(f"mean_snr must be positive, got {mean_snr!r}")
        return CascadeParams(self.zeta2, self.alpha, self.beta, self.a, mean_snr,
                             self.big_m, self.big_q, self.m0, self.q0,
                             self.delta1, self.delta2)


def rytov_variance(scenario: LinkScenario) -> float:
    """sigma_2^2 = 0.492 Cn^2 eta^(7/6) L^(11/6) with eta = 2 pi / lambda."""
    return 0.492 * scenario.cn2 * scenario.wavenumber ** (7.0 / 6.0) \
        * scenario.distance ** (11.0 / 6.0)


_SATURATION_EXPONENT = 1e-12


def alpha_beta(scenario: LinkScenario) -> TurbulenceState:
    """Gamma shape parameters from the Rytov variance.

    Both shapes are 1/(exp(x) - 1) for exponent arguments x built from
    sigma_2^2 and d = sqrt(eta D^2 / 4 L).  When an exponent argument
    underflows the shape is returned at the 1/x limit with the
    ``saturated`` flag set.  Note the beta exponent as implemented
    keeps the (1 + 0.69 sigma^{12/5})^{-5/6} factor in its numerator,
    so beta can exceed alpha at moderate turbulence strengths.
    """
    s2 = rytov_variance(scenario)
    if not s2 > 0.0:
        raise ValueError(f"rytov variance must be positive, got {s2!r}")
    d2 = scenario.wavenumber * scenario.aperture_diameter ** 2 / (4.0 * scenario.distance)
    d = math.sqrt(d2)
    s125 = s2 ** 2.4

    x_alpha = 0.49 * s2 / (1.0 + 0.18 * d2 + 0.56 * s125) ** (7.0 / 6.0)
    x_beta = 0.51 * s2 * (1.0 + 0.69 * s125) ** (-5.0 / 6.0) \
        / (1.0 + 0.90 * d2 + 0.62 * s125) ** (5.0 / 6.0)

    saturated = min(x_alpha, x_beta) < _SATURATION_EXPONENT
    alpha = 1.0 / x_alpha if x_alpha < _SATURATION_EXPONENT else 1.0 / math.expm1(x_alpha)
    beta = 1.0 / x_beta if x_beta < _SATURATION_EXPONENT else 1.0 / math.expm1(x_beta)
    return TurbulenceState(rytov=s2, d=d, alpha=alpha, beta=beta, saturated=saturated)


def pointing_state(scenario: LinkScenario) -> PointingState:
    """v = r sqrt(pi) / (sqrt(2) w_z) and A0 = erf(v)^2; zeta passes through."""
    v = scenario.receiver_radius * math.sqrt(math.pi) / (math.sqrt(2.0) * scenario.beam_waist)
    a0 = erf(v) ** 2
    return PointingState(v=v, a0=a0, zeta=scenario.zeta)


def path_loss(scenario: LinkScenario) -> float:
    """Beer-Lambert transmission exp(-attenuation * distance), in (0, 1]."""
    return math.exp(-scenario.attenuation * scenario.distance)


def cascade_params(turb: TurbulenceState, point: PointingState,
                   mode: DetectionMode, mean_snr_h: float,
                   mean_snr_g: float) -> CascadeParams:
    """Assemble the closed-form constants for the two-hop cascade.

    The Gauss-multiplication constants are

        M0 = M^2 a^(2(alpha+beta-1)) / (2 pi)^(2(a-1)),
        Q0 = Q^(2a) / a^(4a),

    both validated against direct quadrature of the CDF integral for
    a = 2 (the a = 1 case collapses to M0 = M^2, Q0 = Q^2).
    """
    if not (mean_snr_h > 0.0 and mean_snr_g > 0.0):
        raise ValueError("per-hop mean SNRs must be positive")
    a = mode.a
    zeta2 = point.zeta ** 2
    alpha, beta = turb.alpha, turb.beta

    log_gamma_ab = math.lgamma(alpha) + math.lgamma(beta)
    big_m = zeta2 / a * math.exp(-log_gamma_ab)
    big_q = zeta2 * alpha * beta / (1.0 + zeta2)
    m0 = big_m ** 2 * a ** (2.0 * (alpha + beta - 1.0)) \
        / (2.0 * math.pi) ** (2 * (a - 1))
    q0 = big_q ** (2 * a) / a ** (4 * a)

    delta1 = tuple((zeta2 + 1.0 + k) / a for k in range(a)) * 2
    delta2 = (tuple((zeta2 + k) / a for k in range(a))
              + tuple((alpha + k) / a for k in range(a))
              + tuple((beta + k) / a for k in range(a))) * 2

    return CascadeParams(zeta2=zeta2, alpha=alpha, beta=beta, a=a,
                         mean_snr=mean_snr_h * mean_snr_g,
                         big_m=big_m, big_q=big_q, m0=m0, q0=q0,
                         delta1=delta1, delta2=delta2)


def cascade_from_constants(alpha: float, beta: float, zeta: float,
                           mode: DetectionMode, mean_snr_h: float,
                           mean_snr_g: float) -> CascadeParams:
    """Cascade constants from (alpha, beta, zeta) given directly,
    bypassing the geometry-based derivation."""
    if not (alpha > 0.0 and beta > 0.0):
        raise ValueError("alpha and beta must be positive")
    turb = TurbulenceState(rytov=math.nan, d=math.nan, alpha=alpha, beta=beta)
    point = PointingState(v=math.nan, a0=0.5, zeta=zeta)
    return cascade_params(turb, point, mode, mean_snr_h, mean_snr_g)
