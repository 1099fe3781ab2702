"""Numeric kernels: gamma family, Bessel K, erf, Meijer-G."""
from .besselk import BesselDomainError, bessel_k
from .gammafn import GammaPoleError, erf, gamma_complex, gammaln_sign, loggamma_complex
from .meijerg import (
    ContourError,
    EvalResult,
    MeijerGError,
    MeijerGSpec,
    PoleCollisionError,
    SeriesDivergenceError,
    meijer_g,
    meijer_g_residue_series,
)
from .quadrature import QuadratureResult, gauss_kronrod

__all__ = [
    "BesselDomainError",
    "ContourError",
    "EvalResult",
    "GammaPoleError",
    "MeijerGError",
    "MeijerGSpec",
    "PoleCollisionError",
    "QuadratureResult",
    "SeriesDivergenceError",
    "bessel_k",
    "erf",
    "gamma_complex",
    "gammaln_sign",
    "gauss_kronrod",
    "loggamma_complex",
    "meijer_g",
    "meijer_g_residue_series",
]
