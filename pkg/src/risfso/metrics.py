"""Link-level performance metrics on top of the SNR statistics.

Outage probability, ergodic capacity and average BER for the four
binary modulation schemes, each as a single Meijer-G closed form with a
direct-quadrature twin, plus the high-SNR asymptote with its diversity
order and coding gain.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .special import MeijerGSpec, meijer_g
from .special.gammafn import loggamma_complex, sinpi
from .statistics import SnrDistribution, cdf, pdf

__all__ = [
    "AsymptoteReport",
    "ModulationScheme",
    "average_ber",
    "average_ber_by_quadrature",
    "asymptotic_ber",
    "diversity_and_coding_gain",
    "ergodic_capacity",
    "ergodic_capacity_by_quadrature",
    "outage_probability",
    "solve_mean_snr_db",
]


class ModulationScheme(enum.Enum):
    """Binary schemes and their conditional-BER kernel exponents (p, q)."""

    CBFSK = (0.5, 0.5)
    NBFSK = (1.0, 0.5)
    CBPSK = (0.5, 1.0)
    DBPSK = (1.0, 1.0)

    @property
    def p(self) -> float:
        return self.value[0]

    @property
    def q(self) -> float:
        return self.value[1]

    @classmethod
    def from_name(cls, name: str) -> "ModulationScheme":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown modulation scheme {name!r}; "
                             f"choose from {[s.name for s in cls]}") from None


def outage_probability(dist: SnrDistribution, gamma_th: float | None = None, *,
                       rate: float | None = None,
                       rate_convention: str = "exp2r-minus1-exponent") -> float:
    """P(SNR < threshold).

    The threshold is given directly or derived from a target rate R.
    The default rate mapping is gamma_th = exp(2R - 1); the more common
    gamma_th = exp(2R) - 1 is available as ``rate_convention="exp2r-minus-1"``.
    """
    if (gamma_th is None) == (rate is None):
        raise ValueError("give exactly one of gamma_th or rate")
    if rate is not None:
        if rate_convention == "exp2r-minus1-exponent":
            gamma_th = math.exp(2.0 * rate - 1.0)
        elif rate_convention == "exp2r-minus-1":
            gamma_th = math.expm1(2.0 * rate)
        else:
            raise ValueError(f"unknown rate_convention {rate_convention!r}")
    if gamma_th < 0.0:
        raise ValueError(f"gamma_th must be nonnegative, got {gamma_th!r}")
    return cdf(dist, gamma_th)


def ergodic_capacity(dist: SnrDistribution) -> float:
    """Mean achievable rate E[log2(1 + chi * SNR)] in bits/s/Hz."""
    p = dist.params
    upper = (0.0, 1.0) + p.delta1
    lower = p.delta2 + (0.0, 0.0)
    z = p.q0 / (p.chi * dist.mean_snr)
    spec = MeijerGSpec(6 * p.a + 2, 1, upper, lower, z)
    lp = dist._log_m0 - math.log(math.log(2.0))
    return meijer_g(spec, log_prefactor=lp).value


def ergodic_capacity_by_quadrature(dist: SnrDistribution,
                                   rel_tol: float = 1e-9) -> float:
    """Capacity as the direct integral of log(1 + chi x) over the density."""
    p = dist.params
    chi = p.chi
    gbar = dist.mean_snr
    c = min(p.delta2)

    def integrand(u: float) -> float:
        g = gbar * math.exp(u)
        return math.log1p(chi * g) * pdf(dist, g) * g

    lo = -(80.0 / c + 20.0)
    hi = 20.0 * p.a
    val, _ = quad(integrand, lo, hi, points=[0.0], limit=400,
                  epsabs=1e-290, epsrel=rel_tol)
    return val / math.log(2.0)


def average_ber(dist: SnrDistribution, scheme: ModulationScheme) -> float:
    """Average bit error probability of the given binary scheme."""
    p = dist.params
    sp, sq = scheme.p, scheme.q
    upper = (1.0 - sp, 1.0) + p.delta1
    lower = p.delta2 + (0.0,)
    z = p.q0 / (sq * dist.mean_snr)
    spec = MeijerGSpec(6 * p.a, 2, upper, lower, z)
    lp = dist._log_m0 - math.log(2.0) - math.lgamma(sp)
    return meijer_g(spec, log_prefactor=lp).value


def average_ber_by_quadrature(dist: SnrDistribution, scheme: ModulationScheme,
                              rel_tol: float = 1e-9) -> float:
    """BER as the Laplace-kernel integral over the closed-form CDF.

    Substituting x = v^(1/p) absorbs the x^(p-1) weight, leaving
    (q^p / (2 Gamma(p) p)) * int_0^inf exp(-q v^(1/p)) F(v^(1/p)) dv.
    """
    sp, sq = scheme.p, scheme.q

    def integrand(v: float) -> float:
        if v <= 0.0:
            return 0.0
        g = v ** (1.0 / sp)
        return math.exp(-sq * g) * cdf(dist, g)

    v_hi = (45.0 / sq) ** sp
    val, _ = quad(integrand, 0.0, v_hi, points=[(1.0 / sq) ** sp],
                  limit=400, epsabs=1e-290, epsrel=rel_tol)
    return sq ** sp / (2.0 * math.gamma(sp) * sp) * val


@dataclass(frozen=True)
class AsymptoteReport:
    """High-SNR BER law P_b ~ (coding_gain * mean_snr)^(-diversity_order).

    ``term_weights`` are the per-exponent coefficients of the leading
    residue sum (coincident exponents separated as in the evaluator),
    ``exponents`` the matching separated decay orders.  The coding gain
    is the effective value at ``mean_snr``: the coincident-exponent
    pairs make the true prefactor drift logarithmically, so a single
    constant only holds pointwise.
    """

    diversity_order: float
    coding_gain: float
    term_weights: tuple[float, ...]
    exponents: tuple[float, ...]
    log_weights: tuple[float, ...]
    weight_signs: tuple[float, ...]
    log_prefactor: float
    kernel_scale: float
    argument_scale: float
    mean_snr: float
    ber_estimate: float

    def evaluate(self, mean_snr: float) -> float:
        """Asymptotic BER at another mean SNR."""
        lnw = math.log(self.kernel_scale * mean_snr / self.argument_scale)
        total = 0.0
        for lw, sg, ex in zip(self.log_weights, self.weight_signs, self.exponents):
            total += sg * math.exp(self.log_prefactor + lw - ex * lnw)
        return total


def _lg_sign_real(x: float) -> tuple[float, float]:
    if x > 0.0:
        return math.lgamma(x), 1.0
    s = float(sinpi(x))
    if s == 0.0:
        raise ValueError(f"gamma pole at {x:g} in asymptote weights")
    return (math.log(math.pi) - math.log(abs(s))
            - float(np.real(loggamma_complex(1.0 - x)))), math.copysign(1.0, s)


_EPS_SPREAD = 1e-6


def _spread_exponents(values: tuple[float, ...]) -> tuple[list[float], float]:
    """Separate coincident decay exponents; returns the smallest gap
    between distinct clusters as well."""
    vals = sorted(values)
    clusters: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        if abs(vals[i] - vals[i - 1]) < 1e-9:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    out = list(vals)
    for members in clusters:
        c = len(members)
        if c > 1:
            for rank, i in enumerate(members):
                out[i] = vals[i] + _EPS_SPREAD * (2 * rank - (c - 1))
    gaps = [vals[c2[0]] - vals[c1[-1]]
            for c1, c2 in zip(clusters[:-1], clusters[1:])]
    return out, (min(gaps) if gaps else math.inf)


def _asymptote_report(dist: SnrDistribution,
                      scheme: ModulationScheme) -> AsymptoteReport:
    p = dist.params
    sp, sq = scheme.p, scheme.q
    diversity = min(p.delta2)

    exps, min_gap = _spread_exponents(p.delta2)
    if min_gap < 1e-6:
        warnings.warn(
            f"decay exponents nearly degenerate (gap {min_gap:.2e}); "
            "asymptote term weights are ill-conditioned", RuntimeWarning)

    upper_tail = p.delta1  # entries 3..2a+2 of the BER G-function's upper row
    log_weights = []
    signs = []
    weights = []
    for k, dk in enumerate(exps):
        lw = math.lgamma(dk + sp) - math.log(dk)
        sg = 1.0
        for j, dj in enumerate(exps):
            if j == k:
                continue
            lg, s = _lg_sign_real(dj - dk)
            lw += lg
            sg *= s
        for a1 in upper_tail:
            lg, s = _lg_sign_real(a1 - dk)
            lw -= lg
            sg /= s
        log_weights.append(lw)
        signs.append(sg)
        weights.append(sg * math.exp(lw) if lw < 700.0 else sg * math.inf)

    log_pref = dist._log_m0 - math.log(2.0) - math.lgamma(sp)
    report = AsymptoteReport(
        diversity_order=diversity,
        coding_gain=math.nan,
        term_weights=tuple(weights),
        exponents=tuple(exps),
        log_weights=tuple(log_weights),
        weight_signs=tuple(signs),
        log_prefactor=log_pref,
        kernel_scale=sq,
        argument_scale=p.q0,
        mean_snr=dist.mean_snr,
        ber_estimate=math.nan,
    )
    est = report.evaluate(dist.mean_snr)
    gc = est ** (-1.0 / diversity) / dist.mean_snr if est > 0.0 else math.nan
    object.__setattr__(report, "ber_estimate", est)
    object.__setattr__(report, "coding_gain", gc)
    return report


def asymptotic_ber(dist: SnrDistribution,
                   scheme: ModulationScheme) -> AsymptoteReport:
    """Leading high-SNR expansion of the average BER.

    ``report.ber_estimate`` holds the asymptote at the distribution's
    own mean SNR; ``report.evaluate`` re-evaluates the sum elsewhere.
    """
    return _asymptote_report(dist, scheme)


def diversity_and_coding_gain(dist: SnrDistribution,
                              scheme: ModulationScheme) -> AsymptoteReport:
    """Diversity order (smallest decay exponent of the CDF parameter
    list) and the effective coding gain at the distribution's mean SNR."""
    return _asymptote_report(dist, scheme)


def solve_mean_snr_db(metric_at_mean_snr, target: float,
                      lo_db: float, hi_db: float,
                      tol_db: float = 1e-4) -> float:
    """Mean SNR in dB where a decreasing metric crosses ``target``.

    ``metric_at_mean_snr`` maps a linear mean SNR to the metric value.
    """
    f_lo = metric_at_mean_snr(10.0 ** (lo_db / 10.0))
    f_hi = metric_at_mean_snr(10.0 ** (hi_db / 10.0))
    if not (f_lo >= target >= f_hi):
        raise ValueError(
            f"target {target:g} not bracketed on [{lo_db:g}, {hi_db:g}] dB "
            f"(metric spans [{f_hi:g}, {f_lo:g}])")
    while hi_db - lo_db > tol_db:
        mid = 0.5 * (lo_db + hi_db)
        if metric_at_mean_snr(10.0 ** (mid / 10.0)) > target:
            lo_db = mid
        else:
            hi_db = mid
    return 0.5 * (lo_db + hi_db)
