"""End-to-end SNR statistics: closed forms versus quadrature and
sampling oracles.

The sub-channel test at the top is the keystone: it ties the unified
per-hop closed form to the raw physical model (pointing power law times
the product-of-gammas turbulence density) by direct integration, with
the intensity-to-SNR mapping gamma = gbar (I/E[I])^a.
"""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import kv as scipy_kv

from conftest import make_dist
from risfso.simulator import McChannel, sample_end_to_end_snr
from risfso.statistics import (
    RisElement,
    SnrDistribution,
    cdf,
    cdf_by_quadrature,
    mgf,
    mgf_by_quadrature,
    pdf,
    pdf_by_product_integral,
    pdf_by_substituted_integral,
    subchannel_pdf,
)

BLUE = (12.5331, 4.6787)
RED = (10.9537, 2.9833)


# ---------------------------------------------------------------------------
# keystone: per-hop closed form against the raw physical model


def _physical_hop_pdf(gamma: float, gbar: float, zeta: float, alpha: float,
                      beta: float, a: int, a0: float = 0.85) -> float:
    """Hop SNR density by integrating pointing x turbulence directly."""
    z2 = zeta ** 2
    lead = (2.0 * (alpha * beta) ** (0.5 * (alpha + beta))
            / (math.gamma(alpha) * math.gamma(beta)))

    def gg_density(x: float) -> float:
        return (lead * x ** (0.5 * (alpha + beta) - 1.0)
                * float(scipy_kv(alpha - beta, 2.0 * math.sqrt(alpha * beta * x))))

    def intensity_pdf(ix: float) -> float:
        def integrand(ip: float) -> float:
            return (z2 / a0 ** z2 * ip ** (z2 - 1.0)
                    * gg_density(ix / ip) / ip)
        val, _ = quad(integrand, 1e-12, a0, limit=300,
                      epsabs=1e-14, epsrel=1e-11)
        return val

    mean_intensity = a0 * z2 / (1.0 + z2)
    ix = mean_intensity * (gamma / gbar) ** (1.0 / a)
    jac = mean_intensity * (gamma / gbar) ** (1.0 / a) / (a * gamma)
    return intensity_pdf(ix) * jac


@pytest.mark.parametrize("a", [1, 2])
def test_subchannel_closed_form_matches_physical_integral(a):
    dist = make_dist(4.2, 2.5, 2.0, a, 17.0)  # mean 50.1 per hop product
    gbar_i = 50.0
    for ratio in (0.05, 1.0, 5.0):
        g = ratio * gbar_i
        want = _physical_hop_pdf(g, gbar_i, 2.0, 4.2, 2.5, a)
        got = subchannel_pdf(dist, g, gbar_i)
        assert got == pytest.approx(want, rel=1e-6), (a, ratio)


def test_subchannel_closed_form_matches_sampling():
    rng = np.random.default_rng(1234)
    n = 1_000_000
    zeta, alpha, beta, a, gbar_i = 2.0, 4.2, 2.5, 2, 50.0
    z2 = zeta ** 2
    ip_rel = rng.random(n) ** (1.0 / z2) * (1.0 + z2) / z2
    ia = rng.gamma(alpha, 1.0 / alpha, n) * rng.gamma(beta, 1.0 / beta, n)
    snr = gbar_i * (ip_rel * ia) ** a

    dist = make_dist(alpha, beta, zeta, a, 17.0)
    for t in (0.05 * gbar_i, gbar_i, 4.0 * gbar_i):
        want, _ = quad(lambda u: subchannel_pdf(dist, math.exp(u), gbar_i)
                       * math.exp(u), -34.0, math.log(t), limit=300,
                       epsabs=1e-12, epsrel=1e-9)
        emp = float(np.mean(snr <= t))
        sigma = math.sqrt(want * (1.0 - want) / n)
        assert abs(emp - want) <= 3.0 * sigma, (t, emp, want)


# ---------------------------------------------------------------------------
# cascade PDF


def test_pdf_normalizes():
    dist = make_dist(*BLUE, 6.1, 1, 20.0)
    val, _ = quad(lambda u: pdf(dist, math.exp(u)) * math.exp(u),
                  -25.0, math.log(dist.mean_snr) + 12.0,
                  points=[math.log(dist.mean_snr)], limit=400,
                  epsabs=1e-10, epsrel=1e-8)
    assert val == pytest.approx(1.0, abs=1e-4)


def test_pdf_matches_product_integral_on_grid():
    # the pre-closed-form product law, 20 log-spaced points
    dist = make_dist(*BLUE, 6.1, 1, 20.0)
    gbar = dist.mean_snr
    for ratio in np.logspace(-3.0, 3.0, 20):
        got = pdf(dist, ratio * gbar)
        want = pdf_by_product_integral(dist, ratio * gbar)
        assert got == pytest.approx(want, rel=1e-5), ratio


def test_pdf_matches_product_integral_imdd():
    dist = make_dist(4.9477, 1.2310, 1.1, 2, 20.0)
    gbar = dist.mean_snr
    for ratio in (0.01, 1.0, 100.0):
        got = pdf(dist, ratio * gbar)
        want = pdf_by_product_integral(dist, ratio * gbar)
        assert got == pytest.approx(want, rel=1e-5), ratio


@pytest.mark.parametrize("a", [1, 2])
def test_pdf_matches_substituted_integral(a):
    dist = make_dist(*RED, 6.1, a, 20.0)
    gbar = dist.mean_snr
    for ratio in (0.01, 1.0, 100.0):
        got = pdf(dist, ratio * gbar)
        want = pdf_by_substituted_integral(dist, ratio * gbar)
        assert got == pytest.approx(want, rel=1e-5), (a, ratio)


def test_substituted_integrand_nonnegative():
    # both G factors of the substituted integrand stay nonnegative
    from risfso.special import MeijerGSpec, meijer_g
    dist = make_dist(*RED, 6.1, 1, 20.0)
    p = dist.params
    gbar_i = math.sqrt(dist.mean_snr)
    c1 = p.big_q / gbar_i
    c2 = 1.0 / (p.big_q * math.sqrt(dist.mean_snr / dist.mean_snr))
    for x in np.logspace(-2, 2, 9):
        g1 = meijer_g(MeijerGSpec(3, 0, (p.zeta2 + 1.0,),
                                  (p.zeta2, p.alpha, p.beta), c1 * x)).value
        g2 = meijer_g(MeijerGSpec(0, 3,
                                  (1 - p.zeta2, 1 - p.alpha, 1 - p.beta),
                                  (-p.zeta2,), c2 * x)).value
        assert g1 >= -1e-12 and g2 >= -1e-12


def test_pdf_mc_histogram_agreement():
    dist = make_dist(*BLUE, 6.1, 1, 20.0)
    chan = McChannel(zeta2=6.1 ** 2, alpha=BLUE[0], beta=BLUE[1], a=1,
                     mean_snr_h=10.0, mean_snr_g=10.0)
    rng = np.random.default_rng(20240811)
    n = 1_000_000
    snr = sample_end_to_end_snr(chan, rng, n)
    edges = dist.mean_snr * np.logspace(-1.6, 0.9, 13)
    counts, _ = np.histogram(snr, bins=edges)
    for k in range(len(edges) - 1):
        mass = cdf(dist, float(edges[k + 1])) - cdf(dist, float(edges[k]))
        sigma = math.sqrt(mass * (1.0 - mass) / n)
        assert abs(counts[k] / n - mass) <= 3.0 * sigma, k


def test_pdf_scale_family():
    d1 = make_dist(*BLUE, 6.1, 1, 20.0)
    d2 = make_dist(*BLUE, 6.1, 1, 20.0 + 10.0 * math.log10(7.3))
    gbar = d1.mean_snr
    for ratio in (0.05, 1.0, 12.0):
        assert 7.3 * pdf(d2, 7.3 * ratio * gbar) \
            == pytest.approx(pdf(d1, ratio * gbar), rel=1e-9)


def test_pdf_guards_and_domain():
    dist = make_dist(*BLUE, 6.1, 1, 20.0)
    assert pdf(dist, dist.mean_snr * 1e-13) == 0.0
    assert pdf(dist, dist.mean_snr * 1e13) == 0.0
    with pytest.raises(ValueError):
        pdf(dist, 0.0)
    with pytest.raises(ValueError):
        pdf(dist, -1.0)


# ---------------------------------------------------------------------------
# cascade CDF


def test_cdf_endpoints_and_guards():
    dist = make_dist(*RED, 6.1, 1, 20.0)
    assert cdf(dist, 0.0) == 0.0
    assert cdf(dist, dist.mean_snr * 1e-13) == 0.0
    assert cdf(dist, dist.mean_snr * 1e13) == 1.0
    with pytest.raises(ValueError):
        cdf(dist, -0.5)


@pytest.mark.parametrize("a", [1, 2])
def test_cdf_matches_integrated_pdf_on_grid(a):
    dist = make_dist(*RED, 6.1, a, 20.0)
    gbar = dist.mean_snr
    for ratio in np.logspace(-3.0, 1.5, 30):
        got = cdf(dist, ratio * gbar)
        want = cdf_by_quadrature(dist, ratio * gbar)
        assert abs(got - want) <= 1e-5, (a, ratio, got, want)


def test_cdf_monotone_in_unit_interval():
    for a in (1, 2):
        dist = make_dist(4.9477, 1.2310, 1.1, a, 15.0)
        grid = dist.mean_snr * np.logspace(-4.0, 4.0, 40)
        vals = [cdf(dist, float(g)) for g in grid]
        assert all(v2 >= v1 - 1e-12 for v1, v2 in zip(vals, vals[1:]))
        assert all(-1e-9 <= v <= 1.0 + 1e-6 for v in vals)


def test_cdf_derivative_matches_pdf():
    dist = make_dist(*RED, 6.1, 1, 20.0)
    gbar = dist.mean_snr
    h = 1e-4
    for ratio in (0.05, 0.2, 1.0, 3.0):
        g = ratio * gbar
        fd = (cdf(dist, g * (1 + h)) - cdf(dist, g * (1 - h))) / (2.0 * g * h)
        want = pdf(dist, g)
        if want > 1e-8:
            assert fd == pytest.approx(want, rel=1e-3), ratio


# ---------------------------------------------------------------------------
# MGF


def test_mgf_small_s_limit():
    dist = make_dist(*BLUE, 6.1, 1, 20.0)
    assert mgf(dist, 1e-5 / dist.mean_snr) == pytest.approx(1.0, abs=1e-4)
    # the deep guard returns the limit outright
    assert mgf(dist, 1e-14 / dist.mean_snr) == 1.0


@pytest.mark.parametrize("a", [1, 2])
def test_mgf_matches_quadrature(a):
    dist = make_dist(*BLUE, 6.1, a, 20.0)
    for s in (0.01, 0.1, 1.0):
        got = mgf(dist, s)
        want = mgf_by_quadrature(dist, s)
        assert got == pytest.approx(want, rel=1e-5), (a, s)


def test_mgf_decreasing_in_unit_interval():
    dist = make_dist(*RED, 6.1, 2, 20.0)
    vals = [mgf(dist, s) for s in np.logspace(-3, 1.5, 15)]
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
    assert all(0.0 < v < 1.0 for v in vals)


def test_mgf_matches_sampling():
    dist = make_dist(*BLUE, 6.1, 1, 20.0)
    chan = McChannel(zeta2=6.1 ** 2, alpha=BLUE[0], beta=BLUE[1], a=1,
                     mean_snr_h=10.0, mean_snr_g=10.0)
    rng = np.random.default_rng(99)
    snr = sample_end_to_end_snr(chan, rng, 1_000_000)
    for s in (0.05, 0.5):
        vals = np.exp(-s * snr)
        want = mgf(dist, s)
        se = float(np.std(vals)) / math.sqrt(len(vals))
        assert abs(float(np.mean(vals)) - want) <= 3.0 * se, s


def test_mgf_domain():
    dist = make_dist(*BLUE, 6.1, 1, 20.0)
    with pytest.raises(ValueError):
        mgf(dist, 0.0)
    with pytest.raises(ValueError):
        mgf(dist, -1.0)


# ---------------------------------------------------------------------------
# distribution object


def test_spec_shapes_match_contract():
    dist = make_dist(*BLUE, 6.1, 1, 20.0)
    z2 = 6.1 ** 2
    spec = dist.pdf_spec(50.0)
    assert (spec.m, spec.n, spec.p, spec.q) == (6, 0, 2, 6)
    assert spec.a_params == (z2 + 1.0, z2 + 1.0)
    assert spec.b_params == (z2, BLUE[0], BLUE[1]) * 2
    assert spec.argument == pytest.approx(
        dist.params.big_q ** 2 * 50.0 / dist.mean_snr, rel=1e-14)

    spec = dist.cdf_spec(50.0)
    assert (spec.m, spec.n, spec.p, spec.q) == (6, 1, 3, 7)
    assert spec.a_params == (1.0,) + dist.params.delta1
    assert spec.b_params == dist.params.delta2 + (0.0,)

    dist2 = make_dist(*BLUE, 6.1, 2, 20.0)
    spec = dist2.cdf_spec(50.0)
    assert (spec.m, spec.n, spec.p, spec.q) == (12, 1, 5, 13)
    spec = dist2.mgf_spec(0.3)
    assert (spec.m, spec.n, spec.p, spec.q) == (12, 2, 6, 13)
    assert spec.a_params[:2] == (0.0, 1.0)


def test_reflection_amplitude_rescales_mean_snr():
    base = make_dist(*BLUE, 6.1, 1, 20.0)
    attenuated = SnrDistribution(base.params, RisElement(mu=0.8))
    equivalent = make_dist(*BLUE, 6.1, 1, 20.0 + 20.0 * math.log10(0.8))
    assert attenuated.mean_snr == pytest.approx(equivalent.mean_snr, rel=1e-12)
    for g in (5.0, 40.0):
        assert cdf(attenuated, g) == pytest.approx(cdf(equivalent, g),
                                                   rel=1e-10)


def test_ris_element_validation():
    with pytest.raises(ValueError):
        RisElement(mu=0.0)
    with pytest.raises(ValueError):
        RisElement(mu=1.2)
