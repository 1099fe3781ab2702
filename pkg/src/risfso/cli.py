"""Command-line interface.

Subcommands evaluate single statistics or metrics for one channel
configuration (given as constants, a bundled preset, or physical link
geometry), run Monte Carlo estimates, and execute sweeps that
regenerate the bundled figure datasets as CSV or JSON.

Mean SNRs and thresholds cross this boundary in dB; all internal
computation is linear.  Exit codes: 0 success, 1 configuration or
schema error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import presets
from .channel import (
    DetectionMode,
    LinkScenario,
    alpha_beta,
    cascade_from_constants,
    path_loss,
    pointing_state,
)
from .metrics import (
    ModulationScheme,
    asymptotic_ber,
    average_ber,
    ergodic_capacity,
    outage_probability,
)
from .simulator import McChannel, McConfig, estimate_metric
from .special import MeijerGError
from .statistics import RisElement, SnrDistribution, cdf, mgf, pdf
from .sweeps import ConfigError, emit, parse_config, run_sweep

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route usage errors to exit code 1
        raise ConfigError(message)


def _add_channel_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="table2-<color>-<level> constants")
    p.add_argument("--alpha", type=float, help="large-scale shape")
    p.add_argument("--beta", type=float, help="small-scale shape")
    p.add_argument("--zeta", type=float, required=True,
                   help="beam radius over pointing jitter")
    p.add_argument("--detection", default="hd", help="hd or imdd")
    p.add_argument("--mean-snr-db", type=float, required=True,
                   help="end-to-end (product) mean SNR in dB")
    p.add_argument("--mu", type=float, default=1.0,
                   help="reflection amplitude coefficient")
    p.add_argument("--format", default="json", choices=["json", "csv"])


def _distribution(args: argparse.Namespace) -> SnrDistribution:
    if args.preset:
        try:
            _, color, level = args.preset.split("-")
            alpha, beta = presets.TABLE2[(color, level)]
        except (ValueError, KeyError):
            raise ConfigError(f"unknown preset {args.preset!r}") from None
    elif args.alpha is not None and args.beta is not None:
        alpha, beta = args.alpha, args.beta
    else:
        raise ConfigError("give --preset or both --alpha and --beta")
    mode = DetectionMode.from_name(args.detection)
    gbar = 10.0 ** (args.mean_snr_db / 10.0)
    params = cascade_from_constants(alpha, beta, args.zeta, mode,
                                    math.sqrt(gbar), math.sqrt(gbar))
    return SnrDistribution(params, RisElement(mu=args.mu))


def _print_result(payload: dict, args: argparse.Namespace) -> None:
    if getattr(args, "format", None) == "csv":
        lines = ["key,value"] + [f"{k},{payload[k]}" for k in sorted(payload)]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _build_parser() -> _Parser:
    parser = _Parser(prog="risfso",
                     description="Reflected two-hop FSO link statistics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[], help="derive channel parameters "
                       "from physical link geometry")
    p.add_argument("--wavelength-nm", type=float)
    p.add_argument("--color", choices=sorted(presets.WAVELENGTH_NM))
    p.add_argument("--distance-m", type=float, default=1000.0)
    p.add_argument("--aperture-diameter-mm", type=float, default=1.0)
    p.add_argument("--cn2", type=float, required=True)
    p.add_argument("--receiver-radius-m", type=float, default=0.1)
    p.add_argument("--beam-waist-m", type=float, default=1.0)
    p.add_argument("--attenuation-per-km", type=float, default=0.0)
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--detection", default="hd")
    p.add_argument("--format", default="json", choices=["json", "csv"])
    p.add_argument("--out")

    for name, extra in (
        ("pdf", ("--gamma-db",)),
        ("cdf", ("--gamma-db",)),
        ("mgf", ("--s",)),
        ("outage", ()),
        ("capacity", ()),
        ("ber", ("--scheme",)),
        ("asymptote", ("--scheme",)),
    ):
        p = sub.add_parser(name, help=f"evaluate {name} for one configuration")
        _add_channel_args(p)
        p.add_argument("--out")
        if "--gamma-db" in extra:
            p.add_argument("--gamma-db", type=float, required=True)
        if "--s" in extra:
            p.add_argument("--s", type=float, required=True)
        if "--scheme" in extra:
            p.add_argument("--scheme", required=True,
                           choices=[s.name for s in ModulationScheme])
        if name == "outage":
            p.add_argument("--gamma-th-db", type=float)
            p.add_argument("--rate", type=float)
            p.add_argument("--rate-convention", default="exp2r-minus1-exponent",
                           choices=["exp2r-minus1-exponent", "exp2r-minus-1"])

    p = sub.add_parser("mc", help="Monte Carlo estimate of one metric")
    _add_channel_args(p)
    p.add_argument("--metric", required=True,
                   choices=["outage", "capacity", "ber", "mgf"])
    p.add_argument("--gamma-th-db", type=float)
    p.add_argument("--scheme", choices=[s.name for s in ModulationScheme])
    p.add_argument("--s", type=float)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=200_000)
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="run a grid sweep from a preset or config")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=presets.PRESET_NAMES)
    group.add_argument("--config", help="JSON sweep description")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default=None, choices=["csv", "json"])
    p.add_argument("--out")
    p.add_argument("--gbar-interpretation", default="product",
                   choices=["product", "per-hop"])
    return parser


def _run(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "params":
        if args.wavelength_nm is not None:
            wl = args.wavelength_nm * 1e-9
        elif args.color:
            wl = presets.WAVELENGTH_NM[args.color] * 1e-9
        else:
            raise ConfigError("give --wavelength-nm or --color")
        try:
            scenario = LinkScenario(
                wavelength=wl, distance=args.distance_m,
                aperture_diameter=args.aperture_diameter_mm * 1e-3,
                cn2=args.cn2, receiver_radius=args.receiver_radius_m,
                beam_waist=args.beam_waist_m,
                attenuation=args.attenuation_per_km * 1e-3,
                zeta=args.zeta,
                detection=DetectionMode.from_name(args.detection))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        turb = alpha_beta(scenario)
        point = pointing_state(scenario)
        _print_result({
            "rytov_variance": turb.rytov, "d": turb.d,
            "alpha": turb.alpha, "beta": turb.beta,
            "saturated": turb.saturated,
            "v": point.v, "a0": point.a0, "zeta": point.zeta,
            "path_loss": path_loss(scenario),
        }, args)
        return 0

    if cmd in ("pdf", "cdf", "mgf", "outage", "capacity", "ber", "asymptote"):
        dist = _distribution(args)
        if cmd == "pdf":
            value = pdf(dist, 10.0 ** (args.gamma_db / 10.0))
        elif cmd == "cdf":
            value = cdf(dist, 10.0 ** (args.gamma_db / 10.0))
        elif cmd == "mgf":
            if not args.s > 0:
                raise ConfigError("--s must be > 0")
            value = mgf(dist, args.s)
        elif cmd == "outage":
            gth = 10.0 ** (args.gamma_th_db / 10.0) \
                if args.gamma_th_db is not None else None
            value = outage_probability(dist, gth, rate=args.rate,
                                       rate_convention=args.rate_convention)
        elif cmd == "capacity":
            value = ergodic_capacity(dist)
        elif cmd == "ber":
            value = average_ber(dist, ModulationScheme.from_name(args.scheme))
        else:
            report = asymptotic_ber(dist,
                                    ModulationScheme.from_name(args.scheme))
            _print_result({
                "diversity_order": report.diversity_order,
                "coding_gain": report.coding_gain,
                "ber_asymptote": report.ber_estimate,
                "mean_snr_db": args.mean_snr_db,
            }, args)
            return 0
        _print_result({"value": value}, args)
        return 0

    if cmd == "mc":
        dist = _distribution(args)
        chan = McChannel(zeta2=args.zeta ** 2,
                         alpha=dist.params.alpha, beta=dist.params.beta,
                         a=dist.params.a,
                         mean_snr_h=math.sqrt(dist.params.mean_snr),
                         mean_snr_g=math.sqrt(dist.params.mean_snr),
                         mu=args.mu)
        kw: dict = {}
        if args.metric == "outage":
            if args.gamma_th_db is None:
                raise ConfigError("mc outage needs --gamma-th-db")
            kw["gamma_th"] = 10.0 ** (args.gamma_th_db / 10.0)
        elif args.metric == "ber":
            if not args.scheme:
                raise ConfigError("mc ber needs --scheme")
            sch = ModulationScheme.from_name(args.scheme)
            kw.update(p=sch.p, q=sch.q)
        elif args.metric == "mgf":
            if args.s is None or not args.s > 0:
                raise ConfigError("mc mgf needs --s > 0")
            kw["s"] = args.s
        cfg = McConfig(sample_count=args.samples, seed=args.seed,
                       batch_size=args.batch_size)
        est = estimate_metric(args.metric, chan, cfg, **kw)
        _print_result({"mean": est.mean, "std_error": est.std_error,
                       "sample_count": est.sample_count,
                       "seed": args.seed}, args)
        return 0

    if cmd == "sweep":
        if args.preset:
            spec = presets.figure_preset(args.preset,
                                         args.gbar_interpretation, args.seed)
            default_out = f"{args.preset}.{args.format or 'csv'}"
        else:
            spec = parse_config(args.config)
            spec = type(spec)(**{**spec.__dict__,
                                 "seed": args.seed,
                                 "gbar_interpretation": args.gbar_interpretation})
            default_out = spec.output_path or "sweep.csv"
        fmt = args.format or spec.output_format
        out = args.out or default_out
        curves = run_sweep(spec)
        emit(curves, fmt, out)
        sys.stdout.write(f"wrote {len(curves)} curve(s) to {out}\n")
        return 0

    raise ConfigError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except (ConfigError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (MeijerGError, ArithmeticError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
