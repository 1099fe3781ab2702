"""Sweep configuration, execution and CSV/JSON serialization.

A sweep is a grid over one variable (mean SNR in dB, outage threshold
in dB, or the pointing ratio zeta) evaluated for every scenario-metric
combination.  Evaluation failures at single grid points are recorded as
NaN gaps with a diagnostic in the curve metadata rather than aborting
the sweep.
"""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass

from .channel import DetectionMode, LinkScenario, alpha_beta, cascade_from_constants
from .metrics import (
    ModulationScheme,
    average_ber,
    ergodic_capacity,
    outage_probability,
)
from .simulator import McChannel, McConfig, estimate_metric
from .special import MeijerGError
from .statistics import RisElement, SnrDistribution, mgf

__all__ = [
    "ConfigError",
    "MetricCurve",
    "MetricSpec",
    "ScenarioSpec",
    "SweepSpec",
    "emit",
    "load_curves",
    "parse_config",
    "run_sweep",
]

VARIABLES = ("mean_snr_db", "gamma_th_db", "zeta")
INTERPRETATIONS = ("product", "per-hop")


class ConfigError(ValueError):
    """Schema violation; the message carries the offending field path."""


@dataclass(frozen=True)
class ScenarioSpec:
    """One resolved channel configuration for sweeping."""

    label: str
    alpha: float
    beta: float
    zeta: float
    detection: DetectionMode = DetectionMode.HD
    mean_snr_db: float | None = None
    mu: float = 1.0


@dataclass(frozen=True)
class MetricSpec:
    name: str
    gamma_th_db: float | None = None
    scheme: str | None = None
    s: float | None = None
    mc: bool = False
    samples: int = 200_000

    def label(self) -> str:
        parts = [self.name]
        if self.scheme:
            parts.append(self.scheme)
        if self.gamma_th_db is not None:
            parts.append(f"gth{self.gamma_th_db:g}dB")
        if self.s is not None:
            parts.append(f"s{self.s:g}")
        if self.mc:
            parts.append("mc")
        return "-".join(parts)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    step: float
    metrics: tuple[MetricSpec, ...]
    scenarios: tuple[ScenarioSpec, ...]
    gbar_interpretation: str = "product"
    seed: int = 0
    output_path: str | None = None
    output_format: str = "csv"

    def grid(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(n)]


@dataclass
class MetricCurve:
    x: list[float]
    y: list[float]
    meta: dict

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have equal length")


# ---------------------------------------------------------------------------
# config parsing


def _require(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise ConfigError(f"{path}: {msg}")


def _check_keys(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            warnings.warn(f"unknown key {path}.{key}", UserWarning)


def _parse_scenario(obj: dict, path: str) -> ScenarioSpec:
    from .presets import TABLE2  # local import to avoid a cycle

    _require(isinstance(obj, dict), path, "must be an object")
    allowed = {"label", "preset", "alpha", "beta", "zeta", "detection",
               "mean_snr_db", "mu", "wavelength_nm", "color", "distance_m",
               "aperture_diameter_mm", "cn2", "receiver_radius_m",
               "beam_waist_m", "attenuation_per_km"}
    _check_keys(obj, allowed, path)

    _require("zeta" in obj, path, "zeta is required")
    zeta = float(obj["zeta"])
    _require(zeta > 0, f"{path}.zeta", "must be > 0")
    detection = DetectionMode.from_name(str(obj.get("detection", "hd")))
    mean_snr_db = float(obj["mean_snr_db"]) if "mean_snr_db" in obj else None
    mu = float(obj.get("mu", 1.0))
    _require(0.0 < mu <= 1.0, f"{path}.mu", "must lie in (0, 1]")

    if "preset" in obj:
        name = str(obj["preset"])
        try:
            _, color, level = name.split("-")
            ab = TABLE2[(color, level)]
        except (ValueError, KeyError):
            raise ConfigError(
                f"{path}.preset: unknown preset {name!r}; expected "
                "table2-<red|blue|green>-<strong|moderate|weak>") from None
        alpha, beta = ab
    elif "alpha" in obj or "beta" in obj:
        _require("alpha" in obj and "beta" in obj, path,
                 "alpha and beta must be given together")
        alpha = float(obj["alpha"])
        beta = float(obj["beta"])
        _require(alpha > 0, f"{path}.alpha", "must be > 0")
        _require(beta > 0, f"{path}.beta", "must be > 0")
    elif "cn2" in obj:
        from .presets import WAVELENGTH_NM
        if "wavelength_nm" in obj:
            wl = float(obj["wavelength_nm"]) * 1e-9
        else:
            color = str(obj.get("color", "red"))
            _require(color in WAVELENGTH_NM, f"{path}.color",
                     f"must be one of {sorted(WAVELENGTH_NM)}")
            wl = WAVELENGTH_NM[color] * 1e-9
        scenario = LinkScenario(
            wavelength=wl,
            distance=float(obj.get("distance_m", 1000.0)),
            aperture_diameter=float(obj.get("aperture_diameter_mm", 1.0)) * 1e-3,
            cn2=float(obj["cn2"]),
            receiver_radius=float(obj.get("receiver_radius_m", 0.1)),
            beam_waist=float(obj.get("beam_waist_m", 1.0)),
            attenuation=float(obj.get("attenuation_per_km", 0.0)) * 1e-3,
            zeta=zeta,
            detection=detection,
        )
        turb = alpha_beta(scenario)
        alpha, beta = turb.alpha, turb.beta
    else:
        raise ConfigError(
            f"{path}: give a preset, (alpha, beta) constants, or cn2 geometry")

    label = str(obj.get("label", obj.get("preset", f"a{alpha:g}-b{beta:g}")))
    return ScenarioSpec(label=label, alpha=alpha, beta=beta, zeta=zeta,
                        detection=detection, mean_snr_db=mean_snr_db, mu=mu)


def _parse_metric(obj: dict, path: str, variable: str) -> MetricSpec:
    _require(isinstance(obj, dict), path, "must be an object")
    allowed = {"name", "gamma_th_db", "scheme", "s", "mc", "samples"}
    _check_keys(obj, allowed, path)
    _require("name" in obj, path, "name is required")
    name = str(obj["name"])
    _require(name in ("outage", "capacity", "ber", "mgf"), f"{path}.name",
             "must be one of outage, capacity, ber, mgf")
    gamma_th_db = float(obj["gamma_th_db"]) if "gamma_th_db" in obj else None
    scheme = str(obj["scheme"]).upper() if "scheme" in obj else None
    s = float(obj["s"]) if "s" in obj else None
    mc = bool(obj.get("mc", False))
    samples = int(obj.get("samples", 200_000))
    _require(samples >= 1, f"{path}.samples", "must be >= 1")
    if name == "outage" and variable != "gamma_th_db":
        _require(gamma_th_db is not None, path, "outage needs gamma_th_db")
    if name == "ber":
        _require(scheme is not None, path, "ber needs a scheme")
        ModulationScheme.from_name(scheme)
    if name == "mgf":
        _require(s is not None and s > 0, path, "mgf needs s > 0")
    return MetricSpec(name=name, gamma_th_db=gamma_th_db, scheme=scheme,
                      s=s, mc=mc, samples=samples)


def parse_config(path: str) -> SweepSpec:
    """Load and validate a sweep description from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    _require(isinstance(obj, dict), "<root>", "must be an object")
    _check_keys(obj, {"scenarios", "sweep"}, "<root>")
    _require("scenarios" in obj, "<root>", "scenarios is required")
    _require("sweep" in obj, "<root>", "sweep is required")

    raw_scenarios = obj["scenarios"]
    _require(isinstance(raw_scenarios, list) and raw_scenarios,
             "scenarios", "must be a nonempty list")
    scenarios = tuple(_parse_scenario(sc, f"scenarios[{i}]")
                      for i, sc in enumerate(raw_scenarios))

    sw = obj["sweep"]
    _require(isinstance(sw, dict), "sweep", "must be an object")
    _check_keys(sw, {"variable", "start", "stop", "step", "metrics",
                     "gbar_interpretation", "seed", "output", "format"}, "sweep")
    variable = str(sw.get("variable", "mean_snr_db"))
    _require(variable in VARIABLES, "sweep.variable",
             f"must be one of {VARIABLES}")
    for key in ("start", "stop", "step"):
        _require(key in sw, f"sweep.{key}", "is required")
    start, stop, step = float(sw["start"]), float(sw["stop"]), float(sw["step"])
    _require(step > 0, "sweep.step", "must be > 0")
    _require(stop >= start, "sweep.stop", "must be >= start")
    interp = str(sw.get("gbar_interpretation", "product"))
    _require(interp in INTERPRETATIONS, "sweep.gbar_interpretation",
             f"must be one of {INTERPRETATIONS}")
    raw_metrics = sw.get("metrics", [])
    _require(isinstance(raw_metrics, list), "sweep.metrics", "must be a list")
    metrics = tuple(_parse_metric(mt, f"sweep.metrics[{i}]", variable)
                    for i, mt in enumerate(raw_metrics))
    if variable != "mean_snr_db":
        for i, sc in enumerate(scenarios):
            _require(sc.mean_snr_db is not None, f"scenarios[{i}].mean_snr_db",
                     f"required when sweeping {variable}")
    return SweepSpec(variable=variable, start=start, stop=stop, step=step,
                     metrics=metrics, scenarios=scenarios,
                     gbar_interpretation=interp,
                     seed=int(sw.get("seed", 0)),
                     output_path=sw.get("output"),
                     output_format=str(sw.get("format", "csv")))


# ---------------------------------------------------------------------------
# execution


def _mean_snr_linear(x_db: float, interpretation: str) -> float:
    # per-hop: the axis shows one hop's mean SNR, both hops equal
    factor = 2.0 if interpretation == "per-hop" else 1.0
    return 10.0 ** (factor * x_db / 10.0)


def _distribution(sc: ScenarioSpec, mean_snr: float, zeta: float | None = None
                  ) -> SnrDistribution:
    params = cascade_from_constants(sc.alpha, sc.beta,
                                    zeta if zeta is not None else sc.zeta,
                                    sc.detection, math.sqrt(mean_snr),
                                    math.sqrt(mean_snr))
    return SnrDistribution(params, RisElement(mu=sc.mu))


def _eval_point(metric: MetricSpec, sc: ScenarioSpec, dist: SnrDistribution,
                gamma_th_db: float | None, seed: int) -> float:
    if metric.mc:
        chan = McChannel(zeta2=dist.params.zeta2, alpha=sc.alpha, beta=sc.beta,
                         a=sc.detection.a,
                         mean_snr_h=math.sqrt(dist.params.mean_snr),
                         mean_snr_g=math.sqrt(dist.params.mean_snr), mu=sc.mu)
        cfg = McConfig(sample_count=metric.samples, seed=seed)
        kw: dict = {}
        if metric.name == "outage":
            kw["gamma_th"] = 10.0 ** (gamma_th_db / 10.0)
        elif metric.name == "ber":
            sch = ModulationScheme.from_name(metric.scheme)
            kw.update(p=sch.p, q=sch.q)
        elif metric.name == "mgf":
            kw["s"] = metric.s
        return estimate_metric(metric.name, chan, cfg, **kw).mean
    if metric.name == "outage":
        return outage_probability(dist, 10.0 ** (gamma_th_db / 10.0))
    if metric.name == "capacity":
        return ergodic_capacity(dist)
    if metric.name == "ber":
        return average_ber(dist, ModulationScheme.from_name(metric.scheme))
    if metric.name == "mgf":
        return mgf(dist, metric.s)
    raise ConfigError(f"metric.name: unknown metric {metric.name!r}")


def run_sweep(spec: SweepSpec) -> list[MetricCurve]:
    """Evaluate every scenario-metric pair over the grid, in order."""
    grid = spec.grid()
    if not grid:
        return []
    curves: list[MetricCurve] = []
    for sc in spec.scenarios:
        for metric in spec.metrics:
            ys: list[float] = []
            failures: list[str] = []
            for x in grid:
                zeta = sc.zeta
                gamma_th_db = metric.gamma_th_db
                if spec.variable == "mean_snr_db":
                    mean_snr = _mean_snr_linear(x, spec.gbar_interpretation)
                else:
                    mean_snr = _mean_snr_linear(sc.mean_snr_db,
                                                spec.gbar_interpretation)
                    if spec.variable == "gamma_th_db":
                        gamma_th_db = x
                    else:
                        zeta = x
                try:
                    dist = _distribution(sc, mean_snr, zeta)
                    ys.append(float(_eval_point(metric, sc, dist,
                                                gamma_th_db, spec.seed)))
                except MeijerGError as exc:
                    ys.append(math.nan)
                    failures.append(f"x={x:g}: {exc}")
            meta = {
                "curve": f"{sc.label}|{metric.label()}",
                "label": sc.label,
                "metric": metric.name,
                "alpha": sc.alpha,
                "beta": sc.beta,
                "zeta": sc.zeta,
                "detection": "hd" if sc.detection is DetectionMode.HD else "imdd",
                "mu": sc.mu,
                "variable": spec.variable,
                "gbar_interpretation": spec.gbar_interpretation,
            }
            if sc.mean_snr_db is not None and spec.variable != "mean_snr_db":
                meta["mean_snr_db"] = sc.mean_snr_db
            if metric.gamma_th_db is not None or spec.variable == "gamma_th_db":
                meta["gamma_th_db"] = metric.gamma_th_db
            if metric.scheme is not None:
                meta["scheme"] = metric.scheme
            if metric.s is not None:
                meta["s"] = metric.s
            if metric.mc:
                meta["seed"] = spec.seed
                meta["samples"] = metric.samples
            if failures:
                meta["failures"] = "; ".join(failures)
            curves.append(MetricCurve(x=list(grid), y=ys, meta=meta))
    return curves


# ---------------------------------------------------------------------------
# serialization


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _curves_to_csv(curves: list[MetricCurve]) -> str:
    meta_keys = sorted({k for c in curves for k in c.meta} - {"curve"})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "curve"] + meta_keys)
    for c in curves:
        tail = [_fmt(c.meta[k]) if k in c.meta else "" for k in meta_keys]
        name = c.meta.get("curve", "")
        for xv, yv in zip(c.x, c.y):
            writer.writerow([_fmt(float(xv)), _fmt(float(yv)), name] + tail)
    return buf.getvalue()


def _curves_to_json(curves: list[MetricCurve]) -> str:
    payload = {"curves": [{"x": c.x, "y": c.y, "meta": c.meta} for c in curves]}
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def emit(curves: list[MetricCurve], fmt: str, path: str) -> None:
    """Write curves as CSV or canonical JSON; identical inputs yield
    byte-identical files."""
    if fmt == "csv":
        text = _curves_to_csv(curves)
    elif fmt == "json":
        text = _curves_to_json(curves)
    else:
        raise ConfigError(f"format: must be csv or json, got {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"output: cannot write {path!r} ({exc})") from None


def load_curves(path: str) -> list[MetricCurve]:
    """Read back curves from a JSON file written by emit()."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return [MetricCurve(x=c["x"], y=c["y"], meta=c["meta"])
            for c in payload["curves"]]
