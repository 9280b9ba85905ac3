"""Experiment runner: sweeps SNR grids over scheme series, with analytical,
asymptotic, and Monte Carlo provenances, and serializes curve sets to
CSV/JSON.

Series identifier grammar (the ``schemes`` entries):

    <scheme>[@key=value[,key=value...]][/<provenance>]

e.g. ``noma_n_psic/mc``, ``noma_m@K=3/analytic``, ``rate_noma_m/asymptotic``.
Overrides adjust the base config for that series only (K, kappa, kappa_db,
omega_i, omega_i_db, a_n, rate_n, rate_m, R, alpha, d_*); ``a_n`` keeps the
split normalized by setting a_m = 1 - a_n.  The CSV ``scheme`` column holds
the identifier without the provenance part.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field, replace

from . import analysis, montecarlo
from .channel import SystemConfig
from .errors import ConfigError
from .montecarlo import McSettings
from .schemes import AsymptoteKind, OmaUser, OutageScheme, RateScheme, ThroughputMode

PROVENANCES = ("analytic", "asymptotic", "mc")

CSV_HEADER = "scheme,rho_db,value,ci_halfwidth,provenance"


@dataclass(frozen=True)
class PerfPoint:
    rho_db: float
    value: float
    half_width: float
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ConfigError(f"unknown provenance {self.provenance!r}")


@dataclass
class CurveSet:
    """Labeled PerfPoint series; one label may mix provenances (analysis
    curve plus simulation markers)."""

    series: dict[str, list[PerfPoint]] = field(default_factory=dict)

    def add(self, label: str, point: PerfPoint) -> None:
        self.series.setdefault(label, []).append(point)

    def sort(self) -> None:
        for points in self.series.values():
            points.sort(key=lambda p: (p.provenance, p.rho_db))

    def labels(self) -> list[str]:
        return list(self.series)

    # -- serialization ------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for label, points in self.series.items():
            for p in points:
                writer.writerow([label, repr(float(p.rho_db)),
                                 repr(float(p.value)),
                                 repr(float(p.half_width)), p.provenance])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CurveSet":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if ",".join(header) != CSV_HEADER:
            raise ConfigError(f"unexpected CSV header {header!r}")
        out = cls()
        for row in reader:
            if not row:
                continue
            label, rho_db, value, hw, prov = row
            out.add(label, PerfPoint(float(rho_db), float(value),
                                     float(hw), prov))
        return out

    def to_json(self) -> str:
        payload = {
            label: [
                {"rho_db": p.rho_db, "value": p.value,
                 "ci_halfwidth": p.half_width, "provenance": p.provenance}
                for p in points
            ]
            for label, points in self.series.items()
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CurveSet":
        payload = json.loads(text)
        out = cls()
        for label, points in payload.items():
            for p in points:
                out.add(label, PerfPoint(p["rho_db"], p["value"],
                                         p["ci_halfwidth"], p["provenance"]))
        return out


@dataclass(frozen=True)
class ExperimentSpec:
    config: SystemConfig
    snr_grid_db: tuple[float, ...]
    schemes: tuple[str, ...]
    mc: McSettings | None = None
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("schemes must be nonempty")
        grid = tuple(float(g) for g in self.snr_grid_db)
        if any(b <= a for a, b in zip(grid, grid[1:])) or not grid:
            raise ConfigError("snr grid must be strictly increasing")
        object.__setattr__(self, "snr_grid_db", grid)
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be 'csv' or 'json'")


# ---------------------------------------------------------------------------
# Series identifiers
# ---------------------------------------------------------------------------

_OVERRIDE_KEYS = {
    "K": lambda cfg, v: replace(cfg, num_elements=int(v)),
    "kappa": lambda cfg, v: replace(cfg, kappa=float(v)),
    "kappa_db": lambda cfg, v: replace(cfg, kappa=10.0 ** (float(v) / 10.0)),
    "omega_i": lambda cfg, v: replace(cfg, omega_i=float(v)),
    "omega_i_db": lambda cfg, v: replace(cfg, omega_i=10.0 ** (float(v) / 10.0)),
    "a_n": lambda cfg, v: replace(cfg, a_n=float(v), a_m=1.0 - float(v)),
    "alpha": lambda cfg, v: replace(cfg, alpha=float(v)),
    "rate_n": lambda cfg, v: replace(cfg, rate_n=float(v)),
    "rate_m": lambda cfg, v: replace(cfg, rate_m=float(v)),
    "R": lambda cfg, v: replace(cfg, rate_n=float(v), rate_m=float(v)),
    "d_sn": lambda cfg, v: replace(cfg, d_sn=float(v)),
    "d_sr": lambda cfg, v: replace(cfg, d_sr=float(v)),
    "d_rn": lambda cfg, v: replace(cfg, d_rn=float(v)),
    "d_rm": lambda cfg, v: replace(cfg, d_rm=float(v)),
}


@dataclass(frozen=True)
class SeriesSpec:
    label: str          # scheme token plus overrides; the CSV scheme column
    scheme: str
    provenance: str
    overrides: tuple[tuple[str, str], ...]

    def apply_overrides(self, cfg: SystemConfig) -> SystemConfig:
        for key, value in self.overrides:
            cfg = _OVERRIDE_KEYS[key](cfg, value)
        return cfg


def parse_series(identifier: str) -> SeriesSpec:
    body, sep, prov = identifier.partition("/")
    provenance = prov if sep else "analytic"
    if provenance not in PROVENANCES:
        raise ConfigError(f"unknown provenance in {identifier!r}")
    scheme, sep, ov = body.partition("@")
    overrides: list[tuple[str, str]] = []
    if sep:
        for item in ov.split(","):
            key, eq, value = item.partition("=")
            if not eq or key not in _OVERRIDE_KEYS:
                raise ConfigError(f"bad override {item!r} in {identifier!r}")
            overrides.append((key, value))
    if scheme not in _SCHEME_REGISTRY:
        raise ConfigError(f"unknown scheme {scheme!r}")
    if provenance not in _SCHEME_REGISTRY[scheme]:
        raise ConfigError(
            f"scheme {scheme!r} has no {provenance!r} provenance")
    return SeriesSpec(label=body, scheme=scheme, provenance=provenance,
                      overrides=tuple(overrides))


# ---------------------------------------------------------------------------
# Scheme registry: (cfg, rho, mc, workers) -> (value, half_width)
# ---------------------------------------------------------------------------


def _ana(fn):
    def wrapped(cfg, rho, mc, workers):
        return fn(cfg, rho), 0.0
    return wrapped


def _asym(kind):
    def wrapped(cfg, rho, mc, workers):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return analysis.op_asym(cfg, rho, kind), 0.0
    return wrapped


def _mc_outage(scheme):
    def wrapped(cfg, rho, mc, workers):
        est = montecarlo.estimate_outage(cfg, rho, scheme, mc, workers)
        return est.value, est.half_width
    return wrapped


def _mc_rate(scheme):
    def wrapped(cfg, rho, mc, workers):
        est = montecarlo.estimate_rate(cfg, rho, scheme, mc, workers)
        return est.value, est.half_width
    return wrapped


def _mc_throughput(mode):
    def wrapped(cfg, rho, mc, workers):
        est = montecarlo.estimate_throughput(cfg, rho, mode, mc, workers)
        return est.value, est.half_width
    return wrapped


def _ana_system(op_n):
    def wrapped(cfg, rho, mc, workers):
        return analysis.op_system(op_n(cfg, rho),
                                  analysis.op_user_m(cfg, rho)), 0.0
    return wrapped


def _ana_system_oma(cfg, rho, mc, workers):
    return analysis.op_system(analysis.op_oma(cfg, rho, OmaUser.N),
                              analysis.op_oma(cfg, rho, OmaUser.M)), 0.0


def _ana_thr_dl_oma(cfg, rho, mc, workers):
    p_n = analysis.op_oma(cfg, rho, OmaUser.N)
    p_m = analysis.op_oma(cfg, rho, OmaUser.M)
    return (1.0 - p_n) * cfg.rate_n + (1.0 - p_m) * cfg.rate_m, 0.0


def _mc_thr_dl_oma(cfg, rho, mc, workers):
    e_n = montecarlo.estimate_outage(cfg, rho, OutageScheme.OMA_N, mc, workers)
    e_m = montecarlo.estimate_outage(cfg, rho, OutageScheme.OMA_M, mc, workers)
    value = (1.0 - e_n.value) * cfg.rate_n + (1.0 - e_m.value) * cfg.rate_m
    return value, cfg.rate_n * e_n.half_width + cfg.rate_m * e_m.half_width


def _ana_thr_dt_oma(cfg, rho, mc, workers):
    return (analysis.rate_oma(cfg, rho, OmaUser.N)
            + analysis.rate_oma(cfg, rho, OmaUser.M)), 0.0


def _mc_thr_dt_oma(cfg, rho, mc, workers):
    e_n = montecarlo.estimate_rate(cfg, rho, RateScheme.OMA_N, mc, workers)
    e_m = montecarlo.estimate_rate(cfg, rho, RateScheme.OMA_M, mc, workers)
    return e_n.value + e_m.value, e_n.half_width + e_m.half_width


def _mc_thr_dt_ipsic(cfg, rho, mc, workers):
    e_n = montecarlo.estimate_rate(cfg, rho, RateScheme.NOMA_N_IPSIC, mc, workers)
    e_m = montecarlo.estimate_rate(cfg, rho, RateScheme.NOMA_M, mc, workers)
    return e_n.value + e_m.value, e_n.half_width + e_m.half_width


def _rate_ceiling(cfg, rho, mc, workers):
    return analysis.rate_ceiling_user_m(cfg), 0.0


_SCHEME_REGISTRY: dict[str, dict[str, object]] = {
    "noma_n_ipsic": {
        "analytic": _ana(analysis.op_user_n_ipsic),
        "asymptotic": _asym(AsymptoteKind.IPSIC_FLOOR),
        "mc": _mc_outage(OutageScheme.NOMA_N_IPSIC),
    },
    "noma_n_psic": {
        "analytic": _ana(analysis.op_user_n_psic),
        "asymptotic": _asym(AsymptoteKind.PSIC_USER_N),
        "mc": _mc_outage(OutageScheme.NOMA_N_PSIC),
    },
    "noma_m": {
        "analytic": _ana(analysis.op_user_m),
        "asymptotic": _asym(AsymptoteKind.USER_M),
        "mc": _mc_outage(OutageScheme.NOMA_M),
    },
    "oma_n": {
        "analytic": _ana(lambda cfg, rho: analysis.op_oma(cfg, rho, OmaUser.N)),
        "mc": _mc_outage(OutageScheme.OMA_N),
    },
    "oma_m": {
        "analytic": _ana(lambda cfg, rho: analysis.op_oma(cfg, rho, OmaUser.M)),
        "mc": _mc_outage(OutageScheme.OMA_M),
    },
    "system_noma_ipsic": {
        "analytic": _ana_system(analysis.op_user_n_ipsic),
        "mc": _mc_outage(OutageScheme.SYSTEM_NOMA_IPSIC),
    },
    "system_noma_psic": {
        "analytic": _ana_system(analysis.op_user_n_psic),
        "mc": _mc_outage(OutageScheme.SYSTEM_NOMA_PSIC),
    },
    "system_oma": {
        "analytic": _ana_system_oma,
        "mc": _mc_outage(OutageScheme.SYSTEM_OMA),
    },
    "rate_noma_n_psic": {
        "analytic": _ana(analysis.rate_user_n_psic),
        "mc": _mc_rate(RateScheme.NOMA_N_PSIC),
    },
    "rate_noma_n_ipsic": {
        "mc": _mc_rate(RateScheme.NOMA_N_IPSIC),
    },
    "rate_noma_m": {
        "analytic": _ana(analysis.rate_user_m),
        "asymptotic": _rate_ceiling,
        "mc": _mc_rate(RateScheme.NOMA_M),
    },
    "rate_oma_n": {
        "analytic": _ana(lambda cfg, rho: analysis.rate_oma(cfg, rho, OmaUser.N)),
        "mc": _mc_rate(RateScheme.OMA_N),
    },
    "rate_oma_m": {
        "analytic": _ana(lambda cfg, rho: analysis.rate_oma(cfg, rho, OmaUser.M)),
        "mc": _mc_rate(RateScheme.OMA_M),
    },
    "rate_noma_n_upper": {
        "analytic": _ana(lambda cfg, rho: analysis.rate_upper_bound(
            cfg, rho, analysis.RateBound.NOMA_N)),
    },
    "rate_oma_n_upper": {
        "analytic": _ana(lambda cfg, rho: analysis.rate_upper_bound(
            cfg, rho, analysis.RateBound.OMA_N)),
    },
    "rate_oma_m_upper": {
        "analytic": _ana(lambda cfg, rho: analysis.rate_upper_bound(
            cfg, rho, analysis.RateBound.OMA_M)),
    },
    "thr_dl_ipsic": {
        "analytic": _ana(lambda cfg, rho: analysis.throughput(
            cfg, rho, ThroughputMode.DELAY_LIMITED_IPSIC)),
        "mc": _mc_throughput(ThroughputMode.DELAY_LIMITED_IPSIC),
    },
    "thr_dl_psic": {
        "analytic": _ana(lambda cfg, rho: analysis.throughput(
            cfg, rho, ThroughputMode.DELAY_LIMITED_PSIC)),
        "mc": _mc_throughput(ThroughputMode.DELAY_LIMITED_PSIC),
    },
    "thr_dt_psic": {
        "analytic": _ana(lambda cfg, rho: analysis.throughput(
            cfg, rho, ThroughputMode.DELAY_TOLERANT_PSIC)),
        "mc": _mc_throughput(ThroughputMode.DELAY_TOLERANT_PSIC),
    },
    "thr_dt_ipsic": {
        "mc": _mc_thr_dt_ipsic,
    },
    "thr_dl_oma": {
        "analytic": _ana_thr_dl_oma,
        "mc": _mc_thr_dl_oma,
    },
    "thr_dt_oma": {
        "analytic": _ana_thr_dt_oma,
        "mc": _mc_thr_dt_oma,
    },
}


def known_schemes() -> list[str]:
    return list(_SCHEME_REGISTRY)


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def run(spec: ExperimentSpec, workers: int | None = None) -> CurveSet:
    """Execute an experiment spec: one point per (series, SNR); results are
    deterministic given the seed.  Writes ``spec.output_path`` when set."""
    series_specs = [parse_series(s) for s in spec.schemes]
    rhos = [10.0 ** (db / 10.0) for db in spec.snr_grid_db]

    # Prefetch Monte Carlo tallies once per distinct config so a sweep does
    # a single amplitude pass per scenario.
    if spec.mc is not None:
        mc_cfgs = {s.apply_overrides(spec.config)
                   for s in series_specs if s.provenance == "mc"}
        for cfg in mc_cfgs:
            montecarlo.point_tallies(cfg, rhos, spec.mc, workers)

    curves = CurveSet()
    for s in series_specs:
        cfg = s.apply_overrides(spec.config)
        evaluate = _SCHEME_REGISTRY[s.scheme][s.provenance]
        if s.provenance == "mc" and spec.mc is None:
            raise ConfigError(
                f"series {s.label!r} needs Monte Carlo settings")
        for db, rho in zip(spec.snr_grid_db, rhos):
            value, hw = evaluate(cfg, rho, spec.mc, workers)
            curves.add(s.label, PerfPoint(rho_db=db, value=value,
                                          half_width=hw,
                                          provenance=s.provenance))
    curves.sort()

    if spec.output_path:
        text = curves.to_csv() if spec.format == "csv" else curves.to_json()
        with open(spec.output_path, "w") as fh:
            fh.write(text)
    return curves
