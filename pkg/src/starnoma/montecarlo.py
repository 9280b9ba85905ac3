"""Ground-truth estimators: simulate the instantaneous SINRs and estimate
outage probability, ergodic rate, and throughput with confidence intervals.

Reproducibility model
---------------------
Trials are split into fixed 65536-trial chunks.  Chunk c of a scenario
draws from a counter-based Philox stream keyed by (master seed, a stable
hash of the config, c), so estimates are bit-identical for a given seed
regardless of worker count, call order, or whether a point is simulated
alone or as part of an SNR sweep.  Fading amplitudes do not depend on the
SNR, so one amplitude pass serves a whole SNR grid (common random numbers
across the sweep).
"""

from __future__ import annotations

import hashlib
import math
import struct
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .channel import ChannelRealization, SystemConfig, draw_realizations
from .errors import ConfigError
from .schemes import OutageScheme, RateScheme, ThroughputMode

CHUNK_SIZE = 65536
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class McSettings:
    """Monte Carlo controls; 10^6 trials is the reference setting."""

    trials: int = 1_000_000
    seed: int = 0
    confidence: float = 0.95

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not (0.0 < self.confidence < 1.0):
            raise ConfigError("confidence must lie in (0, 1)")


@dataclass(frozen=True)
class McEstimate:
    value: float
    half_width: float
    trials_used: int

    def __post_init__(self):
        if self.half_width < 0:
            raise ValueError("half_width must be >= 0")


# ---------------------------------------------------------------------------
# SINR expressions
# ---------------------------------------------------------------------------


def sinr_noma(real: ChannelRealization, cfg: SystemConfig, rho: float):
    """NOMA SINRs (gamma_n_to_m, gamma_n, gamma_m).

    gamma_n uses cfg.varpi: residual interference enters only under ipSIC.
    """
    a = real.h_sn_amp + real.cascade_n
    c = real.cascade_m
    a2r = a * a * rho
    c2r = c * c * rho
    g_n2m = a2r * cfg.a_m / (a2r * cfg.a_n + 1.0)
    g_n = a2r * cfg.a_n / (cfg.varpi * real.h_i_sq * rho + 1.0)
    g_m = c2r * cfg.a_m / (c2r * cfg.a_n + 1.0)
    return g_n2m, g_n, g_m


def snr_oma(real: ChannelRealization, cfg: SystemConfig, rho: float):
    """OMA detection SNRs (gamma_n_oma, gamma_m_oma)."""
    a = real.h_sn_amp + real.cascade_n
    c = real.cascade_m
    return a * a * rho * cfg.a_n, c * c * rho * cfg.a_m


# ---------------------------------------------------------------------------
# Chunked simulation engine
# ---------------------------------------------------------------------------


def _cfg_stream_words(cfg: SystemConfig) -> tuple[int, int]:
    """Stable 128-bit hash of the scenario; part of every stream key."""
    payload = struct.pack(
        "<12dq",
        cfg.d_sn, cfg.d_sr, cfg.d_rn, cfg.d_rm, cfg.alpha, cfg.kappa,
        cfg.a_n, cfg.a_m, cfg.rate_n, cfg.rate_m, cfg.omega_i,
        float(cfg.varpi), cfg.num_elements,
    )
    digest = hashlib.blake2b(payload, digest_size=16).digest()
    return struct.unpack("<QQ", digest)


def _chunk_rng(cfg: SystemConfig, seed: int, chunk: int) -> np.random.Generator:
    w0, w1 = _cfg_stream_words(cfg)
    ss = np.random.SeedSequence(entropy=(int(seed) & (2**64 - 1), w0, w1, chunk))
    return np.random.Generator(np.random.Philox(seed=ss))


def _sum_pair(values: np.ndarray) -> tuple[float, float]:
    return float(np.sum(values)), float(np.sum(values * values))


def _indicator_pair(mask: np.ndarray) -> tuple[float, float]:
    count = float(np.count_nonzero(mask))
    return count, count


def _chunk_metrics(real: ChannelRealization, cfg: SystemConfig,
                   rho: float) -> dict[str, tuple[float, float]]:
    """(sum, sum of squares) of each per-trial metric over one chunk."""
    th_n = 2.0 ** cfg.rate_n - 1.0
    th_m = 2.0 ** cfg.rate_m - 1.0
    th_n_oma = 2.0 ** (2.0 * cfg.rate_n) - 1.0
    th_m_oma = 2.0 ** (2.0 * cfg.rate_m) - 1.0

    a = real.h_sn_amp + real.cascade_n
    c = real.cascade_m
    a2r = a * a * rho
    c2r = c * c * rho

    g_n2m = a2r * cfg.a_m / (a2r * cfg.a_n + 1.0)
    g_n_ipsic = a2r * cfg.a_n / (real.h_i_sq * rho + 1.0)
    g_n_psic = a2r * cfg.a_n
    g_m = c2r * cfg.a_m / (c2r * cfg.a_n + 1.0)
    g_n_oma = a2r * cfg.a_n
    g_m_oma = c2r * cfg.a_m

    # outage events; user n fails if it cannot decode x_m or then x_n
    miss_m_at_n = g_n2m < th_m
    out_n_ipsic = miss_m_at_n | (g_n_ipsic < th_n)
    out_n_psic = miss_m_at_n | (g_n_psic < th_n)
    out_m = g_m < th_m
    out_n_oma = g_n_oma < th_n_oma
    out_m_oma = g_m_oma < th_m_oma

    rate_n_ipsic = np.log2(1.0 + g_n_ipsic)
    rate_n_psic = np.log2(1.0 + g_n_psic)
    rate_m = np.log2(1.0 + g_m)
    rate_n_oma = 0.5 * np.log2(1.0 + g_n_oma)
    rate_m_oma = 0.5 * np.log2(1.0 + g_m_oma)

    ok_m = ~out_m
    dl_ipsic = cfg.rate_n * (~out_n_ipsic) + cfg.rate_m * ok_m
    dl_psic = cfg.rate_n * (~out_n_psic) + cfg.rate_m * ok_m
    dt_psic = rate_n_psic + rate_m

    return {
        "out:" + OutageScheme.NOMA_N_IPSIC.value: _indicator_pair(out_n_ipsic),
        "out:" + OutageScheme.NOMA_N_PSIC.value: _indicator_pair(out_n_psic),
        "out:" + OutageScheme.NOMA_M.value: _indicator_pair(out_m),
        "out:" + OutageScheme.OMA_N.value: _indicator_pair(out_n_oma),
        "out:" + OutageScheme.OMA_M.value: _indicator_pair(out_m_oma),
        "out:" + OutageScheme.SYSTEM_NOMA_IPSIC.value:
            _indicator_pair(out_n_ipsic | out_m),
        "out:" + OutageScheme.SYSTEM_NOMA_PSIC.value:
            _indicator_pair(out_n_psic | out_m),
        "out:" + OutageScheme.SYSTEM_OMA.value:
            _indicator_pair(out_n_oma | out_m_oma),
        "rate:" + RateScheme.NOMA_N_IPSIC.value: _sum_pair(rate_n_ipsic),
        "rate:" + RateScheme.NOMA_N_PSIC.value: _sum_pair(rate_n_psic),
        "rate:" + RateScheme.NOMA_M.value: _sum_pair(rate_m),
        "rate:" + RateScheme.OMA_N.value: _sum_pair(rate_n_oma),
        "rate:" + RateScheme.OMA_M.value: _sum_pair(rate_m_oma),
        "thr:" + ThroughputMode.DELAY_LIMITED_IPSIC.value: _sum_pair(dl_ipsic),
        "thr:" + ThroughputMode.DELAY_LIMITED_PSIC.value: _sum_pair(dl_psic),
        "thr:" + ThroughputMode.DELAY_TOLERANT_PSIC.value: _sum_pair(dt_psic),
    }


def _chunk_task(cfg, seed, chunk_index, n, rhos):
    rng = _chunk_rng(cfg, seed, chunk_index)
    real = draw_realizations(cfg, rng, n)
    return [_chunk_metrics(real, cfg, rho) for rho in rhos]


def resolve_workers(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    import os

    env = os.environ.get("STARNOMA_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


_cache: dict[tuple, dict[float, dict]] = {}
_cache_lock = threading.Lock()


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def point_tallies(cfg: SystemConfig, rhos, mc: McSettings,
                  workers: int | None = None) -> dict[float, dict]:
    """Per-SNR tallies {rho: {series: (sum, sumsq)}} for ``mc.trials`` trials.

    Worker count never changes the result: chunks are keyed streams and the
    reduction runs in chunk order.
    """
    rhos = [float(r) for r in rhos]
    for rho in rhos:
        if not rho > 0:
            raise ConfigError("rho must be > 0")
    key = (cfg, mc.seed, mc.trials)
    with _cache_lock:
        have = _cache.setdefault(key, {})
        missing = [r for r in rhos if r not in have]
    if missing:
        n_chunks = (mc.trials + CHUNK_SIZE - 1) // CHUNK_SIZE
        sizes = [min(CHUNK_SIZE, mc.trials - i * CHUNK_SIZE)
                 for i in range(n_chunks)]
        nworkers = resolve_workers(workers)
        if nworkers > 1 and n_chunks > 1:
            with ThreadPoolExecutor(max_workers=nworkers) as pool:
                parts = list(pool.map(
                    lambda ic: _chunk_task(cfg, mc.seed, ic[0], ic[1], missing),
                    enumerate(sizes)))
        else:
            parts = [_chunk_task(cfg, mc.seed, i, n, missing)
                     for i, n in enumerate(sizes)]
        for j, rho in enumerate(missing):
            combined: dict[str, tuple[float, float]] = {}
            for part in parts:  # fixed chunk order
                for series, (s, ss) in part[j].items():
                    acc = combined.get(series, (0.0, 0.0))
                    combined[series] = (acc[0] + s, acc[1] + ss)
            with _cache_lock:
                _cache[key][rho] = combined
    with _cache_lock:
        return {rho: _cache[key][rho] for rho in rhos}


def _estimate_from_tallies(tally: tuple[float, float], n: int,
                           confidence: float) -> McEstimate:
    s, ss = tally
    mean = s / n
    var = max(ss - s * s / n, 0.0) / (n - 1) if n > 1 else 0.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    return McEstimate(value=mean, half_width=z * math.sqrt(var / n),
                      trials_used=n)


def _certain_outage_for_m(cfg: SystemConfig) -> bool:
    th_m = 2.0 ** cfg.rate_m - 1.0
    return cfg.a_m <= th_m * cfg.a_n


_M_EVENT_SCHEMES = (OutageScheme.NOMA_M, OutageScheme.SYSTEM_NOMA_IPSIC,
                    OutageScheme.SYSTEM_NOMA_PSIC)


def estimate_outage(cfg: SystemConfig, rho: float, scheme: OutageScheme,
                    mc: McSettings, workers: int | None = None) -> McEstimate:
    """Indicator-mean outage estimate for one scheme at transmit SNR rho."""
    if scheme in _M_EVENT_SCHEMES and _certain_outage_for_m(cfg):
        raise ConfigError(
            "a_m <= gamma_th_m * a_n: the distant user's outage is certain")
    tallies = point_tallies(cfg, [rho], mc, workers)[float(rho)]
    return _estimate_from_tallies(tallies["out:" + scheme.value], mc.trials,
                                  mc.confidence)


def estimate_rate(cfg: SystemConfig, rho: float, scheme: RateScheme,
                  mc: McSettings, workers: int | None = None) -> McEstimate:
    """Sample-mean ergodic rate (bits per channel use) for one scheme."""
    tallies = point_tallies(cfg, [rho], mc, workers)[float(rho)]
    return _estimate_from_tallies(tallies["rate:" + scheme.value], mc.trials,
                                  mc.confidence)


def estimate_throughput(cfg: SystemConfig, rho: float, mode: ThroughputMode,
                        mc: McSettings,
                        workers: int | None = None) -> McEstimate:
    """System throughput estimate: delay-limited from outage indicators,
    delay-tolerant as the summed ergodic rates."""
    tallies = point_tallies(cfg, [rho], mc, workers)[float(rho)]
    return _estimate_from_tallies(tallies["thr:" + mode.value], mc.trials,
                                  mc.confidence)
