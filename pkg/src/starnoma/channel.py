"""Channel statistics and variate generation.

Covers the Rician direct link, the per-element cascade (product of two
independent Rician amplitudes), the coherent-phase aggregate sums, and the
gamma (Laguerre-series) approximation of the cascade sum that all
closed-form outage/rate expressions build on.

Coherent phase shifting means every SINR depends on amplitude sums only,
so no complex phases are ever materialized: each Rician draw is two
standard normals folded into a magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, NonConvergenceError
from .specfun import EvalOptions, laguerre_half, log_bessel_k

_DEFAULT_OPTS = EvalOptions()


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SystemConfig:
    """Scenario parameters: geometry, fading, power split, targets.

    kappa and omega_i are linear quantities; dB inputs are converted at the
    CLI/config-file boundary (kappa = -5 dB -> 10**-0.5 here).  varpi is the
    residual-interference switch: 1 -> imperfect SIC, 0 -> perfect SIC.
    """

    d_sn: float = 10.0
    d_sr: float = 8.0
    d_rn: float = 6.0
    d_rm: float = 10.0
    alpha: float = 2.0
    kappa: float = 10.0 ** -0.5
    num_elements: int = 5
    a_n: float = 0.2
    a_m: float = 0.8
    rate_n: float = 0.5
    rate_m: float = 0.5
    omega_i: float = 1e-3
    varpi: int = 1

    def __post_init__(self):
        for name in ("d_sn", "d_sr", "d_rn", "d_rm"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0")
        if not (self.a_n + self.a_m == 1.0 or
                abs(self.a_n + self.a_m - 1.0) < 1e-12):
            raise ConfigError("power split must satisfy a_n + a_m = 1")
        if not (0.0 < self.a_n < self.a_m < 1.0):
            raise ConfigError("power split must satisfy 0 < a_n < a_m < 1")
        if self.kappa < 0:
            raise ConfigError("kappa must be >= 0")
        if int(self.num_elements) != self.num_elements or self.num_elements < 1:
            raise ConfigError("num_elements must be a positive integer")
        if not (self.rate_n > 0 and self.rate_m > 0):
            raise ConfigError("target rates must be > 0")
        if self.omega_i < 0:
            raise ConfigError("omega_i must be >= 0")
        if self.varpi not in (0, 1):
            raise ConfigError("varpi must be 0 or 1")

    # path gains
    @property
    def g_sn(self) -> float:
        return path_gain(self.d_sn, self.alpha)

    @property
    def g_sr(self) -> float:
        return path_gain(self.d_sr, self.alpha)

    @property
    def g_rn(self) -> float:
        return path_gain(self.d_rn, self.alpha)

    @property
    def g_rm(self) -> float:
        return path_gain(self.d_rm, self.alpha)

    def moments_n(self) -> "CascadeMoments":
        return cascade_moments(self.g_sr, self.g_rn, self.kappa,
                               self.num_elements)

    def moments_m(self) -> "CascadeMoments":
        return cascade_moments(self.g_sr, self.g_rm, self.kappa,
                               self.num_elements)


@dataclass
class ChannelRealization:
    """One draw (or a batch) of every amplitude entering the SINRs."""

    h_sn_amp: np.ndarray | float
    cascade_n: np.ndarray | float
    cascade_m: np.ndarray | float
    h_i_sq: np.ndarray | float


@dataclass(frozen=True)
class CascadeMoments:
    """Per-element cascade moments and the matched gamma parameters.

    The K-element sum is approximated by Gamma(shape=phi+1, scale) with
    phi + 1 = K mu^2 / omega and scale = omega / mu, which reproduces the
    sum's mean K mu and variance K omega exactly.
    """

    mu: float
    omega: float
    phi: float
    scale: float

    @property
    def shape(self) -> float:
        return self.phi + 1.0

    def __post_init__(self):
        if not (self.mu > 0 and self.omega > 0):
            raise ValueError("moments must be positive")
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError("gamma parameters must be positive")


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


def path_gain(d: float, alpha: float) -> float:
    """Power-law path gain d^-alpha."""
    if not d > 0:
        raise ConfigError("distance must be > 0")
    return d ** -alpha


def rician_mean(g: float, kappa: float) -> float:
    """E|h| for a Rician amplitude with E|h|^2 = g:
    sqrt(pi g / (4 (kappa + 1))) L_{1/2}(-kappa)."""
    return math.sqrt(math.pi * g / (4.0 * (kappa + 1.0))) * laguerre_half(-kappa)


def cascade_moments(g_sr: float, g_rx: float, kappa: float,
                    k_elements: int) -> CascadeMoments:
    """Mean/variance of one cascade product and the gamma fit of the K-sum.

    mu    = pi sqrt(g_sr g_rx) / (4 (kappa+1)) * L_{1/2}(-kappa)^2
    omega = g_sr g_rx * (1 - pi^2 / (16 (1+kappa)^2) * L_{1/2}(-kappa)^4)
    """
    if not (g_sr > 0 and g_rx > 0):
        raise ConfigError("path gains must be > 0")
    if kappa < 0 or k_elements < 1:
        raise ConfigError("kappa >= 0 and k_elements >= 1 required")
    lag = laguerre_half(-kappa)
    mu = math.pi * math.sqrt(g_sr * g_rx) / (4.0 * (kappa + 1.0)) * lag**2
    omega = g_sr * g_rx * (
        1.0 - math.pi**2 / (16.0 * (1.0 + kappa) ** 2) * lag**4)
    phi = mu * mu * k_elements / omega - 1.0
    scale = omega / mu
    return CascadeMoments(mu=mu, omega=omega, phi=phi, scale=scale)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def _rician_params(g: float, kappa: float) -> tuple[float, float]:
    """(los, scale) such that |h| = scale * sqrt((z1+los)^2 + z2^2)."""
    return math.sqrt(2.0 * kappa), math.sqrt(g / (2.0 * (kappa + 1.0)))


def sample_rician_amp(g: float, kappa: float, rng: np.random.Generator,
                      size: int | None = None):
    """Draw |h| for a Rician channel with path gain g; scalar when ``size``
    is None, else a length-``size`` array."""
    if not g > 0:
        raise ConfigError("path gain must be > 0")
    if kappa < 0:
        raise ConfigError("kappa must be >= 0")
    n = 1 if size is None else int(size)
    los, scale = _rician_params(g, kappa)
    z = rng.standard_normal((2, n))
    amp = kernels.rician_amp(z[0], z[1], los, scale)
    return float(amp[0]) if size is None else amp


def sample_cascade_sum(k_elements: int, g_sr: float, g_rx: float,
                       kappa: float, rng: np.random.Generator,
                       size: int | None = None):
    """Draw sum_{k=1..K} |h_sr^k| |h_rx^k| (independent Rician factors)."""
    if k_elements < 1:
        raise ConfigError("k_elements must be >= 1")
    n = 1 if size is None else int(size)
    los, scale_sr = _rician_params(g_sr, kappa)
    _, scale_rx = _rician_params(g_rx, kappa)
    scale_prod = scale_sr * scale_rx
    total = np.zeros(n)
    for _ in range(k_elements):
        z = rng.standard_normal((4, n))
        kernels.cascade_accum(z[0], z[1], z[2], z[3], los, scale_prod, total)
    return float(total[0]) if size is None else total


def draw_realizations(cfg: SystemConfig, rng: np.random.Generator,
                      size: int) -> ChannelRealization:
    """Draw all amplitudes for ``size`` trials.

    Fixed consumption order of the stream (the reproducibility contract):
    direct-link normals, K reflect-side element quadruples, K transmit-side
    element quadruples, then the residual-interference exponentials.
    """
    n = int(size)
    kappa = cfg.kappa
    los = math.sqrt(2.0 * kappa)
    scale_sn = math.sqrt(cfg.g_sn / (2.0 * (kappa + 1.0)))
    scale_sr = math.sqrt(cfg.g_sr / (2.0 * (kappa + 1.0)))
    scale_rn = math.sqrt(cfg.g_rn / (2.0 * (kappa + 1.0)))
    scale_rm = math.sqrt(cfg.g_rm / (2.0 * (kappa + 1.0)))

    z = rng.standard_normal((2, n))
    h_sn = kernels.rician_amp(z[0], z[1], los, scale_sn)

    cascade_n = np.zeros(n)
    prod_n = scale_sr * scale_rn
    for _ in range(cfg.num_elements):
        z = rng.standard_normal((4, n))
        kernels.cascade_accum(z[0], z[1], z[2], z[3], los, prod_n, cascade_n)

    cascade_m = np.zeros(n)
    prod_m = scale_sr * scale_rm
    for _ in range(cfg.num_elements):
        z = rng.standard_normal((4, n))
        kernels.cascade_accum(z[0], z[1], z[2], z[3], los, prod_m, cascade_m)

    h_i_sq = rng.exponential(cfg.omega_i, n) if cfg.omega_i > 0 else np.zeros(n)
    return ChannelRealization(h_sn_amp=h_sn, cascade_n=cascade_n,
                              cascade_m=cascade_m, h_i_sq=h_i_sq)


# ---------------------------------------------------------------------------
# Cascade product density (series form; test-grade)
# ---------------------------------------------------------------------------


def cascade_pdf(x: float, g_sr: float, g_rx: float, kappa: float,
                opts: EvalOptions = _DEFAULT_OPTS) -> float:
    """Density of one cascade product |h_sr h_rx| at x > 0.

    Double power series over the two LoS expansions with a Bessel-K
    factor; terms are assembled in log space so small x and high series
    indices cannot overflow.  The samplers, not this series, feed the
    Monte Carlo path; this exists to validate them.
    """
    if not x > 0:
        raise ValueError("x must be > 0")
    if not (g_sr > 0 and g_rx > 0) or kappa < 0:
        raise ValueError("invalid parameters")
    gg = g_sr * g_rx
    c = 2.0 * (kappa + 1.0) / math.sqrt(gg)
    log_x = math.log(x)
    log_kp1 = math.log(kappa + 1.0)
    log_gg = math.log(gg)
    log_kappa = math.log(kappa) if kappa > 0 else -math.inf
    max_idx = 40  # series cap; early exit on negligible diagonals

    total = 0.0
    for s in range(0, 2 * max_idx + 1):
        diag = 0.0
        for i in range(max(0, s - max_idx), min(s, max_idx) + 1):
            j = s - i
            if kappa == 0.0 and s > 0:
                break
            log_term = (math.log(4.0) + (s + 1) * log_x
                        + (s + 2) * log_kp1
                        + (s * log_kappa if s else 0.0)
                        - 2.0 * kappa
                        - 2.0 * (math.lgamma(i + 1) + math.lgamma(j + 1))
                        - 0.5 * (s + 2) * log_gg
                        + log_bessel_k(i - j, c * x))
            diag += math.exp(log_term)
        total += diag
        if kappa == 0.0:
            break
        if s >= 2 and diag < opts.abs_tol * max(total, 1e-300):
            return total
    if kappa > 0.0:
        raise NonConvergenceError("cascade_pdf series truncated at cap")
    return total
