"""STAR-RIS assisted NOMA link-performance toolkit over Rician fading.

Analytical outage/rate/throughput expressions, their high-SNR laws, and
matched Monte Carlo estimators, plus an experiment runner that reproduces
the reference figure datasets.
"""

from .channel import (CascadeMoments, ChannelRealization, SystemConfig,
                      cascade_moments, cascade_pdf, path_gain,
                      sample_cascade_sum, sample_rician_amp)
from .errors import (CertainOutageWarning, ConfigError, NonConvergenceError,
                     QuadratureAccuracyError, SeriesDivergenceError,
                     ThetaSurrogateWarning)
from .experiments import CurveSet, ExperimentSpec, PerfPoint, run
from .montecarlo import (McEstimate, McSettings, estimate_outage,
                         estimate_rate, estimate_throughput, sinr_noma,
                         snr_oma)
from .presets import figure_preset, preset_names
from .quadrature import Family, QuadratureRule, chebyshev_rule, laguerre_rule
from .schemes import (AsymptoteKind, OmaUser, OutageScheme, RateScheme,
                      ThroughputMode)
from .specfun import (EvalOptions, bessel_i, bessel_k, gauss_2f1,
                      laguerre_half, lower_inc_gamma, marcum_q,
                      reg_lower_gamma, reg_upper_gamma)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
