"""Figure presets: one ExperimentSpec per results figure.

Caption-stated parameters are mirrored exactly (kappa = -5 dB means
10**-0.5 linear, residual-interference power -30 dB means 1e-3).  Where a
caption leaves a sweep implicit, the values used here are noted inline.
SNR grids default to 0-40 dB in 2 dB steps, extended to 60 dB for figures
that carry floors or asymptotes.
"""

from __future__ import annotations

from .channel import SystemConfig
from .errors import ConfigError
from .experiments import ExperimentSpec
from .montecarlo import McSettings

TABLE_DEFAULTS = dict(
    d_sn=10.0, d_sr=8.0, d_rn=6.0, d_rm=10.0, alpha=2.0,
    a_n=0.2, a_m=0.8, rate_n=0.5, rate_m=0.5,
    kappa=10.0 ** -0.5, omega_i=1e-3,
)

_MC = McSettings(trials=1_000_000, seed=0)


def _grid(start, stop, step):
    out = []
    v = start
    while v <= stop + 1e-9:
        out.append(round(v, 6))
        v += step
    return tuple(out)


def _both(*labels):
    out = []
    for label in labels:
        out.append(label + "/analytic")
        out.append(label + "/mc")
    return out


def _spec(cfg, grid, schemes, mc=_MC, name=None):
    return ExperimentSpec(config=cfg, snr_grid_db=grid,
                          schemes=tuple(schemes), mc=mc,
                          output_path=None, format="csv")


def _fig2():
    # K = 5, kappa = -5 dB, R_n = R_m = 0.5 BPCU; the nine drawn curves:
    # five analysis lines, three asymptotes, simulation markers.
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=5)
    schemes = _both("noma_n_ipsic", "noma_n_psic", "noma_m",
                    "oma_n", "oma_m") + [
        "noma_n_ipsic/asymptotic", "noma_n_psic/asymptotic",
        "noma_m/asymptotic",
    ]
    return _spec(cfg, _grid(0, 60, 2), schemes)


def _fig3():
    # System outage vs the in-scope baselines (relay curves and the
    # imperfect-CSI variants have no model here and are excluded).
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=5)
    schemes = _both("system_noma_psic", "system_noma_ipsic", "system_oma")
    return _spec(cfg, _grid(0, 60, 2), schemes)


def _fig4():
    # R_n = R_m = 2 BPCU, residual interference -30 dB, K swept over 3/5/7.
    base = dict(TABLE_DEFAULTS)
    base.update(rate_n=2.0, rate_m=2.0)
    cfg = SystemConfig(**base, num_elements=5)
    schemes = []
    for k in (3, 5, 7):
        schemes += _both(f"noma_n_psic@K={k}", f"noma_m@K={k}")
    return _spec(cfg, _grid(0, 40, 2), schemes)


def _fig5():
    # Rician-factor sweep at K = 5: kappa = -40, 0, 5 dB.
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=5)
    schemes = []
    for kdb in (-40, 0, 5):
        schemes += _both(f"noma_n_psic@kappa_db={kdb}",
                         f"noma_m@kappa_db={kdb}")
    return _spec(cfg, _grid(0, 40, 2), schemes)


def _fig6():
    # Path-loss exponent sweep at R_n = R_m = 0.1 BPCU: alpha = 2, 2.5, 3.
    base = dict(TABLE_DEFAULTS)
    base.update(rate_n=0.1, rate_m=0.1)
    cfg = SystemConfig(**base, num_elements=5)
    schemes = []
    for a in (2.0, 2.5, 3.0):
        schemes += _both(f"noma_n_psic@alpha={a}", f"noma_m@alpha={a}")
    return _spec(cfg, _grid(0, 40, 2), schemes)


def _fig7():
    # Target-rate sweep: R_n = R_m = 0.1, 0.5, 1.5 BPCU.
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=5)
    schemes = []
    for r in (0.1, 0.5, 1.5):
        schemes += _both(f"noma_n_psic@R={r}", f"noma_m@R={r}")
    return _spec(cfg, _grid(0, 40, 2), schemes)


def _fig8():
    # Outage vs SNR and the power split a_n (analytic surfaces).  The split
    # sweep stays inside 0 < a_n < a_m (the 1/(gamma_th_m + 1) feasibility
    # bound for R_m = 0.5 sits at 0.707, beyond the NOMA ordering limit).
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=5)
    schemes = []
    for an_split in (0.05, 0.15, 0.25, 0.35, 0.45):
        schemes.append(f"noma_n_psic@a_n={an_split}/analytic")
        schemes.append(f"noma_m@a_n={an_split}/analytic")
    return _spec(cfg, _grid(0, 40, 4), schemes, mc=None)


def _fig9():
    # Ergodic rates at K = 20: analysis, Jensen upper bound, ceiling,
    # OMA baselines, ipSIC by simulation.
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=20)
    schemes = _both("rate_noma_n_psic", "rate_noma_m",
                    "rate_oma_n", "rate_oma_m") + [
        "rate_noma_n_upper/analytic",
        "rate_noma_m/asymptotic",
        "rate_noma_n_ipsic/mc",
    ]
    return _spec(cfg, _grid(0, 50, 2), schemes)


def _fig10():
    # Rate growth with the element count: K = 5, 10, 20.
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=5)
    schemes = []
    for k in (5, 10, 20):
        schemes += _both(f"rate_noma_n_psic@K={k}", f"rate_noma_m@K={k}")
    return _spec(cfg, _grid(0, 50, 2), schemes)


def _fig11():
    # Delay-limited throughput, K = 5, R_n = R_m = 0.5 BPCU.
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=5)
    schemes = _both("thr_dl_psic", "thr_dl_ipsic", "thr_dl_oma")
    return _spec(cfg, _grid(0, 40, 2), schemes)


def _fig12():
    # Delay-tolerant throughput, K = 5; ipSIC rate is simulation-only.
    cfg = SystemConfig(**TABLE_DEFAULTS, num_elements=5)
    schemes = _both("thr_dt_psic", "thr_dt_oma") + ["thr_dt_ipsic/mc"]
    return _spec(cfg, _grid(0, 40, 2), schemes)


_PRESETS = {
    "fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "fig5": _fig5,
    "fig6": _fig6, "fig7": _fig7, "fig8": _fig8, "fig9": _fig9,
    "fig10": _fig10, "fig11": _fig11, "fig12": _fig12,
}


def preset_names() -> list[str]:
    return sorted(_PRESETS, key=lambda s: int(s[3:]))


def figure_preset(name: str) -> ExperimentSpec:
    """Fully-populated experiment spec reproducing one figure's dataset."""
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; know {', '.join(preset_names())}")
    return factory()
