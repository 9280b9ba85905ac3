"""Monte Carlo estimator tests: SINR substitutions, cross checks against
the analytical layer, reproducibility, CI behavior, and scheme edge cases."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from starnoma import analysis, montecarlo
from starnoma.channel import (ChannelRealization, SystemConfig, cascade_pdf,
                              rician_mean)
from starnoma.errors import ConfigError
from starnoma.montecarlo import (McEstimate, McSettings, estimate_outage,
                                 estimate_rate, estimate_throughput,
                                 point_tallies, sinr_noma, snr_oma)
from starnoma.schemes import OutageScheme, RateScheme, ThroughputMode


def _real(a=0.0, cn=0.0, cm=0.0, hi=0.0):
    return ChannelRealization(h_sn_amp=a, cascade_n=cn, cascade_m=cm,
                              h_i_sq=hi)


# ---------------------------------------------------------------------------
# SINR expressions
# ---------------------------------------------------------------------------


def test_sinr_zero_channel():
    cfg = SystemConfig()
    assert sinr_noma(_real(), cfg, 10.0) == (0.0, 0.0, 0.0)
    assert snr_oma(_real(), cfg, 10.0) == (0.0, 0.0)


def test_sinr_psic_removes_interference_term():
    cfg = SystemConfig(varpi=0)
    g_n2m, g_n, g_m = sinr_noma(_real(a=1.0, hi=123.0), cfg, 2.0)
    assert g_n == pytest.approx(1.0 * 2.0 * cfg.a_n, rel=1e-15)


def test_sinr_direct_substitution():
    cfg = SystemConfig()
    g_n2m, _, _ = sinr_noma(_real(a=1.0), cfg, 1.0)
    assert g_n2m == pytest.approx(0.8 / 1.2, rel=1e-15)


def test_oma_substitution():
    cfg = SystemConfig()
    g_n, g_m = snr_oma(_real(a=2.0), cfg, 10.0)
    assert g_n == pytest.approx(8.0, rel=1e-15)


def test_oma_mean_matches_second_moment():
    cfg = SystemConfig()
    rho = 100.0
    mom = cfg.moments_n()
    k = cfg.num_elements
    mean_h = rician_mean(cfg.g_sn, cfg.kappa)
    second_moment = (cfg.g_sn + 2.0 * mean_h * k * mom.mu
                     + (k * mom.mu) ** 2 + k * mom.omega)
    from starnoma.channel import draw_realizations

    real = draw_realizations(cfg, np.random.default_rng(0), 10**6)
    g_n, _ = snr_oma(real, cfg, rho)
    assert float(np.mean(g_n)) == pytest.approx(
        second_moment * rho * cfg.a_n, rel=1e-2)


def test_aggregate_second_moment_mc_oracle():
    # E[(|h_sn| + cascade)^2] against 1e7 draws, the Jensen-bound bracket
    cfg = SystemConfig()
    mom = cfg.moments_n()
    k = cfg.num_elements
    mean_h = rician_mean(cfg.g_sn, cfg.kappa)
    expected = (cfg.g_sn + 2.0 * mean_h * k * mom.mu
                + (k * mom.mu) ** 2 + k * mom.omega)
    from starnoma.channel import draw_realizations

    real = draw_realizations(cfg, np.random.default_rng(42), 10**7)
    agg_sq = (real.h_sn_amp + real.cascade_n) ** 2
    assert float(agg_sq.mean()) == pytest.approx(expected, rel=5e-3)


# ---------------------------------------------------------------------------
# outage estimates
# ---------------------------------------------------------------------------


def test_outage_certain_at_vanishing_snr():
    cfg = SystemConfig()
    mc = McSettings(trials=20_000, seed=1)
    rho = 10.0 ** -6.0  # -60 dB
    for scheme in OutageScheme:
        est = estimate_outage(cfg, rho, scheme, mc)
        assert est.value == 1.0


def test_outage_cross_oracle_psic():
    cfg = SystemConfig()
    mc = McSettings(trials=400_000, seed=2)
    rho = 10.0 ** 2.5
    est = estimate_outage(cfg, rho, OutageScheme.NOMA_N_PSIC, mc)
    ana = analysis.op_user_n_psic(cfg, rho)
    assert abs(est.value - ana) <= max(2 * est.half_width, 0.05 * ana)


def test_system_outage_dominates_per_user():
    cfg = SystemConfig()
    mc = McSettings(trials=100_000, seed=3)
    rho = 10.0 ** 2.0
    per_user = max(
        estimate_outage(cfg, rho, OutageScheme.NOMA_N_PSIC, mc).value,
        estimate_outage(cfg, rho, OutageScheme.NOMA_M, mc).value)
    system = estimate_outage(cfg, rho, OutageScheme.SYSTEM_NOMA_PSIC, mc).value
    assert system >= per_user  # same realizations: exact union bound


def test_system_outage_matches_product_form():
    # user-n and user-m events depend on disjoint channel inputs, so the
    # jointly simulated system outage must match the marginal product
    # composition within Monte Carlo noise (a check, not an assumption)
    cfg = SystemConfig()
    mc = McSettings(trials=400_000, seed=21)
    rho = 10.0 ** 2.0
    p_n = estimate_outage(cfg, rho, OutageScheme.NOMA_N_PSIC, mc)
    p_m = estimate_outage(cfg, rho, OutageScheme.NOMA_M, mc)
    joint = estimate_outage(cfg, rho, OutageScheme.SYSTEM_NOMA_PSIC, mc)
    product = 1.0 - (1.0 - p_n.value) * (1.0 - p_m.value)
    tol = 3.0 * (p_n.half_width + p_m.half_width + joint.half_width)
    assert abs(joint.value - product) <= tol


def test_certain_outage_config_rejected():
    # R_m = 2.4 -> threshold 4.28 > a_m / a_n = 4: outage certain
    cfg = SystemConfig(rate_m=2.4)
    mc = McSettings(trials=1000, seed=4)
    for scheme in (OutageScheme.NOMA_M, OutageScheme.SYSTEM_NOMA_PSIC):
        with pytest.raises(ConfigError):
            estimate_outage(cfg, 100.0, scheme, mc)


def test_outage_monotone_in_snr():
    # amplitudes are shared across the sweep, so outage indicators are
    # exactly nonincreasing in rho
    cfg = SystemConfig()
    mc = McSettings(trials=100_000, seed=5)
    rhos = [10.0 ** (db / 10.0) for db in range(0, 42, 6)]
    tallies = point_tallies(cfg, rhos, mc)
    for scheme in (OutageScheme.NOMA_N_PSIC, OutageScheme.NOMA_M,
                   OutageScheme.OMA_N, OutageScheme.SYSTEM_NOMA_IPSIC):
        counts = [tallies[r]["out:" + scheme.value][0] for r in rhos]
        assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_seed_determinism_across_worker_counts():
    cfg = SystemConfig()
    mc = McSettings(trials=200_000, seed=6)
    rho = 10.0 ** 2.5

    montecarlo.clear_cache()
    first = estimate_outage(cfg, rho, OutageScheme.NOMA_N_PSIC, mc, workers=1)
    montecarlo.clear_cache()
    second = estimate_outage(cfg, rho, OutageScheme.NOMA_N_PSIC, mc, workers=4)
    montecarlo.clear_cache()
    assert first == second


def test_point_alone_equals_point_in_sweep():
    cfg = SystemConfig()
    mc = McSettings(trials=65_536, seed=7)
    rhos = [1.0, 10.0, 100.0]
    montecarlo.clear_cache()
    sweep = point_tallies(cfg, rhos, mc)[10.0]
    montecarlo.clear_cache()
    alone = point_tallies(cfg, [10.0], mc)[10.0]
    assert sweep == alone


def test_ipsic_error_floor_flat_at_high_snr():
    cfg = SystemConfig(omega_i=1e-2)
    mc = McSettings(trials=300_000, seed=8)
    e40 = estimate_outage(cfg, 1e4, OutageScheme.NOMA_N_IPSIC, mc)
    e50 = estimate_outage(cfg, 1e5, OutageScheme.NOMA_N_IPSIC, mc)
    assert abs(e50.value - e40.value) < 2 * (e40.half_width + e50.half_width)


def test_ci_coverage_against_exact_product_cdf():
    # K = 1 so the distant user's outage has an exact (non-approximated)
    # truth: the cascade-product CDF at sqrt(tau)
    cfg = SystemConfig(num_elements=1)
    rho = 10.0 ** 4.2
    th_m = 2.0 ** cfg.rate_m - 1.0
    tau = th_m / (rho * (cfg.a_m - th_m * cfg.a_n))
    truth, err = quad(
        lambda x: cascade_pdf(x, cfg.g_sr, cfg.g_rm, cfg.kappa),
        1e-12, math.sqrt(tau), limit=300)
    assert err < 1e-9
    covered = 0
    reps = 200
    for rep in range(reps):
        mc = McSettings(trials=16_384, seed=10_000 + rep)
        est = estimate_outage(cfg, rho, OutageScheme.NOMA_M, mc)
        if abs(est.value - truth) <= est.half_width:
            covered += 1
    assert covered >= 0.90 * reps


# ---------------------------------------------------------------------------
# rate estimates
# ---------------------------------------------------------------------------


def test_rate_vanishes_at_low_snr():
    cfg = SystemConfig()
    mc = McSettings(trials=20_000, seed=11)
    for scheme in RateScheme:
        est = estimate_rate(cfg, 1e-6, scheme, mc)
        assert est.value < 1e-4


def test_rate_user_m_ceiling():
    cfg = SystemConfig(num_elements=20)
    mc = McSettings(trials=400_000, seed=12)
    est = estimate_rate(cfg, 1e4, RateScheme.NOMA_M, mc)
    assert est.value == pytest.approx(math.log2(5.0), rel=1e-2)


def test_rate_cross_oracle_user_n_psic():
    cfg = SystemConfig(num_elements=20)
    mc = McSettings(trials=400_000, seed=13)
    rho = 10.0 ** 3.0
    est = estimate_rate(cfg, rho, RateScheme.NOMA_N_PSIC, mc)
    ana = analysis.rate_user_n_psic(cfg, rho)
    assert est.value == pytest.approx(ana, rel=2e-2)


def test_rate_ipsic_below_psic():
    cfg = SystemConfig()
    mc = McSettings(trials=100_000, seed=14)
    rho = 10.0 ** 3.0
    ipsic = estimate_rate(cfg, rho, RateScheme.NOMA_N_IPSIC, mc)
    psic = estimate_rate(cfg, rho, RateScheme.NOMA_N_PSIC, mc)
    assert ipsic.value < psic.value


# ---------------------------------------------------------------------------
# throughput estimates
# ---------------------------------------------------------------------------


def test_delay_limited_saturates_at_rate_sum():
    cfg = SystemConfig()
    mc = McSettings(trials=100_000, seed=15)
    est = estimate_throughput(cfg, 1e5, ThroughputMode.DELAY_LIMITED_PSIC, mc)
    assert est.value == pytest.approx(cfg.rate_n + cfg.rate_m, rel=1e-3)


def test_throughput_vanishes_at_low_snr():
    cfg = SystemConfig()
    mc = McSettings(trials=20_000, seed=16)
    for mode in ThroughputMode:
        assert estimate_throughput(cfg, 1e-6, mode, mc).value < 1e-3


def test_delay_limited_cross_composition():
    cfg = SystemConfig()
    mc = McSettings(trials=400_000, seed=17)
    rho = 10.0 ** 2.0
    est = estimate_throughput(cfg, rho, ThroughputMode.DELAY_LIMITED_PSIC, mc)
    composed = ((1.0 - analysis.op_user_n_psic(cfg, rho)) * cfg.rate_n
                + (1.0 - analysis.op_user_m(cfg, rho)) * cfg.rate_m)
    assert est.value == pytest.approx(composed, rel=5e-2)


# ---------------------------------------------------------------------------
# settings validation
# ---------------------------------------------------------------------------


def test_settings_validation():
    with pytest.raises(ConfigError):
        McSettings(trials=0)
    with pytest.raises(ConfigError):
        McSettings(confidence=1.0)
    with pytest.raises(ValueError):
        McEstimate(value=0.5, half_width=-0.1, trials_used=10)
    with pytest.raises(ConfigError):
        point_tallies(SystemConfig(), [0.0], McSettings(trials=10))
