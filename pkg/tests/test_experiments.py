"""Experiment runner, curve serialization, figure presets, and CLI tests."""

import json

import pytest

from starnoma import montecarlo
from starnoma.channel import SystemConfig
from starnoma.cli import main, parse_config_file
from starnoma.errors import ConfigError
from starnoma.experiments import (CSV_HEADER, CurveSet, ExperimentSpec,
                                  PerfPoint, known_schemes, parse_series, run)
from starnoma.montecarlo import McSettings
from starnoma.presets import figure_preset, preset_names

SMALL_MC = McSettings(trials=30_000, seed=5)


# ---------------------------------------------------------------------------
# series identifiers
# ---------------------------------------------------------------------------


def test_parse_series_forms():
    s = parse_series("noma_n_psic/mc")
    assert (s.scheme, s.provenance, s.overrides) == ("noma_n_psic", "mc", ())
    s = parse_series("noma_m@K=3,kappa_db=-5/analytic")
    assert s.scheme == "noma_m"
    assert s.label == "noma_m@K=3,kappa_db=-5"
    cfg = s.apply_overrides(SystemConfig())
    assert cfg.num_elements == 3
    assert cfg.kappa == pytest.approx(10.0 ** -0.5)


def test_parse_series_defaults_to_analytic():
    assert parse_series("oma_n").provenance == "analytic"


def test_parse_series_rejects_unknown():
    with pytest.raises(ConfigError):
        parse_series("bogus_scheme")
    with pytest.raises(ConfigError):
        parse_series("noma_n_psic/wild_guess")
    with pytest.raises(ConfigError):
        parse_series("noma_n_psic@nope=1")
    with pytest.raises(ConfigError):
        parse_series("rate_noma_n_ipsic/analytic")  # mc-only scheme


def test_override_power_split_stays_normalized():
    cfg = parse_series("noma_m@a_n=0.3").apply_overrides(SystemConfig())
    assert cfg.a_n + cfg.a_m == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# curve serialization
# ---------------------------------------------------------------------------


def _sample_curves():
    c = CurveSet()
    c.add("noma_m", PerfPoint(0.0, 0.5, 0.0, "analytic"))
    c.add("noma_m", PerfPoint(10.0, 0.25, 0.0, "analytic"))
    c.add("noma_m", PerfPoint(10.0, 0.2501, 0.001, "mc"))
    c.sort()
    return c


def test_csv_roundtrip():
    curves = _sample_curves()
    text = curves.to_csv()
    assert text.splitlines()[0] == CSV_HEADER
    assert CurveSet.from_csv(text).series == curves.series


def test_json_roundtrip():
    curves = _sample_curves()
    back = CurveSet.from_json(curves.to_json())
    assert back.series == curves.series
    json.loads(curves.to_json())  # also valid JSON


def test_csv_rejects_bad_header():
    with pytest.raises(ConfigError):
        CurveSet.from_csv("a,b,c\n1,2,3\n")


def test_perfpoint_provenance_validated():
    with pytest.raises(ConfigError):
        PerfPoint(0.0, 0.1, 0.0, "guesswork")


# ---------------------------------------------------------------------------
# experiment spec and runner
# ---------------------------------------------------------------------------


def test_spec_requires_schemes():
    with pytest.raises(ConfigError):
        ExperimentSpec(config=SystemConfig(), snr_grid_db=(0.0, 10.0),
                       schemes=())


def test_spec_requires_increasing_grid():
    with pytest.raises(ConfigError):
        ExperimentSpec(config=SystemConfig(), snr_grid_db=(10.0, 0.0),
                       schemes=("noma_m/analytic",))


def test_run_produces_points_per_scheme_and_snr(tmp_path):
    out = tmp_path / "curves.csv"
    spec = ExperimentSpec(
        config=SystemConfig(), snr_grid_db=(10.0, 20.0, 30.0),
        schemes=("noma_m/analytic", "noma_m/mc", "noma_n_psic/analytic"),
        mc=SMALL_MC, output_path=str(out))
    curves = run(spec)
    assert set(curves.labels()) == {"noma_m", "noma_n_psic"}
    assert len(curves.series["noma_m"]) == 6  # analytic + mc at 3 points
    assert out.exists()
    parsed = CurveSet.from_csv(out.read_text())
    assert parsed.series == curves.series


def test_run_deterministic_csv_bytes(tmp_path):
    spec = ExperimentSpec(
        config=SystemConfig(), snr_grid_db=(15.0, 25.0),
        schemes=("noma_n_psic/mc", "noma_m/analytic"), mc=SMALL_MC)
    montecarlo.clear_cache()
    first = run(spec).to_csv()
    montecarlo.clear_cache()
    second = run(spec).to_csv()
    assert first == second


def test_run_rejects_mc_series_without_settings():
    spec = ExperimentSpec(config=SystemConfig(), snr_grid_db=(10.0,),
                          schemes=("noma_m/mc",), mc=None)
    with pytest.raises(ConfigError):
        run(spec)


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------


def test_preset_names_cover_all_figures():
    assert preset_names() == [f"fig{i}" for i in range(2, 13)]


def test_unknown_preset_rejected():
    with pytest.raises(ConfigError):
        figure_preset("fig99")


def test_fig2_preset_parameters():
    spec = figure_preset("fig2")
    cfg = spec.config
    assert cfg.num_elements == 5
    assert cfg.kappa == pytest.approx(10.0 ** -0.5)
    assert cfg.rate_n == 0.5 and cfg.rate_m == 0.5
    assert cfg.a_n == 0.2 and cfg.a_m == 0.8
    assert (cfg.d_sn, cfg.d_sr, cfg.d_rn, cfg.d_rm) == (10.0, 8.0, 6.0, 10.0)
    assert cfg.alpha == 2.0
    assert spec.mc.trials == 1_000_000


def test_fig2_preset_covers_nine_curves():
    spec = figure_preset("fig2")
    series = {(parse_series(s).label, parse_series(s).provenance)
              for s in spec.schemes}
    analytic = {lbl for lbl, prov in series if prov == "analytic"}
    asymptotic = {lbl for lbl, prov in series if prov == "asymptotic"}
    mc = {lbl for lbl, prov in series if prov == "mc"}
    assert analytic == {"noma_n_ipsic", "noma_n_psic", "noma_m",
                        "oma_n", "oma_m"}
    assert asymptotic == {"noma_n_ipsic", "noma_n_psic", "noma_m"}
    assert mc  # simulation markers present
    assert len(analytic) + len(asymptotic) + 1 == 9


def test_fig4_preset_parameters():
    spec = figure_preset("fig4")
    assert spec.config.rate_n == 2.0 and spec.config.rate_m == 2.0
    assert spec.config.omega_i == pytest.approx(1e-3)
    ks = {dict(parse_series(s).overrides).get("K")
          for s in spec.schemes if "@K=" in s}
    assert ks == {"3", "5", "7"}


def test_fig9_preset_parameters():
    spec = figure_preset("fig9")
    assert spec.config.num_elements == 20
    assert spec.config.kappa == pytest.approx(10.0 ** -0.5)
    assert spec.config.omega_i == pytest.approx(1e-3)


def test_all_presets_parse_and_validate():
    for name in preset_names():
        spec = figure_preset(name)
        for s in spec.schemes:
            parse_series(s)


def test_known_schemes_nonempty():
    assert "noma_n_psic" in known_schemes()


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def test_cli_dump_rule(tmp_path):
    out = tmp_path / "rule.csv"
    assert main(["dump-rule", "--family", "laguerre", "--order", "8",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "index,node,weight"
    assert len(lines) == 9


def test_cli_dump_rule_bad_family():
    assert main(["dump-rule", "--family", "legendre", "--order", "8"]) == 2


def test_cli_run_with_config_file(tmp_path):
    cfg_file = tmp_path / "exp.cfg"
    cfg_file.write_text(
        "# sample experiment\n"
        "kappa_db = -5\n"
        "elements = 5\n"
        "omega_i_db = -30\n"
        "rate_n = 0.5\n"
        "rate_m = 0.5\n"
        "snr_db_start = 10\n"
        "snr_db_stop = 20\n"
        "snr_db_step = 5\n"
        "trials = 20000\n"
        "schemes = noma_m/analytic, noma_m/mc\n")
    out = tmp_path / "out.csv"
    assert main(["run", "--config", str(cfg_file), "--out", str(out),
                 "--seed", "3"]) == 0
    curves = CurveSet.from_csv(out.read_text())
    assert len(curves.series["noma_m"]) == 6


def test_cli_run_analytic_only(tmp_path):
    cfg_file = tmp_path / "exp.cfg"
    cfg_file.write_text("schemes = noma_m/analytic, noma_m/mc\n"
                        "snr_db_stop = 10\nsnr_db_step = 5\n")
    out = tmp_path / "o.csv"
    assert main(["run", "--config", str(cfg_file), "--out", str(out),
                 "--analytic-only"]) == 0
    curves = CurveSet.from_csv(out.read_text())
    assert all(p.provenance == "analytic"
               for pts in curves.series.values() for p in pts)


def test_cli_run_requires_config():
    assert main(["run"]) == 2


def test_cli_figure_writes_csv(tmp_path):
    out = tmp_path / "fig8.csv"
    assert main(["figure", "fig8", "--out", str(out)]) == 0
    curves = CurveSet.from_csv(out.read_text())
    assert len(curves.labels()) == 10  # 5 splits x 2 users


def test_cli_bad_config_value(tmp_path):
    cfg_file = tmp_path / "exp.cfg"
    cfg_file.write_text("a_n = 0.9\na_m = 0.1\nschemes = noma_m/analytic\n")
    assert main(["run", "--config", str(cfg_file)]) == 2


def test_parse_config_file_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("just some words\n")
    with pytest.raises(ConfigError):
        parse_config_file(str(bad))


def test_cli_numerical_failure_exit_code(monkeypatch):
    from starnoma import cli as cli_mod
    from starnoma.errors import NonConvergenceError

    def boom(name):
        raise NonConvergenceError("forced for the exit-code contract")

    monkeypatch.setattr(cli_mod, "figure_preset", boom)
    assert main(["figure", "fig2"]) == 3
