"""Command-line experiment runner.

Subcommands:
  run        sweep a config over an SNR grid and write curve data
  figure     reproduce one results figure's dataset (fig2 .. fig12)
  dump-rule  write a quadrature rule as CSV for auditing
  selftest   quick internal consistency battery

Config files are flat ``key = value`` tables ('#' comments).  dB-valued
quantities use dB-suffixed keys (kappa_db, omega_i_db); linear keys
(kappa, omega_i) are also accepted.  CLI flags override file values.
Exit codes: 0 success, 2 validation error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import montecarlo
from .channel import SystemConfig
from .errors import ConfigError, NonConvergenceError, QuadratureAccuracyError
from .experiments import ExperimentSpec, run
from .montecarlo import McSettings
from .presets import figure_preset, preset_names
from .quadrature import Family, get_rule

_CONFIG_KEYS = {
    "d_sn": float, "d_sr": float, "d_rn": float, "d_rm": float,
    "alpha": float, "kappa": float, "elements": int, "a_n": float,
    "a_m": float, "rate_n": float, "rate_m": float, "omega_i": float,
    "varpi": int,
}
_DB_KEYS = {"kappa_db": "kappa", "omega_i_db": "omega_i"}


def parse_config_file(path: str) -> dict:
    """Flat key/value table -> dict of experiment settings."""
    values: dict[str, object] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = (part.strip() for part in line.partition("="))
            if not eq:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            values[key] = value
    return values


def _build_config(values: dict) -> SystemConfig:
    kwargs = {}
    for key, conv in _CONFIG_KEYS.items():
        if key in values:
            name = "num_elements" if key == "elements" else key
            kwargs[name] = conv(values[key])
    for db_key, base in _DB_KEYS.items():
        if db_key in values:
            kwargs[base] = 10.0 ** (float(values[db_key]) / 10.0)
    return SystemConfig(**kwargs)


def _build_spec(values: dict, args) -> ExperimentSpec:
    cfg = _build_config(values)
    if "snr_grid_db" in values:
        grid = tuple(float(v) for v in str(values["snr_grid_db"]).split(","))
    else:
        start = float(values.get("snr_db_start", 0.0))
        stop = float(values.get("snr_db_stop", 40.0))
        step = float(values.get("snr_db_step", 2.0))
        grid, v = [], start
        while v <= stop + 1e-9:
            grid.append(round(v, 6))
            v += step
        grid = tuple(grid)
    if "schemes" not in values:
        raise ConfigError("config file must list schemes = s1,s2,...")
    schemes = tuple(s.strip() for s in str(values["schemes"]).split(","))
    mc = McSettings(trials=int(values.get("trials", 1_000_000)),
                    seed=int(values.get("seed", 0)))
    return ExperimentSpec(config=cfg, snr_grid_db=grid, schemes=schemes,
                          mc=mc, output_path=None,
                          format=str(values.get("format", "csv")))


def _apply_common_overrides(spec: ExperimentSpec, args) -> ExperimentSpec:
    mc = spec.mc
    if mc is not None:
        if args.trials is not None:
            mc = replace(mc, trials=args.trials)
        if args.seed is not None:
            mc = replace(mc, seed=args.seed)
    if args.analytic_only:
        schemes = tuple(s for s in spec.schemes if not s.endswith("/mc"))
        if not schemes:
            raise ConfigError("no series left after --analytic-only")
        spec = replace(spec, schemes=schemes, mc=None)
    out = args.out or spec.output_path
    return replace(spec, mc=mc, output_path=out,
                   format=args.format or spec.format)


def _cmd_run(args) -> int:
    if not args.config:
        raise ConfigError("run requires --config <path>")
    values = parse_config_file(args.config)
    spec = _apply_common_overrides(_build_spec(values, args), args)
    if spec.output_path is None:
        spec = replace(spec, output_path="curves." + spec.format)
    curves = run(spec, workers=args.threads)
    print(f"wrote {spec.output_path} ({len(curves.labels())} series)")
    return 0


def _cmd_figure(args) -> int:
    spec = figure_preset(args.name)
    spec = _apply_common_overrides(spec, args)
    if spec.output_path is None:
        spec = replace(spec, output_path=f"{args.name}.{spec.format}")
    curves = run(spec, workers=args.threads)
    print(f"wrote {spec.output_path} ({len(curves.labels())} series)")
    return 0


def _cmd_dump_rule(args) -> int:
    family = {"laguerre": Family.LAGUERRE,
              "chebyshev": Family.CHEBYSHEV_FIRST_KIND}.get(args.family)
    if family is None:
        raise ConfigError("family must be laguerre or chebyshev")
    rule = get_rule(family, args.order)
    out = args.out or f"{args.family}_{args.order}.csv"
    rule.dump_csv(out)
    print(f"wrote {out}")
    return 0


def _cmd_selftest(args) -> int:
    import math

    import numpy as np

    from . import analysis, kernels
    from .schemes import OutageScheme
    from .specfun import marcum_q, reg_lower_gamma

    failures = 0

    def check(name, ok, detail=""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f" ({detail})" if detail else ""))
        failures += 0 if ok else 1

    check("kernel backend", True, detail=kernels.BACKEND)
    rule = get_rule(Family.LAGUERRE, 300)
    check("laguerre weights sum to 1",
          abs(float(np.sum(rule.weights)) - 1.0) < 1e-12)
    m5 = float(np.sum(rule.weights * rule.nodes**5))
    check("laguerre 5th moment = 120", abs(m5 - 120.0) / 120.0 < 1e-10)
    check("marcum_q(0, b) = exp(-b^2/2)",
          abs(marcum_q(0.0, 1.3) - math.exp(-1.3**2 / 2)) < 1e-14)
    check("reg_lower_gamma(1, x) = 1 - e^-x",
          abs(reg_lower_gamma(1.0, 0.7) - (1 - math.exp(-0.7))) < 1e-13)
    cfg = SystemConfig()
    mc = McSettings(trials=200_000, seed=11)
    rho = 10.0 ** 2.0
    ana = analysis.op_user_n_psic(cfg, rho)
    est = montecarlo.estimate_outage(cfg, rho, OutageScheme.NOMA_N_PSIC, mc,
                                     workers=args.threads)
    gap = abs(ana - est.value)
    check("analysis vs MC outage @20 dB",
          gap <= max(3 * est.half_width, 0.05 * ana),
          detail=f"ana={ana:.4e} mc={est.value:.4e}")
    return 0 if failures == 0 else 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="starnoma",
        description="STAR-RIS NOMA link-performance toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (results are identical regardless)")
        p.add_argument("--analytic-only", action="store_true")

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("--config", required=False)
    add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_fig = sub.add_parser("figure", help="reproduce a figure dataset")
    p_fig.add_argument("name", choices=preset_names())
    add_common(p_fig)
    p_fig.set_defaults(func=_cmd_figure)

    p_dump = sub.add_parser("dump-rule", help="dump a quadrature rule to CSV")
    p_dump.add_argument("--family", required=True)
    p_dump.add_argument("--order", type=int, required=True)
    p_dump.add_argument("--out")
    p_dump.set_defaults(func=_cmd_dump_rule)

    p_self = sub.add_parser("selftest", help="quick internal checks")
    p_self.add_argument("--threads", type=int, default=None)
    p_self.set_defaults(func=_cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NonConvergenceError, QuadratureAccuracyError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
