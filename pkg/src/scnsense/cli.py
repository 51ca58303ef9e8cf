"""Command-line front end wiring the library into reproducible experiments.

Subcommands emit CSV (stdout or ``-o`` file) and can additionally render a
matplotlib figure next to the file with ``--plot``.  All randomness is driven
by ``--seed``; reruns with the same configuration are byte-identical
regardless of ``--workers``.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import List, Optional

from . import correlation, detection, simulate, snr, spectra
from .config import ExperimentConfig, parse_int_list, parse_number_list
from .reporting import fmt, meta_line, resolve_output_path, write_csv

#: let values like "-8,-6" or "-10..5" parse as arguments, not option names
_NEGATIVE_VALUE = re.compile(r"^-\d")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = merge_config(args)
        return args.func(cfg)
    except BrokenPipeError:
        return 1
    except (ValueError, LookupError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scnsense",
        description="Condition-number spectrum sensing and SNR estimation "
                    "simulator.",
    )
    parser._negative_number_matcher = _NEGATIVE_VALUE
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p._negative_number_matcher = _NEGATIVE_VALUE
        p.add_argument("--config", help="flat key = value configuration file")
        p.add_argument("--seed", type=int, help="master seed (64-bit unsigned)")
        p.add_argument("-o", "--output",
                       help="CSV output path (default: stdout); relative paths "
                            "resolve against $SCNSENSE_OUTDIR")
        p.add_argument("--workers", type=int, help="worker threads for trials")
        p.add_argument("--convention", choices=correlation.CONVENTIONS,
                       help="condition-number convention for the correlation "
                            "matrix")
        p.add_argument("--plot", action="store_true", default=None,
                       help="also render a figure next to the CSV (needs -o)")

    p = sub.add_parser("support", help="asymptotic support edges and thresholds")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--rho", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--scn", type=float)
    common(p)
    p.set_defaults(func=cmd_support)

    p = sub.add_parser("density", help="asymptotic eigenvalue density as CSV")
    p.add_argument("--regime", choices=["mp", "noise-corr", "sig-white",
                                        "sig-corr"])
    p.add_argument("--beta", type=float)
    p.add_argument("--snr-db", dest="snr_db_single", type=float,
                   help="signal SNR in dB (signal regimes)")
    p.add_argument("--rho", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--scn", type=float)
    p.add_argument("--grid-points", type=int)
    p.add_argument("--grid-max", type=float)
    p.add_argument("--simulate", action="store_true", default=None,
                   help="overlay a pooled eigenvalue histogram column")
    p.add_argument("--h1-model", dest="h1_model", choices=["sum", "data"],
                   help="signal-present covariance construction for "
                        "--simulate: independent signal+noise covariance sum "
                        "(matches the asymptotic theory) or the received "
                        "data matrix")
    p.add_argument("--case", choices=[simulate.CASE1, simulate.CASE2],
                   help="symbol case when --h1-model data")
    p.add_argument("--trials", type=int, help="trials for --simulate")
    p.add_argument("--n-samples", type=int, dest="n",
                   help="samples per dimension N for --simulate")
    p.add_argument("--bins", type=int, help="histogram bins for --simulate")
    common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("mc-sense",
                       help="Monte Carlo correct-sensing ratio sweeps")
    p.add_argument("--sweep", choices=["snr", "rho", "fs"], required=True)
    p.add_argument("--m", type=int, help="receive dimensions M")
    p.add_argument("--n", type=int, help="samples per dimension N")
    p.add_argument("--snr-db", help="SNR list for --sweep snr, single value "
                                    "otherwise (e.g. '-10..2' or '-6')")
    p.add_argument("--rho", type=float, help="fixed rho for --sweep snr")
    p.add_argument("--rho-list", help="rho values for --sweep rho")
    p.add_argument("--epsilon", type=float, help="slope of the sampling-rate "
                                                 "correlation model")
    p.add_argument("--m-range", help="M values for --sweep fs, e.g. '1..11'")
    p.add_argument("--case", choices=[simulate.CASE1, simulate.CASE2])
    p.add_argument("--trials", type=int)
    common(p)
    p.set_defaults(func=cmd_mc_sense)

    p = sub.add_parser("lookup", help="maximum-eigenvalue lookup table")
    p.add_argument("--beta", type=float)
    p.add_argument("--scn", dest="scn_list_arg",
                   help="condition numbers, e.g. '1.5,2,2.5'")
    p.add_argument("--snr", dest="snr_arg", help="SNR grid in dB, e.g. '-10..5'")
    common(p)
    p.set_defaults(func=cmd_lookup)

    p = sub.add_parser("estimate", help="estimate SNR from a maximum eigenvalue")
    p.add_argument("--lmax", type=float, help="measured maximum eigenvalue")
    p.add_argument("--scn", type=float, required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--snr-grid", dest="snr_grid_arg",
                   help="table grid in dB (default '-10..5')")
    p.add_argument("--simulate", action="store_true", default=None,
                   help="draw lambda_max from one simulated trial instead of "
                        "--lmax")
    p.add_argument("--snr-db", dest="snr_db_single", type=float,
                   help="true SNR for --simulate")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--h1-model", dest="h1_model", choices=["sum", "data"])
    p.add_argument("--case", choices=[simulate.CASE1, simulate.CASE2])
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("mse", help="normalized MSE of the SNR estimator")
    p.add_argument("--beta", type=float)
    p.add_argument("--scn", dest="scn_list_arg", help="condition numbers")
    p.add_argument("--snr", dest="snr_arg", help="SNR grid in dB")
    p.add_argument("--n", type=int, help="samples per dimension N")
    p.add_argument("--trials", type=int)
    p.add_argument("--h1-model", dest="h1_model", choices=["sum", "data"])
    p.add_argument("--case", choices=[simulate.CASE1, simulate.CASE2])
    common(p)
    p.set_defaults(func=cmd_mse)

    return parser


def merge_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, overridden by a config file, overridden by explicit flags."""
    if getattr(args, "config", None):
        cfg = ExperimentConfig.load(args.config)
    else:
        cfg = ExperimentConfig()
    cfg.experiment = args.command
    direct = ["seed", "output", "workers", "convention", "plot", "beta", "rho",
              "mu", "scn", "epsilon", "case", "h1_model", "regime", "sweep",
              "grid_points", "grid_max", "bins", "simulate", "lmax", "m", "n"]
    for name in direct:
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if getattr(args, "trials", None) is not None:
        cfg.n_trials = args.trials
    if getattr(args, "snr_db_single", None) is not None:
        cfg.snr_db = [args.snr_db_single]
    if getattr(args, "snr_db", None) is not None and isinstance(args.snr_db, str):
        cfg.snr_db = parse_number_list(args.snr_db)
    if getattr(args, "snr_arg", None) is not None:
        cfg.snr_db = parse_number_list(args.snr_arg)
    if getattr(args, "snr_grid_arg", None) is not None:
        cfg.snr_grid = parse_number_list(args.snr_grid_arg)
    if getattr(args, "scn_list_arg", None) is not None:
        cfg.scn_list = parse_number_list(args.scn_list_arg)
    if getattr(args, "rho_list", None) is not None:
        cfg.rho_list = parse_number_list(args.rho_list)
    if getattr(args, "m_range", None) is not None:
        cfg.m_range = parse_int_list(args.m_range)
    if cfg.plot and cfg.output is None:
        raise ValueError("--plot requires -o/--output")
    return cfg


def _resolve_mu(cfg: ExperimentConfig) -> float:
    """Correlation strength from --mu, --rho, or --scn (first one set wins)."""
    if cfg.mu is not None:
        if cfg.mu < 0:
            raise ValueError("mu must be nonnegative")
        return cfg.mu
    if cfg.rho is not None:
        return correlation.rho_to_mu(cfg.rho)
    if cfg.scn is not None:
        return correlation.rho_to_mu(
            correlation.scn_to_rho(cfg.scn, cfg.convention))
    return 0.0


def _resolve_rho(cfg: ExperimentConfig) -> float:
    if cfg.rho is not None:
        return cfg.rho
    if cfg.scn is not None:
        return correlation.scn_to_rho(cfg.scn, cfg.convention)
    if cfg.mu is not None:
        return correlation.mu_to_rho(cfg.mu)
    return 0.0


def _h1_case(cfg: ExperimentConfig) -> str:
    return simulate.CASE_SUM if cfg.h1_model == "sum" else cfg.case


def _maybe_plot(cfg: ExperimentConfig, renderer) -> None:
    if not cfg.plot:
        return
    from . import plotting

    csv_path = resolve_output_path(cfg.output)
    renderer(plotting, plotting.plot_path_for(csv_path))


def cmd_support(cfg: ExperimentConfig) -> int:
    beta = cfg.beta if cfg.beta is not None else cfg.effective_beta()
    mu = _resolve_mu(cfg)
    white = spectra.mp_support(beta)
    tilted = spectra.tilted_support(beta, mu)
    lines = [
        f"beta = {fmt(beta)}",
        f"mu = {fmt(mu)}",
        f"lambda_min_white = {fmt(white.lambda_min)}",
        f"lambda_max_white = {fmt(white.lambda_max)}",
        f"lambda_min = {fmt(tilted.lambda_min)}",
        f"lambda_max = {fmt(tilted.lambda_max)}",
        f"threshold_mp = {fmt(detection.threshold_mp(beta))}",
        f"threshold_tilted = {fmt(detection.threshold_tilted(beta, mu))}",
    ]
    print("\n".join(lines))
    if not tilted.scn_is_finite or not white.scn_is_finite:
        print("warning: lower support edge is zero; thresholds are infinite "
              "and unusable for sensing", file=sys.stderr)
    return 0


def _density_objects(cfg: ExperimentConfig):
    beta = cfg.beta if cfg.beta is not None else cfg.effective_beta()
    mu = _resolve_mu(cfg)
    p = 10.0 ** (cfg.snr_db[0] / 10.0) if cfg.snr_db else 1.0
    if cfg.regime == "mp":
        curve_fn = lambda grid: spectra.mp_curve(beta, grid)
        hint = spectra.mp_support(beta).lambda_max
        hypothesis = simulate.H0
    elif cfg.regime == "noise-corr":
        curve_fn = lambda grid: spectra.tilted_noise_curve(beta, mu, grid)
        hint = spectra.tilted_support(beta, mu).lambda_max
        hypothesis = simulate.H0
    elif cfg.regime == "sig-white":
        family = spectra.signal_white_polynomial(p, beta)
        curve_fn = family.curve
        hint = family.upper_hint
        hypothesis = simulate.H1
    elif cfg.regime == "sig-corr":
        family = spectra.signal_corr_polynomial(p, beta, mu)
        curve_fn = family.curve
        hint = family.upper_hint
        hypothesis = simulate.H1
    else:
        raise ValueError(f"unknown regime {cfg.regime!r}")
    upper = cfg.grid_max if cfg.grid_max is not None else 1.5 * hint
    grid = spectra.default_grid(upper / 1.5, cfg.grid_points)
    return beta, p, curve_fn(grid), hypothesis


def cmd_density(cfg: ExperimentConfig) -> int:
    import numpy as np

    beta, p, curve, hypothesis = _density_objects(cfg)
    header = "lambda,density"
    columns = [curve.lambdas, curve.densities]
    empirical_grid = None
    if cfg.simulate:
        n = cfg.n
        m = max(1, int(round(beta * n)))
        case = _h1_case(cfg) if hypothesis == simulate.H1 else cfg.case
        template = simulate.Scenario(
            hypothesis=hypothesis, signal_case=case, p=p, M=m, N=n,
            rho=_resolve_rho(cfg), seed=cfg.seed)
        eigs = simulate.pooled_eigenvalues(template, cfg.n_trials,
                                           workers=cfg.workers)
        hi = float(curve.lambdas[-1])
        counts, edges = np.histogram(eigs, bins=cfg.bins, range=(0.0, hi))
        dens = counts / (len(eigs) * (edges[1] - edges[0]))
        idx = np.clip(np.searchsorted(edges, curve.lambdas, side="right") - 1,
                      0, cfg.bins - 1)
        empirical_grid = dens[idx]
        header += ",empirical"
        columns.append(empirical_grid)
    rows = [",".join(fmt(col[i], ".8g") for col in columns)
            for i in range(len(curve.lambdas))]
    meta = meta_line(cfg.config_hash(), cfg.seed, cfg.convention)
    write_csv(cfg.output, meta, header, rows)
    _maybe_plot(cfg, lambda plotting, path: plotting.render_density(
        curve.lambdas, curve.densities, empirical_grid,
        title=f"{cfg.regime} (beta={beta:g})", path=path))
    return 0


def cmd_mc_sense(cfg: ExperimentConfig) -> int:
    rows: List[str] = []
    failures: List[str] = []
    series = {kind: [] for kind in detection.DETECTORS}
    if cfg.sweep == "snr":
        x_name, x_values = "snr_db", cfg.snr_db
    elif cfg.sweep == "rho":
        x_name, x_values = "rho", cfg.rho_list
    else:
        x_name, x_values = "m", cfg.m_range

    if cfg.sweep == "fs":
        snr = cfg.snr_db[0]
        points = detection.fs_sweep(cfg.epsilon, cfg.n, snr, cfg.m_range,
                                    cfg.n_trials, cfg.seed, cfg.case,
                                    workers=cfg.workers)
        for pt in points:
            if pt.out_of_model:
                rows.append(f"{pt.m},out-of-model,,,")
                for kind in series:
                    series[kind].append(None)
                continue
            for kind in detection.DETECTORS:
                res = pt.results[kind]
                rows.append(f"{pt.m},{kind},{res.ratio:.6f},"
                            f"{res.false_alarms},{res.misses}")
            for kind in series:
                series[kind].append(pt.results[kind].ratio)
    else:
        for i, x in enumerate(x_values):
            if cfg.sweep == "snr":
                p = 10.0 ** (x / 10.0)
                rho = _resolve_rho(cfg)
            else:
                p = 10.0 ** (cfg.snr_db[0] / 10.0)
                rho = x
            try:
                template = simulate.Scenario(
                    hypothesis=simulate.H1, signal_case=cfg.case, p=p,
                    M=cfg.m, N=cfg.n, rho=rho, seed=cfg.seed)
                results = detection.mc_sense_point(
                    template, cfg.n_trials, detection.DETECTORS,
                    workers=cfg.workers, point_id=i)
            except (ValueError, RuntimeError) as exc:
                failures.append(f"{x_name}={x:g}: {exc}")
                for kind in series:
                    series[kind].append(None)
                continue
            for kind in detection.DETECTORS:
                res = results[kind]
                rows.append(f"{fmt(x)},{kind},{res.ratio:.6f},"
                            f"{res.false_alarms},{res.misses}")
            for kind in series:
                series[kind].append(results[kind].ratio)

    meta = meta_line(cfg.config_hash(), cfg.seed, cfg.convention)
    write_csv(cfg.output, meta, f"{x_name},detector,ratio,false_alarm,miss",
              rows)
    _maybe_plot(cfg, lambda plotting, path: plotting.render_ratio_sweep(
        x_values, series, xlabel=x_name, title=f"sensing vs {x_name}",
        path=path))
    if failures:
        for msg in failures:
            print(f"failed point: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_lookup(cfg: ExperimentConfig) -> int:
    beta = cfg.beta if cfg.beta is not None else 1.0
    snr_grid = cfg.snr_db if cfg.snr_db else parse_number_list("-10..5")
    table = snr.build_lookup(cfg.scn_list, beta, snr_grid,
                             convention=cfg.convention,
                             grid_points=cfg.grid_points)
    meta = meta_line(cfg.config_hash(), cfg.seed, cfg.convention)
    write_csv(cfg.output, meta, snr.LOOKUP_CSV_HEADER, table.to_csv_rows())

    def render(plotting, path):
        slices = {
            scn: [(r.snr_db, r.lmax_sig_corr, r.lmax_noise_corr,
                   r.lmax_sig_white) for r in table.slice(scn)]
            for scn in table.scn_values
        }
        plotting.render_lookup(slices, title=f"lambda_max (beta={beta:g})",
                               path=path)

    _maybe_plot(cfg, render)
    return 0


def cmd_estimate(cfg: ExperimentConfig) -> int:
    beta = cfg.beta if cfg.beta is not None else 1.0
    snr_grid = cfg.snr_grid
    if cfg.simulate:
        n = cfg.n
        m = max(1, int(round(beta * n)))
        true_snr = cfg.snr_db[0] if cfg.snr_db else 0.0
        template = simulate.Scenario(
            hypothesis=simulate.H1, signal_case=_h1_case(cfg),
            p=10.0 ** (true_snr / 10.0), M=m, N=n,
            rho=correlation.scn_to_rho(cfg.scn, cfg.convention), seed=cfg.seed)
        lmax = simulate.run_trial(template).lambda_max
    elif cfg.lmax is not None:
        lmax = cfg.lmax
    else:
        raise ValueError("estimate needs --lmax or --simulate")
    table = snr.build_lookup([cfg.scn], beta, snr_grid,
                             convention=cfg.convention,
                             grid_points=cfg.grid_points)
    est = snr.estimate_snr(lmax, cfg.scn, beta, table)
    meta = meta_line(cfg.config_hash(), cfg.seed, cfg.convention)
    row = (f"{fmt(lmax)},{fmt(cfg.scn)},{fmt(beta)},{est.snr_db:.4f},"
           f"{str(est.clamped).lower()},{est.method}")
    write_csv(cfg.output, meta, "lmax,scn,beta,snr_db,clamped,method", [row])
    print(f"estimated_snr_db = {est.snr_db:.4f}"
          + (" (clamped)" if est.clamped else ""), file=sys.stderr)
    return 0


def cmd_mse(cfg: ExperimentConfig) -> int:
    beta = cfg.beta if cfg.beta is not None else 1.0
    snr_grid = cfg.snr_db if cfg.snr_db else parse_number_list("-4..5")
    results = snr.mse_sweep(cfg.scn_list, beta, snr_grid, cfg.n,
                            cfg.n_trials, cfg.seed, convention=cfg.convention,
                            signal_case=_h1_case(cfg), workers=cfg.workers)
    rows = [f"{fmt(scn)},{fmt(s)},{fmt(m, '.8g')}" for scn, s, m in results]
    meta = meta_line(cfg.config_hash(), cfg.seed, cfg.convention)
    write_csv(cfg.output, meta, "scn,snr_db,mse", rows)
    _maybe_plot(cfg, lambda plotting, path: plotting.render_mse(
        results, title=f"normalized MSE (beta={beta:g}, N={cfg.n})",
        path=path))
    return 0


if __name__ == "__main__":
    sys.exit(main())
