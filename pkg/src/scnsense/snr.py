"""Maximum-eigenvalue lookup table and SNR estimation.

The table maps (condition number of the correlation matrix, dimension ratio,
SNR) to theoretical maximum eigenvalues in three regimes: signal plus
correlated noise, correlated noise only, and signal plus white noise.
Estimation inverts the signal column by piecewise-linear interpolation of
SNR against lambda_max; values outside the tabulated range clamp to the
nearest end and are flagged rather than extrapolated, because at low SNR the
signal and noise columns merge and extrapolation would be meaningless.

Normalized mean-square error is computed on linear-power SNR, which is the
scale on which the squared error divided by the squared truth is coherent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .correlation import SPECTRUM_RATIO, rho_to_mu, scn_to_rho
from .simulate import CASE_SUM, H1, Scenario, map_trials, run_trial, trial_scenario
from .spectra import (
    DEFAULT_DENSITY_FLOOR,
    DEFAULT_GRID_POINTS,
    DEFAULT_Y_OFFSET,
    signal_corr_polynomial,
    signal_white_polynomial,
    tilted_support,
)

LOOKUP_CSV_HEADER = "scn,beta,snr_db,lmax_sig_corr,lmax_noise_corr,lmax_sig_white"


class LookupBuildError(RuntimeError):
    """The computed table violated a structural invariant."""


class TableCoverageError(LookupError):
    """The table has no slice matching the requested parameters."""


@dataclass(frozen=True)
class LookupRow:
    scn: float
    beta: float
    snr_db: float
    lmax_sig_corr: float
    lmax_noise_corr: float
    lmax_sig_white: float


@dataclass(frozen=True)
class SnrEstimate:
    """Estimated SNR in dB; ``clamped`` marks an out-of-range lambda_max."""

    snr_db: float
    clamped: bool
    method: str


@dataclass
class LookupTable:
    """Rows of (scn, beta, snr_db, lambda_max per regime), dense per scn slice."""

    rows: List[LookupRow]
    beta: float
    convention: str

    @property
    def scn_values(self) -> List[float]:
        seen: List[float] = []
        for row in self.rows:
            if row.scn not in seen:
                seen.append(row.scn)
        return seen

    def slice(self, scn: float) -> List[LookupRow]:
        out = [r for r in self.rows if abs(r.scn - scn) <= 1e-9]
        if not out:
            raise TableCoverageError(f"no slice for scn={scn:g}")
        return out

    def to_csv_rows(self) -> List[str]:
        return [
            f"{r.scn:.6g},{r.beta:.6g},{r.snr_db:.6g},{r.lmax_sig_corr:.6g},"
            f"{r.lmax_noise_corr:.6g},{r.lmax_sig_white:.6g}"
            for r in self.rows
        ]


def _support_lmax(poly, grid_points: int, density_floor: float,
                  y_offset: float) -> float:
    return poly.support(density_floor=density_floor, y_offset=y_offset,
                        points=grid_points).lambda_max


def build_lookup(scn_list: Sequence[float], beta: float,
                 snr_grid_db: Sequence[float],
                 convention: str = SPECTRUM_RATIO,
                 grid_points: int = DEFAULT_GRID_POINTS,
                 density_floor: float = DEFAULT_DENSITY_FLOOR,
                 y_offset: float = DEFAULT_Y_OFFSET) -> LookupTable:
    """Tabulate theoretical maximum eigenvalues over an SNR grid.

    Within each scn slice the signal column must be strictly increasing in
    SNR; a violation is a build error, not a warning, because estimation
    inverts that column.
    """
    snr_grid = [float(s) for s in snr_grid_db]
    if len(snr_grid) < 2 or any(b <= a for a, b in zip(snr_grid, snr_grid[1:])):
        raise ValueError("snr grid must be strictly increasing with >= 2 points")
    if any(s < 1.0 for s in scn_list):
        raise ValueError("scn values must be >= 1")

    white_cache: Dict[float, float] = {}
    rows: List[LookupRow] = []
    for scn in scn_list:
        rho = scn_to_rho(scn, convention)
        mu = rho_to_mu(rho)
        lmax_noise = tilted_support(beta, mu).lambda_max
        slice_vals: List[float] = []
        for snr in snr_grid:
            p = 10.0 ** (snr / 10.0)
            if snr not in white_cache:
                white_cache[snr] = _support_lmax(
                    signal_white_polynomial(p, beta),
                    grid_points, density_floor, y_offset)
            if mu == 0.0:
                lmax_corr = white_cache[snr]
            else:
                lmax_corr = _support_lmax(
                    signal_corr_polynomial(p, beta, mu),
                    grid_points, density_floor, y_offset)
            slice_vals.append(lmax_corr)
            rows.append(LookupRow(float(scn), float(beta), snr, lmax_corr,
                                  lmax_noise, white_cache[snr]))
        if any(b <= a for a, b in zip(slice_vals, slice_vals[1:])):
            raise LookupBuildError(
                f"lambda_max not strictly increasing in SNR for scn={scn:g}"
            )
    return LookupTable(rows=rows, beta=float(beta), convention=convention)


def _interp_snr(lmax: float, rows: List[LookupRow],
                column: str) -> Tuple[float, bool]:
    xs = np.array([getattr(r, column) for r in rows])
    ys = np.array([r.snr_db for r in rows])
    if lmax <= xs[0]:
        return float(ys[0]), lmax < xs[0]
    if lmax >= xs[-1]:
        return float(ys[-1]), lmax > xs[-1]
    return float(np.interp(lmax, xs, ys)), False


def estimate_snr(lmax: float, scn_theta: float, beta: float,
                 table: LookupTable) -> SnrEstimate:
    """Invert a measured maximum eigenvalue into an SNR estimate.

    Uses the signal-plus-correlated-noise column (the white column when
    scn = 1).  When scn_theta falls between two tabulated slices the two
    estimates are blended linearly in scn.
    """
    if abs(beta - table.beta) > 1e-9:
        raise TableCoverageError(
            f"table was built for beta={table.beta:g}, requested {beta:g}"
        )
    column = "lmax_sig_white" if scn_theta <= 1.0 + 1e-12 else "lmax_sig_corr"
    scns = table.scn_values
    exact = [s for s in scns if abs(s - scn_theta) <= 1e-9]
    if exact:
        snr, clamped = _interp_snr(lmax, table.slice(exact[0]), column)
        return SnrEstimate(snr, clamped, method=f"linear/{column}")
    below = [s for s in scns if s < scn_theta]
    above = [s for s in scns if s > scn_theta]
    if not below or not above:
        raise TableCoverageError(
            f"scn={scn_theta:g} is outside the tabulated slices {scns}"
        )
    lo, hi = max(below), min(above)
    snr_lo, cl_lo = _interp_snr(lmax, table.slice(lo), column)
    snr_hi, cl_hi = _interp_snr(lmax, table.slice(hi), column)
    t = (scn_theta - lo) / (hi - lo)
    return SnrEstimate((1.0 - t) * snr_lo + t * snr_hi, cl_lo or cl_hi,
                       method=f"linear/{column}/scn-blend")


def normalized_mse(estimates: Sequence[float], truth: float) -> float:
    """Mean of (estimate - truth)^2 / truth^2 in linear power units."""
    truth = float(truth)
    if truth == 0.0 or not math.isfinite(truth):
        raise ValueError("true SNR must be nonzero and finite")
    est = np.asarray(list(estimates), dtype=float)
    if est.size == 0:
        raise ValueError("need at least one estimate")
    return float(np.mean((est - truth) ** 2) / truth ** 2)


def mse_sweep(scn_list: Sequence[float], beta: float,
              snr_grid_db: Sequence[float], N: int, n_trials: int,
              seed: int, convention: str = SPECTRUM_RATIO,
              signal_case: str = CASE_SUM, workers: int = 1,
              table: Optional[LookupTable] = None,
              table_pad_db: float = 4.0,
              table_step_db: float = 1.0) -> List[Tuple[float, float, float]]:
    """Normalized estimation MSE per (scn, snr) point from simulated trials.

    Each point simulates ``n_trials`` signal-present trials, inverts the
    maximum eigenvalue through the lookup table, and averages the squared
    linear-scale error.  The per-trial errors are reduced in trial order, so
    the result is independent of the worker count.
    """
    snr_grid = [float(s) for s in snr_grid_db]
    m = int(round(beta * N))
    if m < 1 or m > N:
        raise ValueError(f"beta={beta:g} and N={N} give illegal M={m}")
    if table is None:
        lo = math.floor(min(snr_grid) - table_pad_db)
        hi = math.ceil(max(snr_grid) + table_pad_db)
        steps = int(round((hi - lo) / table_step_db)) + 1
        grid = [lo + k * table_step_db for k in range(steps)]
        table = build_lookup(scn_list, beta, grid, convention)

    out: List[Tuple[float, float, float]] = []
    for si, scn in enumerate(scn_list):
        rho = scn_to_rho(scn, convention)
        for gi, snr in enumerate(snr_grid):
            p = 10.0 ** (snr / 10.0)
            template = Scenario(hypothesis=H1, signal_case=signal_case, p=p,
                                M=m, N=N, rho=rho, seed=seed)
            point_id = si * len(snr_grid) + gi

            def one(idx: int) -> float:
                stats = run_trial(trial_scenario(template, H1, point_id, idx))
                est = estimate_snr(stats.lambda_max, scn, beta, table)
                gamma_hat = 10.0 ** (est.snr_db / 10.0)
                return (gamma_hat - p) ** 2

            sq_errors = map_trials(one, n_trials, workers)
            out.append((scn, snr, float(np.sum(sq_errors) / n_trials / p ** 2)))
    return out
