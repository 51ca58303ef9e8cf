"""Seeded generation of received-signal matrices and their eigenvalue statistics.

A trial is a pure function of a :class:`Scenario`: identical fields (including
the seed) give bit-identical matrices.  The noise variance is fixed to one and
the channel entries have unit variance, so the linear signal power ``p`` is
the SNR.  Under the held-symbol model the transmitted symbol is the constant
1; under the per-sample model the N symbols are i.i.d. unit-variance complex
Gaussians on the diagonal of S_d.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np

from .correlation import CorrelationSpec, exponential_theta, matrix_sqrt_psd
from .spectra import AepdfCurve

H0 = "h0"
H1 = "h1"
CASE1 = "case1"
CASE2 = "case2"
#: signal-present covariance formed as the sum of independently drawn signal
#: and noise sample covariances, the construction the asymptotic combined
#: spectra describe; it has no received-matrix representation
CASE_SUM = "sum"
SIGNAL_CASES = (CASE1, CASE2, CASE_SUM)

#: eigenvalues below this fraction of lambda_max are treated as exact zeros
EIGENVALUE_CLIP = 1e-12


class DegenerateSpectrumError(RuntimeError):
    """All sample eigenvalues vanished; no condition number exists."""


@dataclass(frozen=True)
class Scenario:
    """One Monte Carlo trial configuration.

    ``beta`` is the dimension ratio M / N; experiments keep N >= M so the
    sample covariance is full rank.  Under ``H0`` the signal power is ignored.
    """

    hypothesis: str
    signal_case: str
    p: float
    M: int
    N: int
    rho: float
    seed: int

    def __post_init__(self):
        if self.hypothesis not in (H0, H1):
            raise ValueError(f"hypothesis must be {H0!r} or {H1!r}")
        if self.signal_case not in SIGNAL_CASES:
            raise ValueError(f"signal_case must be one of {SIGNAL_CASES}")
        if self.p < 0 or not math.isfinite(self.p):
            raise ValueError("signal power must be finite and nonnegative")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.N < self.M:
            raise ValueError("need N >= M")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError("rho must lie in [0, 1)")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def beta(self) -> float:
        return self.M / self.N


@dataclass(frozen=True)
class SampleStats:
    """Eigenvalues of one sample covariance, ascending and clipped at zero."""

    eigenvalues: np.ndarray

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def scn(self) -> float:
        return empirical_scn(self)


def derive_trial_seed(master_seed: int, *path: int) -> int:
    """Mix a master seed with index coordinates into an independent 64-bit seed.

    The mixing is order-independent across trials, so parallel and serial runs
    draw identical per-trial streams.
    """
    ss = np.random.SeedSequence([int(master_seed), *[int(i) for i in path]])
    return int(ss.generate_state(1, np.uint64)[0])


def gen_ccs_gaussian(rows: int, cols: int, seed) -> np.ndarray:
    """Complex circularly-symmetric Gaussian matrix, unit variance per entry."""
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


@lru_cache(maxsize=32)
def _theta_sqrt(rho: float, M: int) -> np.ndarray:
    return matrix_sqrt_psd(exponential_theta(CorrelationSpec(rho, M)))


def gen_received(scenario: Scenario) -> np.ndarray:
    """Received M x N matrix for one trial.

    Draw order is fixed (noise, then channel, then symbols) so that an H1
    scenario with p = 0 reproduces the H0 matrix exactly.  The channel is
    redrawn independently every trial.
    """
    rng = np.random.default_rng(scenario.seed)
    z = gen_ccs_gaussian(scenario.M, scenario.N, rng)
    if scenario.rho > 0.0:
        z = _theta_sqrt(scenario.rho, scenario.M) @ z
    if scenario.hypothesis == H0 or scenario.p == 0.0:
        return z
    if scenario.signal_case == CASE_SUM:
        raise ValueError(
            "the covariance-sum model has no received-matrix form; "
            "use trial_covariance"
        )
    h = gen_ccs_gaussian(scenario.M, scenario.N, rng)
    amp = np.sqrt(scenario.p)
    if scenario.signal_case == CASE1:
        return amp * h + z
    symbols = (rng.standard_normal(scenario.N)
               + 1j * rng.standard_normal(scenario.N)) / np.sqrt(2.0)
    return amp * (h * symbols[None, :]) + z


def trial_covariance(scenario: Scenario) -> np.ndarray:
    """Sample covariance of one trial.

    For the data cases this is (1/N) Y Y^H of the received matrix, cross
    terms included.  For the ``sum`` case the signal and noise sample
    covariances are drawn independently and added, which is the object whose
    spectrum the combined asymptotic densities describe; a Gaussian received
    matrix mixes signal and noise into a single rescaled white spectrum
    instead, so density and estimation experiments default to ``sum``.
    """
    if scenario.signal_case != CASE_SUM or scenario.hypothesis == H0 \
            or scenario.p == 0.0:
        return sample_covariance(gen_received(scenario))
    rng = np.random.default_rng(scenario.seed)
    z = gen_ccs_gaussian(scenario.M, scenario.N, rng)
    if scenario.rho > 0.0:
        z = _theta_sqrt(scenario.rho, scenario.M) @ z
    h = gen_ccs_gaussian(scenario.M, scenario.N, rng)
    cov = scenario.p * (h @ h.conj().T) / scenario.N \
        + (z @ z.conj().T) / scenario.N
    return 0.5 * (cov + cov.conj().T)


def sample_covariance(y: np.ndarray) -> np.ndarray:
    """(1/N) Y Y^H, symmetrized against roundoff."""
    y = np.asarray(y)
    if y.ndim != 2 or y.shape[1] < 1:
        raise ValueError("Y must be a nonempty 2-D array")
    cov = y @ y.conj().T / y.shape[1]
    return 0.5 * (cov + cov.conj().T)


def hermitian_eigenvalues(r: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    r = np.asarray(r)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(r))))
    if np.max(np.abs(r - r.conj().T)) > 1e-10 * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(r)


def stats_from_covariance(cov: np.ndarray) -> SampleStats:
    """Eigenvalue statistics of a sample covariance, clipped at zero."""
    eigs = hermitian_eigenvalues(cov)
    if np.min(eigs) < -1e-10:
        raise ValueError(f"covariance produced eigenvalue {np.min(eigs):g} < -1e-10")
    eigs = np.clip(eigs, 0.0, None)
    top = eigs[-1]
    if top > 0:
        eigs[eigs < EIGENVALUE_CLIP * top] = 0.0
    return SampleStats(eigs)


def sample_stats(y: np.ndarray) -> SampleStats:
    """Eigenvalue statistics of the sample covariance of a received matrix."""
    return stats_from_covariance(sample_covariance(y))


def empirical_scn(stats: SampleStats) -> float:
    """Ratio of the largest to the smallest strictly positive eigenvalue."""
    eigs = stats.eigenvalues
    positive = eigs[eigs > 0.0]
    if len(positive) == 0:
        raise DegenerateSpectrumError("all sample eigenvalues are zero")
    return float(positive[-1] / positive[0])


def run_trial(scenario: Scenario) -> SampleStats:
    """Generate one trial and reduce it to its eigenvalue statistics."""
    return stats_from_covariance(trial_covariance(scenario))


def trial_scenario(template: Scenario, hypothesis: str, point_id: int,
                   trial_idx: int) -> Scenario:
    """Per-trial scenario with a seed mixed from the template's master seed."""
    hyp_tag = 0 if hypothesis == H0 else 1
    seed = derive_trial_seed(template.seed, point_id, hyp_tag, trial_idx)
    return replace(template, hypothesis=hypothesis, seed=seed)


def map_trials(fn: Callable[[int], object], n_trials: int,
               workers: int = 1) -> List[object]:
    """Evaluate fn(0..n_trials-1), optionally across worker threads.

    Results are returned in trial order regardless of the worker count, so
    any reduction over them is reproducible.
    """
    if n_trials < 1:
        raise ValueError("need at least one trial")
    indices = range(n_trials)
    if workers <= 1:
        return [fn(i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, indices))


def pooled_eigenvalues(template: Scenario, n_trials: int, point_id: int = 0,
                       workers: int = 1) -> np.ndarray:
    """Eigenvalues of n_trials independent trials, pooled into one array."""
    def one(idx: int) -> np.ndarray:
        scn = trial_scenario(template, template.hypothesis, point_id, idx)
        return run_trial(scn).eigenvalues

    chunks = map_trials(one, n_trials, workers)
    return np.concatenate(chunks)


def empirical_density(eigs: np.ndarray, bins: int, lo: float,
                      hi: float) -> Tuple[np.ndarray, np.ndarray]:
    """Histogram density of pooled eigenvalues on [lo, hi]."""
    counts, edges = np.histogram(eigs, bins=bins, range=(lo, hi))
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, counts / (len(eigs) * width)


def l1_density_distance(eigs: np.ndarray, curve: AepdfCurve, bins: int = 60,
                        lo: float = 0.0, hi: Optional[float] = None) -> float:
    """L1 distance between a pooled eigenvalue histogram and a density curve.

    The theoretical density is averaged over each bin; eigenvalue mass outside
    [lo, hi] counts fully against the distance.
    """
    eigs = np.asarray(eigs, dtype=float)
    if hi is None:
        hi = 1.02 * max(float(np.max(eigs)), float(curve.lambdas[-1]))
    centers, emp = empirical_density(eigs[(eigs >= lo) & (eigs <= hi)], bins, lo, hi)
    # rescale by the retained fraction so emp integrates to the in-range mass
    frac = np.mean((eigs >= lo) & (eigs <= hi))
    emp = emp * frac
    width = (hi - lo) / bins
    sub = np.linspace(-0.5, 0.5, 9) * width
    theo = np.array([
        np.mean(np.interp(c + sub, curve.lambdas, curve.densities,
                          left=0.0, right=0.0))
        for c in centers
    ])
    return float(np.sum(np.abs(emp - theo)) * width + (1.0 - frac))


def ks_distance(eigs: np.ndarray, curve: AepdfCurve) -> float:
    """Kolmogorov-Smirnov distance between pooled eigenvalues and a curve.

    The curve's atom at zero contributes a CDF jump at the origin.
    """
    eigs = np.sort(np.asarray(eigs, dtype=float))
    cdf_grid = np.concatenate([[0.0], np.cumsum(
        0.5 * (curve.densities[1:] + curve.densities[:-1])
        * np.diff(curve.lambdas))])
    cdf_grid = curve.mass_at_zero + cdf_grid
    theo = np.interp(eigs, curve.lambdas, cdf_grid,
                     left=curve.mass_at_zero, right=cdf_grid[-1])
    n = len(eigs)
    emp_hi = np.arange(1, n + 1) / n
    emp_lo = np.arange(0, n) / n
    return float(max(np.max(np.abs(emp_hi - theo)), np.max(np.abs(emp_lo - theo))))
