"""Condition-number decision rules and Monte Carlo sensing evaluation.

A trial is sensed by comparing the empirical condition number of its sample
covariance against the asymptotic support ratio: b/a for white noise ("mp")
or b~/a~ for correlated noise ("tilted").  At beta = 1 the lower edge is zero,
both thresholds are infinite, and the detector degenerates to always deciding
the signal absent; such configurations are flagged as unusable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .correlation import OutOfModelError, fs_rate_to_rho, rho_to_mu
from .simulate import H0, H1, Scenario, map_trials, run_trial, trial_scenario
from .spectra import mp_support, tilted_support

MP = "mp"
TILTED = "tilted"
DETECTORS = (MP, TILTED)


@dataclass(frozen=True)
class Decision:
    """Outcome of one threshold comparison; H1 iff statistic > threshold."""

    value: str
    statistic: float
    threshold: float


@dataclass(frozen=True)
class SensingResult:
    """Aggregate of a Monte Carlo sensing run under both hypotheses."""

    trials: int
    correct: int
    false_alarms: int
    misses: int

    def __post_init__(self):
        if self.correct + self.false_alarms + self.misses != self.trials:
            raise ValueError("correct + false alarms + misses must equal trials")

    @property
    def ratio(self) -> float:
        return self.correct / self.trials


def threshold_mp(beta: float) -> float:
    """White-noise decision threshold b / a (infinite when a = 0)."""
    sup = mp_support(beta)
    return sup.scn


def threshold_tilted(beta: float, mu: float) -> float:
    """Correlated-noise decision threshold b~ / a~ (infinite when a~ <= 0).

    Coincides with :func:`threshold_mp` at mu = 0 and is strictly increasing
    in mu for fixed beta.
    """
    return tilted_support(beta, mu).scn


def decide(scn: float, threshold: float) -> Decision:
    """Apply the condition-number rule; an infinite threshold always gives H0."""
    if scn < 1.0:
        raise ValueError("empirical condition number cannot be below 1")
    value = H1 if scn > threshold else H0
    return Decision(value, scn, threshold)


def scenario_threshold(kind: str, M: int, N: int, rho: float) -> float:
    """Decision threshold for an M x N experiment.

    The white ratio b/a is invariant under inverting the dimension ratio, so
    either M/N or N/M gives the same MP threshold.  The correlated ratio is
    not: evaluated at the samples-per-branch ratio N/M it calibrates to the
    condition numbers of colored sample covariances (checked against matrices
    whose correlation has exactly the model spectrum), while at M/N it
    undershoots them badly, so N/M is used.
    """
    if kind == MP:
        return threshold_mp(M / N)
    if kind == TILTED:
        return threshold_tilted(N / M, rho_to_mu(rho))
    raise ValueError(f"unknown detector kind {kind!r}; expected one of {DETECTORS}")


def _threshold_for(kind: str, template: Scenario) -> float:
    return scenario_threshold(kind, template.M, template.N, template.rho)


def mc_sense_point(template: Scenario, n_trials: int,
                   kinds: Sequence[str] = DETECTORS, workers: int = 1,
                   point_id: int = 0) -> Dict[str, SensingResult]:
    """Run one Monte Carlo sensing point, scoring several detectors on shared trials.

    Trials split evenly between the hypotheses: floor(n/2) under H0, the rest
    under H1.  Per-trial seeds are mixed from the template's master seed and
    the trial index, so results do not depend on the worker count.
    """
    if n_trials < 1:
        raise ValueError("need at least one trial")
    thresholds = {kind: _threshold_for(kind, template) for kind in kinds}
    for kind, thr in thresholds.items():
        if math.isinf(thr):
            warnings.warn(
                f"{kind} threshold is infinite (beta={template.beta:g}); "
                "the detector will never declare a signal present",
                RuntimeWarning,
                stacklevel=2,
            )
    n_h0 = n_trials // 2
    plan = [(H0, i) for i in range(n_h0)] + [(H1, i) for i in range(n_trials - n_h0)]

    def one(k: int) -> tuple:
        hyp, idx = plan[k]
        stats = run_trial(trial_scenario(template, hyp, point_id, idx))
        return hyp, stats.scn

    records = map_trials(one, len(plan), workers)
    results = {}
    for kind, thr in thresholds.items():
        false_alarms = 0
        misses = 0
        for hyp, scn in records:
            verdict = decide(scn, thr).value
            if hyp == H0 and verdict == H1:
                false_alarms += 1
            elif hyp == H1 and verdict == H0:
                misses += 1
        correct = len(plan) - false_alarms - misses
        results[kind] = SensingResult(len(plan), correct, false_alarms, misses)
    return results


def mc_correct_ratio(scenario_template: Scenario, detector_kind: str,
                     n_trials: int, workers: int = 1,
                     point_id: int = 0) -> SensingResult:
    """Ratio of correct decisions for one detector at one operating point."""
    return mc_sense_point(scenario_template, n_trials, (detector_kind,),
                          workers, point_id)[detector_kind]


@dataclass(frozen=True)
class FsSweepPoint:
    """One sampling-rate step: results per detector, or an out-of-model marker."""

    m: int
    rho: Optional[float]
    results: Optional[Dict[str, SensingResult]]

    @property
    def out_of_model(self) -> bool:
        return self.results is None


def fs_sweep(epsilon: float, N: int, snr_db: float, m_range: Sequence[int],
             n_trials: int, seed: int, signal_case: str = "case1",
             kinds: Sequence[str] = DETECTORS, workers: int = 1) -> List[FsSweepPoint]:
    """Correct-sensing ratio versus sampling rate M.

    Each M maps to a correlation via the linear model rho = epsilon (M-1) / N;
    steps where that model leaves [0, 1) are reported as out-of-model points.
    """
    points: List[FsSweepPoint] = []
    p = 10.0 ** (snr_db / 10.0)
    for j, m in enumerate(m_range):
        try:
            rho = fs_rate_to_rho(epsilon, m, N)
        except OutOfModelError:
            points.append(FsSweepPoint(m, None, None))
            continue
        template = Scenario(hypothesis=H1, signal_case=signal_case, p=p,
                            M=m, N=N, rho=rho, seed=seed)
        results = mc_sense_point(template, n_trials, kinds, workers, point_id=j)
        points.append(FsSweepPoint(m, rho, results))
    return points
