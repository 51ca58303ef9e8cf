"""Exponential noise-correlation model and its parameter conversions.

The correlation matrix Theta has entries rho^|j-i| (real rho in [0, 1)), unit
diagonal, and therefore trace(Theta)/M = 1, so coloring the noise never
changes its power.  Two conventions relate rho to the condition number of
Theta:

* ``spectrum-ratio`` (default): SCN = ((1+rho)/(1-rho))^2, the ratio of the
  asymptotic spectrum edges of Theta, self-consistent with
  mu = rho^2/(1-rho^2);
* ``linear``: SCN = (1+rho)/(1-rho), kept as an explicit alternative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPECTRUM_RATIO = "spectrum-ratio"
LINEAR = "linear"
CONVENTIONS = (SPECTRUM_RATIO, LINEAR)


class OutOfModelError(ValueError):
    """The linear sampling-rate model produced an illegal correlation."""


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    return rho


def _check_convention(convention: str) -> str:
    if convention not in CONVENTIONS:
        raise ValueError(
            f"unknown convention {convention!r}; expected one of {CONVENTIONS}"
        )
    return convention


@dataclass(frozen=True)
class CorrelationSpec:
    """Exponential correlation parameters for M receive dimensions."""

    rho: float
    M: int
    convention: str = SPECTRUM_RATIO

    def __post_init__(self):
        _check_rho(self.rho)
        if int(self.M) < 1:
            raise ValueError("M must be a positive integer")
        _check_convention(self.convention)

    @property
    def mu(self) -> float:
        return rho_to_mu(self.rho)

    @property
    def scn_theta(self) -> float:
        return rho_to_scn(self.rho, self.convention)


def exponential_theta(spec: CorrelationSpec) -> np.ndarray:
    """M x M Hermitian correlation matrix with entries rho^|j-i|."""
    idx = np.arange(spec.M)
    theta = spec.rho ** np.abs(idx[:, None] - idx[None, :]).astype(float)
    return theta


def matrix_sqrt_psd(theta: np.ndarray) -> np.ndarray:
    """Unique positive-semidefinite symmetric square root via eigendecomposition."""
    theta = np.asarray(theta)
    if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
        raise ValueError("theta must be square")
    if np.max(np.abs(theta - theta.conj().T)) > 1e-10:
        raise ValueError("theta must be Hermitian")
    w, v = np.linalg.eigh(theta)
    if np.min(w) < -1e-10:
        raise ValueError(f"theta is not positive semidefinite (min eig {np.min(w):g})")
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    if not np.iscomplexobj(theta):
        root = root.real
    return root


def rho_to_mu(rho: float) -> float:
    """Correlation-strength parameter mu = rho^2 / (1 - rho^2)."""
    rho = _check_rho(rho)
    return rho * rho / (1.0 - rho * rho)


def mu_to_rho(mu: float) -> float:
    """Exact inverse of :func:`rho_to_mu`."""
    mu = float(mu)
    if mu < 0 or not math.isfinite(mu):
        raise ValueError(f"mu must be finite and nonnegative, got {mu}")
    return math.sqrt(mu / (1.0 + mu))


def rho_to_scn(rho: float, convention: str = SPECTRUM_RATIO) -> float:
    """Condition number of Theta under the chosen convention."""
    rho = _check_rho(rho)
    _check_convention(convention)
    ratio = (1.0 + rho) / (1.0 - rho)
    return ratio * ratio if convention == SPECTRUM_RATIO else ratio


def scn_to_rho(scn: float, convention: str = SPECTRUM_RATIO) -> float:
    """Exact inverse of :func:`rho_to_scn` for scn >= 1."""
    scn = float(scn)
    _check_convention(convention)
    if scn < 1.0:
        raise ValueError(f"scn must be >= 1, got {scn}")
    ratio = math.sqrt(scn) if convention == SPECTRUM_RATIO else scn
    return (ratio - 1.0) / (ratio + 1.0)


def fs_rate_to_rho(epsilon: float, M: int, N: int) -> float:
    """Linear sampling-rate model rho = epsilon (M - 1) / N.

    Valid only where it produces a legal correlation; outside [0, 1) the model
    does not apply and :class:`OutOfModelError` is raised.
    """
    epsilon = float(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    M, N = int(M), int(N)
    if M < 1 or N < M:
        raise ValueError("need N >= M >= 1")
    rho = epsilon * (M - 1) / N
    if not 0.0 <= rho < 1.0:
        raise OutOfModelError(
            f"linear model gives rho={rho:g} outside [0, 1) at M={M}, N={N}"
        )
    return rho
