"""Asymptotic eigenvalue densities, their supports, and the spectral transform calculus.

Everything in here is deterministic, pure, and works on the dimension ratio

    beta = M / N        (receive dimensions / samples per dimension)

so that the bulk of the eigenvalues of a unit-variance M x N sample covariance
(1/N) Y Y^H lives on [(1 - sqrt(beta))^2, (1 + sqrt(beta))^2].

Two density normalizations coexist on purpose:

* closed forms written for the M x M sample covariance carry a 1/beta factor
  and a zero atom of mass (1 - 1/beta)^+;
* polynomial-encoded spectra (the resolvent calculus used to combine signal
  and noise) are normalized with a zero atom of mass (1 - beta)^+ (noise) or
  (1 - 2 beta)^+ (signal plus noise); their continuous parts are proportional
  to the matrix densities and share the same support, which is all the
  detector and SNR machinery consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

ArrayLike = Union[float, Sequence[float], np.ndarray]

#: Number of imaginary-axis decades traversed per homotopy rung.
_LADDER_DECADES_PER_STEP = 0.5
#: Default spectral grid resolution.
DEFAULT_GRID_POINTS = 2000
#: Default imaginary offset used to read densities off the real axis.
DEFAULT_Y_OFFSET = 1e-6
#: Default density level used to locate support edges.
DEFAULT_DENSITY_FLOOR = 1e-4


class BranchSelectionError(RuntimeError):
    """No admissible root with positive imaginary part could be selected."""


class EmptySupportError(RuntimeError):
    """A density curve stayed below the detection floor everywhere."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralSupport:
    """Endpoints of an asymptotic eigenvalue density.

    ``scn`` is the support condition number lambda_max / lambda_min and is
    reported as ``math.inf`` whenever the lower edge touches zero, in which
    case any threshold built from it is unusable.
    """

    lambda_min: float
    lambda_max: float

    def __post_init__(self):
        if not (math.isfinite(self.lambda_min) and math.isfinite(self.lambda_max)):
            raise ValueError("support endpoints must be finite")
        if self.lambda_min < -1e-12 or self.lambda_max < self.lambda_min - 1e-12:
            raise ValueError(
                f"invalid support [{self.lambda_min}, {self.lambda_max}]"
            )

    @property
    def scn(self) -> float:
        if self.lambda_min <= 0.0:
            return math.inf
        return self.lambda_max / self.lambda_min

    @property
    def scn_is_finite(self) -> bool:
        return self.lambda_min > 0.0


@dataclass
class AepdfCurve:
    """Sampled asymptotic eigenvalue density.

    ``mass_at_zero`` carries the point mass at lambda = 0 so the continuous
    part plus the atom integrates to one.  ``evaluator`` (when present) maps a
    single lambda to the continuous density and lets support extraction refine
    edges off the sampling grid.
    """

    lambdas: np.ndarray
    densities: np.ndarray
    mass_at_zero: float = 0.0
    evaluator: Optional[Callable[[float], float]] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.densities = np.asarray(self.densities, dtype=float)
        if self.lambdas.ndim != 1 or self.lambdas.shape != self.densities.shape:
            raise ValueError("lambdas and densities must be matching 1-D arrays")
        if np.any(np.diff(self.lambdas) <= 0):
            raise ValueError("lambda grid must be strictly increasing")
        if np.any(self.densities < -1e-12):
            raise ValueError("densities must be nonnegative")
        if not 0.0 <= self.mass_at_zero <= 1.0:
            raise ValueError("mass_at_zero must lie in [0, 1]")

    def total_mass(self) -> float:
        """Trapezoidal integral of the continuous part plus the zero atom."""
        return float(np.trapezoid(self.densities, self.lambdas)) + self.mass_at_zero

    def validate(self, eps_int: float = 1e-2) -> None:
        mass = self.total_mass()
        if abs(mass - 1.0) > eps_int:
            raise ValueError(f"curve mass {mass:.6f} outside 1 +/- {eps_int}")


# ---------------------------------------------------------------------------
# closed-form laws
# ---------------------------------------------------------------------------

def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0.0:
        raise ValueError(f"beta must be finite and positive, got {beta}")
    return beta


def mp_support(beta: float) -> SpectralSupport:
    """Support edges (1 -/+ sqrt(beta))^2 of the white sample-covariance law."""
    beta = _check_beta(beta)
    r = math.sqrt(beta)
    return SpectralSupport((1.0 - r) ** 2, (1.0 + r) ** 2)


def mp_density(beta: float, lam: ArrayLike) -> Union[float, np.ndarray]:
    """Continuous white-noise density sqrt((x-a)+(b-x)+) / (2 pi beta x).

    The zero atom of mass (1 - 1/beta)^+ is not included; curve builders
    attach it separately.
    """
    beta = _check_beta(beta)
    sup = mp_support(beta)
    lam_arr = np.asarray(lam, dtype=float)
    scalar = lam_arr.ndim == 0
    lam_arr = np.atleast_1d(lam_arr)
    if np.any(lam_arr < 0):
        raise ValueError("lambda must be nonnegative")
    out = np.zeros_like(lam_arr)
    inside = (lam_arr > sup.lambda_min) & (lam_arr < sup.lambda_max) & (lam_arr > 0)
    x = lam_arr[inside]
    out[inside] = np.sqrt((x - sup.lambda_min) * (sup.lambda_max - x)) / (
        2.0 * np.pi * beta * x
    )
    return float(out[0]) if scalar else out


def mp_atom(beta: float) -> float:
    """Zero-eigenvalue mass of the M x M law, (1 - 1/beta)^+."""
    beta = _check_beta(beta)
    return max(0.0, 1.0 - 1.0 / beta)


def tilted_support(beta: float, mu: float) -> SpectralSupport:
    """Support edges of the correlated-noise law.

    a~, b~ = 1 + beta + 2 mu beta -/+ 2 sqrt(beta) sqrt((1+mu)(1+mu beta)),
    reducing exactly to the white edges at mu = 0.
    """
    beta = _check_beta(beta)
    mu = float(mu)
    if not math.isfinite(mu) or mu < 0.0:
        raise ValueError(f"mu must be finite and nonnegative, got {mu}")
    if mu == 0.0:
        return mp_support(beta)
    base = 1.0 + beta + 2.0 * mu * beta
    spread = 2.0 * math.sqrt(beta) * math.sqrt((1.0 + mu) * (1.0 + mu * beta))
    lo = base - spread
    if abs(lo) < 1e-12:
        lo = 0.0
    return SpectralSupport(lo, base + spread)


def tilted_noise_density(beta: float, mu: float, lam: ArrayLike):
    """Continuous correlated-noise density sqrt((x-a~)+(b~-x)+) / (2 pi x (1 + mu x))."""
    sup = tilted_support(beta, mu)
    mu = float(mu)
    lam_arr = np.asarray(lam, dtype=float)
    scalar = lam_arr.ndim == 0
    lam_arr = np.atleast_1d(lam_arr)
    if np.any(lam_arr < 0):
        raise ValueError("lambda must be nonnegative")
    out = np.zeros_like(lam_arr)
    inside = (lam_arr > sup.lambda_min) & (lam_arr < sup.lambda_max) & (lam_arr > 0)
    x = lam_arr[inside]
    out[inside] = np.sqrt((x - sup.lambda_min) * (sup.lambda_max - x)) / (
        2.0 * np.pi * x * (1.0 + mu * x)
    )
    return float(out[0]) if scalar else out


def theta_support(rho: float) -> SpectralSupport:
    """Asymptotic spectrum edges sigma1 = (1-rho)/(1+rho), sigma2 = (1+rho)/(1-rho)
    of the exponential correlation matrix."""
    rho = float(rho)
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    return SpectralSupport((1.0 - rho) / (1.0 + rho), (1.0 + rho) / (1.0 - rho))


def theta_density(rho: float, lam: ArrayLike):
    """Tilted semicircular density of the correlation-matrix spectrum.

    f(x) = sqrt((x/sigma1 - 1)(1 - x/sigma2)) / (2 pi mu x^2) on
    [sigma1, sigma2], with mu = rho^2 / (1 - rho^2).  At rho = 0 the spectrum
    degenerates to a unit point mass at 1 and the continuous density is zero
    everywhere.
    """
    sup = theta_support(rho)
    rho = float(rho)
    lam_arr = np.asarray(lam, dtype=float)
    scalar = lam_arr.ndim == 0
    lam_arr = np.atleast_1d(lam_arr)
    out = np.zeros_like(lam_arr)
    if rho > 0.0:
        mu = rho * rho / (1.0 - rho * rho)
        s1, s2 = sup.lambda_min, sup.lambda_max
        inside = (lam_arr > s1) & (lam_arr < s2)
        x = lam_arr[inside]
        out[inside] = np.sqrt((x / s1 - 1.0) * (1.0 - x / s2)) / (
            2.0 * np.pi * mu * x * x
        )
    return float(out[0]) if scalar else out


def mp_curve(beta: float, grid: Optional[np.ndarray] = None,
             points: int = DEFAULT_GRID_POINTS) -> AepdfCurve:
    """Sampled white-noise law including its zero atom."""
    if grid is None:
        grid = default_grid(mp_support(beta).lambda_max, points)
    dens = mp_density(beta, grid)
    return AepdfCurve(grid, dens, mass_at_zero=mp_atom(beta),
                      evaluator=lambda lam: float(mp_density(beta, lam)))


def tilted_noise_curve(beta: float, mu: float, grid: Optional[np.ndarray] = None,
                       points: int = DEFAULT_GRID_POINTS) -> AepdfCurve:
    """Sampled correlated-noise law; the zero atom has mass (1 - beta)^+."""
    if grid is None:
        grid = default_grid(tilted_support(beta, mu).lambda_max, points)
    dens = tilted_noise_density(beta, mu, grid)
    return AepdfCurve(grid, dens, mass_at_zero=max(0.0, 1.0 - beta),
                      evaluator=lambda lam: float(tilted_noise_density(beta, mu, lam)))


def default_grid(upper_estimate: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Graded lambda grid over [0, 1.5 * upper_estimate].

    Quadratic spacing concentrates points near the origin so that the
    inverse-square-root divergence of the unit-ratio laws integrates to the
    right mass under the trapezoid rule; support edges are refined by
    bisection, not grid resolution.
    """
    if upper_estimate <= 0:
        raise ValueError("upper estimate must be positive")
    u = np.linspace(0.0, 1.0, points)
    return 1.5 * float(upper_estimate) * u * u


# ---------------------------------------------------------------------------
# polynomial-encoded resolvents
# ---------------------------------------------------------------------------

def noise_poly_coeffs(z: np.ndarray, beta: float, mu: float) -> np.ndarray:
    """Quadratic satisfied by the correlated-noise resolvent S(z).

    z(1 + mu z) S^2 + (z(1 + 2 mu) + 1 - beta) S + (1 + mu) = 0; at mu = 0 it
    collapses to the white quadratic z S^2 + (z + 1 - beta) S + 1 = 0.
    """
    z = np.asarray(z, dtype=complex)
    one = np.ones_like(z)
    return np.stack([
        z * (1.0 + mu * z),
        z * (1.0 + 2.0 * mu) + (1.0 - beta) * one,
        (1.0 + mu) * one,
    ], axis=-1)


def signal_white_poly_coeffs(z: np.ndarray, p: float, beta: float) -> np.ndarray:
    """Cubic satisfied by the signal-plus-white-noise resolvent.

    (z p) S^3 + (p(z + 1 - 2 beta) + z) S^2 + (z + (1 + p)(1 - beta)) S + 1 = 0.

    The linear coefficient uses (1 + p)(1 - beta): this is the unique choice
    for which the p -> 0 limit recovers the white quadratic AND the mu -> 0
    limit of the signal-plus-correlated-noise quartic factors through this
    cubic; at p = 1 the root reproduces the additive free combination of the
    two constituent laws exactly.
    """
    z = np.asarray(z, dtype=complex)
    one = np.ones_like(z)
    return np.stack([
        z * p,
        p * (z + 1.0 - 2.0 * beta) + z,
        z + (1.0 + p) * (1.0 - beta) * one,
        one,
    ], axis=-1)


def signal_corr_poly_coeffs(z: np.ndarray, p: float, beta: float,
                            mu: float) -> np.ndarray:
    """Quartic satisfied by the signal-plus-correlated-noise resolvent."""
    z = np.asarray(z, dtype=complex)
    one = np.ones_like(z)
    c4 = z * p * p * (1.0 + mu * z)
    c3 = (2.0 * z * mu * p * (z - p * beta)
          + p * p * (1.0 + 2.0 * z * mu + z - 2.0 * beta)
          + 2.0 * z * p)
    c2 = (p * p * (mu * (1.0 - beta) ** 2 + 1.0 - beta)
          + 2.0 * p * (1.0 + z + mu * z * (2.0 - beta))
          + z - 3.0 * p * beta + z * z * mu)
    c1 = (2.0 * p * (1.0 + mu * (1.0 - beta))
          + z * (1.0 + 2.0 * mu)
          - beta * (1.0 + p) * one + 1.0)
    c0 = (1.0 + mu) * one
    return np.stack([c4, c3, c2, c1, c0], axis=-1)


def polynomial_roots(coeffs: np.ndarray) -> np.ndarray:
    """All roots of a batch of polynomials via companion-matrix eigenvalues.

    ``coeffs`` has shape (n, d+1), highest degree first, nonzero leading
    coefficients.  Returns (n, d) complex roots in LAPACK order.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim == 1:
        coeffs = coeffs[None, :]
    n, m = coeffs.shape
    d = m - 1
    if np.any(coeffs[:, 0] == 0):
        raise ValueError("leading coefficient must be nonzero")
    comp = np.zeros((n, d, d), dtype=complex)
    if d > 1:
        idx = np.arange(d - 1)
        comp[:, idx + 1, idx] = 1.0
    comp[:, 0, :] = -coeffs[:, 1:] / coeffs[:, :1]
    return np.linalg.eigvals(comp)


def polish_roots(coeffs: np.ndarray, roots: np.ndarray, steps: int = 2) -> np.ndarray:
    """Newton-polish selected roots; deterministic, improves residuals."""
    coeffs = np.asarray(coeffs, dtype=complex)
    roots = np.asarray(roots, dtype=complex)
    d = coeffs.shape[-1] - 1
    powers = np.arange(d, -1, -1)
    dcoeffs = coeffs[..., :-1] * powers[:-1]
    for _ in range(steps):
        pv = np.zeros_like(roots)
        dv = np.zeros_like(roots)
        for k in range(d + 1):
            pv = pv * roots + coeffs[..., k]
            if k < d:
                dv = dv * roots + dcoeffs[..., k]
        safe = np.abs(dv) > 0
        roots = np.where(safe, roots - pv / np.where(safe, dv, 1.0), roots)
    return roots


@dataclass(frozen=True)
class SpectralPolynomial:
    """A polynomial family P(S; z) = 0 encoding a resolvent S(z).

    ``coeff_rule`` maps an array of complex z to stacked coefficient rows
    (highest degree first).  ``upper_hint`` is a coarse upper bound on the
    support used to size default grids, and ``mass_at_zero`` is the zero atom
    of the encoded measure.
    """

    degree: int
    coeff_rule: Callable[[np.ndarray], np.ndarray]
    upper_hint: float
    mass_at_zero: float = 0.0
    label: str = ""

    def coeffs(self, z: ArrayLike) -> np.ndarray:
        return self.coeff_rule(np.asarray(z, dtype=complex))

    def stieltjes(self, z: ArrayLike) -> Union[complex, np.ndarray]:
        """Physical resolvent branch at z (requires Im z > 0).

        The branch is selected by deterministic homotopy: at large imaginary
        part the physical root is the unique one near -1/z; it is then tracked
        rung by rung down a geometric imaginary-axis ladder to the requested
        points.  This is robust where a plain max-imaginary-part rule picks a
        spurious complex pair outside the support.
        """
        z_arr = np.asarray(z, dtype=complex)
        scalar = z_arr.ndim == 0
        z_arr = np.atleast_1d(z_arr)
        if np.any(z_arr.imag <= 0):
            raise ValueError("stieltjes evaluation requires Im z > 0")
        roots = self._track(z_arr)
        if np.any(roots.imag <= -1e-9):
            raise BranchSelectionError("tracked branch lost positive imaginary part")
        return complex(roots[0]) if scalar else roots

    def _track(self, z_arr: np.ndarray) -> np.ndarray:
        y_target = z_arr.imag
        y_top = 4.0 * max(1.0, self.upper_hint, float(np.max(np.abs(z_arr.real))))
        ratio = np.maximum(y_top / y_target, 1.0)
        n_steps = int(np.ceil(np.log10(np.max(ratio)) / _LADDER_DECADES_PER_STEP)) + 2
        ts = np.linspace(0.0, 1.0, n_steps)
        current = None
        for t in ts:
            # per-point geometric ladder from y_top down to Im z
            y = y_top * (y_target / y_top) ** t
            zs = z_arr.real + 1j * np.maximum(y, y_target)
            rows = self.coeffs(zs)
            roots = polynomial_roots(rows)
            if current is None:
                target = -1.0 / zs
            else:
                target = current
            # relative distance keeps the tracker on pole-type branches (near
            # a zero atom |S| grows like 1/y between rungs, so the absolute
            # nearest root would be a stationary spurious one)
            dist = np.abs(roots - target[:, None]) / (1.0 + np.abs(roots))
            pick = np.argmin(dist, axis=1)
            current = roots[np.arange(len(zs)), pick]
            current = polish_roots(rows, current)
        return current

    def density(self, grid: np.ndarray,
                y_offset: float = DEFAULT_Y_OFFSET) -> np.ndarray:
        """Continuous density (1/pi) Im S(lambda + i y_offset), clipped at 0."""
        if y_offset <= 0:
            raise ValueError("y_offset must be positive")
        grid = np.asarray(grid, dtype=float)
        vals = self.stieltjes(grid + 1j * y_offset)
        return np.maximum(np.atleast_1d(vals).imag / np.pi, 0.0)

    def density_at(self, lam: float, y_offset: float = DEFAULT_Y_OFFSET) -> float:
        return float(self.density(np.array([lam]), y_offset)[0])

    def _atom_smear(self, lam, y_offset: float):
        # off-axis evaluation turns the zero atom into an exact Lorentzian
        # m (y/pi) / (lambda^2 + y^2); subtract it so the curve carries only
        # the continuous part (the atom is reported via mass_at_zero)
        return self.mass_at_zero * (y_offset / np.pi) / (lam * lam
                                                         + y_offset * y_offset)

    def continuous_density_at(self, lam: float,
                              y_offset: float = DEFAULT_Y_OFFSET) -> float:
        return float(max(0.0, self.density_at(lam, y_offset)
                         - self._atom_smear(lam, y_offset)))

    def curve(self, grid: Optional[np.ndarray] = None,
              y_offset: float = DEFAULT_Y_OFFSET,
              points: int = DEFAULT_GRID_POINTS) -> AepdfCurve:
        if grid is None:
            grid = default_grid(self.upper_hint, points)
        curve = density_from_stieltjes(self, grid, y_offset,
                                       mass_at_zero=self.mass_at_zero)
        if self.mass_at_zero > 1e-12:
            curve.densities = np.maximum(
                0.0, curve.densities - self._atom_smear(curve.lambdas, y_offset))
            curve.evaluator = lambda lam: self.continuous_density_at(lam, y_offset)
        return curve

    def support(self, density_floor: float = DEFAULT_DENSITY_FLOOR,
                y_offset: float = DEFAULT_Y_OFFSET,
                points: int = DEFAULT_GRID_POINTS) -> SpectralSupport:
        return support_from_density(self.curve(y_offset=y_offset, points=points),
                                    density_floor)


def _signal_atom(p: float, beta: float) -> float:
    # free additive combination of two rank-(beta N) parts: atom (1 - 2 beta)^+
    if p > 0:
        return max(0.0, 1.0 - 2.0 * beta)
    return max(0.0, 1.0 - beta)


def noise_polynomial(beta: float, mu: float) -> SpectralPolynomial:
    """Correlated-noise resolvent family (white at mu = 0)."""
    beta = _check_beta(beta)
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    hint = tilted_support(beta, mu).lambda_max
    return SpectralPolynomial(
        degree=2,
        coeff_rule=lambda z: noise_poly_coeffs(z, beta, mu),
        upper_hint=hint,
        mass_at_zero=max(0.0, 1.0 - beta),
        label=f"noise(beta={beta:g}, mu={mu:g})",
    )


def signal_white_polynomial(p: float, beta: float) -> SpectralPolynomial:
    """Signal-plus-white-noise resolvent family."""
    beta = _check_beta(beta)
    if p < 0:
        raise ValueError("signal power must be nonnegative")
    hint = p * mp_support(beta).lambda_max + mp_support(beta).lambda_max
    return SpectralPolynomial(
        degree=3,
        coeff_rule=lambda z: signal_white_poly_coeffs(z, p, beta),
        upper_hint=hint,
        mass_at_zero=_signal_atom(p, beta),
        label=f"signal-white(p={p:g}, beta={beta:g})",
    )


def signal_corr_polynomial(p: float, beta: float, mu: float) -> SpectralPolynomial:
    """Signal-plus-correlated-noise resolvent family."""
    beta = _check_beta(beta)
    if p < 0 or mu < 0:
        raise ValueError("signal power and mu must be nonnegative")
    hint = p * mp_support(beta).lambda_max + tilted_support(beta, mu).lambda_max
    return SpectralPolynomial(
        degree=4,
        coeff_rule=lambda z: signal_corr_poly_coeffs(z, p, beta, mu),
        upper_hint=hint,
        mass_at_zero=_signal_atom(p, beta),
        label=f"signal-corr(p={p:g}, beta={beta:g}, mu={mu:g})",
    )


def stieltjes_noise_correlated(z: complex, beta: float, mu: float) -> complex:
    """Correlated-noise resolvent at a single upper-half-plane point."""
    return complex(noise_polynomial(beta, mu).stieltjes(z))


def stieltjes_signal_white(z: complex, p: float, beta: float) -> complex:
    """Signal-plus-white-noise resolvent at a single upper-half-plane point."""
    return complex(signal_white_polynomial(p, beta).stieltjes(z))


def stieltjes_signal_correlated(z: complex, p: float, beta: float,
                                mu: float) -> complex:
    """Signal-plus-correlated-noise resolvent at a single point."""
    return complex(signal_corr_polynomial(p, beta, mu).stieltjes(z))


def density_from_stieltjes(transform, lambda_grid: np.ndarray,
                           y_offset: float = DEFAULT_Y_OFFSET,
                           mass_at_zero: Optional[float] = None) -> AepdfCurve:
    """Recover a density curve from a resolvent via its boundary imaginary part.

    ``transform`` is either a :class:`SpectralPolynomial` or a plain callable
    z -> S(z).  Evaluator failures are re-raised with the offending grid
    location attached.
    """
    if y_offset <= 0:
        raise ValueError("y_offset must be positive")
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("lambda grid must be strictly increasing")
    if isinstance(transform, SpectralPolynomial):
        try:
            dens = transform.density(grid, y_offset)
        except Exception as exc:
            raise RuntimeError(
                f"density evaluation failed on grid "
                f"[{grid[0]:g}, {grid[-1]:g}]: {exc}"
            ) from exc
        atom = transform.mass_at_zero if mass_at_zero is None else mass_at_zero
        return AepdfCurve(
            grid, dens, mass_at_zero=atom,
            evaluator=lambda lam: transform.density_at(lam, y_offset),
        )
    dens = np.empty_like(grid)
    for i, lam in enumerate(grid):
        try:
            dens[i] = max(0.0, complex(transform(lam + 1j * y_offset)).imag / np.pi)
        except Exception as exc:
            raise RuntimeError(f"evaluator failed at lambda={lam:g}: {exc}") from exc
    return AepdfCurve(
        grid, dens, mass_at_zero=0.0 if mass_at_zero is None else mass_at_zero,
        evaluator=lambda lam: max(
            0.0, complex(transform(lam + 1j * y_offset)).imag / np.pi
        ),
    )


def support_from_density(curve: AepdfCurve,
                         density_floor: float = DEFAULT_DENSITY_FLOOR,
                         tol: float = 1e-4) -> SpectralSupport:
    """Locate the support as the density's excursion above ``density_floor``.

    Grid bracketing is refined by bisection on the curve's evaluator (when it
    carries one) to a grid-independent tolerance; otherwise the crossing is
    interpolated linearly between grid points.
    """
    above = np.nonzero(curve.densities > density_floor)[0]
    if len(above) == 0:
        raise EmptySupportError(
            f"density never exceeds floor {density_floor:g}"
        )
    grid = curve.lambdas
    i0, i1 = int(above[0]), int(above[-1])

    def refine(lo: float, hi: float, rising: bool) -> float:
        # invariant: density(> floor) side is hi for rising edges, lo for falling
        if curve.evaluator is None:
            d_lo = float(np.interp(lo, grid, curve.densities))
            d_hi = float(np.interp(hi, grid, curve.densities))
            if d_hi == d_lo:
                return lo if rising else hi
            t = (density_floor - d_lo) / (d_hi - d_lo)
            return lo + max(0.0, min(1.0, t)) * (hi - lo)
        f = curve.evaluator
        a, b = lo, hi
        while b - a > tol:
            m = 0.5 * (a + b)
            if (f(m) > density_floor) == rising:
                b = m
            else:
                a = m
        return 0.5 * (a + b)

    if i0 == 0:
        lam_min = float(grid[0])
    else:
        lam_min = refine(float(grid[i0 - 1]), float(grid[i0]), rising=True)
    if i1 == len(grid) - 1:
        lam_max = float(grid[i1])
    else:
        lam_max = refine(float(grid[i1]), float(grid[i1 + 1]), rising=False)
    if abs(lam_min) < tol:
        lam_min = max(0.0, lam_min)
    return SpectralSupport(lam_min, lam_max)


# ---------------------------------------------------------------------------
# R / Sigma transform utilities
# ---------------------------------------------------------------------------

def r_mp(beta: float, z: complex) -> complex:
    """R transform beta / (1 - z) of the white sample-covariance law."""
    _check_beta(beta)
    z = complex(z)
    if abs(1.0 - z) < 1e-14:
        raise ValueError("r_mp has a pole at z = 1")
    return beta / (1.0 - z)


def r_scaled(a: float, beta: float, z: complex) -> complex:
    """Scaling rule R_{aX}(z) = a R_X(a z) for a > 0."""
    if a <= 0:
        raise ValueError("scale must be positive")
    return a * r_mp(beta, a * complex(z))


def sigma_mp(beta: float, z: complex) -> complex:
    """Sigma transform 1 / (z + beta) of the white sample-covariance law."""
    _check_beta(beta)
    z = complex(z)
    if abs(z + beta) < 1e-14:
        raise ValueError("sigma_mp has a pole at z = -beta")
    return 1.0 / (z + beta)


def r_noise_correlated(beta: float, mu: float, z: complex) -> complex:
    """R transform of the correlated-noise law.

    R(z) = -(z - 1 + sqrt((z - 1)^2 - 4 mu beta z)) / (2 mu z) on the branch
    that stays analytic at the origin (R(0) = beta), recovering beta / (1 - z)
    as mu -> 0.  Of the two square-root candidates the physical one has the
    smaller modulus for |z| < 1 / (mu beta), which covers the composition
    region used here.
    """
    _check_beta(beta)
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    z = complex(z)
    if mu == 0.0:
        return r_mp(beta, z)
    if abs(z) < 1e-14:
        return complex(beta)
    s = np.sqrt(complex((z - 1.0) ** 2 - 4.0 * mu * beta * z))
    cand = (-(z - 1.0 + s) / (2.0 * mu * z), -(z - 1.0 - s) / (2.0 * mu * z))
    return min(cand, key=abs)
