"""Closed-form laws, resolvent polynomials, and support extraction."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from scnsense.spectra import (
    AepdfCurve,
    EmptySupportError,
    SpectralSupport,
    density_from_stieltjes,
    mp_atom,
    mp_curve,
    mp_density,
    mp_support,
    noise_poly_coeffs,
    noise_polynomial,
    polynomial_roots,
    r_mp,
    r_noise_correlated,
    r_scaled,
    sigma_mp,
    signal_corr_polynomial,
    signal_white_poly_coeffs,
    signal_white_polynomial,
    stieltjes_noise_correlated,
    stieltjes_signal_correlated,
    stieltjes_signal_white,
    support_from_density,
    theta_density,
    theta_support,
    tilted_noise_curve,
    tilted_noise_density,
    tilted_support,
)

BETAS = [0.1, 1 / 6, 0.5, 1.0, 2.0]


class TestClosedFormSupports:
    def test_mp_support_beta_one(self):
        sup = mp_support(1.0)
        assert sup.lambda_min == 0.0
        assert sup.lambda_max == 4.0
        assert math.isinf(sup.scn)

    def test_mp_support_sixth(self):
        sup = mp_support(1 / 6)
        r = math.sqrt(1 / 6)
        assert sup.lambda_min == pytest.approx((1 - r) ** 2, abs=1e-12)
        assert sup.lambda_max == pytest.approx((1 + r) ** 2, abs=1e-12)
        assert sup.lambda_min == pytest.approx(0.3502, abs=1e-4)
        assert sup.lambda_max == pytest.approx(1.9832, abs=1e-4)

    def test_mp_support_four(self):
        sup = mp_support(4.0)
        assert (sup.lambda_min, sup.lambda_max) == (1.0, 9.0)
        assert sup.scn == 9.0

    @pytest.mark.parametrize("beta", [0, -1, float("nan"), float("inf")])
    def test_mp_support_domain(self, beta):
        with pytest.raises(ValueError):
            mp_support(beta)

    @pytest.mark.parametrize("beta", BETAS + [4.0])
    def test_tilted_reduces_to_white_at_zero(self, beta):
        white = mp_support(beta)
        tilted = tilted_support(beta, 0.0)
        assert tilted.lambda_min == white.lambda_min
        assert tilted.lambda_max == white.lambda_max

    def test_tilted_beta_one(self):
        sup = tilted_support(1.0, 0.125)
        assert sup.lambda_min == 0.0
        assert sup.lambda_max == pytest.approx(4.5, abs=1e-12)

    def test_tilted_sixth_third(self):
        # direct evaluation of the closed form at beta=1/6, mu=1/3
        beta, mu = 1 / 6, 1 / 3
        base = 1 + beta + 2 * mu * beta
        spread = 2 * math.sqrt(beta) * math.sqrt((1 + mu) * (1 + mu * beta))
        sup = tilted_support(beta, mu)
        assert sup.lambda_min == pytest.approx(base - spread, abs=1e-12)
        assert sup.lambda_max == pytest.approx(base + spread, abs=1e-12)
        assert sup.lambda_min == pytest.approx(0.3091, abs=1e-4)
        assert sup.lambda_max == pytest.approx(2.2464, abs=1e-4)

    def test_tilted_domain(self):
        with pytest.raises(ValueError):
            tilted_support(1.0, -0.1)

    def test_theta_support_half(self):
        sup = theta_support(0.5)
        assert sup.lambda_min == pytest.approx(1 / 3)
        assert sup.lambda_max == pytest.approx(3.0)

    def test_theta_domain(self):
        for rho in (-0.1, 1.0, 1.5):
            with pytest.raises(ValueError):
                theta_support(rho)


class TestClosedFormDensities:
    def test_mp_density_quarter_circle_value(self):
        assert mp_density(1.0, 1.0) == pytest.approx(math.sqrt(3) / (2 * math.pi),
                                                     rel=1e-12)

    def test_mp_density_outside_support(self):
        assert mp_density(1.0, 5.0) == 0.0
        assert mp_density(1 / 6, 0.2) == 0.0
        assert mp_density(1.0, 0.0) == 0.0

    def test_mp_density_negative_lambda(self):
        with pytest.raises(ValueError):
            mp_density(1.0, -0.5)

    @pytest.mark.parametrize("beta", [1 / 6, 0.5, 1.0, 2.0])
    def test_mp_mass(self, beta):
        sup = mp_support(beta)
        mass, _ = quad(lambda x: mp_density(beta, x),
                       sup.lambda_min, sup.lambda_max, limit=200)
        assert mass + mp_atom(beta) == pytest.approx(1.0, abs=2e-3)

    def test_tilted_density_reduces_to_mp_at_beta_one(self):
        assert tilted_noise_density(1.0, 0.0, 1.0) == pytest.approx(
            mp_density(1.0, 1.0), rel=1e-12)

    def test_tilted_density_outside(self):
        assert tilted_noise_density(1.0, 0.125, 5.0) == 0.0

    def test_tilted_density_mass(self):
        # numerical quadrature of the continuous part at beta=1, mu=0.125
        mass, _ = quad(lambda x: tilted_noise_density(1.0, 0.125, x),
                       0.0, 4.5, limit=200)
        assert mass == pytest.approx(1.0, abs=2e-3)

    def test_theta_density_zero_rho_degenerate(self):
        grid = np.linspace(0.0, 3.0, 50)
        assert np.all(theta_density(0.0, grid) == 0.0)

    def test_theta_density_mass_and_mu(self):
        rho = 0.5
        sup = theta_support(rho)
        mass, _ = quad(lambda x: theta_density(rho, x),
                       sup.lambda_min, sup.lambda_max, limit=200)
        assert mass == pytest.approx(1.0, abs=2e-3)
        # mu recovered from the support endpoints equals rho^2/(1-rho^2)
        s1, s2 = sup.lambda_min, sup.lambda_max
        mu = (math.sqrt(s2) - math.sqrt(s1)) ** 2 / (4 * s1 * s2)
        assert mu == pytest.approx(rho ** 2 / (1 - rho ** 2), rel=1e-12)


class TestPolynomials:
    def test_white_quadratic_from_noise_family(self):
        coeffs = noise_poly_coeffs(np.array([2.0 + 1.0j]), 0.5, 0.0)[0]
        z = 2.0 + 1.0j
        assert coeffs[0] == pytest.approx(z)
        assert coeffs[1] == pytest.approx(z + 0.5)
        assert coeffs[2] == pytest.approx(1.0)

    def test_cubic_collapses_to_quadratic_at_zero_power(self):
        z = np.array([1.5 + 0.3j])
        cubic = signal_white_poly_coeffs(z, 0.0, 0.5)[0]
        assert cubic[0] == 0.0
        quad_c = noise_poly_coeffs(z, 0.5, 0.0)[0]
        assert np.allclose(cubic[1:], quad_c)

    @pytest.mark.parametrize("z", [0.5 + 1e-6j, 1.0 + 0.01j, 3.0 + 1.0j,
                                   5.0 + 1e-8j])
    def test_branch_positive_imag(self, z):
        for s in (stieltjes_noise_correlated(z, 1.0, 0.125),
                  stieltjes_signal_white(z, 1.0, 1.0),
                  stieltjes_signal_correlated(z, 1.0, 1.0, 0.03)):
            assert s.imag > 0.0

    def test_stieltjes_requires_upper_half_plane(self):
        with pytest.raises(ValueError):
            stieltjes_signal_white(1.0 - 0.1j, 1.0, 1.0)
        with pytest.raises(ValueError):
            stieltjes_noise_correlated(1.0 + 0.0j, 1.0, 0.1)

    @pytest.mark.parametrize("family", [
        noise_polynomial(0.5, 0.2),
        signal_white_polynomial(0.7, 1 / 6),
        signal_corr_polynomial(0.7, 1.0, 0.05),
    ])
    def test_root_residual(self, family):
        zs = np.linspace(0.2, 1.2 * family.upper_hint, 40) + 1e-6j
        roots = family.stieltjes(zs)
        coeffs = family.coeffs(zs)
        deg = coeffs.shape[-1] - 1
        res = np.zeros_like(roots)
        for k in range(deg + 1):
            res = res * roots + coeffs[:, k]
        bound = 1e-9 * np.max(np.abs(coeffs), axis=-1)
        assert np.all(np.abs(res) <= bound)

    def test_noise_closed_form_matches_quadratic_root(self):
        # the correlated-noise resolvent in closed form:
        # (-A + sqrt((z-1-beta)^2 - 4 beta (1+mu z))) / (2 z (1+mu z)),
        # A = z(1+2mu) + 1 - beta, branch fixed by Im S > 0
        beta, mu = 0.5, 0.2
        for lam in (0.5, 1.0, 2.0):
            z = lam + 1e-4j
            a = z * (1 + 2 * mu) + 1 - beta
            disc = np.sqrt((z - 1 - beta) ** 2 - 4 * beta * (1 + mu * z))
            cands = [(-a + disc) / (2 * z * (1 + mu * z)),
                     (-a - disc) / (2 * z * (1 + mu * z))]
            closed = max(cands, key=lambda s: s.imag)
            assert stieltjes_noise_correlated(z, beta, mu) == pytest.approx(
                closed, abs=1e-9)

    def test_noise_mu_zero_matches_white_quadratic(self):
        z = 1.3 + 0.2j
        s = stieltjes_noise_correlated(z, 0.5, 0.0)
        assert z * s * s + (z + 0.5) * s + 1 == pytest.approx(0.0, abs=1e-12)

    def test_polynomial_roots_rejects_zero_leading(self):
        with pytest.raises(ValueError):
            polynomial_roots(np.array([[0.0, 1.0, 2.0]]))


class TestDensityRecovery:
    def test_mp_quadratic_density_matches_closed_form(self):
        grid = np.linspace(0.02, 3.98, 400)
        family = noise_polynomial(1.0, 0.0)
        dens = family.density(grid)
        assert np.max(np.abs(dens - mp_density(1.0, grid))) <= 1e-3

    def test_correlated_noise_density_matches_tilted(self):
        beta, mu = 1.0, 0.125
        grid = np.linspace(0.01, 4.6, 500)
        dens = noise_polynomial(beta, mu).density(grid)
        assert np.max(np.abs(dens - tilted_noise_density(beta, mu, grid))) <= 1e-3

    def test_density_vanishes_outside_support(self):
        family = noise_polynomial(1.0, 0.125)
        grid = np.linspace(4.6, 6.0, 50)
        assert np.max(family.density(grid)) <= 1e-4

    def test_tv_mass_with_atom(self):
        # at beta < 1 the polynomial-encoded curves carry a zero atom
        family = noise_polynomial(1 / 6, 0.2)
        curve = family.curve()
        assert curve.mass_at_zero == pytest.approx(5 / 6)
        curve.validate(eps_int=1e-2)

    def test_signal_sum_atom_mass(self):
        family = signal_corr_polynomial(0.25, 1 / 6, 0.1)
        curve = family.curve()
        assert curve.mass_at_zero == pytest.approx(1 - 2 / 6)
        curve.validate(eps_int=1e-2)

    def test_callable_transform_path(self):
        grid = np.linspace(0.05, 3.95, 100)
        fam = noise_polynomial(1.0, 0.0)
        curve = density_from_stieltjes(lambda z: fam.stieltjes(z), grid)
        assert np.max(np.abs(curve.densities - mp_density(1.0, grid))) <= 1e-3

    def test_callable_failure_reports_location(self):
        def bad(z):
            raise FloatingPointError("boom")

        with pytest.raises(RuntimeError, match="lambda=0.5"):
            density_from_stieltjes(bad, np.array([0.5, 1.0]))

    def test_grid_must_increase(self):
        with pytest.raises(ValueError):
            density_from_stieltjes(noise_polynomial(1.0, 0.0),
                                   np.array([1.0, 0.5]))


class TestSupportExtraction:
    def test_mp_curve_support(self):
        sup = support_from_density(mp_curve(1.0))
        assert sup.lambda_min <= 1e-3
        assert sup.lambda_max == pytest.approx(4.0, abs=1e-3)

    def test_cubic_free_combination_edge(self):
        # sum of two identical-ratio white laws doubles the ratio index:
        # at p=1, beta=1 the upper edge is (1+sqrt(2))^2
        sup = signal_white_polynomial(1.0, 1.0).support()
        assert sup.lambda_max == pytest.approx((1 + math.sqrt(2)) ** 2, abs=1e-3)

    @pytest.mark.parametrize("beta", [1 / 6, 0.5, 1.0])
    def test_cubic_unit_power_doubled_ratio(self, beta):
        sup = signal_white_polynomial(1.0, beta).support()
        assert sup.lambda_max == pytest.approx((1 + math.sqrt(2 * beta)) ** 2,
                                               abs=2e-3)

    def test_tilted_curve_support(self):
        sup = support_from_density(tilted_noise_curve(1.0, 0.125))
        assert sup.lambda_max == pytest.approx(4.5, abs=1e-3)

    def test_support_edges_agree_with_vanishing_imaginary_part(self):
        # scan for the excursion of the continuous density as an independent
        # edge locator
        beta, mu = 0.5, 0.2
        family = noise_polynomial(beta, mu)
        grid = np.linspace(1e-4, 1.5 * family.upper_hint, 4000)
        dens = np.array([family.continuous_density_at(x) for x in grid[::4]])
        above = np.nonzero(dens > 1e-4)[0]
        scan_min, scan_max = grid[::4][above[0]], grid[::4][above[-1]]
        closed = tilted_support(beta, mu)
        assert scan_min == pytest.approx(closed.lambda_min, abs=6e-3)
        assert scan_max == pytest.approx(closed.lambda_max, abs=6e-3)

    def test_polynomial_support_with_low_edge(self):
        # lower edge below 0.1 next to a substantial zero atom
        beta, mu = 0.5, 0.2
        sup = noise_polynomial(beta, mu).support()
        closed = tilted_support(beta, mu)
        assert sup.lambda_min == pytest.approx(closed.lambda_min, abs=2e-3)
        assert sup.lambda_max == pytest.approx(closed.lambda_max, abs=1e-3)

    def test_empty_support_error(self):
        curve = AepdfCurve(np.linspace(0, 1, 10), np.zeros(10))
        with pytest.raises(EmptySupportError):
            support_from_density(curve)

    def test_grid_interpolation_fallback(self):
        grid = np.linspace(0.0, 6.0, 3000)
        dens = mp_density(1.0, grid)
        curve = AepdfCurve(grid, dens)  # no evaluator attached
        sup = support_from_density(curve)
        assert sup.lambda_max == pytest.approx(4.0, abs=5e-3)


class TestLimitChain:
    def test_quartic_to_cubic(self):
        for p, beta in [(1.0, 1.0), (0.25, 1 / 6)]:
            quartic = signal_corr_polynomial(p, beta, 1e-8)
            cubic = signal_white_polynomial(p, beta)
            grid = np.linspace(0.0, cubic.upper_hint, 2000)[1:]
            dq = quartic.density(grid)
            dc = cubic.density(grid)
            assert np.max(np.abs(dq - dc)) <= 1e-4

    def test_cubic_to_quadratic(self):
        for beta in (1.0, 1 / 6):
            cubic = signal_white_polynomial(1e-10, beta)
            white = noise_polynomial(beta, 0.0)
            grid = np.linspace(0.0, white.upper_hint, 2000)[1:]
            assert np.max(np.abs(cubic.density(grid) - white.density(grid))) <= 1e-4


class TestTransformUtils:
    def test_r_scaled_identity(self):
        z = 0.3 + 0.1j
        assert r_scaled(1.0, 0.5, z) == r_mp(0.5, z)

    def test_combined_r_additivity(self):
        # scaled white term p beta / (1 - p z) plus the unit white term
        p, beta = 0.7, 0.5
        z = 0.2 + 0.05j
        combined = r_mp(beta, z) + r_scaled(p, beta, z)
        assert combined == pytest.approx(beta / (1 - z) + p * beta / (1 - p * z))

    def test_sigma_mp(self):
        assert sigma_mp(0.5, 1.0 + 0.0j) == pytest.approx(1 / 1.5)
        with pytest.raises(ValueError):
            sigma_mp(0.5, -0.5 + 0.0j)

    def test_r_mp_pole(self):
        with pytest.raises(ValueError):
            r_mp(1.0, 1.0 + 0j)

    @pytest.mark.parametrize("z", [0.2 + 0.1j, -0.4 + 0.3j, 0.5 - 0.2j])
    def test_r_noise_correlated_limit(self, z):
        vals = [r_noise_correlated(0.5, mu, z) for mu in (1e-4, 1e-6)]
        target = r_mp(0.5, z)
        assert abs(vals[1] - target) < abs(vals[0] - target) + 1e-12
        assert vals[1] == pytest.approx(target, abs=1e-4)

    def test_r_noise_correlated_origin(self):
        assert r_noise_correlated(0.5, 0.3, 0.0) == pytest.approx(0.5)


class TestDomainTypes:
    def test_support_validation(self):
        with pytest.raises(ValueError):
            SpectralSupport(2.0, 1.0)
        with pytest.raises(ValueError):
            SpectralSupport(float("nan"), 1.0)

    def test_curve_validation(self):
        with pytest.raises(ValueError):
            AepdfCurve(np.array([0.0, 0.0, 1.0]), np.zeros(3))
        with pytest.raises(ValueError):
            AepdfCurve(np.array([0.0, 1.0]), np.array([0.1, -0.2]))
        with pytest.raises(ValueError):
            AepdfCurve(np.array([0.0, 1.0]), np.array([0.1, 0.1]),
                       mass_at_zero=1.5)

    def test_curve_mass_check(self):
        curve = mp_curve(1.0)
        curve.validate(eps_int=1e-2)
        bad = AepdfCurve(curve.lambdas, 0.5 * curve.densities)
        with pytest.raises(ValueError):
            bad.validate(eps_int=1e-2)
