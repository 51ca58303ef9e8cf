"""Exponential correlation matrix and its parameter conversions."""

import math

import numpy as np
import pytest

from scnsense.correlation import (
    LINEAR,
    SPECTRUM_RATIO,
    CorrelationSpec,
    OutOfModelError,
    exponential_theta,
    fs_rate_to_rho,
    matrix_sqrt_psd,
    mu_to_rho,
    rho_to_mu,
    rho_to_scn,
    scn_to_rho,
)


class TestExponentialTheta:
    def test_identity_at_zero(self):
        theta = exponential_theta(CorrelationSpec(0.0, 3))
        assert np.array_equal(theta, np.eye(3))

    def test_two_by_two(self):
        theta = exponential_theta(CorrelationSpec(0.5, 2))
        assert np.allclose(theta, [[1.0, 0.5], [0.5, 1.0]])
        assert np.allclose(np.linalg.eigvalsh(theta), [0.5, 1.5])

    def test_geometric_offdiagonal(self):
        theta = exponential_theta(CorrelationSpec(0.5, 3))
        assert theta[0, 2] == pytest.approx(0.25)

    @pytest.mark.parametrize("rho", [0.0, 0.3, 0.9])
    @pytest.mark.parametrize("m", [2, 5, 17])
    def test_trace_normalization(self, rho, m):
        theta = exponential_theta(CorrelationSpec(rho, m))
        assert np.trace(theta) / m == 1.0

    @pytest.mark.parametrize("rho", [0.1, 0.5, 0.95])
    def test_positive_definite(self, rho):
        theta = exponential_theta(CorrelationSpec(rho, 24))
        assert np.min(np.linalg.eigvalsh(theta)) > 0.0

    def test_rho_domain(self):
        for rho in (-0.1, 1.0):
            with pytest.raises(ValueError):
                CorrelationSpec(rho, 4)

    def test_spec_derived_fields(self):
        spec = CorrelationSpec(0.5, 8)
        assert spec.mu == pytest.approx(1 / 3)
        assert spec.scn_theta == pytest.approx(9.0)
        assert CorrelationSpec(0.5, 8, LINEAR).scn_theta == pytest.approx(3.0)

    def test_finite_scn_monotone_and_converging(self):
        # finite-matrix condition number grows with rho and approaches the
        # squared edge ratio as the dimension grows
        for m in (2, 8, 64):
            scns = []
            for rho in (0.1, 0.3, 0.5, 0.7):
                w = np.linalg.eigvalsh(exponential_theta(CorrelationSpec(rho, m)))
                scns.append(w[-1] / w[0])
            assert all(b > a for a, b in zip(scns, scns[1:]))
        for rho in (0.3, 0.5, 0.7):
            w = np.linalg.eigvalsh(exponential_theta(CorrelationSpec(rho, 256)))
            target = ((1 + rho) / (1 - rho)) ** 2
            assert w[-1] / w[0] == pytest.approx(target, rel=0.10)


class TestMatrixSqrt:
    def test_identity(self):
        assert np.allclose(matrix_sqrt_psd(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        assert np.allclose(matrix_sqrt_psd(np.diag([4.0, 1.0])),
                           np.diag([2.0, 1.0]))

    def test_reconstruction(self):
        theta = exponential_theta(CorrelationSpec(0.5, 2))
        root = matrix_sqrt_psd(theta)
        assert np.max(np.abs(root @ root - theta)) <= 1e-12

    @pytest.mark.parametrize("rho,m", [(0.3, 6), (0.8, 20)])
    def test_reconstruction_general(self, rho, m):
        theta = exponential_theta(CorrelationSpec(rho, m))
        root = matrix_sqrt_psd(theta)
        assert np.max(np.abs(root @ root - theta)) <= 1e-10

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            matrix_sqrt_psd(np.diag([1.0, -0.5]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            matrix_sqrt_psd(np.array([[1.0, 0.5], [0.0, 1.0]]))


class TestConversions:
    def test_mu_zero(self):
        assert rho_to_mu(0.0) == 0.0
        assert mu_to_rho(0.0) == 0.0

    def test_mu_half(self):
        assert rho_to_mu(0.5) == pytest.approx(1 / 3, rel=1e-15)

    @pytest.mark.parametrize("rho", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8,
                                     0.9])
    def test_round_trip(self, rho):
        assert mu_to_rho(rho_to_mu(rho)) == pytest.approx(rho, abs=1e-12)

    def test_scn_conventions(self):
        assert rho_to_scn(0.5, LINEAR) == pytest.approx(3.0)
        assert rho_to_scn(0.0, LINEAR) == 1.0
        assert rho_to_scn(0.0, SPECTRUM_RATIO) == 1.0
        assert rho_to_scn(0.5, SPECTRUM_RATIO) == pytest.approx(9.0)

    def test_scn_to_rho_spectrum_ratio(self):
        # invert ((1+rho)/(1-rho))^2 = 2.5
        r = math.sqrt(2.5)
        expected = (r - 1) / (r + 1)
        assert scn_to_rho(2.5, SPECTRUM_RATIO) == pytest.approx(expected)
        assert scn_to_rho(2.5, SPECTRUM_RATIO) == pytest.approx(0.2251, abs=1e-4)

    @pytest.mark.parametrize("convention", [LINEAR, SPECTRUM_RATIO])
    @pytest.mark.parametrize("rho", [0.0, 0.2, 0.5, 0.8])
    def test_scn_round_trip(self, convention, rho):
        assert scn_to_rho(rho_to_scn(rho, convention),
                          convention) == pytest.approx(rho, abs=1e-14)

    def test_scn_domain(self):
        with pytest.raises(ValueError):
            scn_to_rho(0.8)
        with pytest.raises(ValueError):
            rho_to_scn(0.5, "bogus")


class TestSamplingRateModel:
    def test_single_branch_is_white(self):
        assert fs_rate_to_rho(3.5, 1, 60) == 0.0

    def test_linear_value(self):
        assert fs_rate_to_rho(3.5, 8, 60) == pytest.approx(3.5 * 7 / 60)

    def test_boundary(self):
        # at epsilon=3.5, N=60 the model stays legal through M=18 and leaves
        # [0, 1) at M=19
        assert fs_rate_to_rho(3.5, 18, 60) == pytest.approx(3.5 * 17 / 60)
        with pytest.raises(OutOfModelError):
            fs_rate_to_rho(3.5, 19, 60)

    def test_dimension_validation(self):
        with pytest.raises(ValueError):
            fs_rate_to_rho(3.5, 0, 60)
        with pytest.raises(ValueError):
            fs_rate_to_rho(3.5, 61, 60)
        with pytest.raises(ValueError):
            fs_rate_to_rho(-1.0, 2, 60)
