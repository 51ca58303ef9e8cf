"""Eigenvalue / condition-number spectrum sensing under correlated noise.

A library plus CLI for: asymptotic eigenvalue densities and supports of white
and exponentially correlated sample covariances, the resolvent calculus that
combines signal and noise spectra, condition-number decision thresholds,
Monte Carlo sensing experiments, and maximum-eigenvalue SNR estimation.
"""

from .correlation import (
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
from .detection import (
    Decision,
    FsSweepPoint,
    SensingResult,
    decide,
    fs_sweep,
    mc_correct_ratio,
    mc_sense_point,
    scenario_threshold,
    threshold_mp,
    threshold_tilted,
)
from .simulate import (
    CASE1,
    CASE2,
    CASE_SUM,
    H0,
    H1,
    SampleStats,
    Scenario,
    derive_trial_seed,
    empirical_scn,
    gen_ccs_gaussian,
    gen_received,
    hermitian_eigenvalues,
    ks_distance,
    l1_density_distance,
    pooled_eigenvalues,
    run_trial,
    sample_covariance,
    sample_stats,
    stats_from_covariance,
    trial_covariance,
)
from .snr import (
    LookupTable,
    SnrEstimate,
    build_lookup,
    estimate_snr,
    mse_sweep,
    normalized_mse,
)
from .spectra import (
    AepdfCurve,
    SpectralPolynomial,
    SpectralSupport,
    density_from_stieltjes,
    mp_density,
    mp_support,
    noise_polynomial,
    r_mp,
    r_noise_correlated,
    r_scaled,
    sigma_mp,
    signal_corr_polynomial,
    signal_white_polynomial,
    stieltjes_noise_correlated,
    stieltjes_signal_correlated,
    stieltjes_signal_white,
    support_from_density,
    theta_density,
    theta_support,
    tilted_noise_density,
    tilted_support,
)

__version__ = "0.1.0"
