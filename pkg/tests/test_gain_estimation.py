"""Tests for genie / pilot / blind estimation of the precoding factor."""

import numpy as np
import pytest

from onebit_mimo import (
    PrecodeResult,
    blind_estimate,
    genie_estimate,
    pilot_mle,
)
from onebit_mimo.gain_estimation import EPS_BETA


class TestPilotMle:
    def test_noiseless_unit_factor(self):
        es = 1.0
        est = pilot_mle(np.sqrt(es), es=es)
        assert est.value == pytest.approx(1.0)
        assert not est.clamped
        assert est.method == "pilot_mle"

    def test_doubled_observation_halves_estimate(self):
        est = pilot_mle(2.0 * np.sqrt(1.0), es=1.0)
        assert est.value == pytest.approx(0.5)

    def test_vanishing_observation_clamped(self):
        est = pilot_mle(1e-15 + 0j)
        assert est.clamped
        assert est.value == EPS_BETA

    def test_negative_real_part_clamped(self):
        est = pilot_mle(-1.0 + 0j)
        assert est.clamped
        assert est.value == EPS_BETA

    def test_median_accuracy_at_high_snr(self):
        # y = (1/beta) sqrt(Es) + n at rho = 20 dB; the estimate inverts y
        rng = np.random.default_rng(0)
        beta = 0.7
        es, n0 = 1.0, 10.0 ** (-2.0)
        rel_errors = []
        for _ in range(10_000):
            noise = np.sqrt(n0 / 2) * (rng.standard_normal() + 1j * rng.standard_normal())
            y1 = np.sqrt(es) / beta + noise
            est = pilot_mle(y1, es=es)
            rel_errors.append(abs(est.value - beta) / beta)
        assert np.median(rel_errors) < 0.15


class TestBlindEstimate:
    def test_exact_when_sample_energy_matches(self):
        # noiseless y = s/beta with the frame at exactly average energy
        beta = 1.6
        s = np.array([1 + 0j, -1 + 0j, 1j, -1j])  # per-symbol energy 1
        est = blind_estimate(s / beta, es=1.0, noise_var=0.0)
        assert est.value == pytest.approx(beta, rel=1e-12)
        assert not est.clamped

    def test_all_zero_observation_clamped(self):
        est = blind_estimate(np.zeros(8, dtype=complex), es=1.0, noise_var=0.0)
        assert est.clamped

    def test_large_sample_consistency_with_known_error_energy(self):
        rng = np.random.default_rng(1)
        beta, es, n0, e0 = 2.0, 1.0, 0.025, 0.01
        k = 100_000
        s = np.exp(2j * np.pi * rng.integers(0, 4, k) / 4)  # unit energy
        e = np.sqrt(e0 / 2) * (rng.standard_normal(k) + 1j * rng.standard_normal(k))
        n = np.sqrt(n0 / 2) * (rng.standard_normal(k) + 1j * rng.standard_normal(k))
        y = s / beta + e + n
        est = blind_estimate(y, es=es, noise_var=n0, err_energy=e0)
        assert abs(est.value / beta - 1.0) < 0.01

    def test_scale_consistency(self):
        # scaling y by alpha while scaling assumed energies by alpha^2
        # divides the estimate by alpha
        rng = np.random.default_rng(2)
        y = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        n0, e0 = 0.05, 0.02
        base = blind_estimate(y, es=1.0, noise_var=n0, err_energy=e0)
        for alpha in (0.5, 2.0, 10.0):
            scaled = blind_estimate(alpha * y, es=1.0,
                                    noise_var=alpha ** 2 * n0,
                                    err_energy=alpha ** 2 * e0)
            assert scaled.value == pytest.approx(base.value / alpha, rel=1e-12)

    def test_rejects_empty_window(self):
        with pytest.raises(ValueError):
            blind_estimate(np.array([], dtype=complex), es=1.0, noise_var=0.1)


class TestGenie:
    def test_passes_through_exact_factor(self):
        pre = PrecodeResult(x=np.zeros((2, 1), dtype=complex), beta=0.42)
        est = genie_estimate(pre, ue=3)
        assert est.value == 0.42
        assert est.method == "genie"
        assert est.ue == 3

    def test_zero_factor_clamped(self):
        pre = PrecodeResult(x=np.zeros((2, 1), dtype=complex), beta=0.0)
        est = genie_estimate(pre)
        assert est.clamped
        assert est.value == EPS_BETA
