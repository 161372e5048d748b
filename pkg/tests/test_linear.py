"""Tests for linear precoding matrices and the 1-bit quantized baseline."""

import numpy as np
import pytest

from onebit_mimo import (
    SymbolFrame,
    SystemConfig,
    brute_force_qp,
    gen_rayleigh_channel,
    get_constellation,
    linear_quantized_precode,
    mrt_matrix,
    one_bit_quantize,
    qp_objective,
    zf_matrix,
)


class TestZfMatrix:
    def test_identity_channel(self):
        pm = zf_matrix(np.eye(3, dtype=complex))
        assert pm.kind == "ZF"
        assert np.allclose(pm.p, np.eye(3), atol=1e-12)

    def test_scaled_identity(self):
        pm = zf_matrix(2.0 * np.eye(2, dtype=complex))
        assert np.allclose(pm.p, 0.5 * np.eye(2), atol=1e-12)

    def test_zero_forcing_residual(self):
        rng = np.random.default_rng(0)
        h = rng.standard_normal((4, 8)) + 1j * rng.standard_normal((4, 8))
        pm = zf_matrix(h)
        assert np.linalg.norm(h @ pm.p - np.eye(4)) < 1e-9

    def test_rank_deficient_raises(self):
        h = np.ones((2, 4), dtype=complex)  # duplicated rows
        with pytest.raises(np.linalg.LinAlgError):
            zf_matrix(h)


class TestMrtMatrix:
    def test_identity_channel(self):
        pm = mrt_matrix(np.eye(2, dtype=complex))
        assert pm.kind == "MRT"
        assert np.array_equal(pm.p, np.eye(2))

    def test_row_scaling_conjugates(self):
        rng = np.random.default_rng(1)
        h = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        scale = 2.0 - 1.5j
        h2 = h.copy()
        h2[1] *= scale
        assert np.allclose(mrt_matrix(h2).p[:, 1],
                           np.conj(scale) * mrt_matrix(h).p[:, 1], atol=1e-12)

    def test_equals_conjugate_transpose(self):
        rng = np.random.default_rng(2)
        h = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
        assert np.array_equal(mrt_matrix(h).p, h.conj().T)


class TestOneBitQuantize:
    def test_worked_example(self):
        z = np.array([1 - 1j, -2 + 3j])
        x = one_bit_quantize(z, transmit_power=1.0)  # l = 1/2 for B = 2
        assert np.array_equal(x, np.array([0.5 - 0.5j, -0.5 + 0.5j]))

    def test_zero_maps_to_positive_corner(self):
        x = one_bit_quantize(np.zeros(4, dtype=complex), transmit_power=2.0)
        level = np.sqrt(2.0 / 8.0)
        assert np.allclose(x, level * (1 + 1j) * np.ones(4), rtol=0, atol=0)

    def test_output_power_is_transmit_power(self):
        rng = np.random.default_rng(3)
        for power in (0.5, 1.0, 4.0):
            z = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
            x = one_bit_quantize(z, power)
            assert np.allclose(np.sum(np.abs(x) ** 2, axis=0), power, rtol=1e-14)

    def test_idempotence(self):
        rng = np.random.default_rng(4)
        z = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
        x = one_bit_quantize(z, 1.0)
        assert np.array_equal(one_bit_quantize(x, 1.0), x)


class TestLinearQuantizedPrecode:
    def test_single_antenna_single_ue(self):
        cfg = SystemConfig(1, 1, 1, noise_var=0.1, transmit_power=1.0)
        res = linear_quantized_precode(np.array([[1 + 0j]]), np.eye(1, dtype=complex), cfg)
        level = cfg.quant_level
        assert res.x[0, 0] == level * (1 + 1j)

    def test_slot_separability(self):
        cfg3 = SystemConfig(4, 2, 3, noise_var=0.1)
        cfg1 = SystemConfig(4, 2, 1, noise_var=0.1)
        h = gen_rayleigh_channel(2, 4, seed=5)
        frame = SymbolFrame.random(get_constellation("qpsk"), 2, 3, seed=6)
        whole = linear_quantized_precode(frame.s, h, cfg3)
        for k in range(3):
            single = linear_quantized_precode(frame.s[:, k:k + 1], h, cfg1)
            assert np.array_equal(whole.x[:, k:k + 1], single.x)

    def test_mrt_kind_dispatch(self):
        cfg = SystemConfig(4, 2, 1, noise_var=0.1)
        h = gen_rayleigh_channel(2, 4, seed=7)
        frame = SymbolFrame.random(get_constellation("qpsk"), 2, 1, seed=8)
        res = linear_quantized_precode(frame.s, h, cfg, kind="mrt")
        assert np.allclose(np.sum(np.abs(res.x) ** 2, axis=0),
                           cfg.transmit_power, rtol=1e-14)
        with pytest.raises(ValueError):
            linear_quantized_precode(frame.s, h, cfg, kind="rzf")

    def test_never_beats_exhaustive_optimum(self):
        cfg = SystemConfig(3, 2, 2, noise_var=0.2)
        for seed in range(8):
            h = gen_rayleigh_channel(2, 3, seed=100 + seed)
            frame = SymbolFrame.random(get_constellation("qpsk"), 2, 2,
                                       seed=200 + seed)
            res = linear_quantized_precode(frame.s, h, cfg)
            zfq_obj = qp_objective(frame.s, h, res.x, res.beta, cfg.noise_var)
            _, _, best = brute_force_qp(frame.s, h, cfg)
            assert best <= zfq_obj
