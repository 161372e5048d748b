"""System model for the 1-bit quantized massive MU-MIMO downlink.

Holds the domain types (system configuration, channel, symbol frame,
precoder output), channel/noise generation, the real-valued embedding of
complex matrices, Kronecker vectorization, and the shared mean-square-error
objective that every precoder (and the exhaustive oracle) minimizes.

Conventions
-----------
- Downlink: Y = H X + N with H of shape (U, B), X of shape (B, K).
- Transmit set: every entry of X lies in {+-l +-jl} with l = sqrt(P / (2B)),
  so each slot satisfies ||x[k]||^2 = P.
- vec() is column-major (column stacking), so vec(A B C) = (C^T kron A) vec(B)
  holds with the textbook convention.
- RNG: every stochastic helper takes an explicit ``seed`` (int or
  numpy ``SeedSequence``); streams come from numpy's PCG64 family and are
  splittable via ``SeedSequence.spawn``, so trials are reproducible and
  independently parallelizable.

All functions here are pure; values are immutable after construction and
safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SystemConfig:
    """Static dimensions and power/noise levels of one downlink setup.

    Attributes
    ----------
    num_bs_antennas : number of base-station antennas B (B >= num_ues)
    num_ues : number of single-antenna user equipments U
    num_slots : number of time slots K the channel stays constant for
    transmit_power : instantaneous per-slot transmit power P (energy units)
    noise_var : complex noise variance N0 per receive entry (energy units)
    """

    num_bs_antennas: int
    num_ues: int
    num_slots: int
    noise_var: float
    transmit_power: float = 1.0

    def __post_init__(self):
        if self.num_bs_antennas < 1 or self.num_ues < 1 or self.num_slots < 1:
            raise ValueError("dimensions must be positive")
        if self.num_bs_antennas < self.num_ues:
            raise ValueError(
                f"need at least as many BS antennas as UEs, got "
                f"B={self.num_bs_antennas} < U={self.num_ues}"
            )
        if not (self.transmit_power > 0):
            raise ValueError("transmit_power must be > 0")
        if not (self.noise_var > 0):
            raise ValueError("noise_var must be > 0")

    @property
    def snr(self) -> float:
        """Operating SNR rho = P / N0 (dimensionless)."""
        return self.transmit_power / self.noise_var

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr)

    @property
    def quant_level(self) -> float:
        """Per-component 1-bit DAC output level l = sqrt(P / (2B))."""
        return math.sqrt(self.transmit_power / (2.0 * self.num_bs_antennas))

    @classmethod
    def from_snr_db(cls, num_bs_antennas: int, num_ues: int, num_slots: int,
                    snr_db: float, transmit_power: float = 1.0) -> "SystemConfig":
        """Fix P and derive N0 so that P/N0 matches the requested SNR."""
        noise_var = transmit_power / (10.0 ** (snr_db / 10.0))
        return cls(num_bs_antennas, num_ues, num_slots,
                   noise_var=noise_var, transmit_power=transmit_power)


# ---------------------------------------------------------------------------
# Real embedding and vectorization
# ---------------------------------------------------------------------------

def real_embed(h: np.ndarray) -> np.ndarray:
    """Real 2x2-block embedding of a complex operator.

    Maps H (U x B) to [[Re H, -Im H], [Im H, Re H]] (2U x 2B) so that complex
    products become real ones: stack_real(H v) = real_embed(H) @ stack_real(v).
    """
    h = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise ValueError("channel entries must be finite")
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def stack_real(m: np.ndarray) -> np.ndarray:
    """Stack real over imaginary parts: (n, ...) complex -> (2n, ...) real."""
    m = np.asarray(m, dtype=complex)
    return np.concatenate([m.real, m.imag], axis=0)


def unstack_real(m_r: np.ndarray) -> np.ndarray:
    """Inverse of :func:`stack_real`."""
    m_r = np.asarray(m_r, dtype=float)
    n = m_r.shape[0]
    if n % 2 != 0:
        raise ValueError("leading dimension must be even")
    return m_r[: n // 2] + 1j * m_r[n // 2:]


def vec(m: np.ndarray) -> np.ndarray:
    """Column-major vectorization."""
    return np.asarray(m).flatten(order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec` for a rows x cols matrix."""
    v = np.asarray(v)
    if v.size != rows * cols:
        raise ValueError(f"cannot reshape length-{v.size} vector to {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def vectorize_system(h_r: np.ndarray, s_r: np.ndarray):
    """Lift the per-slot real model to one block system over all K slots.

    Returns (I_K kron h_r, vec(s_r)); for any B_R the Frobenius residual of
    the matrix form equals the l2 residual of the vectorized form.
    """
    h_r = np.asarray(h_r, dtype=float)
    s_r = np.asarray(s_r, dtype=float)
    if h_r.shape[0] != s_r.shape[0]:
        raise ValueError("row dimensions of h_r and s_r must agree")
    k = s_r.shape[1]
    hbar_r = np.kron(np.eye(k), h_r)
    return hbar_r, vec(s_r)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class ChannelMatrix:
    """Complex downlink channel H (U x B) with its cached real embedding."""

    def __init__(self, h: np.ndarray):
        h = np.asarray(h, dtype=complex)
        if h.ndim != 2:
            raise ValueError("channel must be a 2-D matrix")
        self.h = h
        self.h_real = real_embed(h)

    @property
    def num_ues(self) -> int:
        return self.h.shape[0]

    @property
    def num_bs_antennas(self) -> int:
        return self.h.shape[1]

    def __repr__(self):
        return f"ChannelMatrix(U={self.num_ues}, B={self.num_bs_antennas})"


@dataclass(frozen=True)
class SymbolFrame:
    """Payload constellation symbols (U x K) and their source bits.

    ``bits`` has shape (U, K * bits_per_symbol), each row the concatenation of
    the per-slot bit labels. Frames built through :meth:`random` contain only
    constellation members; pilot columns are prepended by the harness.
    """

    s: np.ndarray
    bits: np.ndarray

    @classmethod
    def random(cls, constellation, num_ues: int, num_slots: int, seed) -> "SymbolFrame":
        from .constellations import modulate

        rng = np.random.default_rng(seed)
        m = constellation.bits_per_symbol
        bits = rng.integers(0, 2, size=(num_ues, num_slots * m)).astype(np.uint8)
        s = np.stack([modulate(bits[u], constellation) for u in range(num_ues)])
        return cls(s=s, bits=bits)


@dataclass(frozen=True)
class PrecodeResult:
    """1-bit transmit frame X in {+-l +-jl}^(B x K) and its precoding factor.

    ``flags`` carries soft solver events ("squid_nonconverged",
    "sdr_nonconverged", "degenerate_eigenvector"); the frame itself is always
    valid.
    """

    x: np.ndarray
    beta: float
    flags: tuple = ()


@dataclass(frozen=True)
class AuxiliaryFrame:
    """Auxiliary variable of the relaxations: the scaled frame B = beta * X."""

    b: np.ndarray

    @property
    def real_vec(self) -> np.ndarray:
        """Column-major vec of the stacked real embedding, length 2BK."""
        return vec(stack_real(self.b))

    @classmethod
    def from_real_vec(cls, v: np.ndarray, num_antennas: int, num_slots: int) -> "AuxiliaryFrame":
        b_r = unvec(v, 2 * num_antennas, num_slots)
        return cls(b=unstack_real(b_r))

    def implied_beta(self, transmit_power: float) -> float:
        """beta = sqrt(||B||_F^2 / (K P)); exact when B = beta*X is feasible."""
        k = self.b.shape[1]
        return math.sqrt(
            float(np.sum(np.abs(self.b) ** 2)) / (k * transmit_power)
        )


# ---------------------------------------------------------------------------
# Stochastic generators
# ---------------------------------------------------------------------------

def gen_rayleigh_channel(num_ues: int, num_bs_antennas: int, seed) -> ChannelMatrix:
    """I.i.d. Rayleigh fading channel, CN(0, 1) per complex entry.

    Deterministic given the seed; each complex entry is built from two
    independent real Gaussians of variance 1/2.
    """
    if num_ues < 1 or num_bs_antennas < 1:
        raise ValueError("dimensions must be positive")
    rng = np.random.default_rng(seed)
    shape = (num_ues, num_bs_antennas)
    h = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    return ChannelMatrix(h)


def gen_awgn(num_ues: int, num_slots: int, noise_var: float, seed) -> np.ndarray:
    """I.i.d. circularly-symmetric complex Gaussian noise, variance N0 per entry."""
    if not (noise_var > 0):
        raise ValueError("noise_var must be > 0")
    rng = np.random.default_rng(seed)
    shape = (num_ues, num_slots)
    scale = math.sqrt(noise_var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


# ---------------------------------------------------------------------------
# Channel application and the shared MSE objective
# ---------------------------------------------------------------------------

def _as_array(obj, attr: str) -> np.ndarray:
    return getattr(obj, attr) if hasattr(obj, attr) else np.asarray(obj)


def apply_channel(h, x, n: np.ndarray) -> np.ndarray:
    """Noisy downlink observation Y = H X + N."""
    h = np.asarray(_as_array(h, "h"), dtype=complex)
    x = np.asarray(_as_array(x, "x"), dtype=complex)
    n = np.asarray(n, dtype=complex)
    if h.shape[1] != x.shape[0] or n.shape != (h.shape[0], x.shape[1]):
        raise ValueError(
            f"dimension mismatch: H {h.shape}, X {x.shape}, N {n.shape}"
        )
    return h @ x + n


def qp_objective(s: np.ndarray, h, x: np.ndarray, beta: float, noise_var: float) -> float:
    """Total MSE of the frame: ||S - beta H X||_F^2 + beta^2 U K N0."""
    s = np.asarray(_as_array(s, "s"), dtype=complex)
    h = np.asarray(_as_array(h, "h"), dtype=complex)
    x = np.asarray(_as_array(x, "x"), dtype=complex)
    residual = s - beta * (h @ x)
    u, k = s.shape
    return float(np.sum(np.abs(residual) ** 2) + beta ** 2 * u * k * noise_var)


def optimal_beta_for(x: np.ndarray, s: np.ndarray, h, noise_var: float) -> float:
    """Closed-form minimizer of the frame MSE over the factor, clamped at 0.

    beta* = max(0, Re tr((HX)^H S) / (||HX||_F^2 + U K N0)).
    """
    s = np.asarray(_as_array(s, "s"), dtype=complex)
    h = np.asarray(_as_array(h, "h"), dtype=complex)
    x = np.asarray(_as_array(x, "x"), dtype=complex)
    hx = h @ x
    u, k = s.shape
    num = float(np.vdot(hx, s).real)
    den = float(np.sum(np.abs(hx) ** 2)) + u * k * noise_var
    return max(0.0, num / den)
