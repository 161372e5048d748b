"""Constellation tables, Gray bit mappings, modulation and detection.

Every set is normalized to unit average symbol energy (Es = 1). The bit
labelings are fixed so that bit error rates are reproducible:

- ``qpsk``: points indexed by their 2-bit label (b0 b1); b0 selects the real
  sign, b1 the imaginary sign, bit 0 -> +1. So 00 -> (1+1j)/sqrt(2),
  01 -> (1-1j)/sqrt(2), 10 -> (-1+1j)/sqrt(2), 11 -> (-1-1j)/sqrt(2).
- ``8psk`` / ``16psk``: point i = exp(2j pi i / M) indexed by angle; label of
  point i is the binary-reflected Gray code i ^ (i >> 1), so circular
  neighbors differ in exactly one bit.
- ``16qam`` / ``64qam``: square grids with per-axis odd levels
  {-(L-1), ..., L-1} scaled by 1/sqrt(10) resp. 1/sqrt(42). Points are
  indexed by their bit label; the first half of the label Gray-codes the
  in-phase level (ascending), the second half the quadrature level, so
  horizontal/vertical neighbors differ in exactly one bit.

Detection is minimum-distance with ties broken toward the lowest point
index, which makes it deterministic. For constant-modulus sets the decision
is invariant to any positive scaling of the input, so those constellations
never need an amplitude estimate at the receiver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Constellation:
    name: str
    points: np.ndarray          # complex, shape (M,)
    labels: np.ndarray          # uint8, shape (M, m); labels[i] = bits of point i
    code_to_index: np.ndarray   # int, shape (M,); inverse of the label map

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def bits_per_symbol(self) -> int:
        return self.labels.shape[1]

    @property
    def is_constant_modulus(self) -> bool:
        mags = np.abs(self.points)
        return bool(mags.max() - mags.min() < 1e-12)

    @property
    def avg_energy(self) -> float:
        return float(np.mean(np.abs(self.points) ** 2))


def _int_to_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - j)) & 1 for j in range(width)],
                    dtype=np.uint8)


def _bits_to_int(bits: np.ndarray) -> np.ndarray:
    width = bits.shape[-1]
    weights = 1 << np.arange(width - 1, -1, -1)
    return bits @ weights


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _build_qpsk() -> Constellation:
    scale = 1.0 / np.sqrt(2.0)
    points = np.empty(4, dtype=complex)
    labels = np.empty((4, 2), dtype=np.uint8)
    for code in range(4):
        b0, b1 = (code >> 1) & 1, code & 1
        points[code] = scale * ((1 - 2 * b0) + 1j * (1 - 2 * b1))
        labels[code] = (b0, b1)
    return Constellation("qpsk", points, labels, np.arange(4))


def _build_psk(order: int) -> Constellation:
    m = int(np.log2(order))
    angles = 2.0 * np.pi * np.arange(order) / order
    points = np.exp(1j * angles)
    labels = np.stack([_int_to_bits(_gray(i), m) for i in range(order)])
    code_to_index = np.empty(order, dtype=int)
    for i in range(order):
        code_to_index[_gray(i)] = i
    return Constellation(f"{order}psk", points, labels, code_to_index)


def _build_square_qam(order: int) -> Constellation:
    m = int(np.log2(order))
    half = m // 2
    levels_per_axis = 1 << half
    levels = 2.0 * np.arange(levels_per_axis) - (levels_per_axis - 1)
    scale = 1.0 / np.sqrt(2.0 * np.mean(levels ** 2))  # forces Es = 1
    gray_inv = np.empty(levels_per_axis, dtype=int)
    for lvl in range(levels_per_axis):
        gray_inv[_gray(lvl)] = lvl
    points = np.empty(order, dtype=complex)
    labels = np.empty((order, m), dtype=np.uint8)
    for code in range(order):
        g_i, g_q = code >> half, code & (levels_per_axis - 1)
        points[code] = scale * (levels[gray_inv[g_i]] + 1j * levels[gray_inv[g_q]])
        labels[code] = _int_to_bits(code, m)
    return Constellation(f"{order}qam", points, labels, np.arange(order))


_REGISTRY = {
    "qpsk": _build_qpsk(),
    "8psk": _build_psk(8),
    "16psk": _build_psk(16),
    "16qam": _build_square_qam(16),
    "64qam": _build_square_qam(64),
}

CONSTELLATION_IDS = tuple(_REGISTRY)


def get_constellation(name: str) -> Constellation:
    key = name.strip().lower()
    if key not in _REGISTRY:
        raise KeyError(
            f"unknown constellation {name!r}; choose from {CONSTELLATION_IDS}"
        )
    return _REGISTRY[key]


def modulate(bits, c: Constellation) -> np.ndarray:
    """Map a flat bit sequence to constellation symbols, m bits per symbol."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    m = c.bits_per_symbol
    if bits.size % m != 0:
        raise ValueError(f"bit count {bits.size} not divisible by {m}")
    codes = _bits_to_int(bits.reshape(-1, m))
    return c.points[c.code_to_index[codes]]


def detect(shat, c: Constellation):
    """Minimum-distance detection, ties to the lowest point index.

    Accepts a scalar or any-shape array; returns (point indices, bit labels)
    where the labels gain a trailing axis of length bits_per_symbol.
    """
    arr = np.asarray(shat, dtype=complex)
    re = arr.real[..., None] - c.points.real
    im = arr.imag[..., None] - c.points.imag
    idx = np.argmin(re * re + im * im, axis=-1)
    bits = c.labels[idx]
    if arr.ndim == 0:
        return int(idx), bits
    return idx, bits
