"""Gray-labeled square M-QAM mapping with unit average symbol energy."""

from __future__ import annotations

import numpy as np


def _check_order(m: int) -> int:
    """Return bits per axis for a square power-of-two constellation."""
    if m < 4 or (m & (m - 1)) != 0:
        raise ValueError(f"QAM order must be a power of two >= 4, got {m}")
    bits = int(np.log2(m))
    if bits % 2 != 0:
        raise ValueError(f"QAM order must be a perfect square (4, 16, 64, ...), got {m}")
    return bits // 2


def axis_levels(m: int) -> np.ndarray:
    """Amplitude levels of one I/Q axis, scaled for unit average symbol energy."""
    side = int(np.sqrt(m))
    raw = np.arange(-(side - 1), side, 2, dtype=float)
    # average energy of the full constellation: 2 * mean(raw^2)
    scale = np.sqrt(2.0 * np.mean(raw**2))
    return raw / scale


def _gray(n: np.ndarray | int):
    return n ^ (n >> 1)


def _gray_inverse(g: np.ndarray) -> np.ndarray:
    out = g.copy()
    s = g >> 1
    while np.any(s):
        out ^= s
        s >>= 1
    return out


def modulate_bits(bits: np.ndarray, m: int) -> np.ndarray:
    """Map a bit array (..., k*log2(M)) to k Gray-labeled QAM symbols.

    The first half of each symbol's bits selects the I level, the second
    half the Q level; per-axis labels follow the binary-reflected Gray code
    so adjacent levels differ in one bit.
    """
    bpa = _check_order(m)
    bits = np.asarray(bits)
    if bits.shape[-1] % (2 * bpa) != 0:
        raise ValueError(f"bit count must be a multiple of {2 * bpa} for {m}-QAM")
    grouped = bits.reshape(*bits.shape[:-1], -1, 2 * bpa)
    weights = 1 << np.arange(bpa - 1, -1, -1)
    gi = (grouped[..., :bpa] * weights).sum(axis=-1)
    gq = (grouped[..., bpa:] * weights).sum(axis=-1)
    levels = axis_levels(m)
    return levels[_gray_inverse(gi)] + 1j * levels[_gray_inverse(gq)]


def demodulate_symbols(symbols: np.ndarray, m: int) -> np.ndarray:
    """Hard-decision demap to bits by nearest level on each axis."""
    bpa = _check_order(m)
    levels = axis_levels(m)
    # nearest-level index via midpoint comparison (levels are uniform)
    step = levels[1] - levels[0]
    half = len(levels)

    def _rank(vals):
        idx = np.round((vals - levels[0]) / step).astype(int)
        return np.clip(idx, 0, half - 1)

    gi = _gray(_rank(np.real(symbols)))
    gq = _gray(_rank(np.imag(symbols)))
    shifts = np.arange(bpa - 1, -1, -1)
    bits_i = (gi[..., None] >> shifts) & 1
    bits_q = (gq[..., None] >> shifts) & 1
    out = np.concatenate([bits_i, bits_q], axis=-1)
    return out.reshape(*out.shape[:-2], -1)


def random_bits(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform random bits as uint8."""
    return rng.integers(0, 2, size=shape, dtype=np.uint8)
