"""Peak-power reduction baselines: selected mapping and matrix precoding."""

from __future__ import annotations

import numpy as np

from . import ofdm


def phase_sequences(r: int, length: int, rng: np.random.Generator) -> np.ndarray:
    """R candidate +/-1 sequences; candidate 0 is all ones.

    Keeping the identity sequence in the set guarantees selection never
    does worse than plain transmission.
    """
    if r < 1:
        raise ValueError("need at least one candidate sequence")
    seqs = np.ones((r, length))
    if r > 1:
        seqs[1:] = rng.choice([-1.0, 1.0], size=(r - 1, length))
    return seqs


def slm_transmit(block: np.ndarray, r: int, rng: np.random.Generator, n: int | None = None):
    """Transmit the phase-rotated candidate with the smallest PAPR.

    Returns the chosen clipped time symbol and the candidate index (side
    information assumed known at the receiver).
    """
    block = np.asarray(block, dtype=np.complex128)
    if n is None:
        n = 4 * block.shape[-1]
    seqs = phase_sequences(r, block.shape[-1], rng)
    candidates = ofdm.clip_negative(ofdm.modulate(ofdm.map_subcarriers(block * seqs, n)))
    paprs = np.atleast_1d(ofdm.papr_db(candidates))
    best = int(np.argmin(paprs))
    return candidates[best], best


def zadoff_chu(length: int, root: int = 3, q: int = 0) -> np.ndarray:
    """Constant-amplitude Zadoff-Chu sequence of even length."""
    if length < 1 or length % 2 != 0:
        raise ValueError("this builder expects a positive even length")
    t = np.arange(length)
    return np.exp(1j * 2.0 * np.pi * root * (t**2 / 2.0 + q * t) / length)


def build_precoder(kind: str, size: int) -> np.ndarray:
    """Precoding matrix of the requested kind over `size` data symbols.

    "dft": entries exp(j*2*pi*n*k/size)/sqrt(size), unitary.
    "zc":  a length size^2 Zadoff-Chu sequence (root 3, q = 0) laid out
           row-major, scaled by 1/sqrt(size) so rows have unit norm.
    """
    if size < 2:
        raise ValueError("precoder size must be at least 2")
    if kind == "dft":
        n, k = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
        return np.exp(2j * np.pi * n * k / size) / np.sqrt(size)
    if kind == "zc":
        seq = zadoff_chu(size * size)
        return seq.reshape(size, size) / np.sqrt(size)
    raise ValueError(f"unknown precoder kind {kind!r}")


def precode(block: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Pre-multiply a data block (or batch of blocks) by the precoder."""
    block = np.asarray(block, dtype=np.complex128)
    if matrix.shape[1] != block.shape[-1]:
        raise ValueError(
            f"precoder expects blocks of {matrix.shape[1]} symbols, got {block.shape[-1]}"
        )
    return block @ matrix.T
