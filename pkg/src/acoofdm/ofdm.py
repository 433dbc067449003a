"""ACO-OFDM baseband operations.

Data symbols occupy only the odd subcarriers of a Hermitian-symmetric
spectrum, so the unitary IFFT output is real and anti-symmetric between
the two half-symbols (x[n] = -x[n + N/2]).  Clipping the negative samples
then costs a factor 2 on the odd subcarriers but no information.

All functions accept a single symbol (length-N vector) or a batch with
symbols along the last axis.
"""

from __future__ import annotations

import numpy as np

# E{x[n]^2} of the bipolar signal when the constellation has unit average
# energy and the transform is unitary: (N/2 subcarriers * 1) / N.
SIGMA_X2 = 0.5
SIGMA_X = np.sqrt(SIGMA_X2)

_HERMITIAN_TOL = 1e-9
_IMAG_TOL = 1e-9


def check_size(n: int) -> None:
    if n < 64 or (n & (n - 1)) != 0:
        raise ValueError(f"subcarrier count must be a power of two >= 64, got {n}")


def map_subcarriers(block: np.ndarray, n: int) -> np.ndarray:
    """Place N/4 data symbols on the odd subcarriers with Hermitian symmetry.

    X[k] = S[(k-1)/2] for odd k < N/2, X[k] = conj(S[(N-k-1)/2]) for odd
    k > N/2, zero elsewhere (all even bins including DC and N/2).
    """
    block = np.asarray(block, dtype=np.complex128)
    if block.shape[-1] != n // 4:
        raise ValueError(f"block must have {n // 4} symbols for N={n}, got {block.shape[-1]}")
    spec = np.zeros(block.shape[:-1] + (n,), dtype=np.complex128)
    k_lo = np.arange(1, n // 2, 2)
    spec[..., k_lo] = block
    spec[..., n - k_lo] = np.conj(block)
    return spec


def _check_aco_spectrum(spectrum: np.ndarray, n: int) -> None:
    k = np.arange(1, n)
    herm_err = np.abs(spectrum[..., k] - np.conj(spectrum[..., n - k])).max()
    scale = max(np.abs(spectrum).max(), 1.0)
    if herm_err > _HERMITIAN_TOL * scale or np.abs(spectrum[..., 0].imag).max() > _HERMITIAN_TOL * scale:
        raise ValueError("spectrum is not Hermitian symmetric")
    even = np.abs(spectrum[..., 0::2]).max()
    if even > _HERMITIAN_TOL * scale:
        raise ValueError("even subcarriers must be zero for ACO-OFDM")


def modulate(spectrum: np.ndarray) -> np.ndarray:
    """Unitary IFFT of a Hermitian odd-only spectrum to real bipolar samples."""
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    n = spectrum.shape[-1]
    check_size(n)
    _check_aco_spectrum(spectrum, n)
    x = np.fft.ifft(spectrum, axis=-1) * np.sqrt(n)
    resid = np.abs(x.imag).max()
    if resid > _IMAG_TOL * max(np.abs(x.real).max(), 1.0):
        raise ValueError(f"imaginary residue {resid:g} after IFFT; spectrum not Hermitian")
    return np.ascontiguousarray(x.real)


def clip_negative(samples: np.ndarray) -> np.ndarray:
    """Zero the negative samples; the anti-symmetric pair keeps the value."""
    return np.maximum(np.asarray(samples, dtype=float), 0.0)


def demodulate(samples: np.ndarray, channel_freq_response: np.ndarray) -> np.ndarray:
    """FFT, one-tap zero forcing on the odd bins, and the ACO gain of 2.

    Returns the N/4 data-symbol estimates in transmit order.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[-1]
    h = np.asarray(channel_freq_response, dtype=np.complex128)
    if h.shape[-1] != n:
        raise ValueError(f"channel response must have length {n}, got {h.shape[-1]}")
    k_lo = np.arange(1, n // 2, 2)
    h_used = h[..., k_lo]
    if np.any(h_used == 0):
        raise ValueError("singular channel: zero response on a used subcarrier")
    spec = np.fft.fft(samples, axis=-1) / np.sqrt(n)
    return 2.0 * spec[..., k_lo] / h_used


def add_cp(samples: np.ndarray, cp_len: int) -> np.ndarray:
    """Prepend the last cp_len samples as a cyclic prefix."""
    samples = np.asarray(samples)
    n = samples.shape[-1]
    if not 0 <= cp_len < n:
        raise ValueError(f"cp_len must be in [0, {n}), got {cp_len}")
    if cp_len == 0:
        return samples.copy()
    return np.concatenate([samples[..., -cp_len:], samples], axis=-1)


def remove_cp(samples: np.ndarray, cp_len: int) -> np.ndarray:
    """Drop the cyclic prefix."""
    samples = np.asarray(samples)
    if not 0 <= cp_len < samples.shape[-1]:
        raise ValueError(f"cp_len must be in [0, {samples.shape[-1]}), got {cp_len}")
    return samples[..., cp_len:].copy() if cp_len else samples.copy()


def papr_db(samples: np.ndarray) -> np.ndarray | float:
    """Peak-to-average power ratio of each symbol, in dB.

    Measured on the Nyquist-rate transmitted symbol without CP.
    """
    samples = np.asarray(samples, dtype=float)
    p = samples**2
    mean = p.mean(axis=-1)
    if np.any(mean == 0):
        raise ValueError("PAPR undefined for an all-zero symbol")
    out = 10.0 * np.log10(p.max(axis=-1) / mean)
    return float(out) if np.ndim(out) == 0 else out


def is_antisymmetric(samples: np.ndarray, tol: float = 1e-9) -> bool:
    """True when x[n] = -x[n + N/2] holds within tol for every pair."""
    samples = np.asarray(samples, dtype=float)
    half = samples.shape[-1] // 2
    return bool(np.abs(samples[..., :half] + samples[..., half:]).max() <= tol)
