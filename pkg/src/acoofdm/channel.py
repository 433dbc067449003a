"""AWGN and diffused optical wireless (DOW) channel models.

The DOW channel is a sum of positive taps at integer sample delays,
normalized to unit DC gain so SNR bookkeeping is channel independent.
The receiver is assumed to know the realization exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ofdm import SIGMA_X


def snr_to_sigma_z(snr_db: float, sigma_x: float = SIGMA_X) -> float:
    """Noise std for an electrical SNR defined on the clipped signal power.

    SNR = E{x_c^2} / sigma_z^2 = sigma_x^2 / (2 sigma_z^2).
    """
    if sigma_x <= 0:
        raise ValueError("sigma_x must be positive")
    return sigma_x / np.sqrt(2.0 * 10.0 ** (snr_db / 10.0))


def sigma_z_to_snr(sigma_z: float, sigma_x: float = SIGMA_X) -> float:
    """Inverse of snr_to_sigma_z."""
    return 10.0 * np.log10(sigma_x**2 / (2.0 * sigma_z**2))


def awgn(samples: np.ndarray, sigma_z: float, rng: np.random.Generator) -> np.ndarray:
    """Add white Gaussian noise of std sigma_z to every sample."""
    samples = np.asarray(samples, dtype=float)
    if sigma_z == 0:
        return samples.copy()
    return samples + sigma_z * rng.standard_normal(samples.shape)


@dataclass(frozen=True)
class DowChannel:
    """Positive-tap multipath response: amplitude amps[i] at delay delays[i]."""

    delays: np.ndarray
    amps: np.ndarray

    def __post_init__(self):
        delays = np.asarray(self.delays, dtype=int)
        amps = np.asarray(self.amps, dtype=float)
        if delays.shape != amps.shape or delays.ndim != 1 or delays.size == 0:
            raise ValueError("delays and amps must be matching non-empty 1-D arrays")
        if np.any(amps <= 0):
            raise ValueError("tap amplitudes must be strictly positive")
        if np.any(delays < 0) or np.any(np.diff(delays) < 0):
            raise ValueError("delays must be non-negative and ascending")
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "amps", amps)

    @property
    def max_delay(self) -> int:
        return int(self.delays[-1])

    def impulse_response(self) -> np.ndarray:
        """Dense FIR taps up to the maximum delay (taps at equal delays add)."""
        h = np.zeros(self.max_delay + 1)
        np.add.at(h, self.delays, self.amps)
        return h

    def freq_response(self, n: int) -> np.ndarray:
        """N-point frequency response of the tap profile."""
        k = np.arange(n)
        return np.sum(
            self.amps[:, None] * np.exp(-2j * np.pi * self.delays[:, None] * k[None, :] / n),
            axis=0,
        )


IDENTITY_CHANNEL = DowChannel(delays=np.array([0]), amps=np.array([1.0]))


def sample_dow_channel(
    n_taps: int,
    max_delay: int,
    decay: float,
    rng: np.random.Generator,
    min_delay: int = 2,
) -> DowChannel:
    """Draw a DOW realization with uniform delays and exponential-decay gains.

    Delays are uniform integers on [min_delay, max_delay]; amplitudes are
    proportional to exp(-delay/decay) and normalized to unit sum.
    """
    if n_taps < 1:
        raise ValueError("need at least one tap")
    if max_delay < min_delay:
        raise ValueError("max_delay must be >= min_delay")
    if n_taps == 1:
        return DowChannel(delays=np.array([min_delay]), amps=np.array([1.0]))
    delays = np.sort(rng.integers(min_delay, max_delay + 1, size=n_taps))
    amps = np.exp(-delays / decay)
    return DowChannel(delays=delays, amps=amps / amps.sum())


def apply_channel(
    tx_stream: np.ndarray,
    channel: DowChannel | None,
    sigma_z: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Convolve a CP-extended symbol stream with the taps, then add noise.

    The stream is processed as one continuous vector, so symbols leak into
    each other whenever the CP is shorter than the channel memory.  The
    output keeps the input length (trailing ring-out is dropped).
    """
    x = np.asarray(tx_stream, dtype=float).reshape(-1)
    if channel is not None and channel.max_delay > 0:
        y = np.convolve(x, channel.impulse_response())[: x.size]
    elif channel is not None:
        y = channel.amps.sum() * x
    else:
        y = x.copy()
    return awgn(y, sigma_z, rng)


def channel_to_rows(channel: DowChannel):
    """(delay, amplitude) rows for CSV serialization."""
    for d, a in zip(channel.delays, channel.amps):
        yield int(d), float(a)
