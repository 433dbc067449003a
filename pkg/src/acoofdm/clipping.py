"""Recoverable upper clipping of ACO-OFDM sample pairs.

Peaks above the clipping level eta_c are clipped, and the excess is parked
in the pair's empty slot (bounded by alpha*eta_c) so the receiver can put
it back.  Direct upper clipping, which throws the excess away, is kept as
the baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ofdm import SIGMA_X


def cr_to_eta(cr_db: float, sigma_x: float = SIGMA_X) -> float:
    """Clipping level for a clipping ratio in dB.

    CR = 20*log10(eta_c / rms) with rms = sigma_x/sqrt(2), the RMS of the
    negatively-clipped signal.
    """
    if sigma_x <= 0:
        raise ValueError("sigma_x must be positive")
    return (sigma_x / np.sqrt(2.0)) * 10.0 ** (cr_db / 20.0)


def eta_to_cr(eta_c: float, sigma_x: float = SIGMA_X) -> float:
    """Inverse of cr_to_eta."""
    return 20.0 * np.log10(eta_c / (sigma_x / np.sqrt(2.0)))


@dataclass(frozen=True)
class ClipParams:
    """Upper-clipping configuration: level eta_c and excess bound alpha*eta_c."""

    eta_c: float
    alpha: float

    def __post_init__(self):
        if self.eta_c <= 0:
            raise ValueError("eta_c must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")

    @classmethod
    def from_cr(cls, cr_db: float, alpha: float, sigma_x: float = SIGMA_X) -> "ClipParams":
        return cls(eta_c=cr_to_eta(cr_db, sigma_x), alpha=alpha)

    @property
    def cr_db(self) -> float:
        return eta_to_cr(self.eta_c)

    @property
    def peak(self) -> float:
        """Largest representable pre-clip value, (1 + alpha) * eta_c."""
        return (1.0 + self.alpha) * self.eta_c


def roc_clip_pair(pair, params: ClipParams):
    """Clip one sample pair (x, x_hat), parking the excess in the zero slot.

    Cases, with e = value - eta_c:
      value <= eta_c            -> pair unchanged
      eta_c < value <= peak     -> (eta_c, e) / (e, eta_c)
      value > peak              -> (eta_c, alpha*eta_c) / (alpha*eta_c, eta_c)
    A (0, 0) pair counts as unclipped.  Values exactly at eta_c are not
    clipped; values exactly at (1+alpha)*eta_c get e = alpha*eta_c.
    """
    x1, x2 = float(pair[0]), float(pair[1])
    if x1 < 0 or x2 < 0:
        raise ValueError("pair must be non-negative (negatively clipped) samples")
    if x1 > 0 and x2 > 0:
        raise ValueError("pair must have at most one nonzero sample")
    eta, alpha = params.eta_c, params.alpha
    v = max(x1, x2)
    if v <= eta:
        return (x1, x2)
    e = min(v - eta, alpha * eta)
    return (eta, e) if x1 >= x2 else (e, eta)


def roc_clip_symbol(samples: np.ndarray, params: ClipParams) -> np.ndarray:
    """Apply recoverable clipping to every pair (x[n], x[n + N/2]).

    Pairs that already carry two nonzero entries are accepted unchanged as
    long as neither exceeds eta_c (an already-clipped symbol), making the
    operation idempotent.
    """
    x = np.asarray(samples, dtype=float)
    if np.any(x < 0):
        raise ValueError("symbol must be non-negative (negatively clipped)")
    half = x.shape[-1] // 2
    x1, x2 = x[..., :half], x[..., half:]
    eta, alpha = params.eta_c, params.alpha

    both = (x1 > 0) & (x2 > 0)
    if np.any(both & ((x1 > eta) | (x2 > eta))):
        raise ValueError("pair with two nonzero samples above the clipping level")

    first = x1 >= x2
    v = np.maximum(x1, x2)
    data = np.minimum(v, eta)
    err = np.clip(v - eta, 0.0, alpha * eta)
    out1 = np.where(first, data, err)
    out2 = np.where(first, err, data)
    out1 = np.where(both, x1, out1)
    out2 = np.where(both, x2, out2)
    return np.concatenate([out1, out2], axis=-1)


def direct_clip(samples: np.ndarray, eta_c: float) -> np.ndarray:
    """Plain upper clipping at eta_c; the excess is discarded."""
    return np.minimum(np.asarray(samples, dtype=float), eta_c)
