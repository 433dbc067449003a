"""Pairwise detection and recovery for upper-clipped ACO-OFDM.

A received pair (y1, y2) descends from one of six transmitted forms:
unclipped (data, 0) / (0, data), clipped (eta_c, excess) / (excess, eta_c),
or saturated (eta_c, alpha*eta_c) / (alpha*eta_c, eta_c).  The optimal
detector scores each form by prior times conditional density and picks the
argmax; the simplified detector replaces the scoring with two comparisons
against the lines y1 = y2 and y1 + y2 = eta_c.  Conventional ACO receivers
(pairwise larger-sample selection, negative forcing) are included as
baselines.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
from scipy.special import log_ndtr, ndtr

from .ofdm import SIGMA_X

logger = logging.getLogger(__name__)

_LOG_2PI = np.log(2.0 * np.pi)


class Hypothesis(IntEnum):
    H1 = 1
    H2 = 2
    H3 = 3
    H4 = 4
    H5 = 5
    H6 = 6


class Region(IntEnum):
    D1 = 1
    D2 = 2
    D3 = 3
    D4 = 4


def q_func(x):
    """Standard normal tail probability P(Z > x)."""
    return ndtr(-np.asarray(x, dtype=float))


def log_norm_interval(lo, hi):
    """log P(lo < Z < hi) for a standard normal, stable in both tails."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.empty(np.broadcast(lo, hi).shape)
    lo, hi = np.broadcast_arrays(lo, hi)

    upper = lo >= 0  # both bounds in the upper tail: use Q differences
    lower = hi <= 0
    mid = ~(upper | lower)

    with np.errstate(divide="ignore"):
        if np.any(upper):
            a, b = lo[upper], hi[upper]
            la, lb = log_ndtr(-a), log_ndtr(-b)
            out[upper] = la + np.log1p(-np.exp(np.minimum(lb - la, 0.0)))
        if np.any(lower):
            a, b = lo[lower], hi[lower]
            la, lb = log_ndtr(b), log_ndtr(a)
            out[lower] = la + np.log1p(-np.exp(np.minimum(lb - la, 0.0)))
        if np.any(mid):
            out[mid] = np.log(ndtr(hi[mid]) - ndtr(lo[mid]))
    return out


def _log_norm_pdf(x, sd):
    return -0.5 * _LOG_2PI - np.log(sd) - (np.asarray(x, dtype=float) ** 2) / (2.0 * sd**2)


def compute_priors(eta_c: float, alpha: float, sigma_x: float = SIGMA_X):
    """Clip-probability constants p1, p2 and the prior of each hypothesis.

    p1 is the probability mass of the bipolar amplitude in
    (eta_c, (1+alpha)*eta_c], p2 the mass above (1+alpha)*eta_c.
    """
    a = eta_c / sigma_x
    b = (1.0 + alpha) * eta_c / sigma_x
    p1 = float(ndtr(-a) - ndtr(-b))
    p2 = float(ndtr(-b))
    h12 = 0.5 - p1 - p2
    priors = np.array([h12, h12, p1, p1, p2, p2])
    return p1, p2, priors


def pair_pdf(x1, x2, sigma_x: float = SIGMA_X):
    """Joint density of a negatively-clipped sample pair.

    Exactly one entry of the pair is zero; the other is half-Gaussian.  The
    value returned is the density of the nonzero entry (with respect to
    Lebesgue measure) when the other entry sits on its zero atom, and 0.0
    for points off that support.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    amp = np.exp(_log_norm_pdf(x1, sigma_x))
    amp2 = np.exp(_log_norm_pdf(x2, sigma_x))
    out = np.where((x2 == 0) & (x1 >= 0), amp, 0.0)
    out = np.where((x1 == 0) & (x2 > 0), amp2, out)
    return out if out.ndim else float(out)


@dataclass
class DetectorParams:
    """Scales and priors needed by the pairwise detectors."""

    eta_c: float
    alpha: float
    sigma_x: float = SIGMA_X
    sigma_z: float = 0.0
    s2: float = field(init=False)
    sigma: float = field(init=False)
    p1: float = field(init=False)
    p2: float = field(init=False)
    priors: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.eta_c <= 0 or not 0 < self.alpha < 1:
            raise ValueError("need eta_c > 0 and alpha in (0, 1)")
        if self.sigma_x <= 0 or self.sigma_z < 0:
            raise ValueError("need sigma_x > 0 and sigma_z >= 0")
        self.s2 = self.sigma_x**2 + self.sigma_z**2
        self.sigma = self.sigma_x * self.sigma_z / np.sqrt(self.s2)
        self.p1, self.p2, self.priors = compute_priors(self.eta_c, self.alpha, self.sigma_x)


def _log_scores(y1, y2, p: DetectorParams) -> np.ndarray:
    """log(prior * conditional density) for the six hypotheses.

    The truncated-Gaussian normalizations cancel the priors of the first
    four hypotheses, so only the saturated pair keeps an explicit prior.
    Stacked on the last axis in hypothesis order.
    """
    if p.sigma_z <= 0:
        raise ValueError("log scores need sigma_z > 0; use the noiseless branch")
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    eta, aeta = p.eta_c, p.alpha * p.eta_c
    sz, s = p.sigma_z, np.sqrt(p.s2)
    sig = p.sigma
    rho = sz**2 / p.s2

    def data_zero(d, o):
        # (data, 0): data coordinate d blurred through the truncation window
        mu = d * (1.0 - rho)
        return (
            _log_norm_pdf(d, s)
            + _log_norm_pdf(o, sz)
            + log_norm_interval((0.0 - mu) / sig, (eta - mu) / sig)
        )

    def clip_excess(c, e):
        # (eta_c, excess): excess coordinate e carries the clipped residue
        mu = e - (e + eta) * rho
        return (
            _log_norm_pdf(c - eta, sz)
            + _log_norm_pdf(e + eta, s)
            + log_norm_interval((0.0 - mu) / sig, (aeta - mu) / sig)
        )

    def saturated(c, e):
        with np.errstate(divide="ignore"):
            lp2 = np.log(p.p2)
        return lp2 + _log_norm_pdf(c - eta, sz) + _log_norm_pdf(e - aeta, sz)

    return np.stack(
        [
            data_zero(y1, y2),
            data_zero(y2, y1),
            clip_excess(y1, y2),
            clip_excess(y2, y1),
            saturated(y1, y2),
            saturated(y2, y1),
        ],
        axis=-1,
    )


def conditional_pdf(h: Hypothesis, y1, y2, p: DetectorParams):
    """Conditional joint density of the received pair under one hypothesis."""
    idx = int(h) - 1
    if idx >= 4:
        # saturated forms: plain product of two noise densities, no prior
        c, e = (y1, y2) if idx == 4 else (y2, y1)
        log_f = _log_norm_pdf(np.asarray(c, dtype=float) - p.eta_c, p.sigma_z) + _log_norm_pdf(
            np.asarray(e, dtype=float) - p.alpha * p.eta_c, p.sigma_z
        )
    else:
        prior = p.priors[idx]
        if prior <= 0:
            raise ValueError(f"hypothesis {Hypothesis(h).name} has zero prior for these parameters")
        log_f = _log_scores(y1, y2, p)[..., idx] - np.log(prior)
    out = np.exp(log_f)
    return float(out) if np.ndim(out) == 0 else out


def _nearest_form(y1, y2, p: DetectorParams) -> np.ndarray:
    """Noiseless detection: nearest transmitted form, low index on ties."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    eta, aeta = p.eta_c, p.alpha * p.eta_c
    d = np.stack(
        [
            (y1 - np.clip(y1, 0.0, eta)) ** 2 + y2**2,
            y1**2 + (y2 - np.clip(y2, 0.0, eta)) ** 2,
            (y1 - eta) ** 2 + (y2 - np.clip(y2, 0.0, aeta)) ** 2,
            (y1 - np.clip(y1, 0.0, aeta)) ** 2 + (y2 - eta) ** 2,
            (y1 - eta) ** 2 + (y2 - aeta) ** 2,
            (y1 - aeta) ** 2 + (y2 - eta) ** 2,
        ],
        axis=-1,
    )
    return np.argmin(d, axis=-1) + 1


def map_detect(y1, y2, p: DetectorParams):
    """Most probable transmitted form of a received pair.

    Ties resolve to the lowest hypothesis index.  With sigma_z = 0 the
    limit rule (nearest transmitted form) is used.  Should every score
    degenerate, the simplified region decision stands in.
    """
    scalar = np.ndim(y1) == 0 and np.ndim(y2) == 0
    if p.sigma_z == 0:
        labels = _nearest_form(y1, y2, p)
    else:
        scores = _log_scores(y1, y2, p)
        labels = np.argmax(scores, axis=-1) + 1
        bad = ~np.isfinite(scores).any(axis=-1)
        if np.any(bad):
            logger.warning(
                "%d pair(s) with fully degenerate scores; falling back to simplified detection",
                int(np.count_nonzero(bad)),
            )
            fallback = simplified_detect(y1, y2, p.eta_c)
            labels = np.where(bad, np.asarray(fallback, dtype=labels.dtype), labels)
    if scalar:
        return Hypothesis(int(labels))
    return labels.astype(np.int8)


def map_recover(y1, y2, h, p: DetectorParams):
    """Invert the clipping under the detected hypothesis.

    (y1, 0) / (0, y2) for the unclipped forms, (eta_c + excess, 0) and its
    mirror for the clipped forms, ((1+alpha)*eta_c, 0) and mirror for the
    saturated forms.  Recovered values are floored at zero.
    """
    scalar = np.ndim(h) == 0 and np.ndim(y1) == 0
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    h = np.asarray(h, dtype=int)
    eta, peak = p.eta_c, (1.0 + p.alpha) * p.eta_c
    first = np.select(
        [h == 1, h == 3, h == 5],
        [y1, eta + y2, np.full_like(y1, peak)],
        default=0.0,
    )
    second = np.select(
        [h == 2, h == 4, h == 6],
        [y2, eta + y1, np.full_like(y2, peak)],
        default=0.0,
    )
    first, second = np.maximum(first, 0.0), np.maximum(second, 0.0)
    if scalar:
        return float(first), float(second)
    return first, second


def simplified_detect(y1, y2, eta_c: float):
    """Region of a received pair from two comparisons.

    D1/D2 below the line y1 + y2 = eta_c (split by y1 > y2), D3/D4 above.
    Points with y1 + y2 = eta_c fall to D1/D2; ties y1 = y2 fall to the
    even-index regions.
    """
    scalar = np.ndim(y1) == 0 and np.ndim(y2) == 0
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    upper = (y1 + y2) > eta_c
    first = y1 > y2
    labels = np.where(upper, np.where(first, 3, 4), np.where(first, 1, 2))
    if scalar:
        return Region(int(labels))
    return labels.astype(np.int8)


def simplified_recover(y1, y2, region, eta_c: float):
    """Inverse clipping for the merged regions, floored at zero."""
    scalar = np.ndim(region) == 0 and np.ndim(y1) == 0
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    r = np.asarray(region, dtype=int)
    first = np.select([r == 1, r == 3], [y1, eta_c + y2], default=0.0)
    second = np.select([r == 2, r == 4], [y2, eta_c + y1], default=0.0)
    first, second = np.maximum(first, 0.0), np.maximum(second, 0.0)
    if scalar:
        return float(first), float(second)
    return first, second


def pairwise_ml_detect(y1, y2):
    """Conventional ACO pair decision: the larger sample carries the data."""
    scalar = np.ndim(y1) == 0 and np.ndim(y2) == 0
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    first = y1 >= y2
    out1 = np.where(first, y1, 0.0)
    out2 = np.where(first, 0.0, y2)
    if scalar:
        return float(out1), float(out2)
    return out1, out2


def negative_forcing(samples):
    """Force negative received samples to zero."""
    return np.maximum(np.asarray(samples, dtype=float), 0.0)


def recover_symbol(samples: np.ndarray, p: DetectorParams, detector: str) -> np.ndarray:
    """Detect and recover every pair of a received time-domain symbol."""
    y = np.asarray(samples, dtype=float)
    half = y.shape[-1] // 2
    y1, y2 = y[..., :half], y[..., half:]
    if detector == "map":
        h = map_detect(y1, y2, p)
        out1, out2 = map_recover(y1, y2, h, p)
    elif detector == "simplified":
        r = simplified_detect(y1, y2, p.eta_c)
        out1, out2 = simplified_recover(y1, y2, r, p.eta_c)
    elif detector == "pairwise-ml":
        out1, out2 = pairwise_ml_detect(y1, y2)
    elif detector == "negative-forcing":
        return negative_forcing(y)
    else:
        raise ValueError(f"unknown detector {detector!r}")
    return np.concatenate([np.atleast_1d(out1), np.atleast_1d(out2)], axis=-1)


@dataclass(frozen=True)
class GridSpec:
    """Square evaluation grid for decision-region rasters."""

    lo: float
    hi: float
    n: int

    def axis(self) -> np.ndarray:
        if self.n < 2 or self.hi <= self.lo:
            raise ValueError("grid needs n >= 2 and hi > lo")
        return np.linspace(self.lo, self.hi, self.n)


def decision_region_map(p: DetectorParams, grid: GridSpec, kind: str = "map") -> np.ndarray:
    """Label raster over the (y1, y2) plane.

    Entry [i, j] is the decision at y1 = axis[i], y2 = axis[j]; values are
    1..6 for the optimal detector or 1..4 for the simplified one.
    """
    ax = grid.axis()
    yy1, yy2 = np.meshgrid(ax, ax, indexing="ij")
    if kind == "map":
        return np.asarray(map_detect(yy1, yy2, p), dtype=np.int8)
    if kind == "simplified":
        return np.asarray(simplified_detect(yy1, yy2, p.eta_c), dtype=np.int8)
    raise ValueError(f"unknown region-map kind {kind!r}")


def merge_to_regions(labels: np.ndarray) -> np.ndarray:
    """Fold six-way labels onto the four merged regions (H3,H5->D3 etc.)."""
    labels = np.asarray(labels)
    merged = labels.copy()
    merged[labels == 5] = 3
    merged[labels == 6] = 4
    return merged


def region_map_rows(p: DetectorParams, grid: GridSpec, kind: str = "map"):
    """(y1, y2, label) rows of the raster in row-major order."""
    labels = decision_region_map(p, grid, kind)
    ax = grid.axis()
    tag = "H" if kind == "map" else "D"
    for i, a in enumerate(ax):
        for j, b in enumerate(ax):
            yield a, b, f"{tag}{int(labels[i, j])}"
