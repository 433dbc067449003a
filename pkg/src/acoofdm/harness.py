"""Seeded Monte Carlo experiments: PAPR CCDF and BER curves.

Work is split into fixed 512-symbol chunks, each driven by its own
counter-based RNG stream keyed on (seed, chunk index).  Chunks are merged
in index order, so results are bit-identical for any worker count, and
early stopping is evaluated on a fixed chunk cadence for the same reason.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import clipping, detectors, ofdm, precoding, qam
from .channel import DowChannel, IDENTITY_CHANNEL, apply_channel, sample_dow_channel, snr_to_sigma_z
from .config import SystemConfig

CHUNK_SYMBOLS = 512
STOP_CHECK_CHUNKS = 4
LOW_CONFIDENCE_ERRORS = 20
PAPR_GRID_DB = np.round(np.arange(0.0, 25.0 + 1e-9, 0.1), 1)


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent counter-based stream for one chunk of symbols."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, chunk_index], dtype=np.uint64)))


def _chunk_sizes(n_symbols: int):
    full, rest = divmod(n_symbols, CHUNK_SYMBOLS)
    sizes = [CHUNK_SYMBOLS] * full
    if rest:
        sizes.append(rest)
    return sizes


@dataclass
class CcdfCurve:
    """Empirical P(PAPR > threshold) on a fixed 0.1 dB grid."""

    thresholds_db: np.ndarray
    ccdf: np.ndarray
    n_symbols: int
    scheme: str
    config: dict = field(default_factory=dict)

    def papr_at(self, level: float) -> float:
        """Threshold where the CCDF crosses `level` (log-linear interpolation)."""
        c = np.asarray(self.ccdf, dtype=float)
        t = np.asarray(self.thresholds_db, dtype=float)
        above = np.nonzero(c >= level)[0]
        if above.size == 0:
            return float(t[0])
        i = above[-1]
        if i + 1 >= c.size or c[i + 1] <= 0 or c[i] <= 0:
            return float(t[i])
        # interpolate in log10(ccdf) between the bracketing grid points
        la, lb = np.log10(c[i]), np.log10(c[i + 1])
        if la == lb:
            return float(t[i])
        frac = (np.log10(level) - la) / (lb - la)
        return float(t[i] + frac * (t[i + 1] - t[i]))


@dataclass
class BerPoint:
    snr_db: float
    ber: float
    bit_count: int
    error_count: int
    low_confidence: bool


@dataclass
class BerCurve:
    points: list[BerPoint]
    scheme: str
    detector: str
    config: dict = field(default_factory=dict)

    def snr_at_ber(self, target: float) -> float:
        """SNR where the curve crosses `target`, interpolated in log10(BER)."""
        snrs = np.array([pt.snr_db for pt in self.points])
        bers = np.array([pt.ber for pt in self.points])
        order = np.argsort(snrs)
        snrs, bers = snrs[order], bers[order]
        ok = bers > 0
        for i in range(len(snrs) - 1):
            if ok[i] and ok[i + 1] and bers[i] >= target >= bers[i + 1]:
                la, lb = np.log10(bers[i]), np.log10(bers[i + 1])
                if la == lb:
                    return float(snrs[i])
                frac = (np.log10(target) - la) / (lb - la)
                return float(snrs[i] + frac * (snrs[i + 1] - snrs[i]))
        raise ValueError(f"BER {target:g} is not bracketed by the simulated points")


def _clip_params(cfg: SystemConfig) -> clipping.ClipParams:
    return clipping.ClipParams.from_cr(cfg.cr_db, cfg.alpha)


def _transmit_chunk(cfg: SystemConfig, rng: np.random.Generator, n_sym: int):
    """Random payload bits and the scheme's clipped time-domain symbols."""
    bits = qam.random_bits(rng, (n_sym, cfg.bits_per_symbol))
    blocks = qam.modulate_bits(bits, cfg.qam)
    if cfg.scheme in ("dft-precode", "zc-precode"):
        mat = precoding.build_precoder(cfg.scheme.split("-")[0], cfg.n // 4)
        blocks = precoding.precode(blocks, mat)

    if cfg.scheme == "slm":
        seqs = np.ones((n_sym, cfg.slm_r, cfg.n // 4))
        if cfg.slm_r > 1:
            seqs[:, 1:, :] = rng.choice([-1.0, 1.0], size=(n_sym, cfg.slm_r - 1, cfg.n // 4))
        rotated = (blocks[:, None, :] * seqs).reshape(n_sym * cfg.slm_r, cfg.n // 4)
        cand = ofdm.clip_negative(ofdm.modulate(ofdm.map_subcarriers(rotated, cfg.n)))
        cand = cand.reshape(n_sym, cfg.slm_r, cfg.n)
        paprs = ofdm.papr_db(cand)
        tx = cand[np.arange(n_sym), np.argmin(paprs, axis=-1)]
        return bits, tx

    xc = ofdm.clip_negative(ofdm.modulate(ofdm.map_subcarriers(blocks, cfg.n)))
    if cfg.scheme == "roc":
        tx = clipping.roc_clip_symbol(xc, _clip_params(cfg))
    elif cfg.scheme == "direct-clip":
        tx = clipping.direct_clip(xc, _clip_params(cfg).eta_c)
    else:
        tx = xc
    return bits, tx


def _papr_chunk(cfg: SystemConfig, chunk_index: int, n_sym: int) -> np.ndarray:
    rng = chunk_rng(cfg.seed, chunk_index)
    _, tx = _transmit_chunk(cfg, rng, n_sym)
    return np.atleast_1d(ofdm.papr_db(tx))


def run_papr_ccdf(cfg: SystemConfig) -> CcdfCurve:
    """Per-symbol PAPR CCDF of the configured transmit chain."""
    sizes = _chunk_sizes(cfg.n_symbols)
    jobs = [(cfg, i, sz) for i, sz in enumerate(sizes)]
    parts = _map_jobs(_papr_chunk, jobs, cfg.workers)
    paprs = np.concatenate(parts)
    ccdf = (paprs[None, :] > PAPR_GRID_DB[:, None]).mean(axis=1)
    return CcdfCurve(
        thresholds_db=PAPR_GRID_DB.copy(),
        ccdf=ccdf,
        n_symbols=cfg.n_symbols,
        scheme=cfg.scheme,
        config=cfg.to_dict(),
    )


def _ber_chunk(cfg: SystemConfig, snr_db: float, chunk_index: int, n_sym: int):
    rng = chunk_rng(cfg.seed, chunk_index)
    sigma_z = snr_to_sigma_z(snr_db)
    bits, tx = _transmit_chunk(cfg, rng, n_sym)

    if cfg.channel == "dow":
        chan: DowChannel = sample_dow_channel(
            cfg.dow_taps, cfg.dow_max_delay, cfg.dow_decay, rng
        )
    else:
        chan = IDENTITY_CHANNEL

    stream = ofdm.add_cp(tx, cfg.cp_len).reshape(-1)
    rx = apply_channel(stream, chan, sigma_z, rng)
    y = ofdm.remove_cp(rx.reshape(n_sym, cfg.n + cfg.cp_len), cfg.cp_len)

    cp = _clip_params(cfg)
    params = detectors.DetectorParams(
        eta_c=cp.eta_c, alpha=cfg.alpha, sigma_x=ofdm.SIGMA_X, sigma_z=sigma_z
    )
    recovered = detectors.recover_symbol(y, params, cfg.detector)
    est = ofdm.demodulate(recovered, chan.freq_response(cfg.n))
    bits_hat = qam.demodulate_symbols(est, cfg.qam)
    errors = int(np.count_nonzero(bits != bits_hat))
    return errors, n_sym * cfg.bits_per_symbol


def run_ber(cfg: SystemConfig, snr_grid=None) -> BerCurve:
    """Monte Carlo BER at each SNR point.

    Each point stops at the configured error target or when the symbol
    budget is spent, whichever comes first; points with few errors are
    flagged low-confidence.
    """
    snrs = list(cfg.snr_db if snr_grid is None else snr_grid)
    sizes = _chunk_sizes(cfg.n_symbols)
    points = []
    for snr_db in snrs:
        errors = bit_count = 0
        for start in range(0, len(sizes), STOP_CHECK_CHUNKS):
            wave = [
                (cfg, snr_db, i, sizes[i])
                for i in range(start, min(start + STOP_CHECK_CHUNKS, len(sizes)))
            ]
            for err, nb in _map_jobs(_ber_chunk, wave, cfg.workers):
                errors += err
                bit_count += nb
            if errors >= cfg.error_target:
                break
        points.append(
            BerPoint(
                snr_db=float(snr_db),
                ber=errors / bit_count,
                bit_count=bit_count,
                error_count=errors,
                low_confidence=errors < LOW_CONFIDENCE_ERRORS,
            )
        )
    return BerCurve(points=points, scheme=cfg.scheme, detector=cfg.detector, config=cfg.to_dict())


def _map_jobs(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def emit(curve, path: str | Path, fmt: str = "csv") -> Path:
    """Write a curve to disk as CSV or JSON, deterministically."""
    path = Path(path)
    try:
        if fmt == "csv":
            text = _to_csv(curve)
        elif fmt == "json":
            text = json.dumps(_to_json(curve), sort_keys=True, indent=2) + "\n"
        else:
            raise ValueError(f"unknown format {fmt!r}")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _to_csv(curve) -> str:
    if isinstance(curve, CcdfCurve):
        lines = ["papr_db,ccdf"]
        lines += [f"{t:.1f},{c!r}" for t, c in zip(curve.thresholds_db, curve.ccdf)]
    elif isinstance(curve, BerCurve):
        lines = ["snr_db,ber,bit_count,error_count,low_confidence"]
        lines += [
            f"{pt.snr_db!r},{pt.ber!r},{pt.bit_count},{pt.error_count},{int(pt.low_confidence)}"
            for pt in curve.points
        ]
    else:
        raise TypeError(f"cannot serialize {type(curve).__name__}")
    return "\n".join(lines) + "\n"


def _to_json(curve) -> dict:
    if isinstance(curve, CcdfCurve):
        return {
            "kind": "papr_ccdf",
            "scheme": curve.scheme,
            "n_symbols": curve.n_symbols,
            "config": curve.config,
            "points": [[float(t), float(c)] for t, c in zip(curve.thresholds_db, curve.ccdf)],
        }
    if isinstance(curve, BerCurve):
        return {
            "kind": "ber",
            "scheme": curve.scheme,
            "detector": curve.detector,
            "config": curve.config,
            "points": [
                {
                    "snr_db": pt.snr_db,
                    "ber": pt.ber,
                    "bit_count": pt.bit_count,
                    "error_count": pt.error_count,
                    "low_confidence": pt.low_confidence,
                }
                for pt in curve.points
            ],
        }
    raise TypeError(f"cannot serialize {type(curve).__name__}")


def emit_region_map(
    params: detectors.DetectorParams,
    grid: detectors.GridSpec,
    kind: str,
    path: str | Path,
) -> Path:
    """Write the decision-region raster as a y1,y2,label CSV."""
    path = Path(path)
    lines = ["y1,y2,label"]
    lines += [f"{a!r},{b!r},{lab}" for a, b, lab in detectors.region_map_rows(params, grid, kind)]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path
