"""Figure rendering for the CLI report path (written next to the CSV/JSON)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .detectors import DetectorParams, GridSpec
from .harness import BerCurve, CcdfCurve


def save_ccdf_figure(curves, path: str | Path) -> Path:
    """Semilog CCDF-vs-PAPR plot for one or more curves."""
    if isinstance(curves, CcdfCurve):
        curves = [curves]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for curve in curves:
        mask = np.asarray(curve.ccdf) > 0
        ax.semilogy(
            np.asarray(curve.thresholds_db)[mask],
            np.asarray(curve.ccdf)[mask],
            label=curve.scheme,
        )
    ax.set_xlabel("PAPR threshold (dB)")
    ax.set_ylabel("CCDF  P(PAPR > threshold)")
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def save_ber_figure(curves, path: str | Path) -> Path:
    """Semilog BER-vs-SNR plot; low-confidence points are hollow."""
    if isinstance(curves, BerCurve):
        curves = [curves]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for curve in curves:
        snr = [pt.snr_db for pt in curve.points]
        ber = [pt.ber for pt in curve.points]
        line, = ax.semilogy(snr, ber, marker="o", label=f"{curve.scheme}/{curve.detector}")
        weak = [(s, b) for pt, s, b in zip(curve.points, snr, ber) if pt.low_confidence and b > 0]
        if weak:
            ws, wb = zip(*weak)
            ax.semilogy(ws, wb, linestyle="none", marker="o", markerfacecolor="white",
                        color=line.get_color())
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def save_region_figure(labels: np.ndarray, grid: GridSpec, params: DetectorParams,
                       path: str | Path, kind: str = "map") -> Path:
    """Decision-area raster over the (y1, y2) plane."""
    ax_vals = grid.axis()
    fig, ax = plt.subplots(figsize=(5.4, 5.0))
    n_labels = 6 if kind == "map" else 4
    mesh = ax.pcolormesh(
        ax_vals,
        ax_vals,
        np.asarray(labels).T,
        cmap=plt.get_cmap("viridis", n_labels),
        vmin=0.5,
        vmax=n_labels + 0.5,
        shading="nearest",
    )
    tag = "H" if kind == "map" else "D"
    cbar = fig.colorbar(mesh, ticks=np.arange(1, n_labels + 1))
    cbar.ax.set_yticklabels([f"{tag}{i}" for i in range(1, n_labels + 1)])
    ax.axline((0, params.eta_c), (params.eta_c, 0), color="white", lw=0.8, ls="--")
    ax.axline((0, 0), slope=1, color="white", lw=0.8, ls="--")
    ax.set_xlabel("y1")
    ax.set_ylabel("y2")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
