"""Command line front end: papr / ber / regions experiments."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import harness, plotting
from .channel import snr_to_sigma_z
from .clipping import cr_to_eta
from .config import CHANNELS, DETECTORS, SCHEMES, SystemConfig
from .detectors import DetectorParams, GridSpec, decision_region_map
from .ofdm import SIGMA_X


def _parse_snr_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, help="JSON config file; flags override its values")
    sub.add_argument("--n", type=int, help="subcarrier count (power of two >= 64)")
    sub.add_argument("--qam", type=int, help="QAM order (square power of two)")
    sub.add_argument("--cr", type=float, dest="cr_db", help="clipping ratio in dB")
    sub.add_argument("--alpha", type=float, help="excess bound as a fraction of eta_c")
    sub.add_argument("--scheme", choices=SCHEMES)
    sub.add_argument("--detector", choices=DETECTORS)
    sub.add_argument("--channel", choices=CHANNELS)
    sub.add_argument("--cp", type=int, dest="cp_len", help="cyclic prefix length in samples")
    sub.add_argument("--snr", type=_parse_snr_list, dest="snr_db", help="comma-separated SNR dB list")
    sub.add_argument("--symbols", type=int, dest="n_symbols", help="Monte Carlo symbol budget")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--workers", type=int)
    sub.add_argument("--slm-r", type=int, dest="slm_r", help="SLM candidate count")
    sub.add_argument("--max-errors", type=int, dest="error_target",
                     help="early-stop error count per BER point")
    sub.add_argument("--out", type=Path, required=True, help="output file path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--no-plot", action="store_true", help="skip the figure next to the output")


def _build_config(args: argparse.Namespace) -> SystemConfig:
    base = SystemConfig.from_json(args.config).to_dict() if args.config else SystemConfig().to_dict()
    for key in base:
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    return SystemConfig.from_dict(base)


def _figure_path(out: Path) -> Path:
    return out.with_suffix(".png") if out.suffix != ".png" else out.with_suffix(".fig.png")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acoofdm",
        description="ACO-OFDM link simulator with recoverable upper clipping",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_papr = subs.add_parser("papr", help="per-symbol PAPR CCDF of a transmit scheme")
    _add_common(p_papr)

    p_ber = subs.add_parser("ber", help="Monte Carlo BER over an SNR grid")
    _add_common(p_ber)

    p_reg = subs.add_parser("regions", help="detector decision-region raster")
    _add_common(p_reg)
    p_reg.add_argument("--grid-min", type=float, help="lower grid bound (default -0.6*eta_c)")
    p_reg.add_argument("--grid-max", type=float, help="upper grid bound (default 2.2*eta_c)")
    p_reg.add_argument("--grid-points", type=int, default=201)
    return parser


def _run_papr(args, cfg: SystemConfig) -> None:
    curve = harness.run_papr_ccdf(cfg)
    harness.emit(curve, args.out, args.format)
    print(f"wrote {args.out} ({cfg.n_symbols} symbols, scheme={cfg.scheme})")
    if not args.no_plot:
        fig = plotting.save_ccdf_figure(curve, _figure_path(args.out))
        print(f"wrote {fig}")


def _run_ber(args, cfg: SystemConfig) -> None:
    curve = harness.run_ber(cfg)
    harness.emit(curve, args.out, args.format)
    for pt in curve.points:
        flag = " (low confidence)" if pt.low_confidence else ""
        print(f"snr={pt.snr_db:g} dB  ber={pt.ber:.3e}  errors={pt.error_count}{flag}")
    print(f"wrote {args.out}")
    if not args.no_plot:
        fig = plotting.save_ber_figure(curve, _figure_path(args.out))
        print(f"wrote {fig}")


def _run_regions(args, cfg: SystemConfig) -> None:
    if cfg.detector not in ("map", "simplified"):
        raise ValueError("regions supports --detector map or simplified")
    eta_c = cr_to_eta(cfg.cr_db)
    params = DetectorParams(
        eta_c=eta_c,
        alpha=cfg.alpha,
        sigma_x=SIGMA_X,
        sigma_z=snr_to_sigma_z(cfg.snr_db[0]),
    )
    lo = args.grid_min if args.grid_min is not None else -0.6 * eta_c
    hi = args.grid_max if args.grid_max is not None else 2.2 * eta_c
    grid = GridSpec(lo=lo, hi=hi, n=args.grid_points)
    harness.emit_region_map(params, grid, cfg.detector, args.out)
    print(f"wrote {args.out} ({args.grid_points}x{args.grid_points} raster, {cfg.detector})")
    if not args.no_plot:
        labels = decision_region_map(params, grid, cfg.detector)
        fig = plotting.save_region_figure(labels, grid, params, _figure_path(args.out), cfg.detector)
        print(f"wrote {fig}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _build_config(args)
        if args.command == "papr":
            _run_papr(args, cfg)
        elif args.command == "ber":
            _run_ber(args, cfg)
        else:
            _run_regions(args, cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
