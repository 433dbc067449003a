"""Simulation configuration and its JSON round trip."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

SCHEMES = ("ideal", "direct-clip", "roc", "slm", "dft-precode", "zc-precode")
DETECTORS = ("map", "simplified", "pairwise-ml", "negative-forcing")
CHANNELS = ("awgn", "dow")


@dataclass
class SystemConfig:
    """Full parameter set for one experiment; everything else derives from it."""

    n: int = 256
    qam: int = 64
    cr_db: float = 10.0
    alpha: float = 0.5
    snr_db: list[float] = field(default_factory=lambda: [20.0])
    cp_len: int = 0
    n_symbols: int = 10_000
    seed: int = 1
    scheme: str = "roc"
    detector: str = "map"
    channel: str = "awgn"
    slm_r: int = 4
    dow_taps: int = 16
    dow_max_delay: int = 16
    dow_decay: float = 5.0
    workers: int = 1
    error_target: int = 200

    def __post_init__(self):
        if self.n < 64 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"n must be a power of two >= 64, got {self.n}")
        bits = self.qam.bit_length() - 1
        if self.qam < 4 or 2**bits != self.qam or bits % 2 != 0:
            raise ValueError(f"qam must be a square power of two, got {self.qam}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not math.isfinite(self.cr_db):
            raise ValueError("cr_db must be finite")
        if not 0 <= self.cp_len < self.n:
            raise ValueError(f"cp_len must be in [0, n), got {self.cp_len}")
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.detector not in DETECTORS:
            raise ValueError(f"detector must be one of {DETECTORS}, got {self.detector!r}")
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if self.slm_r < 1:
            raise ValueError("slm_r must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if isinstance(self.snr_db, (int, float)):
            self.snr_db = [float(self.snr_db)]
        self.snr_db = [float(s) for s in self.snr_db]
        self.seed = int(self.seed)

    @property
    def bits_per_symbol(self) -> int:
        """Payload bits carried by one OFDM symbol."""
        return (self.n // 4) * (self.qam.bit_length() - 1)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "SystemConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def replace(self, **updates) -> "SystemConfig":
        data = self.to_dict()
        data.update(updates)
        return SystemConfig.from_dict(data)
