"""ACO-OFDM link simulation with recoverable upper clipping.

The transmit chain maps QAM symbols onto the odd subcarriers of a
Hermitian spectrum, clips the negative half of the real waveform, and
optionally upper-clips the peaks pairwise so the excess can be recovered.
Detectors, channels, PAPR baselines, and the Monte Carlo harness live in
their own modules.
"""

from .channel import DowChannel, apply_channel, awgn, sample_dow_channel, snr_to_sigma_z
from .clipping import ClipParams, cr_to_eta, direct_clip, eta_to_cr, roc_clip_pair, roc_clip_symbol
from .config import SystemConfig
from .detectors import (
    DetectorParams,
    GridSpec,
    Hypothesis,
    Region,
    compute_priors,
    conditional_pdf,
    decision_region_map,
    map_detect,
    map_recover,
    negative_forcing,
    pairwise_ml_detect,
    simplified_detect,
    simplified_recover,
)
from .harness import BerCurve, CcdfCurve, emit, run_ber, run_papr_ccdf
from .ofdm import (
    SIGMA_X,
    SIGMA_X2,
    add_cp,
    clip_negative,
    demodulate,
    map_subcarriers,
    modulate,
    papr_db,
    remove_cp,
)
from .precoding import build_precoder, precode, slm_transmit

__version__ = "0.1.0"
