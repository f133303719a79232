"""Conditional-mean MMSE detection for 2-antenna spatially multiplexed
MIMO, with reduced-complexity Gaussian / uniform-square / uniform-ring
approximations, an independent numerical oracle, and a Monte-Carlo BER
harness."""

__version__ = "0.1.0"

from .channel import NoiseSpec, apply_channel, draw_channel, ebn0_to_n0
from .constellation import (
    Constellation,
    build_apsk,
    build_psk,
    build_qam,
    from_name,
    slice_nearest,
)
from .detectors import (
    AuxVars,
    DetectorSpec,
    SoftEstimate,
    compute_aux,
    detect_approx_gaussian,
    detect_approx_ring,
    detect_approx_square,
    detect_cond_mean_exact,
    detect_linear,
    detect_mld,
    mmse_matrix,
    spec_from_name,
    zf_matrix,
)
from .sim import BerPoint, SweepConfig, interpolate_required_snr, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
