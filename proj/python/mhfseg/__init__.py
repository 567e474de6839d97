"""Speech segmentation with multilevel hybrid (mean/min) filters."""

from ._core import (
    MhfsegError,
    add_gaussian_noise,
    add_impulse_noise,
    analyze,
    autocorrelation,
    dist,
    energy_marks,
    frame_signal,
    load_wav,
    local_normalize,
    lpc_coefficients,
    magnitude_spectrum,
    match_boundaries,
    multilevel,
    peak_widths,
    pick_peaks,
    pinv_energy,
    save_wav,
    segment,
    synthesize,
    variation_function,
    window_usage,
)

__all__ = [
    "MhfsegError",
    "add_gaussian_noise",
    "add_impulse_noise",
    "analyze",
    "autocorrelation",
    "dist",
    "energy_marks",
    "frame_signal",
    "load_wav",
    "local_normalize",
    "lpc_coefficients",
    "magnitude_spectrum",
    "match_boundaries",
    "multilevel",
    "peak_widths",
    "pick_peaks",
    "pinv_energy",
    "save_wav",
    "segment",
    "synthesize",
    "variation_function",
    "window_usage",
]
