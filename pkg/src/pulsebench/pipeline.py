"""End-to-end wiring: video -> trace -> pulse -> intervals/cycles -> bits.

Extractor wiring follows common practice: chrominance and principal-component
methods consume the detrended, band-passed trace; the window-normalizing
methods (pos, lgi) consume the raw trace and their output is band-passed.

Interval recovery optionally refines peak timing by resampling the pulse onto
a finer grid with a cubic spline before peak picking.  Peak indices are exact
integers at the native rate, so native-rate timing quantizes intervals to
whole frames; a band-limited pulse supports sub-frame peak positions, and the
spline recovers them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.stats import skew

from . import extract, pulse, quantize
from .errors import PulsebenchError
from .signals import (
    DETREND_LAMBDA,
    RPPG_BAND_HZ,
    PulseSignal,
    RgbTrace,
    bandpass,
    preprocess_trace,
)

METHODS = ("chrom", "pos", "lgi", "pca")


@dataclass(frozen=True)
class PreprocessConfig:
    low_hz: float = RPPG_BAND_HZ[0]
    high_hz: float = RPPG_BAND_HZ[1]
    detrend_lambda: float = DETREND_LAMBDA


@dataclass(frozen=True)
class PeakTimingConfig:
    prominence_fraction: float = pulse.PROMINENCE_FRACTION
    # Target rate for sub-frame peak timing; None or <= native rate disables.
    timing_rate_hz: float | None = 240.0


def extract_pulse(
    trace: RgbTrace,
    method: str,
    cfg: PreprocessConfig = PreprocessConfig(),
    window_len: int | None = None,
) -> PulseSignal:
    """Run one extractor with its expected preprocessing."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    band = (cfg.low_hz, cfg.high_hz)
    if method in ("chrom", "pca"):
        prepped = preprocess_trace(trace, band, cfg.detrend_lambda)
        if method == "chrom":
            return extract.chrom(prepped)
        return extract.pca_extract(prepped, band)
    if method == "pos":
        raw = extract.pos(trace, window_len)
    else:
        raw = extract.lgi(trace, band)
    return bandpass(raw, cfg.low_hz, cfg.high_hz)


def orient_pulse(signal: PulseSignal) -> PulseSignal:
    """Flip an extracted pulse so systolic bumps point up.

    Extraction leaves the sign unidentified; an inverted pulse puts its maxima
    in the inter-beat valleys, which smears interval timing.  A band-passed
    bump train is right-skewed in its correct polarity, so negative skewness
    means flip.
    """
    if skew(signal.values) < 0:
        return PulseSignal(-signal.values, signal.sample_rate)
    return signal


def refine_timing(signal: PulseSignal, timing_rate_hz: float | None) -> PulseSignal:
    """Cubic-spline upsample so peak indices resolve sub-frame timing."""
    if timing_rate_hz is None or timing_rate_hz <= signal.sample_rate:
        return signal
    factor = math.ceil(timing_rate_hz / signal.sample_rate)
    n = len(signal)
    spline = CubicSpline(np.arange(n), signal.values)
    fine = np.linspace(0.0, n - 1, (n - 1) * factor + 1)
    return PulseSignal(spline(fine), signal.sample_rate * factor)


def recover_ipi(
    signal: PulseSignal, cfg: PeakTimingConfig = PeakTimingConfig()
) -> tuple[pulse.PeakList, pulse.IpiSequence]:
    """Detect peaks (oriented, optionally refined) and return intervals."""
    refined = refine_timing(orient_pulse(signal), cfg.timing_rate_hz)
    peaks = pulse.detect_peaks(refined, cfg.prominence_fraction)
    return peaks, pulse.ipi_from_peaks(peaks)


def cycles_from_pulse(
    signal: PulseSignal,
    cycle_len: int = pulse.CYCLE_LEN,
    prominence_fraction: float = pulse.PROMINENCE_FRACTION,
) -> pulse.CycleSet:
    """Cut unit-normalized heartbeat cycles at the native rate."""
    oriented = orient_pulse(signal)
    peaks = pulse.detect_peaks(oriented, prominence_fraction)
    return pulse.segment_cycles(oriented, peaks, cycle_len)


def bits_from_ipi(ipi: pulse.IpiSequence) -> tuple[list[str], str]:
    """Both codecs: per-interval 8-bit Gray lines and the trend sequence."""
    gray_lines = [w.bits for w in quantize.gray_encode(quantize.normalize_ipi(ipi))]
    bins = quantize.fit_bins(ipi)
    trend = quantize.trend_encode(ipi, bins).bits
    return gray_lines, trend


def estimate_heart_rate(
    signal: PulseSignal, cfg: PeakTimingConfig = PeakTimingConfig()
) -> float:
    _, ipi = recover_ipi(signal, cfg)
    return pulse.heart_rate(ipi)


def safe_heart_rate(signal: PulseSignal) -> float | None:
    """Heart rate or None when the signal has no usable peaks."""
    try:
        return estimate_heart_rate(signal)
    except PulsebenchError:
        return None
