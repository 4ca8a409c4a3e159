"""Desk-scale workbench for pulse-signal leakage from facial video.

Covers the full loop: skin-mean RGB traces from frame stacks, four classical
pulse extractors, inter-peak interval recovery and quantization to bits,
spoofing evaluation against a template-matching authenticator, and a
waveform-injection defense that hides the true pulse in the video.
"""

__version__ = "0.1.0"

from . import (
    authsim,
    corpus,
    defense,
    errors,
    extract,
    fileio,
    metrics,
    pipeline,
    pulse,
    quantize,
    synth,
)
from .signals import (
    DETREND_LAMBDA,
    RPPG_BAND_HZ,
    FrameSequence,
    PulseSignal,
    RgbTrace,
    RoiMask,
    SampledSignal,
    bandpass,
    detrend,
    mean_rgb,
    normalize01,
    preprocess_trace,
    resample,
)

__all__ = [
    "DETREND_LAMBDA",
    "RPPG_BAND_HZ",
    "FrameSequence",
    "PulseSignal",
    "RgbTrace",
    "RoiMask",
    "SampledSignal",
    "authsim",
    "bandpass",
    "corpus",
    "defense",
    "detrend",
    "errors",
    "extract",
    "fileio",
    "metrics",
    "mean_rgb",
    "normalize01",
    "pipeline",
    "preprocess_trace",
    "pulse",
    "quantize",
    "resample",
    "synth",
]
