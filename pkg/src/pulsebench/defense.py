"""Waveform-injection defense: hide the true pulse in a video's skin region.

The injection template is the region mask (1 inside, 0 outside) blurred by a
normalized 30x30 uniform kernel so the injected edges fade out instead of
leaving a visible seam.  Each frame adds the blurred field scaled by the
frame's waveform sample; a decoy sine in the cardiac band is the default
waveform, but any resampled custom signal works.

Channel coupling matters: a perturbation added identically to R, G, and B is
common-mode and chrominance-based extractors cancel it almost exactly, so by
default the injection follows a skin-pulse channel signature (green
dominant).  Equal weights remain available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .errors import (
    BadCustomSignal,
    DimensionMismatch,
    FrequencyOutOfBand,
    LengthMismatch,
)
from .metrics import PairedSeries, pearson
from .signals import (
    FrameSequence,
    PulseSignal,
    RoiMask,
    SampledSignal,
    mean_rgb,
    preprocess_trace,
    resample,
)

KERNEL_SIZE = 30
# Pixel-intensity swing of the decoy: ~1.4% of full scale, imperceptible but
# comfortably above the one-unit quantization floor and strong enough to
# dominate a synthetic pulse of ~1 intensity unit after extraction.
DEFAULT_AMPLITUDE = 3.5
DEFAULT_FREQ_HZ = 1.5
SINE_BAND_HZ = (0.65, 4.0)

# Per-channel injection weights: pulse-like so chrominance projections keep
# the decoy instead of cancelling it as common-mode intensity.
DEFAULT_CHANNEL_WEIGHTS = (0.4, 1.0, 0.6)
EQUAL_CHANNEL_WEIGHTS = (1.0, 1.0, 1.0)

# Hiding verdict thresholds on |Pearson r| of the protected extraction.
HIDE_MAX_TRUTH_R = 0.3
HIDE_MIN_WAVEFORM_R = 0.7


def uniform_kernel(size: int = KERNEL_SIZE) -> np.ndarray:
    """Normalized uniform blur kernel (all entries equal, summing to 1)."""
    if size < 1:
        raise ValueError("kernel size must be positive")
    return np.full((size, size), 1.0 / (size * size))


def build_template(mask: RoiMask, frame_index: int = 0) -> np.ndarray:
    """Per-frame base field: 1 inside the region, 0 outside."""
    if mask.per_frame and not 0 <= frame_index < mask.mask.shape[0]:
        raise DimensionMismatch(f"frame index {frame_index} outside mask range")
    return mask.frame_mask(frame_index).astype(np.float64)


def blur_template(field: np.ndarray, kernel: np.ndarray | None = None) -> np.ndarray:
    """2-D convolution with the uniform kernel, reflect-padded borders.

    The window for output pixel (i, j) covers rows i-15..i+14 and columns
    j-15..j+14 of the reflect-padded field (for the default even-sized
    kernel), so values stay inside [0, 1].
    """
    field = np.asarray(field, dtype=np.float64)
    if field.ndim != 2 or field.size == 0:
        raise DimensionMismatch("field must be a non-empty 2-D array")
    if kernel is None:
        kernel = uniform_kernel()
    kh, kw = kernel.shape
    pad = ((kh // 2, kh - 1 - kh // 2), (kw // 2, kw - 1 - kw // 2))
    padded = np.pad(field, pad, mode="symmetric")
    out = convolve2d(padded, kernel, mode="valid")
    return np.clip(out, 0.0, 1.0)


def make_waveform(
    kind: str,
    freq_hz: float = DEFAULT_FREQ_HZ,
    fps: float = 30.0,
    n_frames: int = 0,
    amplitude: float = DEFAULT_AMPLITUDE,
    custom: np.ndarray | None = None,
) -> np.ndarray:
    """Per-frame injection values: a cardiac-band sine or a custom shape.

    Custom signals are scaled so their largest swing is +-amplitude, then
    resampled onto the frame grid.
    """
    if n_frames < 1:
        raise ValueError("n_frames must be positive")
    if not amplitude > 0:
        raise ValueError("amplitude must be positive")
    if kind == "sine":
        if not SINE_BAND_HZ[0] <= freq_hz <= SINE_BAND_HZ[1]:
            raise FrequencyOutOfBand(
                f"sine frequency {freq_hz} Hz outside "
                f"{SINE_BAND_HZ[0]}-{SINE_BAND_HZ[1]} Hz"
            )
        t = np.arange(n_frames)
        return amplitude * np.sin(2.0 * np.pi * freq_hz * t / fps)
    if kind == "custom":
        if custom is None or len(np.asarray(custom).ravel()) < 2:
            raise BadCustomSignal("custom waveform needs at least 2 samples")
        values = np.asarray(custom, dtype=np.float64).ravel()
        peak = np.abs(values).max()
        if peak < 1e-12:
            raise BadCustomSignal("custom waveform is flat")
        scaled = resample(SampledSignal(values, 1.0), n_frames).values
        return scaled * (amplitude / peak)
    raise ValueError(f"unknown waveform kind {kind!r}")


@dataclass(frozen=True, eq=False)
class InjectionTemplate:
    """Blurred region field plus the per-frame waveform that scales it."""

    base: np.ndarray
    blurred: np.ndarray
    waveform: np.ndarray
    amplitude: float
    kernel: np.ndarray

    def field_at(self, t: int) -> np.ndarray:
        return self.blurred * self.waveform[t]


def prepare_template(
    mask: RoiMask, waveform: np.ndarray, kernel: np.ndarray | None = None
) -> InjectionTemplate:
    """Blur the static base once; per-frame fields are waveform-scaled."""
    if mask.per_frame:
        raise DimensionMismatch("injection expects a static mask")
    base = build_template(mask)
    if kernel is None:
        kernel = uniform_kernel()
    blurred = blur_template(base, kernel)
    waveform = np.asarray(waveform, dtype=np.float64).ravel()
    return InjectionTemplate(
        base, blurred, waveform, float(np.abs(waveform).max()), kernel
    )


def inject(
    video: FrameSequence,
    mask: RoiMask,
    waveform: np.ndarray,
    channel_weights: tuple[float, float, float] = EQUAL_CHANNEL_WEIGHTS,
    kernel: np.ndarray | None = None,
) -> FrameSequence:
    """Superimpose the blurred, waveform-scaled field on every frame.

    Pixel math runs in float64 and rounds once to uint8 with saturation;
    a zero waveform reproduces the input bit-exactly.
    """
    if not mask.matches(video):
        raise DimensionMismatch("mask does not match video dimensions")
    waveform = np.asarray(waveform, dtype=np.float64).ravel()
    if len(waveform) != video.n_frames:
        raise LengthMismatch(
            f"waveform length {len(waveform)} != frame count {video.n_frames}"
        )
    template = prepare_template(mask, waveform, kernel)
    weights = np.asarray(channel_weights, dtype=np.float64)
    out = np.empty_like(video.frames)
    for t in range(video.n_frames):
        delta = template.field_at(t)[:, :, None] * weights[None, None, :]
        shifted = video.frames[t].astype(np.float64) + delta
        out[t] = np.clip(np.rint(shifted), 0, 255).astype(np.uint8)
    return FrameSequence(out, video.fps)


@dataclass(frozen=True)
class HidingReport:
    """Correlation audit of extraction before and after injection."""

    original_truth_r: float
    original_waveform_r: float
    protected_truth_r: float
    protected_waveform_r: float
    hiding_ok: bool

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "original_truth_r": float(self.original_truth_r),
            "original_waveform_r": float(self.original_waveform_r),
            "protected_truth_r": float(self.protected_truth_r),
            "protected_waveform_r": float(self.protected_waveform_r),
            "hiding_ok": bool(self.hiding_ok),
        }


def _abs_corr(a: np.ndarray, b: np.ndarray) -> float:
    return abs(pearson(PairedSeries(a, b)))


def verify_hiding(
    original: FrameSequence,
    protected: FrameSequence,
    mask: RoiMask,
    truth_pulse: PulseSignal,
    waveform: np.ndarray,
) -> HidingReport:
    """Chrominance-extract both videos and compare against truth and decoy.

    Hiding counts as successful when the protected extraction correlates with
    the truth at |r| <= 0.3 while tracking the injected waveform at
    |r| >= 0.7.
    """
    if (original.height, original.width) != (protected.height, protected.width):
        raise DimensionMismatch("original and protected dimensions differ")
    from .extract import chrom  # local import to avoid cycle at module load

    def extraction(video: FrameSequence) -> np.ndarray:
        return chrom(preprocess_trace(mean_rgb(video, mask))).values

    orig = extraction(original)
    prot = extraction(protected)
    report = HidingReport(
        original_truth_r=_abs_corr(orig, truth_pulse.values),
        original_waveform_r=_abs_corr(orig, waveform),
        protected_truth_r=_abs_corr(prot, truth_pulse.values),
        protected_waveform_r=_abs_corr(prot, waveform),
        hiding_ok=False,
    )
    ok = (
        report.protected_truth_r <= HIDE_MAX_TRUTH_R
        and report.protected_waveform_r >= HIDE_MIN_WAVEFORM_R
    )
    return HidingReport(
        report.original_truth_r,
        report.original_waveform_r,
        report.protected_truth_r,
        report.protected_waveform_r,
        ok,
    )
