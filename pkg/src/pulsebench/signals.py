"""Core sampled-signal types and the shared preprocessing chain.

Everything downstream (extraction, interval recovery, injection) works on the
types defined here: raw RGB frame stacks, region masks, per-frame channel-mean
traces, and plain 1-D sampled signals.  The preprocessing chain is
skin-mean reduction -> smoothness-priors detrending -> zero-phase band-pass,
with linear resampling and [0, 1] normalization as utilities.

All arithmetic is float64; quantization codecs downstream are bit-sensitive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.signal import butter, filtfilt
from scipy.sparse.linalg import spsolve

from .errors import (
    DimensionMismatch,
    EmptyMask,
    InvalidBand,
    SignalTooShort,
)

# Plausible cardiac band: 39-240 bpm.
RPPG_BAND_HZ = (0.65, 4.0)

# Canonical smoothness-priors regularization (Tarvainen et al., 2002).
DETREND_LAMBDA = 300.0

_BUTTER_ORDER = 4


@dataclass(frozen=True, eq=False)
class FrameSequence:
    """Ordered RGB frames, shape (n_frames, height, width, 3), uint8."""

    frames: np.ndarray
    fps: float

    def __post_init__(self):
        frames = np.asarray(self.frames)
        if frames.ndim != 4 or frames.shape[3] != 3:
            raise DimensionMismatch(
                f"expected (n, h, w, 3) frame stack, got shape {frames.shape}"
            )
        if frames.dtype != np.uint8:
            raise ValueError("frames must be uint8 intensities in [0, 255]")
        if frames.shape[0] < 1:
            raise ValueError("need at least one frame")
        if not self.fps > 0:
            raise ValueError("fps must be positive")
        object.__setattr__(self, "frames", frames)

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]


@dataclass(frozen=True, eq=False)
class RoiMask:
    """Binary skin-region mask; (h, w) if static, (n, h, w) if per-frame."""

    mask: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.mask)
        if mask.ndim not in (2, 3):
            raise DimensionMismatch(f"mask must be 2-D or 3-D, got {mask.ndim}-D")
        if not np.isin(mask, (0, 1)).all():
            raise ValueError("mask values must be exactly 0 or 1")
        object.__setattr__(self, "mask", mask.astype(np.uint8))

    @property
    def per_frame(self) -> bool:
        return self.mask.ndim == 3

    @property
    def height(self) -> int:
        return self.mask.shape[-2]

    @property
    def width(self) -> int:
        return self.mask.shape[-1]

    def frame_mask(self, t: int) -> np.ndarray:
        return self.mask[t] if self.per_frame else self.mask

    def matches(self, frames: FrameSequence) -> bool:
        if (self.height, self.width) != (frames.height, frames.width):
            return False
        if self.per_frame and self.mask.shape[0] != frames.n_frames:
            return False
        return True


@dataclass(frozen=True, eq=False)
class RgbTrace:
    """Per-frame mean (R, G, B) triples, shape (n_frames, 3), float64."""

    samples: np.ndarray
    fps: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 2 or samples.shape[1] != 3:
            raise DimensionMismatch(f"trace must be (n, 3), got {samples.shape}")
        if not np.isfinite(samples).all():
            raise ValueError("trace values must be finite")
        if not self.fps > 0:
            raise ValueError("fps must be positive")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def channels(self) -> np.ndarray:
        """Channel-major view, shape (3, n_frames)."""
        return self.samples.T


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """1-D real-valued signal with a sample rate in Hz."""

    values: np.ndarray
    sample_rate: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).ravel()
        if not np.isfinite(values).all():
            raise ValueError("signal values must be finite")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) / self.sample_rate


# A pulse waveform is just a sampled signal whose rate matches its source.
PulseSignal = SampledSignal


def mean_rgb(frames: FrameSequence, mask: RoiMask) -> RgbTrace:
    """Reduce each frame to the mean (R, G, B) over the masked skin pixels.

    Raises EmptyMask if a mask selects zero pixels and DimensionMismatch if
    mask and frames disagree in shape.
    """
    if not mask.matches(frames):
        raise DimensionMismatch(
            f"mask {mask.mask.shape} does not match frames "
            f"({frames.n_frames}, {frames.height}, {frames.width})"
        )
    stack = frames.frames.astype(np.float64)
    if not mask.per_frame:
        sel = mask.mask.astype(bool)
        if not sel.any():
            raise EmptyMask("static mask selects zero pixels")
        means = stack[:, sel, :].mean(axis=1)
    else:
        means = np.empty((frames.n_frames, 3), dtype=np.float64)
        for t in range(frames.n_frames):
            sel = mask.mask[t].astype(bool)
            if not sel.any():
                raise EmptyMask(f"mask for frame {t} selects zero pixels")
            means[t] = stack[t][sel].mean(axis=0)
    return RgbTrace(means, frames.fps)


def bandpass(signal: SampledSignal, low_hz: float, high_hz: float) -> SampledSignal:
    """Zero-phase Butterworth band-pass (order 4, forward-backward).

    Reflect padding suppresses the edge transients that would otherwise
    corrupt the first and last pulse peaks.
    """
    nyq = signal.sample_rate / 2.0
    if not (0.0 < low_hz < high_hz < nyq):
        raise InvalidBand(
            f"need 0 < low < high < Nyquist ({nyq} Hz), got [{low_hz}, {high_hz}]"
        )
    b, a = butter(_BUTTER_ORDER, [low_hz, high_hz], btype="band", fs=signal.sample_rate)
    padlen = 3 * max(len(a), len(b))
    if len(signal) <= padlen:
        raise SignalTooShort(
            f"band-pass needs more than {padlen} samples, got {len(signal)}"
        )
    out = filtfilt(b, a, signal.values, padtype="even", padlen=padlen)
    return SampledSignal(out, signal.sample_rate)


def detrend(signal: SampledSignal, lam: float = DETREND_LAMBDA) -> SampledSignal:
    """Smoothness-priors detrending (Tarvainen et al., 2002).

    Removes the slow trend z_trend = (I + lam^2 D2' D2)^-1 z, where D2 is the
    second-difference operator, preserving cardiac-band oscillation.
    """
    n = len(signal)
    if n < 3:
        raise SignalTooShort("detrend needs at least 3 samples")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    d2 = sparse.diags_array(
        [np.ones(n - 2), -2.0 * np.ones(n - 2), np.ones(n - 2)],
        offsets=[0, 1, 2],
        shape=(n - 2, n),
    )
    a = sparse.eye_array(n, format="csc") + (lam * lam) * (d2.T @ d2)
    trend = spsolve(a.tocsc(), signal.values)
    return SampledSignal(signal.values - trend, signal.sample_rate)


def resample(signal: SampledSignal, target_len: int) -> SampledSignal:
    """Linear-interpolation resampling onto target_len uniform points.

    The new grid spans the original support, so the first and last samples
    are preserved exactly.
    """
    n = len(signal)
    if n < 2:
        raise SignalTooShort("resample needs at least 2 samples")
    if target_len < 1:
        raise ValueError("target_len must be a positive integer")
    positions = np.linspace(0.0, n - 1, target_len)
    out = np.interp(positions, np.arange(n), signal.values)
    if target_len > 1:
        rate = signal.sample_rate * (target_len - 1) / (n - 1)
    else:
        rate = signal.sample_rate
    return SampledSignal(out, rate)


def normalize01(signal: SampledSignal) -> SampledSignal:
    """Affine map onto [0, 1]: min -> 0, max -> 1.

    A constant signal maps to all-0.5 so flat segments never abort a
    downstream cycle pipeline.
    """
    if len(signal) < 1:
        raise SignalTooShort("normalize01 needs at least 1 sample")
    lo = signal.values.min()
    hi = signal.values.max()
    if hi > lo:
        out = (signal.values - lo) / (hi - lo)
    else:
        out = np.full(len(signal), 0.5)
    return SampledSignal(out, signal.sample_rate)


def preprocess_trace(
    trace: RgbTrace,
    band_hz: tuple[float, float] = RPPG_BAND_HZ,
    lam: float = DETREND_LAMBDA,
) -> RgbTrace:
    """Detrend then band-pass each channel of a trace.

    This is the per-channel form of the acquisition chain; extractors that
    assume preprocessed input (chrominance, principal components) consume its
    output, while window-normalizing extractors take the raw trace.
    """
    out = np.empty_like(trace.samples)
    for c in range(3):
        chan = SampledSignal(trace.samples[:, c], trace.fps)
        chan = detrend(chan, lam)
        chan = bandpass(chan, band_hz[0], band_hz[1])
        out[:, c] = chan.values
    return RgbTrace(out, trace.fps)
