"""Seeded ground-truth generator for pulses, traces, and frame stacks.

Each beat is a systolic Gaussian bump plus a delayed, smaller dicrotic bump;
beat periods wobble with a configurable fractional jitter.  Traces place the
pulse on top of per-channel skin baselines with a slow drift and residual
sensor noise; frame stacks paint an elliptical skin patch with the trace and
keep everything else static.  Identical seed and configuration give
bit-identical output.

noise_std is per-pixel sensor noise.  Skin-mean reduction averages most of it
away, but sensor/illumination noise is spatially correlated in practice, so
the trace keeps a residual of noise_std * TRACE_NOISE_FRACTION per frame.
Frames realize the same trace plus independent per-pixel dither, so the two
generators agree through mean_rgb to within pixel rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadModel, SceneTooSmall
from .pulse import IpiSequence
from .signals import FrameSequence, PulseSignal, RgbTrace, RoiMask

# Residual trace noise after skin-mean averaging, as a fraction of the
# per-pixel noise_std (spatially correlated noise does not average out).
TRACE_NOISE_FRACTION = 0.07

# Beat geometry relative to the nominal period: systolic peak offset into the
# beat and dicrotic delay after it.  The dicrotic bump stays within half a
# second of the systolic peak for all plausible rates, so the peak detector's
# spacing rule rejects it.
_SYSTOLIC_PHASE = 0.30
_DICROTIC_PHASE = 0.30

_TREND_HZ = 0.18  # breathing-like drift, below the cardiac band


@dataclass(frozen=True)
class PulseModel:
    """Per-user pulse shape: rate, bump widths, dicrotic size, period jitter."""

    heart_rate_bpm: float = 72.0
    systolic_width: float = 0.10
    dicrotic_width: float = 0.15
    dicrotic_amplitude: float = 0.15
    hrv_jitter: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if not 39.0 <= self.heart_rate_bpm <= 240.0:
            raise BadModel(f"heart rate {self.heart_rate_bpm} outside 39-240 bpm")
        if not (self.systolic_width > 0 and self.dicrotic_width > 0):
            raise BadModel("bump widths must be positive")
        if not 0.0 <= self.dicrotic_amplitude < 1.0:
            raise BadModel("dicrotic amplitude must be in [0, 1)")
        if self.hrv_jitter < 0:
            raise BadModel("jitter must be non-negative")


@dataclass(frozen=True)
class SceneConfig:
    """Synthetic video scene: geometry, rates, pulse coupling, and noise."""

    width: int = 64
    height: int = 64
    fps: float = 30.0
    duration_s: float = 60.0
    pulse_strength: tuple[float, float, float] = (0.4, 1.0, 0.6)
    noise_std: float = 0.3
    trend_amplitude: float = 3.0
    baseline_rgb: tuple[float, float, float] = (150.0, 110.0, 90.0)
    background_rgb: tuple[float, float, float] = (60.0, 60.0, 60.0)
    mask_shape: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if self.pulse_strength[1] <= 0:
            raise BadModel("green-channel pulse strength must be positive")
        if self.noise_std < 0 or self.trend_amplitude < 0:
            raise BadModel("noise and trend amplitudes must be non-negative")
        if not (self.fps > 0 and self.duration_s > 0):
            raise BadModel("fps and duration must be positive")


def _beat_peaks(model: PulseModel, duration_s: float, rng) -> np.ndarray:
    """Systolic peak times inside the window; spacing carries the jitter."""
    period0 = 60.0 / model.heart_rate_bpm
    offset = _SYSTOLIC_PHASE * period0
    margin = 2.0 * model.systolic_width
    starts = [0.0]
    while True:
        period = period0 * (1.0 + model.hrv_jitter * rng.standard_normal())
        period = max(period, 0.5)
        nxt = starts[-1] + period
        if nxt >= duration_s or nxt + offset > duration_s - margin:
            break
        starts.append(nxt)
    return np.asarray(starts) + offset


def _pulse_values(model: PulseModel, fps: float, duration_s: float, peak_times):
    n = int(round(fps * duration_s))
    t = np.arange(n) / fps
    period0 = 60.0 / model.heart_rate_bpm
    dt_sys = t[None, :] - peak_times[:, None]
    values = np.exp(-(dt_sys**2) / (2.0 * model.systolic_width**2)).sum(axis=0)
    if model.dicrotic_amplitude > 0:
        dt_dic = dt_sys - _DICROTIC_PHASE * period0
        values += model.dicrotic_amplitude * np.exp(
            -(dt_dic**2) / (2.0 * model.dicrotic_width**2)
        ).sum(axis=0)
    return values


def _pulse_detail(model: PulseModel, fps: float, duration_s: float):
    if fps < 2.0 * model.heart_rate_bpm / 60.0:
        raise BadModel(f"fps {fps} cannot sample {model.heart_rate_bpm} bpm")
    rng = np.random.default_rng(model.seed)
    peak_times = _beat_peaks(model, duration_s, rng)
    values = _pulse_values(model, fps, duration_s, peak_times)
    return values, peak_times


def gen_pulse(model: PulseModel, fps: float, duration_s: float) -> PulseSignal:
    """Deterministic two-bump pulse train for the given model and window."""
    values, _ = _pulse_detail(model, fps, duration_s)
    return PulseSignal(values, fps)


def gen_trace(
    model: PulseModel, scene: SceneConfig
) -> tuple[RgbTrace, PulseSignal, IpiSequence]:
    """Skin-mean RGB trace plus the clean truth pulse and true intervals."""
    values, peak_times = _pulse_detail(model, scene.fps, scene.duration_s)
    n = len(values)
    t = np.arange(n) / scene.fps
    strength = np.asarray(scene.pulse_strength)
    baseline = np.asarray(scene.baseline_rgb)
    trend = scene.trend_amplitude * np.sin(2.0 * np.pi * _TREND_HZ * t)
    noise_rng = np.random.default_rng([model.seed, 1])
    noise = noise_rng.normal(
        0.0, scene.noise_std * TRACE_NOISE_FRACTION, size=(n, 3)
    )
    samples = baseline[None, :] + values[:, None] * strength[None, :]
    samples += trend[:, None] + noise
    truth = PulseSignal(values, scene.fps)
    truth_ipi = IpiSequence(np.diff(peak_times))
    return RgbTrace(samples, scene.fps), truth, truth_ipi


def ellipse_mask(scene: SceneConfig) -> RoiMask:
    """Elliptical skin region; defaults to a centered face-sized patch."""
    if scene.width < 2 or scene.height < 2:
        raise SceneTooSmall(f"scene {scene.width}x{scene.height} is too small")
    if scene.mask_shape is not None:
        cx, cy, ax, ay = scene.mask_shape
    else:
        cx = (scene.width - 1) / 2.0
        cy = (scene.height - 1) / 2.0
        ax = 0.35 * scene.width
        ay = 0.40 * scene.height
    yy, xx = np.mgrid[0 : scene.height, 0 : scene.width]
    inside = ((xx - cx) / ax) ** 2 + ((yy - cy) / ay) ** 2 <= 1.0
    if not inside.any():
        raise SceneTooSmall("skin ellipse selects zero pixels")
    return RoiMask(inside.astype(np.uint8))


def gen_frames(
    model: PulseModel, scene: SceneConfig
) -> tuple[FrameSequence, RoiMask, PulseSignal, IpiSequence]:
    """Frame stack whose skin-mean trace reproduces gen_trace within rounding."""
    trace, truth, truth_ipi = gen_trace(model, scene)
    mask = ellipse_mask(scene)
    sel = mask.mask.astype(bool)
    n_skin = int(sel.sum())
    n = len(trace)

    frames = np.empty((n, scene.height, scene.width, 3), dtype=np.uint8)
    background = np.clip(np.rint(scene.background_rgb), 0, 255).astype(np.uint8)
    frames[:] = background[None, None, None, :]

    dither_rng = np.random.default_rng([model.seed, 2])
    dither = dither_rng.normal(0.0, scene.noise_std, size=(n, n_skin, 3))
    skin = trace.samples[:, None, :] + dither
    frames[:, sel, :] = np.clip(np.rint(skin), 0, 255).astype(np.uint8)
    return FrameSequence(frames, scene.fps), mask, truth, truth_ipi
