"""Peak detection, inter-peak interval recovery, and heartbeat cycle cuts.

Peaks are local maxima that clear a prominence floor (a fraction of the
signal's standard deviation) and a half-second minimum spacing, matching the
rule that two heartbeats can never be closer than half a second at plausible
heart rates.  Intervals outside the plausible band are dropped rather than
merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .errors import EmptySequence, NoPeaks, SignalTooShort
from .signals import PulseSignal, normalize01, resample

# Prominence floor as a fraction of the pulse's population std; rejects
# dicrotic-notch bumps on clean pulse shapes while keeping true peaks.
PROMINENCE_FRACTION = 0.3

# Interval gate: half a second (the FPS/2 rule expressed in time) up to the
# slowest plausible beat (39 bpm) plus 5% slack.
MIN_INTERVAL_S = 0.5
MAX_INTERVAL_S = (60.0 / 39.0) * 1.05

CYCLE_LEN = 60


@dataclass(frozen=True, eq=False)
class PeakList:
    """Strictly increasing peak sample indices plus their sample rate."""

    indices: np.ndarray
    sample_rate: float

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        if len(idx) and (np.diff(idx) <= 0).any():
            raise ValueError("peak indices must be strictly increasing")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def times(self) -> np.ndarray:
        return self.indices / self.sample_rate


@dataclass(frozen=True, eq=False)
class IpiSequence:
    """Inter-peak intervals in seconds."""

    intervals: np.ndarray

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=np.float64).ravel()
        if len(iv) and not (iv > 0).all():
            raise ValueError("intervals must be positive")
        object.__setattr__(self, "intervals", iv)

    def __len__(self) -> int:
        return len(self.intervals)


@dataclass(frozen=True, eq=False)
class CycleSet:
    """Fixed-length heartbeat waveforms, one row per beat, values in [0, 1]."""

    cycles: np.ndarray

    def __post_init__(self):
        cyc = np.atleast_2d(np.asarray(self.cycles, dtype=np.float64))
        if cyc.size and (cyc.min() < -1e-9 or cyc.max() > 1 + 1e-9):
            raise ValueError("cycle values must lie in [0, 1]")
        object.__setattr__(self, "cycles", cyc)

    def __len__(self) -> int:
        return self.cycles.shape[0]

    @property
    def cycle_len(self) -> int:
        return self.cycles.shape[1]


def detect_peaks(
    pulse: PulseSignal, prominence_fraction: float = PROMINENCE_FRACTION
) -> PeakList:
    """Find pulse peaks with a minimum spacing of half a second.

    Candidates need prominence >= prominence_fraction * std(pulse); when two
    candidates sit closer than ceil(rate/2) samples the taller one wins.
    """
    if len(pulse) < pulse.sample_rate:
        raise SignalTooShort("need at least one second of signal")
    sigma = float(np.std(pulse.values))
    min_gap = math.ceil(pulse.sample_rate / 2.0)
    indices, _ = find_peaks(
        pulse.values, distance=min_gap, prominence=prominence_fraction * sigma
    )
    if len(indices) < 2:
        raise NoPeaks(f"found {len(indices)} peaks, need at least 2")
    return PeakList(indices, pulse.sample_rate)


def ipi_from_peaks(
    peaks: PeakList,
    min_interval_s: float = MIN_INTERVAL_S,
    max_interval_s: float = MAX_INTERVAL_S,
) -> IpiSequence:
    """Convert peak indices to intervals in seconds, dropping implausible ones.

    Intervals shorter than min_interval_s (double-fires) or longer than
    max_interval_s (missed beats) are excluded, not merged.
    """
    if len(peaks) < 2:
        raise NoPeaks("need at least 2 peaks for intervals")
    gaps = np.diff(peaks.indices) / peaks.sample_rate
    keep = (gaps >= min_interval_s) & (gaps <= max_interval_s)
    return IpiSequence(gaps[keep])


def heart_rate(ipi: IpiSequence) -> float:
    """Mean heart rate in beats per minute."""
    if len(ipi) < 1:
        raise EmptySequence("no intervals")
    return 60.0 / float(np.mean(ipi.intervals))


def segment_cycles(
    pulse: PulseSignal, peaks: PeakList, cycle_len: int = CYCLE_LEN
) -> CycleSet:
    """Cut peak-to-peak segments, resample each to cycle_len, map to [0, 1]."""
    if len(peaks) < 2:
        raise NoPeaks("need at least 2 peaks to cut cycles")
    rows = np.empty((len(peaks) - 1, cycle_len))
    for k in range(len(peaks) - 1):
        start, stop = peaks.indices[k], peaks.indices[k + 1]
        segment = PulseSignal(pulse.values[start:stop], pulse.sample_rate)
        rows[k] = normalize01(resample(segment, cycle_len)).values
    return CycleSet(rows)
