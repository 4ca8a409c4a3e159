"""Interval-to-bits codecs: quantile/Gray coding and trend coding.

Gray route: normalize intervals to [0, 1], scale by 256 (clamped to 255,
since 256 does not fit in 8 bits), and emit the 8-bit reflected binary code
``scaled XOR (scaled >> 1)``.

Trend route: fit a normal distribution to the intervals, split it into 16
equiprobable bins, and emit one bit per interval: 1 when the bin index rises
from the previous interval, 0 otherwise.  The code is seeded with a leading 0
and the first interval compares against its own bin, so bit 1 encodes
"no change".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import DegenerateSequence, EmptySequence, MalformedBits
from .pulse import IpiSequence

GRAY_BITS = 8
N_BINS = 16


@dataclass(frozen=True, eq=False)
class NormalizedIpi:
    """Intervals mapped onto [0, 1]; constant input maps to all-0.5."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).ravel()
        if len(vals) and (vals.min() < 0 or vals.max() > 1):
            raise ValueError("normalized intervals must lie in [0, 1]")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class GrayCodeWord:
    """Clamped scaled value (0-255) and its 8-bit reflected binary code."""

    scaled: int
    bits: str

    def __post_init__(self):
        if not (0 <= self.scaled <= 255):
            raise ValueError("scaled value must be an 8-bit integer")
        if len(self.bits) != GRAY_BITS or set(self.bits) - {"0", "1"}:
            raise ValueError("bits must be 8 characters of 0/1")


@dataclass(frozen=True)
class TrendCode:
    """Rise/fall bits, one per interval, with a leading seeded 0."""

    bits: str

    def __post_init__(self):
        if not self.bits or self.bits[0] != "0":
            raise ValueError("trend code must start with 0")
        if set(self.bits) - {"0", "1"}:
            raise ValueError("trend code must be 0/1 characters")

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True, eq=False)
class QuantileBinning:
    """15 interior edges of a 16-way equiprobable normal partition."""

    bin_edges: np.ndarray
    fitted_mean: float
    fitted_std: float

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=np.float64).ravel()
        if len(edges) != N_BINS - 1 or (np.diff(edges) <= 0).any():
            raise ValueError("need 15 strictly increasing edges")
        object.__setattr__(self, "bin_edges", edges)


def normalize_ipi(ipi: IpiSequence) -> NormalizedIpi:
    """Map intervals to [0, 1]; a constant sequence maps to all-0.5."""
    if len(ipi) < 1:
        raise EmptySequence("no intervals to normalize")
    lo = ipi.intervals.min()
    hi = ipi.intervals.max()
    if hi > lo:
        return NormalizedIpi((ipi.intervals - lo) / (hi - lo))
    return NormalizedIpi(np.full(len(ipi), 0.5))


def gray_encode(ipi_s: NormalizedIpi) -> list[GrayCodeWord]:
    """Scale by 256 (floor, clamp 255) and Gray-code to 8 bits."""
    words = []
    for v in ipi_s.values:
        scaled = min(int(np.floor(v * 256.0)), 255)
        gray = scaled ^ (scaled >> 1)
        words.append(GrayCodeWord(scaled, format(gray, f"0{GRAY_BITS}b")))
    return words


def decode_check(word: GrayCodeWord | str) -> int:
    """Invert the Gray transform, recovering the scaled integer."""
    bits = word.bits if isinstance(word, GrayCodeWord) else word
    if len(bits) != GRAY_BITS or set(bits) - {"0", "1"}:
        raise MalformedBits(f"expected {GRAY_BITS} bits of 0/1, got {bits!r}")
    value = 0
    gray = int(bits, 2)
    while gray:
        value ^= gray
        gray >>= 1
    return value


def fit_bins(ipi: IpiSequence) -> QuantileBinning:
    """Fit mean/std and place edges at the normal quantiles k/16, k=1..15."""
    if len(ipi) < 2:
        raise DegenerateSequence("need at least 2 intervals to fit bins")
    mean = float(np.mean(ipi.intervals))
    std = float(np.std(ipi.intervals))
    if std < 1e-15:
        raise DegenerateSequence("intervals have zero variance")
    edges = mean + std * norm.ppf(np.arange(1, N_BINS) / N_BINS)
    return QuantileBinning(edges, mean, std)


def assign_bins(ipi: IpiSequence, bins: QuantileBinning) -> np.ndarray:
    """Bin index 0-15 for each interval."""
    return np.searchsorted(bins.bin_edges, ipi.intervals, side="right")


def trend_from_bins(bin_indices) -> TrendCode:
    """Seeded trend rule over a bin-index sequence: 1 on rise, else 0."""
    indices = np.asarray(bin_indices, dtype=np.int64).ravel()
    if len(indices) < 1:
        raise EmptySequence("no bin indices to encode")
    bits = ["0"]
    prev = indices[0]
    for idx in indices:
        bits.append("1" if idx > prev else "0")
        prev = idx
    return TrendCode("".join(bits))


def trend_encode(ipi: IpiSequence, bins: QuantileBinning) -> TrendCode:
    """Quantize intervals into the fitted bins and trend-code the indices."""
    if len(ipi) < 1:
        raise EmptySequence("no intervals to encode")
    return trend_from_bins(assign_bins(ipi, bins))
