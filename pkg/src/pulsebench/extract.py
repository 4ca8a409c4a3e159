"""Classical pulse extractors mapping an RGB trace to a 1-D pulse signal.

Four methods:

* ``chrom``  -- chrominance projection (de Haan & Jeanne, 2013): two fixed
  chrominance axes, alpha-tuned difference to cancel specular reflection.
* ``pos``    -- plane-orthogonal-to-skin (Wang et al., 2017): sliding-window
  temporal normalization, fixed 2x3 projection, alpha-tuned sum, overlap-add.
* ``lgi``    -- local group invariance (Pilz et al., 2018): project out the
  dominant left singular direction of the normalized trace.
* ``pca_extract`` -- principal components; keep the component with the
  strongest spectral peak in the cardiac band.

chrom/pca expect a detrended, band-passed trace; pos/lgi normalize internally
and take the raw trace.  Extracted sign is not identifiable, so comparisons
downstream use |Pearson r|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTrace, SignalTooShort, WindowTooLong
from .signals import PulseSignal, RgbTrace, RPPG_BAND_HZ

# Fixed plane-projection matrix for pos: rows are (G - B) and (-2R + G + B).
POS_PROJECTION = np.array([[0.0, 1.0, -1.0], [-2.0, 1.0, 1.0]])

POS_WINDOW_SECONDS = 1.6

_EPS = 1e-12


def _pop_std(x: np.ndarray) -> float:
    return float(np.std(x))


@dataclass(frozen=True, eq=False)
class ChromaProjection:
    """Chrominance axes and the fitted specular-cancellation ratio."""

    x_component: np.ndarray
    y_component: np.ndarray
    alpha: float

    @property
    def signal(self) -> np.ndarray:
        return self.x_component - self.alpha * self.y_component


def chrom_projection(trace: RgbTrace) -> ChromaProjection:
    """Project a preprocessed trace onto the two chrominance axes.

    alpha = std(X)/std(Y) with population std; if Y is flat alpha is 0, and a
    trace flat on both axes is degenerate.
    """
    if len(trace) < 2:
        raise SignalTooShort("chrominance projection needs at least 2 samples")
    r, g, b = trace.channels
    x = 3.0 * r - 2.0 * g
    y = 1.5 * r + g - 1.5 * b
    sx, sy = _pop_std(x), _pop_std(y)
    if sy < _EPS:
        if sx < _EPS:
            raise DegenerateTrace("trace is flat on both chrominance axes")
        alpha = 0.0
    else:
        alpha = sx / sy
    return ChromaProjection(x, y, alpha)


def chrom(trace: RgbTrace) -> PulseSignal:
    """Chrominance-projection pulse: S = X - alpha * Y."""
    return PulseSignal(chrom_projection(trace).signal, trace.fps)


def default_pos_window(fps: float) -> int:
    return max(2, int(round(POS_WINDOW_SECONDS * fps)))


def pos(trace: RgbTrace, window_len: int | None = None) -> PulseSignal:
    """Plane-orthogonal-to-skin pulse via windowed temporal normalization.

    Each window is normalized by its per-channel temporal mean, projected to
    two plane axes, alpha-combined (alpha = std(X)/std(Y), 0 when Y is flat),
    mean-subtracted, and overlap-added into the output.
    """
    n = len(trace)
    if window_len is None:
        window_len = default_pos_window(trace.fps)
    if window_len < 2:
        raise ValueError("window_len must be at least 2")
    if window_len > n:
        raise WindowTooLong(f"window {window_len} exceeds trace length {n}")

    out = np.zeros(n)
    usable = 0
    for i in range(n - window_len + 1):
        window = trace.samples[i : i + window_len]
        mu = window.mean(axis=0)
        if (np.abs(mu) < _EPS).any():
            continue
        usable += 1
        ctn = window / mu
        proj = POS_PROJECTION @ ctn.T
        x, y = proj[0], proj[1]
        sy = _pop_std(y)
        alpha = _pop_std(x) / sy if sy >= _EPS else 0.0
        h = x + alpha * y
        out[i : i + window_len] += h - h.mean()
    if usable == 0:
        raise DegenerateTrace("every window has a zero channel mean")
    return PulseSignal(out, trace.fps)


def _band_bins(n: int, fps: float, band: tuple[float, float]) -> np.ndarray:
    freqs = np.fft.rfftfreq(n, d=1.0 / fps)
    return (freqs >= band[0]) & (freqs <= band[1])


def _band_energy(values: np.ndarray, in_band: np.ndarray) -> float:
    power = np.abs(np.fft.rfft(values - values.mean())) ** 2
    return float(power[in_band].sum())


def _band_peak(values: np.ndarray, in_band: np.ndarray) -> float:
    power = np.abs(np.fft.rfft(values - values.mean())) ** 2
    return float(power[in_band].max())


def lgi_projector(normalized: np.ndarray) -> np.ndarray:
    """P = I - u1 u1^T for the dominant left singular vector of a 3xN matrix."""
    u, s, _ = np.linalg.svd(normalized, full_matrices=False)
    if s[0] < _EPS:
        raise DegenerateTrace("trace matrix is numerically rank-0")
    u1 = u[:, 0:1]
    return np.eye(3) - u1 @ u1.T


def _normalize_channels(trace: RgbTrace) -> np.ndarray:
    """Divide each channel by its temporal mean; all-zero channels stay zero."""
    chans = trace.channels.copy()
    mu = chans.mean(axis=1)
    for c in range(3):
        if abs(mu[c]) < _EPS:
            if np.abs(chans[c]).max() < _EPS:
                chans[c] = 0.0
            else:
                raise DegenerateTrace(f"channel {c} has zero mean but nonzero swing")
        else:
            chans[c] = chans[c] / mu[c]
    return chans


def lgi(trace: RgbTrace, band: tuple[float, float] = RPPG_BAND_HZ) -> PulseSignal:
    """Group-invariance pulse: remove the dominant direction, keep the
    projected channel with the most cardiac-band energy."""
    if len(trace) < 3:
        raise SignalTooShort("lgi needs at least 3 samples")
    ctn = _normalize_channels(trace)
    projector = lgi_projector(ctn)
    projected = projector @ ctn
    in_band = _band_bins(len(trace), trace.fps, band)
    if in_band.any():
        scores = [_band_energy(projected[c], in_band) for c in range(3)]
    else:
        scores = [float(np.var(projected[c])) for c in range(3)]
    return PulseSignal(projected[int(np.argmax(scores))], trace.fps)


def pca_components(trace: RgbTrace):
    """Principal directions/components of the centered 3-channel series.

    Returns (eigenvalues, directions, components): eigenvalues descending,
    directions as columns of a 3x3 matrix, components as (n, 3) projections.
    """
    if len(trace) < 2:
        raise SignalTooShort("pca needs at least 2 samples")
    centered = trace.samples - trace.samples.mean(axis=0)
    cov = centered.T @ centered / len(trace)
    if float(np.trace(cov)) < _EPS:
        raise DegenerateTrace("trace covariance is numerically zero")
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    return eigvals, eigvecs, centered @ eigvecs


def pca_extract(
    trace: RgbTrace, band: tuple[float, float] = RPPG_BAND_HZ
) -> PulseSignal:
    """Principal-component pulse: the component with the largest spectral
    peak inside the cardiac band, sign-flipped so its extreme is positive."""
    _, _, components = pca_components(trace)
    in_band = _band_bins(len(trace), trace.fps, band)
    if in_band.any():
        scores = [_band_peak(components[:, c], in_band) for c in range(3)]
    else:
        scores = [float(np.var(components[:, c])) for c in range(3)]
    values = components[:, int(np.argmax(scores))]
    extreme = values[int(np.argmax(np.abs(values)))]
    if extreme < 0:
        values = -values
    return PulseSignal(values, trace.fps)
