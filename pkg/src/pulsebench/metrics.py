"""Evaluation metrics: MAE, RMSE, Pearson, bit hit rate, FAR/FRR/EER.

Paired series of unequal length are aligned by anchoring at the first sample
and truncating to the shorter length.  The error-rate sweep is discrete over
the observed scores, so results are exactly reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyBits, EmptyScores, EmptySeries, ZeroVariance


@dataclass(frozen=True, eq=False)
class PairedSeries:
    """Reference/candidate series truncated to a common length."""

    reference: np.ndarray
    candidate: np.ndarray

    def __post_init__(self):
        ref = np.asarray(self.reference, dtype=np.float64).ravel()
        cand = np.asarray(self.candidate, dtype=np.float64).ravel()
        n = min(len(ref), len(cand))
        if n < 1:
            raise EmptySeries("paired series is empty after alignment")
        object.__setattr__(self, "reference", ref[:n])
        object.__setattr__(self, "candidate", cand[:n])

    def __len__(self) -> int:
        return len(self.reference)


@dataclass(frozen=True, eq=False)
class ScoreSet:
    """Distance scores for genuine attempts and impostor attempts."""

    genuine: np.ndarray
    impostor: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "genuine", np.asarray(self.genuine, dtype=np.float64).ravel()
        )
        object.__setattr__(
            self, "impostor", np.asarray(self.impostor, dtype=np.float64).ravel()
        )


@dataclass(frozen=True)
class EerResult:
    eer: float
    threshold: float
    roc: list[tuple[float, float, float]]  # (threshold, far, frr)


def mae(p: PairedSeries) -> float:
    """Mean absolute error."""
    return float(np.mean(np.abs(p.reference - p.candidate)))


def rmse(p: PairedSeries) -> float:
    """Root-mean-square error."""
    return float(np.sqrt(np.mean((p.reference - p.candidate) ** 2)))


def pearson(p: PairedSeries) -> float:
    """Product-moment correlation; raises ZeroVariance on a constant series."""
    ref = p.reference - p.reference.mean()
    cand = p.candidate - p.candidate.mean()
    denom = np.sqrt((ref**2).sum() * (cand**2).sum())
    if denom < 1e-300:
        raise ZeroVariance("correlation undefined for a constant series")
    return float(np.clip((ref * cand).sum() / denom, -1.0, 1.0))


def _as_bitstring(bits) -> str:
    if isinstance(bits, str):
        s = bits
    elif isinstance(bits, (list, tuple)) and bits and isinstance(bits[0], str):
        s = "".join(bits)
    else:
        s = "".join(str(int(b)) for b in np.asarray(bits).ravel())
    if set(s) - {"0", "1"}:
        raise ValueError("bits must be 0/1")
    return s


def bhr(reference_bits, candidate_bits) -> float:
    """Bit hit rate: fraction of matching positions after truncation.

    Accepts bit strings, lists of codeword strings, or 0/1 sequences.
    """
    ref = _as_bitstring(reference_bits)
    cand = _as_bitstring(candidate_bits)
    n = min(len(ref), len(cand))
    if n == 0:
        raise EmptyBits("no bits to compare")
    return sum(a == b for a, b in zip(ref[:n], cand[:n])) / n


def far_frr_eer(scores: ScoreSet) -> EerResult:
    """Discrete threshold sweep over the observed distance scores.

    FAR(t) is the fraction of impostor scores accepted (<= t); FRR(t) the
    fraction of genuine scores rejected (> t).  The operating point minimizes
    |FAR - FRR|, ties broken toward the lower threshold, and the reported EER
    is the mean of FAR and FRR there.
    """
    if len(scores.genuine) == 0 or len(scores.impostor) == 0:
        raise EmptyScores("need both genuine and impostor scores")
    thresholds = np.unique(np.concatenate([scores.genuine, scores.impostor]))
    far = (scores.impostor[None, :] <= thresholds[:, None]).mean(axis=1)
    frr = (scores.genuine[None, :] > thresholds[:, None]).mean(axis=1)
    best = int(np.argmin(np.abs(far - frr)))
    eer = (far[best] + frr[best]) / 2.0
    roc = [(float(t), float(a), float(r)) for t, a, r in zip(thresholds, far, frr)]
    return EerResult(float(eer), float(thresholds[best]), roc)
