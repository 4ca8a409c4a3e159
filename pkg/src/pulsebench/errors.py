"""Exception hierarchy for the workbench.

Domain errors (bad signals, degenerate traces, empty inputs) all derive from
:class:`PulsebenchError` so callers and the CLI can distinguish them from I/O
and programming errors.
"""


class PulsebenchError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(PulsebenchError):
    """Frame, mask, or field dimensions do not agree."""


class LengthMismatch(PulsebenchError):
    """Per-frame series length does not match the frame count."""


class EmptyMask(PulsebenchError):
    """A region mask selects zero pixels."""


class InvalidBand(PulsebenchError):
    """Band edges violate 0 < low < high < Nyquist."""


class SignalTooShort(PulsebenchError):
    """Signal has too few samples for the requested operation."""


class DegenerateTrace(PulsebenchError):
    """Trace carries no usable variation for extraction."""


class WindowTooLong(PulsebenchError):
    """Sliding window exceeds the trace length."""


class NoPeaks(PulsebenchError):
    """Fewer than two peaks were found in a pulse signal."""


class EmptySequence(PulsebenchError):
    """Interval sequence is empty."""


class DegenerateSequence(PulsebenchError):
    """Interval sequence has no variance to fit a distribution on."""


class MalformedBits(PulsebenchError):
    """Bit string is not a well-formed codeword."""


class EmptySeries(PulsebenchError):
    """Paired series is empty after alignment."""


class ZeroVariance(PulsebenchError):
    """Correlation is undefined because a series is constant."""


class EmptyBits(PulsebenchError):
    """Bit-hit-rate input contains no bits."""


class EmptyScores(PulsebenchError):
    """Score set for FAR/FRR analysis is empty."""


class TooFewCycles(PulsebenchError):
    """Not enough heartbeat cycles to enroll a template."""


class BadCycle(PulsebenchError):
    """Cycle has the wrong length or values outside [0, 1]."""


class EmptyCycleSet(PulsebenchError):
    """Cycle set contains no cycles."""


class FrequencyOutOfBand(PulsebenchError):
    """Injected sine frequency lies outside the plausible cardiac band."""


class BadCustomSignal(PulsebenchError):
    """Custom injection waveform is empty or flat."""


class BadModel(PulsebenchError):
    """Pulse model parameters are out of range."""


class SceneTooSmall(PulsebenchError):
    """Scene dimensions leave no skin pixels to modulate."""
