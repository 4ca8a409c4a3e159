"""Template-matching authenticator and spoof-attempt evaluation.

Enrollment averages a user's heartbeat cycles into a length-60 template and
learns an acceptance threshold at the equal-error operating point of
leave-one-out genuine distances versus impostor distances.  Authentication
scores a probe cycle by 1 - Pearson(cycle, template), which is insensitive to
residual amplitude and offset error; plain Euclidean distance is available
behind a switch.

Spoof evaluation replays attack cycles against a template and reports the
fraction accepted; the mean-cycle attack collapses the attack set into its
pointwise average first, which cancels extraction noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadCycle, EmptyCycleSet, TooFewCycles
from .metrics import ScoreSet, far_frr_eer
from .pulse import CycleSet

ATTACK_KINDS = ("random", "victim_rppg", "mean_rppg")

MIN_ENROLL_CYCLES = 5

_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class UserTemplate:
    """Enrolled reference cycle, acceptance threshold, and owner id."""

    user_id: str
    template: np.ndarray
    threshold: float
    distance_metric: str = "pearson"

    def __post_init__(self):
        tpl = np.asarray(self.template, dtype=np.float64).ravel()
        if tpl.min() < -_EPS or tpl.max() > 1 + _EPS:
            raise ValueError("template values must lie in [0, 1]")
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")
        if self.distance_metric not in ("pearson", "euclidean"):
            raise ValueError(f"unknown distance metric {self.distance_metric!r}")
        object.__setattr__(self, "template", tpl)

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "template": [float(v) for v in self.template],
            "threshold": float(self.threshold),
            "distance_metric": self.distance_metric,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UserTemplate":
        return cls(
            user_id=d["user_id"],
            template=np.asarray(d["template"], dtype=np.float64),
            threshold=float(d["threshold"]),
            distance_metric=d.get("distance_metric", "pearson"),
        )


@dataclass(frozen=True)
class SpoofReport:
    """Outcome of replaying attack cycles against a template."""

    attack_kind: str
    success_rate: float
    attempts: int
    accepted: int

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "attack_kind": self.attack_kind,
            "success_rate": float(self.success_rate),
            "attempts": int(self.attempts),
            "accepted": int(self.accepted),
        }


def _renormalize(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi > lo:
        return (values - lo) / (hi - lo)
    return np.full(values.shape, 0.5)


def cycle_distance(a: np.ndarray, b: np.ndarray, metric: str = "pearson") -> float:
    """Distance between two cycles; correlation distance defaults.

    A flat cycle has no defined correlation; it scores the neutral distance
    1.0 rather than aborting.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if metric == "euclidean":
        return float(np.sqrt(np.mean((a - b) ** 2)))
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt((da**2).sum() * (db**2).sum())
    if denom < 1e-300:
        return 1.0
    r = float(np.clip((da * db).sum() / denom, -1.0, 1.0))
    return 1.0 - r


def mean_cycle(cycles: CycleSet) -> np.ndarray:
    """Pointwise mean of a cycle set, renormalized onto [0, 1]."""
    if len(cycles) < 1:
        raise EmptyCycleSet("no cycles to average")
    return _renormalize(cycles.cycles.mean(axis=0))


def enroll(
    cycles: CycleSet,
    impostor_cycles: CycleSet,
    user_id: str,
    distance_metric: str = "pearson",
) -> UserTemplate:
    """Build a template and learn its equal-error acceptance threshold.

    Genuine scores are leave-one-out: each enrollment cycle is scored against
    the template built from the remaining cycles.  Impostor cycles are scored
    against the full template.
    """
    if len(cycles) < MIN_ENROLL_CYCLES or len(impostor_cycles) < MIN_ENROLL_CYCLES:
        raise TooFewCycles(
            f"need at least {MIN_ENROLL_CYCLES} enrollment and impostor cycles"
        )
    rows = cycles.cycles
    template = _renormalize(rows.mean(axis=0))

    total = rows.sum(axis=0)
    genuine = np.empty(len(rows))
    for i in range(len(rows)):
        rest = _renormalize((total - rows[i]) / (len(rows) - 1))
        genuine[i] = cycle_distance(rows[i], rest, distance_metric)
    impostor = np.array(
        [cycle_distance(c, template, distance_metric) for c in impostor_cycles.cycles]
    )
    result = far_frr_eer(ScoreSet(genuine, impostor))
    threshold = max(result.threshold, _EPS)
    return UserTemplate(user_id, template, threshold, distance_metric)


def authenticate(cycle: np.ndarray, template: UserTemplate) -> tuple[bool, float]:
    """Score one probe cycle; accept when distance <= threshold."""
    cycle = np.asarray(cycle, dtype=np.float64).ravel()
    if len(cycle) != len(template.template):
        raise BadCycle(
            f"cycle length {len(cycle)} != template length {len(template.template)}"
        )
    if cycle.min() < -_EPS or cycle.max() > 1 + _EPS:
        raise BadCycle("cycle values must lie in [0, 1]")
    distance = cycle_distance(cycle, template.template, template.distance_metric)
    return distance <= template.threshold, distance


def spoof_eval(
    template: UserTemplate, attack_cycles: CycleSet, kind: str
) -> SpoofReport:
    """Fraction of attack cycles the template accepts.

    The mean-cycle attack submits a single averaged cycle; the other kinds
    submit every cycle in the set.
    """
    if kind not in ATTACK_KINDS:
        raise ValueError(f"unknown attack kind {kind!r}, expected {ATTACK_KINDS}")
    if len(attack_cycles) < 1:
        raise EmptyCycleSet("no attack cycles")
    if kind == "mean_rppg":
        probes = [mean_cycle(attack_cycles)]
    else:
        probes = list(attack_cycles.cycles)
    accepted = sum(1 for c in probes if authenticate(c, template)[0])
    return SpoofReport(kind, accepted / len(probes), len(probes), accepted)
