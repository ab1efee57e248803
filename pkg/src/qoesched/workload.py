"""
Synthetic inference workload.

Real models are replaced by a batch-time function: a 100-image batch costs a
fixed amount of CPU work (core-seconds), so its duration is work / share,
jittered by a bounded relative noise draw.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ModelProfile:
    name: str
    work: float
    noise_sigma: float = 0.011

    def __post_init__(self):
        if self.work <= 0.0:
            raise ValueError(f"profile {self.name!r}: work must be positive")
        if not 0.0 <= self.noise_sigma < 0.2:
            raise ValueError(f"profile {self.name!r}: noise_sigma must lie in [0, 0.2)")

    def draw_noise(self, rng: np.random.Generator) -> float:
        if self.noise_sigma == 0.0:
            return 0.0
        return float(rng.uniform(-self.noise_sigma, self.noise_sigma))


# ResNet-50 is pinned so ten even shares of an 8-core node give 31.61 s batches.
# The others are fixed picks from [15, 45] core-seconds.
DEFAULT_PROFILES = {
    "ResNet-50": ModelProfile("ResNet-50", 25.29),
    "VGG-16": ModelProfile("VGG-16", 41.7),
    "NASNetMobile": ModelProfile("NASNetMobile", 17.4),
    "InceptionV3": ModelProfile("InceptionV3", 29.8),
    "Xception": ModelProfile("Xception", 36.5),
}


def batch_time(profile: ModelProfile, cpu_share: float, noise_draw: float = 0.0) -> float:
    if cpu_share <= 0.0:
        raise ValueError(f"cpu_share must be positive, got {cpu_share}")
    if abs(noise_draw) > profile.noise_sigma:
        raise ValueError(f"noise draw {noise_draw} exceeds bound {profile.noise_sigma}")
    return profile.work / cpu_share * (1.0 + noise_draw)


@dataclass(frozen=True)
class SubmissionSchedule:
    """When containers are launched.

    kind is "burst" (everything at t=0), "fixed" (one every `gap` seconds) or
    "random" (uniform draws in `window`).
    """

    kind: str = "burst"
    count: int = 1
    gap: Optional[float] = None
    window: Optional[tuple] = None
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("schedule count must be at least 1")
        if self.kind == "fixed":
            if self.gap is None or self.gap <= 0.0:
                raise ValueError("fixed schedule needs a positive gap")
        elif self.kind == "random":
            if self.window is None or len(self.window) != 2 or self.window[0] > self.window[1]:
                raise ValueError("random schedule needs a window [t0, t1] with t0 <= t1")
        elif self.kind != "burst":
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    def last_submit(self) -> float:
        if self.kind == "burst":
            return 0.0
        if self.kind == "fixed":
            return self.gap * (self.count - 1)
        return float(self.window[1])


def make_schedule(schedule: SubmissionSchedule) -> list[tuple[int, float]]:
    """(container index, submit time) pairs, ordered by time."""
    n = schedule.count
    if schedule.kind == "burst":
        return [(i, 0.0) for i in range(n)]
    if schedule.kind == "fixed":
        return [(i, i * schedule.gap) for i in range(n)]
    t0, t1 = schedule.window
    rng = np.random.default_rng(schedule.seed)
    times = sorted(float(t) for t in rng.uniform(t0, t1, size=n))
    return list(enumerate(times))
