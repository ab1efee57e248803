"""
Domain types shared by the controller, the listener, the simulator and the
reporting layer.

Units: objectives, performance and quality are seconds per 100-image batch;
usages and limits are CPU cores.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional


class QoEClass(str, Enum):
    """Outperforming, satisfied or underperforming relative to an objective."""

    G = "G"
    S = "S"
    B = "B"


@dataclass(frozen=True)
class ControllerParams:
    alpha: float = 0.10
    beta: float = 0.10
    total_capacity: float = 8.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.total_capacity <= 0.0:
            raise ValueError(f"total_capacity must be positive, got {self.total_capacity}")

    def floor(self, n_containers: int) -> float:
        """Lowest limit a shrinking container may receive on a worker of `n_containers`."""
        if n_containers < 1:
            raise ValueError("floor needs at least one container")
        return self.total_capacity / (2.0 * n_containers)


@dataclass
class ContainerState:
    """One served model and the latest view the worker has of it.

    `perf` and `usage` stay None until the first batch completes.
    """

    id: str
    model: str
    objective: float
    limit: float
    perf: Optional[float] = None
    usage: Optional[float] = None
    qclass: Optional[QoEClass] = None
    # False until the first plan touches this container
    controlled: bool = False

    def __post_init__(self):
        if self.objective <= 0.0:
            raise ValueError(f"objective for {self.id!r} must be positive, got {self.objective}")
        if self.limit <= 0.0:
            raise ValueError(f"limit for {self.id!r} must be positive, got {self.limit}")

    @property
    def quality(self) -> Optional[float]:
        if self.perf is None:
            return None
        return self.objective - self.perf

    @property
    def measurable(self) -> bool:
        return self.perf is not None


@dataclass(frozen=True)
class QualitySnapshot:
    container_id: str
    time: float
    usage: float
    perf: float
    quality: float


@dataclass(frozen=True)
class ClassAggregates:
    members_G: frozenset = frozenset()
    members_S: frozenset = frozenset()
    members_B: frozenset = frozenset()
    Q_G: float = 0.0
    Q_B: float = 0.0
    R_G: float = 0.0
    R_B: float = 0.0

    @property
    def Q_S(self) -> int:
        return len(self.members_S)

    def class_of(self, container_id: str) -> QoEClass:
        if container_id in self.members_G:
            return QoEClass.G
        if container_id in self.members_B:
            return QoEClass.B
        if container_id in self.members_S:
            return QoEClass.S
        raise KeyError(container_id)


@dataclass(frozen=True)
class LimitPlan:
    worker_id: str
    entries: dict = field(default_factory=dict)
    created_at: float = 0.0

    def __len__(self):
        return len(self.entries)


def quality(objective: float, perf: float) -> float:
    """Distance of a measured batch time from its objective; positive means faster."""
    if objective <= 0.0:
        raise ValueError(f"objective must be positive, got {objective}")
    if perf <= 0.0:
        raise ValueError(f"perf must be positive, got {perf}")
    return objective - perf


def worker_quality(snapshots: Iterable[QualitySnapshot]) -> float:
    return sum(s.quality for s in snapshots)


@dataclass
class WorkerState:
    """Containers hosted by one worker, keyed by id, plus its control parameters."""

    worker_id: str
    params: ControllerParams
    containers: dict = field(default_factory=dict)
    listener: Optional[object] = None

    def add(self, container: ContainerState) -> None:
        if container.id in self.containers:
            raise ValueError(f"duplicate container id {container.id!r} on {self.worker_id}")
        self.containers[container.id] = container

    def limits(self) -> dict:
        return {cid: c.limit for cid, c in self.containers.items()}
