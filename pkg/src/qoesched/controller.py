"""
Per-worker QoE controller.

Every container with a measurement is classified against its objective,
outperformers (G) give up a slice of their CPU limit in proportion to how far
ahead of target they are, and underperformers (B) receive an increase in
proportion to how far behind they are.  Satisfied containers (S) are left alone.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .model import (
    ClassAggregates,
    ContainerState,
    ControllerParams,
    LimitPlan,
    QoEClass,
    QualitySnapshot,
    WorkerState,
)


def classify(quality: float, objective: float, alpha: float) -> QoEClass:
    # ties on the band edge count as satisfied
    if objective <= 0.0:
        raise ValueError(f"objective must be positive, got {objective}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    band = alpha * objective
    if quality > band:
        return QoEClass.G
    if quality < -band:
        return QoEClass.B
    return QoEClass.S


def aggregate(
    snapshots: Sequence[QualitySnapshot],
    objectives: Mapping[str, float],
    alpha: float,
) -> ClassAggregates:
    """Partition snapshots into G/S/B and sum qualities and usages per class."""
    members = {QoEClass.G: set(), QoEClass.S: set(), QoEClass.B: set()}
    Q_G = Q_B = R_G = R_B = 0.0
    for snap in snapshots:
        try:
            objective = objectives[snap.container_id]
        except KeyError:
            raise KeyError(f"no objective registered for {snap.container_id!r}") from None
        cls = classify(snap.quality, objective, alpha)
        members[cls].add(snap.container_id)
        if cls is QoEClass.G:
            Q_G += snap.quality
            R_G += snap.usage
        elif cls is QoEClass.B:
            Q_B += snap.quality
            R_B += snap.usage
    return ClassAggregates(
        members_G=frozenset(members[QoEClass.G]),
        members_S=frozenset(members[QoEClass.S]),
        members_B=frozenset(members[QoEClass.B]),
        Q_G=Q_G,
        Q_B=Q_B,
        R_G=R_G,
        R_B=R_B,
    )


def plan_limits(
    current_limits: Mapping[str, float],
    snapshots: Sequence[QualitySnapshot],
    aggregates: ClassAggregates,
    params: ControllerParams,
    worker_id: str = "",
    now: float = 0.0,
) -> LimitPlan:
    """Next limit for every G and B container.

    `current_limits` must cover every container on the worker, measured or not,
    since its size sets the floor a shrinking container cannot go below.
    """
    by_id = {s.container_id: s for s in snapshots}
    classified = aggregates.members_G | aggregates.members_S | aggregates.members_B
    if set(by_id) != classified:
        raise ValueError("snapshots and aggregates cover different containers")
    missing = classified - set(current_limits)
    if missing:
        raise ValueError(f"no current limit for {sorted(missing)}")

    capacity = params.total_capacity
    floor = params.floor(len(current_limits))
    # usage of G as a fraction of the node keeps the step factor dimensionless
    freed = aggregates.R_G / capacity

    entries = {}
    for cid in sorted(aggregates.members_G):
        assert aggregates.Q_G > 0.0
        weight = by_id[cid].quality / aggregates.Q_G
        new = current_limits[cid] * (1.0 - weight * freed * params.beta)
        entries[cid] = max(new, floor)
    for cid in sorted(aggregates.members_B):
        assert aggregates.Q_B < 0.0
        weight = by_id[cid].quality / aggregates.Q_B
        new = current_limits[cid] * (1.0 + weight * freed * params.beta)
        entries[cid] = min(new, capacity)
    return LimitPlan(worker_id=worker_id, entries=entries, created_at=now)


def snapshot(container: ContainerState, now: float) -> QualitySnapshot:
    if not container.measurable:
        raise ValueError(f"container {container.id!r} has no measurement yet")
    return QualitySnapshot(
        container_id=container.id,
        time=now,
        usage=container.usage,
        perf=container.perf,
        quality=container.quality,
    )


def control_step(worker: WorkerState, now: float = 0.0) -> LimitPlan:
    """One controller pass over the measured containers of `worker`."""
    measured = [c for c in worker.containers.values() if c.measurable]
    snaps = [snapshot(c, now) for c in measured]
    objectives = {c.id: c.objective for c in measured}
    aggs = aggregate(snaps, objectives, worker.params.alpha)
    return plan_limits(worker.limits(), snaps, aggs, worker.params, worker.worker_id, now)
