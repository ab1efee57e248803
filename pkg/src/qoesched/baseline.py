"""Even-share allocation: the objective-blind default used for comparison."""

from __future__ import annotations

from .model import LimitPlan, WorkerState


def even_share_step(worker: WorkerState, now: float = 0.0) -> LimitPlan:
    n = len(worker.containers)
    if n == 0:
        return LimitPlan(worker_id=worker.worker_id, entries={}, created_at=now)
    share = worker.params.total_capacity / n
    return LimitPlan(
        worker_id=worker.worker_id,
        entries={cid: share for cid in worker.containers},
        created_at=now,
    )
