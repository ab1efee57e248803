"""
Manager side: objective registry, spread placement and the cluster-wide
performance table built from worker reports.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import QoEClass
from .worker import StepReport, Worker

STEADY_TAIL = 0.2
STEADY_SATISFIED = 0.9


class OutOfOrderReport(ValueError):
    pass


@dataclass(frozen=True)
class Registration:
    model: str
    objective: float
    submit_time: float


@dataclass
class ObjectiveRegistry:
    entries: dict = field(default_factory=dict)

    def register(self, container_id: str, model: str, objective: float, submit_time: float) -> None:
        if container_id in self.entries:
            raise ValueError(f"container id {container_id!r} already registered")
        if objective <= 0.0:
            raise ValueError(f"objective for {container_id!r} must be positive, got {objective}")
        self.entries[container_id] = Registration(model, objective, submit_time)

    def __contains__(self, container_id):
        return container_id in self.entries

    def __len__(self):
        return len(self.entries)


def place(workers: Sequence[Worker], registry: Optional[ObjectiveRegistry] = None) -> str:
    """Spread placement: the worker with the fewest containers, lowest index on ties."""
    if not workers:
        raise ValueError("no workers registered")
    best = min(range(len(workers)), key=lambda i: (len(workers[i]), i))
    return workers[best].worker_id


def tail(steps: Sequence[StepReport], fraction: float = STEADY_TAIL) -> list[StepReport]:
    if not steps:
        return []
    n = max(1, math.ceil(fraction * len(steps)))
    return list(steps[-n:])


@dataclass
class ClusterSummary:
    """Per-worker step history with steady-state queries over it."""

    steps: dict = field(default_factory=dict)

    @property
    def worker_ids(self) -> list[str]:
        return sorted(self.steps)

    def class_counts(self, worker_id: str) -> list[tuple[float, int, int, int]]:
        """(time, |G|, |S|, |B|) after every control step of one worker."""
        return [
            (r.time, r.count(QoEClass.G), r.count(QoEClass.S), r.count(QoEClass.B))
            for r in self.steps.get(worker_id, [])
        ]

    def qs_trajectory(self) -> list[tuple[float, int]]:
        """Cluster-wide satisfied count over time, carrying each worker's last value forward."""
        merged = sorted((r.time, r.worker_id, r.QS) for reps in self.steps.values() for r in reps)
        latest = {}
        out = []
        for t, wid, qs in merged:
            latest[wid] = qs
            out.append((t, sum(latest.values())))
        return out

    def steady_fractions(self, worker_id: str) -> dict:
        """Per container, the fraction of tail steps spent in each class."""
        window = tail(self.steps.get(worker_id, []))
        seen = {}
        for r in window:
            for row in r.rows:
                seen.setdefault(row.container_id, Counter())[row.qclass] += 1
        return {
            cid: {cls: counts[cls] / sum(counts.values()) for cls in QoEClass}
            for cid, counts in seen.items()
        }

    def steady_classes(self, worker_id: str) -> dict:
        """Most frequent class per container over the tail; ties resolve S, then B, then G."""
        order = [QoEClass.S, QoEClass.B, QoEClass.G]
        return {
            cid: max(order, key=lambda c: (frac[c], -order.index(c)))
            for cid, frac in self.steady_fractions(worker_id).items()
        }

    def steady_satisfied(self, worker_id: str) -> int:
        return sum(
            1 for frac in self.steady_fractions(worker_id).values()
            if frac[QoEClass.S] >= STEADY_SATISFIED
        )

    def satisfied_by_worker(self) -> dict:
        return {wid: self.steady_satisfied(wid) for wid in self.worker_ids}

    def census(self) -> dict:
        """Steady-state class -> container count over the whole cluster."""
        out = Counter({cls: 0 for cls in QoEClass})
        for wid in self.worker_ids:
            out.update(self.steady_classes(wid).values())
        return dict(out)

    def steady_shares(self, worker_id: str) -> dict:
        """Mean reported share per container over the tail."""
        sums, counts = Counter(), Counter()
        for r in tail(self.steps.get(worker_id, [])):
            for row in r.rows:
                sums[row.container_id] += row.share
                counts[row.container_id] += 1
        return {cid: sums[cid] / counts[cid] for cid in sums}

    def steady_perf(self, worker_id: str) -> dict:
        sums, counts = Counter(), Counter()
        for r in tail(self.steps.get(worker_id, [])):
            for row in r.rows:
                sums[row.container_id] += row.perf
                counts[row.container_id] += 1
        return {cid: sums[cid] / counts[cid] for cid in sums}

    def total_abs_quality(self) -> float:
        """Sum of |q| over the last step of every worker."""
        return sum(
            abs(row.quality) for reps in self.steps.values() if reps for row in reps[-1].rows
        )


def collect(summary: ClusterSummary, report: StepReport) -> ClusterSummary:
    history = summary.steps.setdefault(report.worker_id, [])
    if history and report.time <= history[-1].time:
        raise OutOfOrderReport(
            f"report for {report.worker_id} at t={report.time} after t={history[-1].time}"
        )
    history.append(report)
    return summary
