"""
Simulated worker node.

A worker executes inference batches for its containers in discrete virtual
time, keeps per-container batch history (the application monitor), runs the
adaptive listener (the worker monitor) and applies limit plans (the executor).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import controller as ctl
from .baseline import even_share_step
from .listener import ListenerConfig, ListenerState, observe
from .model import ContainerState, ControllerParams, LimitPlan, QoEClass, QualitySnapshot, WorkerState
from .model import quality as quality_of
from .workload import ModelProfile

log = logging.getLogger(__name__)

CONTROLLERS = ("dqoes", "even")


class NotMeasurable(LookupError):
    """The container has not completed a batch yet."""


class StalePlan(ValueError):
    """A plan names a container the worker no longer hosts."""


@dataclass(frozen=True)
class ContainerSpec:
    id: str
    profile: ModelProfile
    objective: float


@dataclass
class RunningContainer:
    state: ContainerState
    profile: ModelProfile
    window: int = 3
    batch_progress: float = 0.0
    batch_work: float = 0.0
    batch_start: float = 0.0
    completed_batches: list = field(default_factory=list)
    # core-seconds consumed since the last snapshot, and when that window opened
    used: float = 0.0
    used_since: float = 0.0


@dataclass(frozen=True)
class ContainerRow:
    container_id: str
    model: str
    objective: float
    perf: float
    quality: float
    qclass: QoEClass
    limit: float
    share: float


@dataclass(frozen=True)
class StepReport:
    """What one control pass saw and did on one worker."""

    time: float
    worker_id: str
    rows: tuple
    interval: float
    run_controller_now: bool = False
    QG: float = 0.0
    QB: float = 0.0
    QS: int = 0
    plan_size: int = 0

    def count(self, cls: QoEClass) -> int:
        return sum(1 for r in self.rows if r.qclass is cls)


def effective_shares(limits: dict, total_capacity: float) -> dict:
    """CPU each container actually gets when soft limits may oversubscribe the node."""
    total = sum(limits.values())
    if total <= total_capacity:
        return dict(limits)
    scale = total_capacity / total
    return {cid: lim * scale for cid, lim in limits.items()}


class Worker:
    def __init__(
        self,
        worker_id: str,
        params: Optional[ControllerParams] = None,
        listener: Optional[ListenerConfig] = None,
        controller: str = "dqoes",
        rng: Optional[np.random.Generator] = None,
        window: int = 3,
    ):
        if controller not in CONTROLLERS:
            raise ValueError(f"unknown controller {controller!r}")
        self.state = WorkerState(
            worker_id=worker_id,
            params=params or ControllerParams(),
            listener=ListenerState.start(listener),
        )
        self.controller = controller
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.window = window
        self.running: dict[str, RunningContainer] = {}
        self.now = 0.0
        self.next_control = self.state.listener.interval
        self.arrival_pending = False

    @property
    def worker_id(self) -> str:
        return self.state.worker_id

    @property
    def capacity(self) -> float:
        return self.state.params.total_capacity

    @property
    def interval(self) -> float:
        return self.state.listener.interval

    def __len__(self):
        return len(self.running)

    def shares(self) -> dict:
        return effective_shares(self.state.limits(), self.capacity)

    def submit(self, spec: ContainerSpec) -> None:
        if spec.id in self.running:
            raise ValueError(f"duplicate container id {spec.id!r} on {self.worker_id}")
        n = len(self.running) + 1
        equal = self.capacity / n
        container = ContainerState(id=spec.id, model=spec.profile.name, objective=spec.objective, limit=equal)
        self.state.add(container)
        rc = RunningContainer(state=container, profile=spec.profile, window=self.window,
                              batch_start=self.now, used_since=self.now)
        rc.batch_work = spec.profile.work * (1.0 + spec.profile.draw_noise(self.rng))
        self.running[spec.id] = rc
        if self.controller == "even":
            self.apply_plan(even_share_step(self.state, self.now))
        else:
            # containers that no plan has touched yet still hold a provisional equal share
            for c in self.state.containers.values():
                if not c.controlled:
                    c.limit = equal
        self.arrival_pending = True

    def tick(self, dt: float) -> list[tuple[str, float, float]]:
        """Advance virtual time by `dt`; returns (container, finish time, duration) per completed batch."""
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        shares = self.shares()
        events = []
        for cid, rc in self.running.items():
            share = shares[cid]
            budget = dt
            while budget > 0.0:
                need = rc.batch_work - rc.batch_progress
                if share * budget >= need:
                    spent = need / share
                    finish = self.now + (dt - budget) + spent
                    duration = finish - rc.batch_start
                    rc.completed_batches.append((finish, duration))
                    events.append((cid, finish, duration))
                    rc.batch_progress = 0.0
                    rc.batch_start = finish
                    rc.batch_work = rc.profile.work * (1.0 + rc.profile.draw_noise(self.rng))
                    budget -= spent
                else:
                    rc.batch_progress += share * budget
                    budget = 0.0
            rc.used += share * dt
        self.now += dt
        return events

    def measure(self, container_id: str, now: Optional[float] = None) -> QualitySnapshot:
        now = self.now if now is None else now
        rc = self.running[container_id]
        if not rc.completed_batches:
            raise NotMeasurable(container_id)
        recent = [d for _, d in rc.completed_batches[-rc.window:]]
        perf = sum(recent) / len(recent)
        elapsed = now - rc.used_since
        usage = rc.used / elapsed if elapsed > 0.0 else self.shares()[container_id]
        rc.used = 0.0
        rc.used_since = now
        c = rc.state
        c.perf = perf
        c.usage = usage
        return QualitySnapshot(container_id, now, usage, perf, quality_of(c.objective, perf))

    def apply_plan(self, plan: LimitPlan) -> None:
        if plan.worker_id != self.worker_id:
            raise StalePlan(f"plan for {plan.worker_id!r} applied to {self.worker_id!r}")
        unknown = set(plan.entries) - set(self.state.containers)
        if unknown:
            raise StalePlan(f"plan references unknown containers {sorted(unknown)}")
        for cid, limit in plan.entries.items():
            c = self.state.containers[cid]
            c.limit = limit
            c.controlled = True

    def control_due(self) -> bool:
        return self.arrival_pending or self.now >= self.next_control - 1e-9

    def control_loop_step(self) -> Optional[StepReport]:
        """Measure, classify, plan, apply and let the listener pick the next interval.

        Returns None when no container has finished a batch yet.
        """
        now = self.now
        snaps = []
        for cid in self.running:
            try:
                snaps.append(self.measure(cid, now))
            except NotMeasurable:
                continue
        if not snaps:
            self.next_control = now + self.interval
            return None

        params = self.state.params
        objectives = {s.container_id: self.state.containers[s.container_id].objective for s in snaps}
        aggs = ctl.aggregate(snaps, objectives, params.alpha)
        if self.controller == "dqoes":
            plan = ctl.plan_limits(self.state.limits(), snaps, aggs, params, self.worker_id, now)
        else:
            plan = even_share_step(self.state, now)
        self.apply_plan(plan)

        run_now = False
        if self.controller == "dqoes":
            self.state.listener, decision = observe(
                self.state.listener, aggs.Q_G, aggs.Q_B, aggs.Q_S, arrival=self.arrival_pending
            )
            run_now = decision.run_controller_now
            if run_now:
                log.debug("%s t=%.1f regression, interval -> %.1f", self.worker_id, now, decision.new_interval)
        self.arrival_pending = False
        self.next_control = now + self.interval

        rows = []
        for s in snaps:
            c = self.state.containers[s.container_id]
            cls = aggs.class_of(s.container_id)
            c.qclass = cls
            rows.append(ContainerRow(c.id, c.model, c.objective, s.perf, s.quality, cls, c.limit, s.usage))
        return StepReport(
            time=now,
            worker_id=self.worker_id,
            rows=tuple(rows),
            interval=self.interval,
            run_controller_now=run_now,
            QG=aggs.Q_G,
            QB=aggs.Q_B,
            QS=aggs.Q_S,
            plan_size=len(plan),
        )
