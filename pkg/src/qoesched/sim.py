"""
Scenario runner: builds the cluster, places containers as they arrive and
advances every worker in lock-step virtual time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .cluster import ClusterSummary, ObjectiveRegistry, collect, place
from .config import ContainerGenerator, ScenarioConfig
from .worker import ContainerSpec, StepReport, Worker
from .workload import make_schedule

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrival:
    time: float
    spec: ContainerSpec


def _streams(seed: int):
    """Independent generators for container draws, the schedule and batch noise."""
    children = np.random.SeedSequence(seed).spawn(3)
    draws, schedule, noise = (np.random.default_rng(c) for c in children)
    return draws, int(schedule.integers(2**31)), noise


def resolve_containers(config: ScenarioConfig, rng: np.random.Generator) -> list[tuple[str, float]]:
    """Concrete (profile name, objective) pairs, drawing them if the config uses a generator."""
    if not isinstance(config.containers, ContainerGenerator):
        return [(c.profile, c.objective) for c in config.containers]
    gen = config.containers
    names = list(gen.profiles) or sorted(config.profiles)
    lo, hi = gen.objective_range
    out = []
    for _ in range(gen.count):
        name = names[int(rng.integers(len(names)))]
        objective = round(float(rng.uniform(lo, hi)))
        out.append((name, float(max(objective, lo))))
    return out


class Simulation:
    def __init__(self, config: ScenarioConfig):
        self.config = config
        draws, schedule_seed, noise = _streams(config.seed)
        self.rng = noise
        self.workers = [
            Worker(f"w{i + 1}", config.params, config.listener, config.controller, noise, config.window)
            for i in range(config.workers)
        ]
        self.registry = ObjectiveRegistry()
        self.summary = ClusterSummary()
        self.reports: list[StepReport] = []
        self.now = 0.0

        decls = resolve_containers(config, draws)
        width = max(2, len(str(len(decls))))
        self.arrivals = []
        for idx, t in make_schedule(config.submission_schedule(schedule_seed)):
            name, objective = decls[idx]
            spec = ContainerSpec(f"c{idx + 1:0{width}d}", config.profiles[name], objective)
            self.arrivals.append(Arrival(t, spec))
        self._next_index = len(decls) + 1

    def add_arrival(self, time: float, profile: str, objective: float) -> str:
        """Queue an extra container outside the configured schedule; returns its id."""
        width = max(2, len(str(self._next_index)))
        cid = f"c{self._next_index:0{width}d}"
        self._next_index += 1
        self.arrivals.append(Arrival(time, ContainerSpec(cid, self.config.profiles[profile], objective)))
        return cid

    def worker(self, worker_id: str) -> Worker:
        return next(w for w in self.workers if w.worker_id == worker_id)

    def _admit(self) -> None:
        due = [a for a in self.arrivals if a.time <= self.now + 1e-9]
        if not due:
            return
        self.arrivals = [a for a in self.arrivals if a.time > self.now + 1e-9]
        for a in sorted(due, key=lambda a: (a.time, a.spec.id)):
            wid = place(self.workers, self.registry)
            self.registry.register(a.spec.id, a.spec.profile.name, a.spec.objective, self.now)
            self.worker(wid).submit(a.spec)
            log.debug("t=%.1f %s -> %s (objective %.1f)", self.now, a.spec.id, wid, a.spec.objective)

    def step(self) -> list[StepReport]:
        """One dt: admit arrivals, run due control passes, then execute work."""
        self._admit()
        out = []
        for w in self.workers:
            if w.control_due():
                report = w.control_loop_step()
                if report is not None:
                    collect(self.summary, report)
                    out.append(report)
        for w in self.workers:
            w.tick(self.config.dt)
        self.now = self.workers[0].now
        self.reports.extend(out)
        return out

    def run_until(self, t_end: float) -> None:
        while self.now < t_end - 1e-9:
            self.step()

    def run(self) -> tuple[ClusterSummary, list[StepReport]]:
        self.run_until(self.config.duration)
        return self.summary, self.reports


def run_scenario(config: ScenarioConfig) -> tuple[ClusterSummary, list[StepReport]]:
    return Simulation(config).run()
