"""
Scenario configuration: JSON on disk, validated dataclasses in memory.

Minimal file::

    {"containers": [{"profile": "ResNet-50", "objective": 40}],
     "duration": 600}

Everything else has a default (alpha = beta = 0.1, one 8-core worker,
burst schedule, listener interval 10 s within [5, 80]).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

from .listener import ListenerConfig
from .model import ControllerParams
from .workload import DEFAULT_PROFILES, ModelProfile, SubmissionSchedule


class ConfigError(ValueError):
    """Invalid scenario; the message names the offending field."""


@dataclass(frozen=True)
class ContainerDecl:
    profile: str
    objective: float


@dataclass(frozen=True)
class ContainerGenerator:
    """Draw `count` containers with a uniform objective and a uniformly chosen profile."""

    count: int
    objective_range: tuple = (5.0, 95.0)
    profiles: tuple = ()


@dataclass(frozen=True)
class ScenarioConfig:
    containers: tuple
    duration: float
    name: str = "scenario"
    workers: int = 1
    capacity: float = 8.0
    controller: str = "dqoes"
    alpha: float = 0.10
    beta: float = 0.10
    listener: ListenerConfig = ListenerConfig()
    profiles: dict = field(default_factory=lambda: dict(DEFAULT_PROFILES))
    schedule: dict = field(default_factory=lambda: {"kind": "burst"})
    seed: int = 0
    dt: float = 0.5
    window: int = 3
    output: Optional[str] = None

    @property
    def params(self) -> ControllerParams:
        return ControllerParams(alpha=self.alpha, beta=self.beta, total_capacity=self.capacity)

    @property
    def container_count(self) -> int:
        if isinstance(self.containers, ContainerGenerator):
            return self.containers.count
        return len(self.containers)

    def submission_schedule(self, seed: Optional[int] = None) -> SubmissionSchedule:
        s = self.schedule
        window = s.get("window")
        return SubmissionSchedule(
            kind=s.get("kind", "burst"),
            count=self.container_count,
            gap=s.get("gap"),
            window=tuple(window) if window is not None else None,
            seed=self.seed if seed is None else seed,
        )

    def with_overrides(self, **changes) -> "ScenarioConfig":
        return validate(replace(self, **changes))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["profiles"] = [asdict(p) for p in self.profiles.values()]
        if isinstance(self.containers, ContainerGenerator):
            d["containers"] = asdict(self.containers)
        else:
            d["containers"] = [asdict(c) for c in self.containers]
        return d

    def fingerprint(self) -> str:
        """Hash of the canonical config with the controller and output fields dropped."""
        d = self.to_dict()
        d.pop("controller")
        d.pop("output")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"), default=list)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _require(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise ConfigError(f"{where}: {msg}")


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    _require(cfg.controller in ("dqoes", "even"), "controller", f"expected 'dqoes' or 'even', got {cfg.controller!r}")
    _require(cfg.workers >= 1, "workers.count", "need at least one worker")
    _require(cfg.duration > 0, "duration", "must be positive")
    _require(cfg.dt > 0, "dt", "must be positive")
    _require(cfg.window >= 1, "window", "must be at least 1")
    try:
        cfg.params
    except ValueError as e:
        raise ConfigError(f"alpha/beta/capacity: {e}") from None

    if isinstance(cfg.containers, ContainerGenerator):
        gen = cfg.containers
        _require(gen.count >= 1, "containers.count", "must be at least 1")
        lo, hi = gen.objective_range
        _require(0 < lo <= hi, "containers.objective_range", f"need 0 < lo <= hi, got {lo}, {hi}")
        for name in gen.profiles:
            _require(name in cfg.profiles, "containers.profiles", f"unknown profile {name!r}")
    else:
        _require(len(cfg.containers) >= 1, "containers", "need at least one container")
        for i, c in enumerate(cfg.containers):
            _require(c.profile in cfg.profiles, f"containers[{i}].profile", f"unknown profile {c.profile!r}")
            _require(c.objective > 0, f"containers[{i}].objective", f"must be positive, got {c.objective}")

    try:
        schedule = cfg.submission_schedule()
    except ValueError as e:
        raise ConfigError(f"schedule: {e}") from None
    _require(cfg.duration > schedule.last_submit(), "duration",
             f"must exceed the last submit time {schedule.last_submit()}")
    return cfg


def _section(raw: dict, key: str, kind: type, default):
    value = raw.get(key, default)
    if not isinstance(value, kind):
        raise ConfigError(f"{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def from_dict(raw: dict) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    known = {"name", "workers", "controller", "alpha", "beta", "listener", "profiles", "containers",
             "schedule", "duration", "seed", "dt", "window", "output"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)}")
    if "containers" not in raw:
        raise ConfigError("containers: required")
    if "duration" not in raw:
        raise ConfigError("duration: required")

    workers = raw.get("workers", {})
    if isinstance(workers, int):
        workers = {"count": workers}
    if not isinstance(workers, dict):
        raise ConfigError("workers: expected an object with count and capacity")

    profiles = dict(DEFAULT_PROFILES)
    for i, p in enumerate(_section(raw, "profiles", list, [])):
        try:
            prof = ModelProfile(name=p["name"], work=float(p["work"]), noise_sigma=float(p.get("noise_sigma", 0.011)))
        except KeyError as e:
            raise ConfigError(f"profiles[{i}]: missing {e}") from None
        except ValueError as e:
            raise ConfigError(f"profiles[{i}]: {e}") from None
        profiles[prof.name] = prof

    containers = raw["containers"]
    try:
        if isinstance(containers, dict):
            containers = ContainerGenerator(
                count=int(containers["count"]),
                objective_range=tuple(float(v) for v in containers.get("objective_range", (5.0, 95.0))),
                profiles=tuple(containers.get("profiles", ())),
            )
        elif isinstance(containers, list):
            containers = tuple(ContainerDecl(str(c["profile"]), float(c["objective"])) for c in containers)
        else:
            raise ConfigError("containers: expected a list or a generator object")
    except (KeyError, TypeError) as e:
        raise ConfigError(f"containers: malformed entry ({e})") from None

    lis = _section(raw, "listener", dict, {})
    try:
        listener = ListenerConfig(
            initial=float(lis.get("initial", 10.0)),
            minimum=float(lis.get("minimum", 5.0)),
            maximum=float(lis.get("maximum", 80.0)),
            streak_threshold=int(lis.get("streak_threshold", 2)),
        )
    except ValueError as e:
        raise ConfigError(f"listener: {e}") from None

    try:
        cfg = ScenarioConfig(
            name=str(raw.get("name", "scenario")),
            workers=int(workers.get("count", 1)),
            capacity=float(workers.get("capacity", 8.0)),
            controller=str(raw.get("controller", "dqoes")),
            alpha=float(raw.get("alpha", 0.10)),
            beta=float(raw.get("beta", 0.10)),
            listener=listener,
            profiles=profiles,
            containers=containers,
            schedule=dict(_section(raw, "schedule", dict, {"kind": "burst"})),
            duration=float(raw["duration"]),
            seed=int(raw.get("seed", 0)),
            dt=float(raw.get("dt", 0.5)),
            window=int(raw.get("window", 3)),
            output=raw.get("output"),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"malformed value: {e}") from None
    return validate(cfg)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    text = path.read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from None
    return from_dict(raw)
