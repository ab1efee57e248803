"""
Adaptive control interval with exponential back-off.

The listener watches the per-class aggregates after every control pass.  When
the outperformer and underperformer sums both keep moving toward zero it
doubles the interval; when the satisfied count drops it halves the interval
and asks for the controller to run right away.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ListenerConfig:
    initial: float = 10.0
    minimum: float = 5.0
    maximum: float = 80.0
    streak_threshold: int = 2

    def __post_init__(self):
        if not 0.0 < self.minimum <= self.initial <= self.maximum:
            raise ValueError(
                f"need 0 < minimum <= initial <= maximum, got "
                f"{self.minimum}, {self.initial}, {self.maximum}"
            )
        if self.streak_threshold < 1:
            raise ValueError("streak_threshold must be at least 1")


@dataclass(frozen=True)
class ListenerState:
    interval: float
    streak: int = 0
    prev_QG: float | None = None
    prev_QB: float | None = None
    prev_QS: int | None = None
    config: ListenerConfig = ListenerConfig()

    @classmethod
    def start(cls, config: ListenerConfig | None = None) -> "ListenerState":
        config = config or ListenerConfig()
        return cls(interval=config.initial, config=config)


@dataclass(frozen=True)
class ListenerDecision:
    new_interval: float
    run_controller_now: bool = False


def _toward_zero(current: float, previous: float) -> bool:
    # a sum that already sits at zero has finished approaching it
    return current == 0.0 or abs(current) < abs(previous)


def is_converging(QG: float, QB: float, prev_QG: float, prev_QB: float) -> bool:
    return _toward_zero(QG, prev_QG) and _toward_zero(QB, prev_QB)


def observe(
    state: ListenerState,
    QG: float,
    QB: float,
    QS: int,
    arrival: bool = False,
) -> tuple[ListenerState, ListenerDecision]:
    """Advance the listener by one observation of the worker's aggregates.

    `arrival` marks the first observation after a container joined the worker;
    it is handled like a drop in the satisfied count.
    """
    if QG < 0.0 or QB > 0.0 or QS < 0:
        raise ValueError(f"inconsistent aggregates QG={QG} QB={QB} QS={QS}")
    cfg = state.config
    interval = state.interval
    streak = state.streak
    run_now = False

    first = state.prev_QG is None
    if not first and not arrival and is_converging(QG, QB, state.prev_QG, state.prev_QB):
        streak += 1
        if streak >= cfg.streak_threshold:
            interval = min(interval * 2.0, cfg.maximum)
            streak = 0
    elif arrival or (not first and QS < state.prev_QS):
        interval = max(interval / 2.0, cfg.minimum)
        streak = 0
        run_now = True
    else:
        streak = 0

    new_state = replace(state, interval=interval, streak=streak, prev_QG=QG, prev_QB=QB, prev_QS=QS)
    return new_state, ListenerDecision(new_interval=interval, run_controller_now=run_now)
