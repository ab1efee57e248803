"""QoE-differentiated CPU limit scheduling for containerized inference, with a cluster simulator."""

from .controller import aggregate, classify, control_step, plan_limits
from .listener import ListenerConfig, ListenerDecision, ListenerState, observe
from .model import (
    ClassAggregates,
    ContainerState,
    ControllerParams,
    LimitPlan,
    QoEClass,
    QualitySnapshot,
    WorkerState,
    quality,
    worker_quality,
)

__version__ = "0.1.0"
