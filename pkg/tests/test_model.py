import pytest
from hypothesis import given, strategies as st

from qoesched.model import (
    ContainerState,
    ControllerParams,
    QualitySnapshot,
    WorkerState,
    quality,
    worker_quality,
)

positive = st.floats(0.01, 1e4, allow_nan=False)


@pytest.mark.parametrize("objective, perf, expected", [
    (35.0, 36.12, -1.12),
    (20.0, 31.61, -11.61),
    (40.0, 40.0, 0.0),
])
def test_quality_examples(objective, perf, expected):
    assert quality(objective, perf) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("objective, perf", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -3.0)])
def test_quality_rejects_non_positive(objective, perf):
    with pytest.raises(ValueError):
        quality(objective, perf)


@given(positive, positive)
def test_quality_plus_perf_recovers_objective(o, p):
    assert quality(o, p) + p == pytest.approx(o, rel=1e-12)


@given(positive, positive, positive)
def test_quality_strictly_decreasing_in_perf(o, p, dp):
    assert quality(o, p + dp) < quality(o, p)


def _snap(i, q):
    return QualitySnapshot(f"c{i}", 0.0, 1.0, 10.0, q)


def test_worker_quality_examples():
    assert worker_quality([_snap(0, 4.0), _snap(1, -7.0)]) == -3.0
    assert worker_quality([]) == 0
    assert worker_quality([_snap(i, 0.0) for i in range(5)]) == 0


@given(st.lists(st.floats(-100, 100), max_size=20), st.integers(0, 20))
def test_worker_quality_additive(qs, cut):
    snaps = [_snap(i, q) for i, q in enumerate(qs)]
    cut = min(cut, len(snaps))
    whole = worker_quality(snaps)
    assert worker_quality(snaps[:cut]) + worker_quality(snaps[cut:]) == pytest.approx(whole, abs=1e-9)


def test_params_validation_and_floor():
    p = ControllerParams()
    assert (p.alpha, p.beta, p.total_capacity) == (0.1, 0.1, 8.0)
    assert p.floor(10) == pytest.approx(0.4)
    for bad in ({"alpha": 0.0}, {"alpha": 1.0}, {"beta": 0.0}, {"beta": 1.5}, {"total_capacity": 0.0}):
        with pytest.raises(ValueError):
            ControllerParams(**bad)


def test_container_rejects_non_positive_objective():
    with pytest.raises(ValueError):
        ContainerState(id="c", model="m", objective=0.0, limit=1.0)


def test_container_quality_tracks_perf():
    c = ContainerState(id="c", model="m", objective=35.0, limit=1.0)
    assert c.quality is None and not c.measurable
    c.perf = 36.12
    assert c.quality == pytest.approx(-1.12)


def test_worker_state_rejects_duplicate_ids():
    w = WorkerState("w1", ControllerParams())
    w.add(ContainerState(id="c", model="m", objective=1.0, limit=1.0))
    with pytest.raises(ValueError):
        w.add(ContainerState(id="c", model="m", objective=2.0, limit=1.0))


def test_snapshot_is_immutable():
    s = _snap(0, 1.0)
    with pytest.raises(AttributeError):
        s.quality = 2.0
