import json

import pytest

from qoesched.cli import main
from qoesched.cluster import ClusterSummary
from qoesched.config import ConfigError, ContainerGenerator, from_dict, load_config
from qoesched.report import (
    HEADER,
    FingerprintMismatch,
    compare,
    export_csv,
    load_csv,
    summary_from_reports,
)
from qoesched.sim import Simulation, run_scenario

MINIMAL = {"containers": [{"profile": "ResNet-50", "objective": 40}], "duration": 100}


def small(**extra):
    raw = {
        "name": "small",
        "containers": [{"profile": "ResNet-50", "objective": o} for o in (20, 40, 60)],
        "duration": 300,
        "seed": 5,
    }
    raw.update(extra)
    return raw


def test_minimal_config_defaults():
    cfg = from_dict(MINIMAL)
    assert (cfg.alpha, cfg.beta) == (0.1, 0.1)
    assert cfg.listener.initial == 10.0 and cfg.workers == 1 and cfg.capacity == 8.0


@pytest.mark.parametrize("raw, field", [
    ({**MINIMAL, "containers": [{"profile": "ResNet-50", "objective": 0}]}, "containers[0].objective"),
    ({**MINIMAL, "containers": [{"profile": "AlexNet", "objective": 10}]}, "containers[0].profile"),
    ({**MINIMAL, "alpha": 0}, "alpha"),
    ({**MINIMAL, "bogus": 1}, "unknown fields"),
    ({"containers": [{"profile": "ResNet-50", "objective": 4}]}, "duration"),
    ({**MINIMAL, "schedule": {"kind": "fixed", "gap": 200}, "containers": MINIMAL["containers"] * 2}, "duration"),
    ({**MINIMAL, "listener": {"minimum": 50}}, "listener"),
])
def test_config_rejections_name_the_field(raw, field):
    with pytest.raises(ConfigError, match=field.replace("[", r"\[").replace("]", r"\]")):
        from_dict(raw)


def test_generator_and_custom_profile():
    cfg = from_dict({
        "containers": {"count": 12, "objective_range": [10, 20], "profiles": ["Tiny"]},
        "profiles": [{"name": "Tiny", "work": 5.0, "noise_sigma": 0.0}],
        "workers": {"count": 3, "capacity": 4},
        "duration": 100,
    })
    assert isinstance(cfg.containers, ContainerGenerator) and cfg.container_count == 12
    sim = Simulation(cfg)
    objectives = [a.spec.objective for a in sim.arrivals]
    assert all(10 <= o <= 20 for o in objectives)
    assert {a.spec.profile.name for a in sim.arrivals} == {"Tiny"}


def test_load_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.json")


def test_fingerprint_ignores_controller_only():
    a = from_dict(small())
    assert a.fingerprint() == a.with_overrides(controller="even").fingerprint()
    assert a.fingerprint() != a.with_overrides(seed=6).fingerprint()


def test_run_is_deterministic(tmp_path):
    cfg = from_dict(small())
    s1, r1 = run_scenario(cfg)
    s2, r2 = run_scenario(cfg)
    assert r1 == r2
    assert s1.satisfied_by_worker() == s2.satisfied_by_worker()
    p1 = export_csv(r1, tmp_path / "a.csv")
    p2 = export_csv(r2, tmp_path / "b.csv")
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_schema_and_round_trip(tmp_path):
    cfg = from_dict(small())
    _, reports = run_scenario(cfg)
    path = export_csv(reports, tmp_path / "run.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(HEADER)
    for line in lines[1:]:
        cells = line.split(",")
        objective, quality, cls = float(cells[4]), float(cells[6]), cells[7]
        for i in (0, 4, 5, 6, 8, 9):
            assert len(cells[i].split(".")[1]) == 4
        if cls == "S":
            assert abs(quality) <= cfg.alpha * objective + 1e-3
        elif cls == "G":
            assert quality > cfg.alpha * objective - 1e-3
        else:
            assert quality < -cfg.alpha * objective + 1e-3
    back = load_csv(path)
    assert len(back) == len(reports)
    again = export_csv(back, tmp_path / "again.csv")
    assert again.read_bytes() == path.read_bytes()


def test_empty_stream_header_only(tmp_path):
    path = export_csv([], tmp_path / "empty.csv")
    assert path.read_text() == ",".join(HEADER) + "\n"


def test_compare_ratio_guards():
    empty = ClusterSummary()
    assert compare(empty, empty).ratio == 1.0
    # a lone container gets all 8 cores: 25.29 / 8 = 3.16 s batches
    raw = {**MINIMAL, "containers": [{"profile": "ResNet-50", "objective": 3.2}], "duration": 200}
    s = summary_from_reports(run_scenario(from_dict(raw))[1])
    assert s.satisfied_by_worker() == {"w1": 1}
    assert compare(s, s).ratio == 1.0
    raw["containers"] = [{"profile": "ResNet-50", "objective": 2.0}]
    zero = summary_from_reports(run_scenario(from_dict(raw))[1])
    assert zero.satisfied_by_worker() == {"w1": 0}
    res = compare(s, zero)
    assert res.ratio == ">= 1" and res.per_worker_dominates()
    with pytest.raises(FingerprintMismatch):
        compare(s, s, "aaaa", "bbbb")


def _write(tmp_path, raw, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(raw))
    return p


def test_cli_run_compare_plot(tmp_path, capsys):
    cfg = _write(tmp_path, small())
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out)]) == 0
    assert main(["run", str(cfg), "--out", str(out), "--controller", "even"]) == 0
    a, b = out / "small_dqoes.csv", out / "small_even.csv"
    assert a.exists() and b.exists() and (out / "small_dqoes.summary.json").exists()
    capsys.readouterr()
    assert main(["compare", str(a), str(b)]) == 0
    assert "satisfied ratio" in capsys.readouterr().out
    assert main(["plot", str(a), "--out", str(tmp_path / "fig")]) == 0
    pngs = sorted(p.name for p in (tmp_path / "fig").iterdir())
    assert pngs == ["small_dqoes_w1_quality.png", "small_dqoes_w1_share.png"]


def test_cli_seed_override_changes_fingerprint(tmp_path):
    cfg = _write(tmp_path, small())
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out)]) == 0
    (out / "small_dqoes.csv").rename(out / "first.csv")
    (out / "small_dqoes.summary.json").rename(out / "first.summary.json")
    assert main(["run", str(cfg), "--out", str(out), "--seed", "9", "--controller", "even"]) == 0
    assert main(["compare", str(out / "first.csv"), str(out / "small_even.csv")]) == 2


def test_cli_exit_codes(tmp_path):
    bad = _write(tmp_path, {**MINIMAL, "containers": [{"profile": "ResNet-50", "objective": 0}]})
    assert main(["run", str(bad)]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 3
    assert main(["compare", str(tmp_path / "x.csv"), str(tmp_path / "y.csv")]) == 3


@pytest.mark.parametrize("name", [
    "burst_unachievable", "burst_achievable", "burst_varied", "fixed_varied", "random_single", "cluster",
])
def test_shipped_scenarios_load(scenarios_dir, name):
    cfg = load_config(scenarios_dir / f"{name}.json")
    assert cfg.name == name
