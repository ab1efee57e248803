"""
CSV export/import of step reports, controller comparison and trajectory plots.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from itertools import groupby
from pathlib import Path
from typing import Iterable, Optional, Union

from .cluster import ClusterSummary, collect
from .model import QoEClass
from .worker import ContainerRow, StepReport

HEADER = ["time", "worker_id", "container_id", "model", "objective", "perf", "quality", "class", "limit", "share"]


class FingerprintMismatch(ValueError):
    pass


def _f(x: float) -> str:
    return f"{x:.4f}"


def export_csv(reports: Iterable[StepReport], path) -> Path:
    """One row per (control step, container), ordered by time, worker, container."""
    rows = []
    for r in reports:
        for row in r.rows:
            rows.append((r.time, r.worker_id, row))
    rows.sort(key=lambda x: (x[0], x[1], x[2].container_id))
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for t, wid, row in rows:
            w.writerow([
                _f(t), wid, row.container_id, row.model, _f(row.objective), _f(row.perf),
                _f(row.quality), row.qclass.value, _f(row.limit), _f(row.share),
            ])
    return path


def load_csv(path) -> list[StepReport]:
    """Rebuild step reports from an exported CSV; listener fields are not recoverable."""
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        records = list(reader)
    reports = []
    for (t, wid), group in groupby(records, key=lambda r: (r["time"], r["worker_id"])):
        rows = tuple(
            ContainerRow(
                container_id=r["container_id"],
                model=r["model"],
                objective=float(r["objective"]),
                perf=float(r["perf"]),
                quality=float(r["quality"]),
                qclass=QoEClass(r["class"]),
                limit=float(r["limit"]),
                share=float(r["share"]),
            )
            for r in group
        )
        QG = sum(r.quality for r in rows if r.qclass is QoEClass.G)
        QB = sum(r.quality for r in rows if r.qclass is QoEClass.B)
        QS = sum(1 for r in rows if r.qclass is QoEClass.S)
        reports.append(StepReport(float(t), wid, rows, interval=0.0, QG=QG, QB=QB, QS=QS))
    return reports


def summary_from_reports(reports: Iterable[StepReport]) -> ClusterSummary:
    summary = ClusterSummary()
    for r in sorted(reports, key=lambda r: (r.time, r.worker_id)):
        collect(summary, r)
    return summary


def write_sidecar(summary: ClusterSummary, csv_path, fingerprint: str, controller: str) -> Path:
    """Summary JSON next to the CSV; `compare` uses its fingerprint as a guard."""
    path = Path(csv_path).with_suffix(".summary.json")
    payload = {
        "fingerprint": fingerprint,
        "controller": controller,
        "satisfied": summary.satisfied_by_worker(),
        "census": {k.value: v for k, v in summary.census().items()},
        "total_abs_quality": summary.total_abs_quality(),
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def read_fingerprint(csv_path) -> Optional[str]:
    path = Path(csv_path).with_suffix(".summary.json")
    if not path.exists():
        return None
    return json.loads(path.read_text()).get("fingerprint")


@dataclass(frozen=True)
class Comparison:
    satisfied_a: dict
    satisfied_b: dict
    total_a: int
    total_b: int
    ratio: Union[float, str]
    abs_quality_a: float
    abs_quality_b: float

    def per_worker_dominates(self) -> bool:
        return all(self.satisfied_a.get(w, 0) >= n for w, n in self.satisfied_b.items())

    def lines(self, label_a: str = "A", label_b: str = "B") -> list[str]:
        wa, wb = max(10, len(label_a) + 2), max(10, len(label_b) + 2)
        out = [f"{'worker':<8}{label_a:>{wa}}{label_b:>{wb}}"]
        for wid in sorted(set(self.satisfied_a) | set(self.satisfied_b)):
            out.append(f"{wid:<8}{self.satisfied_a.get(wid, 0):>{wa}}{self.satisfied_b.get(wid, 0):>{wb}}")
        out.append(f"{'total':<8}{self.total_a:>{wa}}{self.total_b:>{wb}}")
        ratio = self.ratio if isinstance(self.ratio, str) else f"{self.ratio:.2f}"
        out.append(f"satisfied ratio {label_a}/{label_b}: {ratio}")
        out.append(f"sum |q| at end: {label_a}={self.abs_quality_a:.2f} {label_b}={self.abs_quality_b:.2f}")
        return out


def compare(
    summary_a: ClusterSummary,
    summary_b: ClusterSummary,
    fingerprint_a: Optional[str] = None,
    fingerprint_b: Optional[str] = None,
) -> Comparison:
    """Steady-state satisfied counts of two runs of the same scenario."""
    if fingerprint_a is not None and fingerprint_b is not None and fingerprint_a != fingerprint_b:
        raise FingerprintMismatch(f"runs come from different scenarios ({fingerprint_a} vs {fingerprint_b})")
    sa, sb = summary_a.satisfied_by_worker(), summary_b.satisfied_by_worker()
    ta, tb = sum(sa.values()), sum(sb.values())
    if tb == 0:
        ratio = 1.0 if ta == 0 else f">= {ta}"
    else:
        ratio = ta / tb
    return Comparison(sa, sb, ta, tb, ratio, summary_a.total_abs_quality(), summary_b.total_abs_quality())


def plot_csv(csv_path, out_dir=None) -> list[Path]:
    """Per-worker quality and share trajectories, one PNG each."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    csv_path = Path(csv_path)
    out_dir = Path(out_dir) if out_dir else csv_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    series: dict = {}
    for r in load_csv(csv_path):
        for row in r.rows:
            s = series.setdefault(r.worker_id, {}).setdefault(row.container_id, ([], [], []))
            s[0].append(r.time)
            s[1].append(row.quality)
            s[2].append(row.share)

    written = []
    for wid, containers in sorted(series.items()):
        for idx, label in ((1, "quality [s]"), (2, "CPU share [cores]")):
            fig, ax = plt.subplots(figsize=(8, 4))
            for cid, data in sorted(containers.items()):
                ax.plot(data[0], data[idx], label=cid, linewidth=1)
            ax.set_xlabel("time [s]")
            ax.set_ylabel(label)
            ax.set_title(f"{csv_path.stem} {wid}")
            if idx == 1:
                ax.axhline(0.0, color="grey", linewidth=0.5)
            ax.legend(fontsize=6, ncol=2, loc="best")
            fig.tight_layout()
            kind = "quality" if idx == 1 else "share"
            out = out_dir / f"{csv_path.stem}_{wid}_{kind}.png"
            fig.savefig(out, dpi=100)
            plt.close(fig)
            written.append(out)
    return written
