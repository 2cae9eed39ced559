"""JSON and CSV renderings of baseline, path, search and simulation results.

Reports carry no timestamps or environment data, so identical inputs give
byte-identical files.  Floats are written with ``repr`` precision and load
back to the same values.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Optional

from .dessim import SimReport
from .model import PathSpec, Scenario
from .reward import PathMetrics
from .search import SearchResult, StageRecord
from .throughput import BaselineMetrics, PathThroughput

REPORT_VERSION = 1


def path_dict(path: PathSpec, n_f: int) -> dict:
    return {"r_p": list(path.vector(n_f)), "kind": path.kind.value}


def baseline_dict(b: BaselineMetrics) -> dict:
    return {"th_0": b.th_0, "t_0": b.t_0, "a_0": b.a_0}


def throughput_dict(tp: PathThroughput) -> dict:
    return {
        "th_local": tp.th_local,
        "th_host": tp.th_host,
        "th_total": tp.th_total,
        "t_local_cycle": tp.t_local_cycle,
        "t_host_cycle": tp.t_host_cycle,
        "bottleneck": tp.bottleneck.value,
        "host_own_throughput": tp.host_own_throughput,
    }


def metrics_dict(m: PathMetrics, n_f: int) -> dict:
    out = path_dict(m.path, n_f)
    out.update(throughput_dict(m.throughput))
    out.update({"a_p": m.a_p, "a_av": m.a_av, "reward": m.reward})
    return out


def stage_dict(rec: StageRecord, n_f: int) -> dict:
    out = {"stage": rec.stage}
    out.update(path_dict(rec.predicted_best, n_f))
    out.update(
        {
            "predicted_reward": rec.predicted_reward,
            "true_accuracy": rec.true_accuracy,
            "true_reward": rec.true_reward,
            "a_av": rec.metrics.a_av,
            "th_total": rec.metrics.throughput.th_total,
            "c_after": rec.c_after,
        }
    )
    return out


def enumerate_report(scenario: Scenario, baseline: BaselineMetrics, rows) -> dict:
    """``rows`` holds ``(path, throughput, admissible)`` triples."""
    paths = []
    for path, tp, ok in rows:
        row = path_dict(path, scenario.n_f)
        row.update(throughput_dict(tp))
        row["ratio"] = tp.th_total / baseline.th_0
        row["admissible"] = ok
        paths.append(row)
    return {
        "report_version": REPORT_VERSION,
        "command": "enumerate",
        "scenario_id": scenario.scenario_id,
        "s": scenario.s,
        "n_f": scenario.n_f,
        "baseline": baseline_dict(baseline),
        "n_paths": len(paths),
        "n_admissible": sum(1 for r in paths if r["admissible"]),
        "paths": paths,
    }


def search_report(scenario: Scenario, result: SearchResult, mode: str) -> dict:
    n_f = scenario.n_f
    best = metrics_dict(result.best, n_f)
    best["ratio"] = result.best.throughput.th_total / result.baseline.th_0
    return {
        "report_version": REPORT_VERSION,
        "command": "search",
        "mode": mode,
        "scenario_id": scenario.scenario_id,
        "s": scenario.s,
        "n_f": n_f,
        "baseline": baseline_dict(result.baseline),
        "best": best,
        "stages_run": result.stages_run,
        "termination": result.termination.value,
        "trace": [stage_dict(r, n_f) for r in result.trace],
        "evaluated": [metrics_dict(m, n_f) for m in result.evaluated],
    }


def sim_dict(rep: SimReport) -> dict:
    return {
        "measured_th_total": rep.measured_th_total,
        "measured_th_local": rep.measured_th_local,
        "measured_th_host": rep.measured_th_host,
        "local_busy": list(rep.local_busy),
        "host_busy": list(rep.host_busy),
        "host_own_throughput": rep.host_own_throughput,
        "completed_batches": rep.completed_batches,
        "elapsed": rep.elapsed,
        "events": rep.events,
    }


def simulate_report(
    scenario: Scenario,
    path: Optional[PathSpec],
    analytic_th: float,
    rep: SimReport,
    n_batches: int,
    warmup: int,
) -> dict:
    rel = abs(rep.measured_th_total - analytic_th) / analytic_th
    return {
        "report_version": REPORT_VERSION,
        "command": "simulate",
        "scenario_id": scenario.scenario_id,
        "s": scenario.s,
        "n_f": scenario.n_f,
        "path": None if path is None else path_dict(path, scenario.n_f),
        "n_batches": n_batches,
        "warmup_batches": warmup,
        "analytic_th_total": analytic_th,
        "measured": sim_dict(rep),
        "rel_error": rel,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _csv_text(rows: Iterable[dict]) -> str:
    rows = list(rows)
    buf = io.StringIO()
    if not rows:
        return ""
    flat = []
    for row in rows:
        row = dict(row)
        if "r_p" in row:
            lout, hin, hout, lin = row.pop("r_p")
            row = {"lout": lout, "hin": hin, "hout": hout, "lin": lin, **row}
        flat.append({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    writer = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)
    return buf.getvalue()


def csv_tables(report: dict) -> dict[str, str]:
    """CSV files (name -> text) accompanying a report."""
    cmd = report["command"]
    if cmd == "enumerate":
        return {"paths.csv": _csv_text(report["paths"])}
    if cmd == "search":
        return {
            "trace.csv": _csv_text(report["trace"]),
            "evaluated.csv": _csv_text(report["evaluated"]),
        }
    if report["path"] is None:
        row = {"r_p": ["", "", "", ""], "kind": "baseline"}
    else:
        row = dict(report["path"])
    m = report["measured"]
    row.update(
        {
            "analytic_th_total": report["analytic_th_total"],
            "measured_th_total": m["measured_th_total"],
            "measured_th_local": m["measured_th_local"],
            "measured_th_host": m["measured_th_host"],
            "rel_error": report["rel_error"],
            "completed_batches": m["completed_batches"],
        }
    )
    return {"sim.csv": _csv_text([row])}


def write_report(report: dict, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fname = out / "report.json"
    fname.write_text(dumps(report), encoding="utf-8")
    for name, text in csv_tables(report).items():
        (out / name).write_text(text, encoding="utf-8")
    return fname


def table_skeleton(enum_report: dict, accuracy: float = 0.0) -> list[dict]:
    """Table-oracle records for every enumerated path, all set to ``accuracy``."""
    return [
        {"r_p": list(row["r_p"]), "kind": row["kind"], "accuracy": accuracy}
        for row in enum_report["paths"]
    ]
