"""Benchmark runner: plan, execute, and score every request in a dataset.

Produces a machine-readable report with three metric groups (planning,
perception, recognition) plus a per-request-type breakdown. Per-request
failures are recorded, never abort the batch.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import metrics as M
from . import requests_io as rq
from . import tools
from .config import AppConfig, make_backend
from .errors import BackendUnreachable, MissingFile
from .executor import execute_plan, write_trace
from .llm import LlmBackend
from .planning import Plan, generate_plan, rule_based_plan
from .scene import DetectionSet, MaskSet, Scene, load_scene


@dataclass
class RequestOutcome:
    request: rq.Request
    gt: rq.GroundTruth
    plan: Plan | None = None
    answer: str | None = None
    status: str = "ok"
    error: str | None = None
    correct: bool | None = None
    judged: bool | None = None
    miou: float | None = None
    ap50: float | None = None


# Machine-readable report shape; nulls mark undefined denominators.
REPORT_SCHEMA = {
    "type": "object",
    "required": ["summary", "per_type", "per_request"],
    "properties": {
        "summary": {
            "type": "object",
            "required": ["total_requests", "vr", "precision", "recall", "exact"],
            "properties": {
                "total_requests": {"type": "integer", "minimum": 0},
                "vr": {"type": "number", "minimum": 0, "maximum": 1},
                "precision": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                "recall": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                "exact": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                "gpt_score": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                "miou": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                "ap50": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
            },
        },
        "per_type": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["count"],
                "properties": {
                    "count": {"type": "integer", "minimum": 0},
                    "exact": {"type": ["number", "null"]},
                    "miou": {"type": ["number", "null"]},
                    "ap50": {"type": ["number", "null"]},
                },
            },
        },
        "per_request": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["request_id", "type", "valid_plan", "status"],
            },
        },
    },
}


@dataclass
class EvalReport:
    summary: dict = field(default_factory=dict)
    per_type: dict = field(default_factory=dict)
    per_request: list = field(default_factory=list)
    harness_errors: int = 0

    def to_json_obj(self) -> dict:
        return {
            "summary": self.summary,
            "per_type": self.per_type,
            "per_request": self.per_request,
        }

    def write(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"
        )


def load_dataset(dataset_dir: str | Path):
    dataset_dir = Path(dataset_dir)
    requests_path = dataset_dir / "requests.jsonl"
    if not requests_path.is_file():
        raise MissingFile(f"no requests file: {requests_path}")
    entries = rq.read_requests(requests_path)
    scenes: dict[str, Scene] = {}
    for request, _ in entries:
        if request.scene_id not in scenes:
            manifest = dataset_dir / "scenes" / request.scene_id / "manifest.json"
            scenes[request.scene_id] = load_scene(manifest)
    return entries, scenes


def _last_artifact(trace, kind):
    found = None
    if trace.store is not None:
        for _, value in trace.store.items():
            if isinstance(value, kind):
                found = value
    return found


def _run_one(
    request: rq.Request,
    gt: rq.GroundTruth,
    scene: Scene,
    config: AppConfig,
    backend: LlmBackend | None,
    traces_dir: Path | None,
) -> RequestOutcome:
    outcome = RequestOutcome(request=request, gt=gt)
    if backend is None:
        plan = rule_based_plan(request)
    else:
        plan = generate_plan(request, scene, backend, config.planner)
    outcome.plan = plan
    if plan is None:
        outcome.status = "invalid-plan"
        return outcome

    summarizer = backend  # template summarizer when no LLM is configured
    trace = execute_plan(plan, scene, request, summarizer, config.tools)
    outcome.answer = trace.final_answer
    if not trace.completed:
        outcome.status = "failed"
        outcome.error = trace.error
    if traces_dir is not None:
        write_trace(trace, request, plan, traces_dir)

    if request.rtype in rq.QA_TYPES:
        outcome.correct = M.match_answer(trace.final_answer, gt.gt_answer, request.rtype)
    elif request.rtype == rq.SEGMENT:
        pred = _last_artifact(trace, MaskSet)
        if pred is not None:
            outcome.miou = M.mask_miou(pred, tools.run_segmentation(scene))
    elif request.rtype == rq.DETECT:
        pred = _last_artifact(trace, DetectionSet)
        if pred is not None:
            outcome.ap50 = M.detection_ap50(pred, scene.detections)
    return outcome


def run_benchmark(
    dataset_dir: str | Path,
    config: AppConfig | None = None,
    out_dir: str | Path | None = None,
    traces_dir: str | Path | None = None,
    jobs: int = 1,
    judge: LlmBackend | None = None,
) -> EvalReport:
    """Score a whole dataset.

    With out_dir set, writes report.json and summary.txt there and puts
    per-request traces under out_dir/traces (unless traces_dir overrides).
    """
    config = config or AppConfig()
    entries, scenes = load_dataset(dataset_dir)
    backend = make_backend(config)
    if traces_dir is None and out_dir is not None:
        traces_dir = Path(out_dir) / "traces"
    if traces_dir is not None:
        traces_dir = Path(traces_dir)
        traces_dir.mkdir(parents=True, exist_ok=True)

    outcomes: dict[str, RequestOutcome] = {}

    def worker(entry):
        request, gt = entry
        try:
            return _run_one(request, gt, scenes[request.scene_id], config, backend, traces_dir)
        except Exception as e:  # harness-level failure, recorded not raised
            outcome = RequestOutcome(request=request, gt=gt)
            outcome.status = "harness-error"
            outcome.error = f"{type(e).__name__}: {e}"
            return outcome

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for outcome in pool.map(worker, entries):
                outcomes[outcome.request.request_id] = outcome
    else:
        for entry in entries:
            outcome = worker(entry)
            outcomes[outcome.request.request_id] = outcome

    if judge is not None:
        _apply_judge(outcomes, judge)

    report = _assemble_report(outcomes)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        report.write(out_dir / "report.json")
        (out_dir / "summary.txt").write_text(format_summary(report) + "\n")
    return report


def _apply_judge(outcomes: dict[str, RequestOutcome], judge: LlmBackend) -> None:
    for outcome in outcomes.values():
        if outcome.request.rtype not in rq.QA_TYPES or outcome.answer is None:
            continue
        try:
            outcome.judged = M.gpt_score(
                outcome.answer, outcome.gt.gt_answer, outcome.request.text, judge
            )
        except BackendUnreachable:
            # Judge down: omit the metric, keep the run going.
            for o in outcomes.values():
                o.judged = None
            return


def _rate(values: list[bool]) -> float | None:
    return sum(values) / len(values) if values else None


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _assemble_report(outcomes: dict[str, RequestOutcome]) -> EvalReport:
    ordered = [outcomes[rid] for rid in sorted(outcomes)]
    report = EvalReport()
    report.harness_errors = sum(1 for o in ordered if o.status == "harness-error")

    predictions = {
        o.request.request_id: (o.plan.tool_ids() if o.plan is not None else None)
        for o in ordered
    }
    ground_truth = {o.request.request_id: o.gt.gt_plan for o in ordered}
    plan_m = M.plan_metrics(predictions, ground_truth)

    exact_flags = [o.correct for o in ordered if o.correct is not None]
    judged_flags = [o.judged for o in ordered if o.judged is not None]
    mious = [o.miou for o in ordered if o.miou is not None]
    ap50s = [o.ap50 for o in ordered if o.ap50 is not None]

    summary = {
        "total_requests": plan_m.total,
        "vr": plan_m.valid_rate,
        "precision": plan_m.precision,
        "recall": plan_m.recall,
        "exact": _rate(exact_flags),
    }
    if judged_flags:
        summary["gpt_score"] = _rate(judged_flags)
    if mious:
        summary["miou"] = _mean(mious)
    if ap50s:
        summary["ap50"] = _mean(ap50s)
    report.summary = summary

    for rtype in rq.REQUEST_TYPES:
        group = [o for o in ordered if o.request.rtype == rtype]
        if not group:
            continue
        entry: dict = {"count": len(group)}
        if rtype in rq.QA_TYPES:
            entry["exact"] = _rate([o.correct for o in group if o.correct is not None])
        elif rtype == rq.SEGMENT:
            entry["miou"] = _mean([o.miou for o in group if o.miou is not None])
        elif rtype == rq.DETECT:
            entry["ap50"] = _mean([o.ap50 for o in group if o.ap50 is not None])
        report.per_type[rtype] = entry

    report.per_request = [
        {
            "request_id": o.request.request_id,
            "type": o.request.rtype,
            "valid_plan": o.plan is not None,
            "answer": o.answer,
            "gt_answer": o.gt.gt_answer,
            "correct": o.correct,
            "status": o.status,
            **({"error": o.error} if o.error else {}),
        }
        for o in ordered
    ]
    return report


def format_summary(report: EvalReport) -> str:
    """Human-readable summary table."""

    def fmt(value) -> str:
        return "n/a" if value is None else f"{value:.4f}"

    s = report.summary
    lines = [
        f"requests: {s.get('total_requests', 0)}",
        "",
        "planning:",
        f"  valid rate  {fmt(s.get('vr'))}",
        f"  precision   {fmt(s.get('precision'))}",
        f"  recall      {fmt(s.get('recall'))}",
    ]
    if "miou" in s or "ap50" in s:
        lines.append("perception:")
        if "miou" in s:
            lines.append(f"  miou        {fmt(s.get('miou'))}")
        if "ap50" in s:
            lines.append(f"  ap50        {fmt(s.get('ap50'))}")
    lines.append("recognition:")
    lines.append(f"  exact       {fmt(s.get('exact'))}")
    if "gpt_score" in s:
        lines.append(f"  gpt score   {fmt(s.get('gpt_score'))}")
    lines.append("")
    lines.append("per type:")
    for rtype, entry in report.per_type.items():
        detail = ", ".join(
            f"{k} {fmt(v)}" for k, v in entry.items() if k != "count"
        )
        lines.append(f"  {rtype:<14} n={entry['count']:<4} {detail}")
    return "\n".join(lines)
