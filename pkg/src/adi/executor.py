"""Plan execution: resolve inputs, invoke tools in order, record a trace.

The resource store is a write-once map seeded with "input_image"; each
action reads stored resources (or inline literals), runs its tool, and
stores its outputs for later actions. A tool failure marks the trace
failed-at that action and skips the rest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import requests_io as rq
from . import tools
from .categories import category_lookup
from .errors import (
    AdiError,
    KindMismatch,
    LiteralParseError,
    ResourceMissing,
    ToolError,
    UnknownCategory,
)
from .llm import LlmBackend
from .pathfinding import PathResult
from .planning import INPUT_IMAGE, Plan, parse_points
from .pgm import write_pgm
from .scene import DetectionSet, MaskSet, Scene

STATUS_COMPLETED = "completed"
STATUS_FAILED = "failed"

_RESOURCE_TYPES = {
    "image": Scene,
    "detections": DetectionSet,
    "masks": MaskSet,
    "number": (int, float),
    "boolean": bool,
    "path": PathResult,
    "text": str,
}


@dataclass
class ToolConfig:
    score_threshold: float = 0.0  # oracle scores are exact; adapters use 0.5
    snap_radius: int = 10
    summary_temperature: float = 0.7


class ResourceStore:
    """Write-once map from identifier to intermediate result."""

    def __init__(self, scene: Scene):
        self._values: dict[str, object] = {INPUT_IMAGE: scene}

    def __contains__(self, key: str) -> bool:
        return key in self._values

    def __len__(self) -> int:
        return len(self._values)

    def get(self, key: str):
        if key not in self._values:
            raise ResourceMissing(f"no resource {key!r}")
        return self._values[key]

    def put(self, key: str, value: object) -> None:
        if key in self._values:
            raise ResourceMissing(f"resource {key!r} already defined")
        self._values[key] = value

    def items(self):
        return self._values.items()


@dataclass
class ExecutionTrace:
    records: list[tools.ActionRecord] = field(default_factory=list)
    final_answer: str | None = None
    status: str = STATUS_COMPLETED
    failed_at: int | None = None
    error: str | None = None
    store: ResourceStore | None = None

    @property
    def completed(self) -> bool:
        return self.status == STATUS_COMPLETED


def resolve_input(token: str, store: ResourceStore, expected_kind: str):
    """A token is the stored resource it names, else a literal of the
    expected kind."""
    if not token:
        raise LiteralParseError("empty input token")
    if token in store:
        value = store.get(token)
        expected = _RESOURCE_TYPES.get(expected_kind)
        if expected is not None and not isinstance(value, expected):
            raise KindMismatch(
                f"{token!r} holds {type(value).__name__}, expected {expected_kind}"
            )
        return value
    if expected_kind == "category":
        try:
            return category_lookup(token).name
        except UnknownCategory as e:
            raise LiteralParseError(str(e))
    if expected_kind == "points":
        return parse_points(token)
    raise ResourceMissing(f"no resource {token!r} for {expected_kind} input")


def execute_plan(
    plan: Plan,
    scene: Scene,
    request: rq.Request,
    backend: LlmBackend | None = None,
    config: ToolConfig | None = None,
) -> ExecutionTrace:
    """Run a validated plan against a scene, strictly in order.

    Perception-only plans complete with a fixed acknowledgment answer;
    plans ending in summarize answer with its output; any other completed
    plan carries no final answer and is scored incorrect downstream.
    """
    config = config or ToolConfig()
    registry = {spec.tool_id: spec for spec in tools.build_registry()}
    store = ResourceStore(scene)
    trace = ExecutionTrace(store=store)

    for index, action in enumerate(plan.actions):
        spec = registry.get(action.tool)
        try:
            if spec is None:
                raise KindMismatch(f"unknown tool {action.tool!r}")
            resolved = [
                resolve_input(token, store, kind)
                for token, kind in zip(action.inputs, spec.input_kinds)
            ]
            value = _dispatch(action.tool, resolved, scene, request, trace.records, backend, config)
        except AdiError as e:
            trace.status = STATUS_FAILED
            trace.failed_at = index
            trace.error = str(ToolError(action.tool, e)) if not isinstance(e, ToolError) else str(e)
            return trace
        record = tools.ActionRecord(
            tool=action.tool,
            inputs=[_input_summary(t, store) for t in action.inputs],
            outputs=list(action.outputs),
            summary=tools.summarize_value(value),
            value=value,
        )
        trace.records.append(record)
        for out in action.outputs:
            store.put(out, value)

    executed = plan.tool_ids()
    if executed and executed[-1] == tools.SUMMARIZE:
        trace.final_answer = trace.records[-1].value
    elif executed and all(t in (tools.OBJECT_DETECTION, tools.SEMANTIC_SEGMENTATION) for t in executed):
        trace.final_answer = tools.ACK_ANSWER
    return trace


def _dispatch(tool_id, resolved, scene, request, records, backend, config):
    if tool_id == tools.OBJECT_DETECTION:
        return tools.run_detection(resolved[0], config.score_threshold)
    if tool_id == tools.SEMANTIC_SEGMENTATION:
        return tools.run_segmentation(resolved[0])
    if tool_id == tools.COUNT_OBJECTS:
        return tools.count_objects(resolved[0], resolved[1])
    if tool_id == tools.COMPUTE_AREA:
        return tools.compute_area(resolved[0], resolved[1], scene.gsd)
    if tool_id == tools.FIND_PATH:
        start, dest = resolved[1]
        return tools.find_path(resolved[0], start, dest, scene.gsd, config.snap_radius)
    if tool_id == tools.SUMMARIZE:
        return tools.summarize(request, records, backend, config.summary_temperature)
    raise KindMismatch(f"unknown tool {tool_id!r}")


def _input_summary(token: str, store: ResourceStore) -> str:
    if token in store:
        return f"{token}={tools.summarize_value(store.get(token))}"
    return token


def write_trace(
    trace: ExecutionTrace, request: rq.Request, plan: Plan, out_dir: str | Path
) -> Path:
    """Serialize a trace as JSON; mask artifacts go beside it as PGM files
    and detection artifacts as JSON."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, str] = {}
    if trace.store is not None:
        for res_id, value in trace.store.items():
            if isinstance(value, MaskSet):
                name = f"{request.request_id}_{res_id}.pgm"
                write_pgm(out_dir / name, value.to_id_mask())
                artifacts[res_id] = name
            elif isinstance(value, DetectionSet):
                name = f"{request.request_id}_{res_id}.json"
                (out_dir / name).write_text(
                    json.dumps(value.to_json_obj(), indent=2, sort_keys=True) + "\n"
                )
                artifacts[res_id] = name
    obj = {
        "request_id": request.request_id,
        "plan": plan.to_json_obj(),
        "records": [r.to_json_obj() for r in trace.records],
        "final_answer": trace.final_answer,
        "status": trace.status,
    }
    if trace.status == STATUS_FAILED:
        obj["failed_at"] = trace.failed_at
        obj["error"] = trace.error
    if artifacts:
        obj["artifacts"] = artifacts
    path = out_dir / f"{request.request_id}.json"
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path
