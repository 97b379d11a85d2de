"""Plan generation: LLM-backed with recovery and repair, or rule-based.

The LLM path builds a five-part prompt, recovers the trailing JSON array
from the completion, repairs near-miss identifiers by edit distance, and
retries at increasing temperature until a valid plan emerges or attempts
run out. The rule-based path maps each request type to its canonical plan
and needs no model at all.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from . import requests_io as rq
from .editdist import closest_match
from .errors import (
    EmptyPlanAfterRepair,
    LiteralParseError,
    NoJsonFound,
    NotAnArray,
)
from .llm import LlmBackend
from .scene import Scene
from .tools import (
    COMPUTE_AREA,
    COUNT_OBJECTS,
    FIND_PATH,
    LITERAL_KINDS,
    OBJECT_DETECTION,
    SEMANTIC_SEGMENTATION,
    SUMMARIZE,
    ToolSpec,
    build_registry,
)

INPUT_IMAGE = "input_image"

_POINTS_RE = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*;\s*(-?\d+)\s*,\s*(-?\d+)\s*$")


def format_points(endpoints: tuple[tuple[int, int], tuple[int, int]]) -> str:
    (x1, y1), (x2, y2) = endpoints
    return f"{x1},{y1};{x2},{y2}"


def parse_points(token: str) -> tuple[tuple[int, int], tuple[int, int]]:
    m = _POINTS_RE.match(token)
    if not m:
        raise LiteralParseError(f"expected 'x,y;x,y', got {token!r}")
    x1, y1, x2, y2 = (int(g) for g in m.groups())
    return ((x1, y1), (x2, y2))


@dataclass
class Action:
    tool: str
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {"tool": self.tool, "inputs": list(self.inputs), "outputs": list(self.outputs)}


@dataclass
class Plan:
    actions: list[Action] = field(default_factory=list)

    def tool_ids(self) -> list[str]:
        return [a.tool for a in self.actions]

    def to_json_obj(self) -> list[dict]:
        return [a.to_json_obj() for a in self.actions]


@dataclass
class PlannerConfig:
    initial_temperature: float = 0.7
    temperature_step: float = 0.1
    max_temperature: float = 1.2
    max_attempts: int = 5
    repair_distance_threshold: int = 8

    def validate(self) -> None:
        if not (0.0 <= self.initial_temperature <= self.max_temperature):
            raise ValueError("need 0 <= initial_temperature <= max_temperature")
        if self.temperature_step < 0:
            raise ValueError("temperature_step must be >= 0")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.repair_distance_threshold < 0:
            raise ValueError("repair_distance_threshold must be >= 0")


@dataclass(frozen=True)
class RepairEntry:
    kind: str  # typo | hallucination | input_typo | input_dropped | malformed
    action_index: int
    original: str
    replacement: str | None = None


RepairLog = list


def build_plan_prompt(request: rq.Request, scene: Scene, registry: list[ToolSpec]) -> str:
    """Planner prompt: task definition, format constraints, tool
    descriptions, input descriptions, then the verbatim request last."""
    if not registry:
        raise ValueError("registry must be non-empty")
    lines = [
        "Task Definition:",
        "You are a planning agent for disaster-scene interpretation. Create an "
        "action plan that fulfills the user request using the available tools.",
        "",
        "Format Constraints:",
        "Respond with an array of JSON objects, one per action. Each object has "
        'the keys "tool" (the tool id), "inputs" (a list of resource ids or '
        'literal values) and "outputs" (a list of fresh identifiers that later '
        "actions may reference). Put the JSON array at the very end of your reply.",
        "",
        "Tool Descriptions:",
    ]
    for spec in registry:
        ins = ", ".join(spec.input_kinds) if spec.input_kinds else "none"
        outs = ", ".join(spec.output_kinds) if spec.output_kinds else "none"
        lines.append(
            f"- {spec.tool_id}: {spec.description} "
            f"Inputs ({spec.input_arity}): {ins}. Outputs ({len(spec.output_kinds)}): {outs}."
        )
    lines += [
        "",
        "Input Descriptions:",
        f'The scene image is available under the identifier "{INPUT_IMAGE}" '
        f"with a resolution of {scene.width}x{scene.height} pixels.",
        "",
        "User Request:",
        request.text,
    ]
    return "\n".join(lines)


def _strip_fences(text: str) -> str:
    text = text.rstrip()
    while text.endswith("```"):
        text = text[:-3].rstrip()
    return text


def extract_trailing_json(text: str):
    """Parse of the longest valid JSON suffix of `text`.

    Trailing whitespace and closing code fences are ignored. The scan
    starts with the whole string and moves the window start forward one
    character at a time, so the first parse that succeeds is the longest.
    Raises NoJsonFound when no suffix parses.
    """
    text = _strip_fences(text)
    for start in range(len(text)):
        candidate = text[start:]
        try:
            return json.loads(candidate)
        except ValueError:
            continue
    raise NoJsonFound("no JSON value found at the end of the reply")


def validate_and_repair_plan(
    raw,
    registry: list[ToolSpec],
    initial_resources: set[str] | None = None,
    distance_threshold: int = 8,
) -> tuple[Plan, RepairLog]:
    """Turn a parsed LLM reply into a valid Plan, repairing what it can.

    Tool ids (lower-cased) within `distance_threshold` edits of a registry
    id are rewritten to the closest one (ties: registry order); farther ids
    are hallucinations and the action is dropped. Resource inputs are
    repaired the same way against the ids defined so far. Malformed actions
    are dropped and logged.
    """
    if not isinstance(raw, list):
        raise NotAnArray(f"plan must be a JSON array, got {type(raw).__name__}")
    by_id = {spec.tool_id: spec for spec in registry}
    registry_ids = [spec.tool_id for spec in registry]
    # Sorted so candidate order (and therefore tie-breaking) does not depend
    # on set iteration order, which varies with hash randomization.
    defined = [INPUT_IMAGE] if initial_resources is None else sorted(initial_resources)
    log: RepairLog = []
    actions: list[Action] = []

    for index, entry in enumerate(raw):
        if not isinstance(entry, dict) or not isinstance(entry.get("tool"), str):
            log.append(RepairEntry("malformed", index, repr(entry)[:80]))
            continue
        tool = entry["tool"].strip().lower()
        inputs = _string_list(entry.get("inputs", []))
        outputs = _string_list(entry.get("outputs", []))
        if inputs is None or outputs is None:
            log.append(RepairEntry("malformed", index, tool))
            continue

        if tool not in by_id:
            match, distance = closest_match(tool, registry_ids)
            if distance < distance_threshold:
                log.append(RepairEntry("typo", index, tool, match))
                tool = match
            else:
                log.append(RepairEntry("hallucination", index, tool))
                continue
        spec = by_id[tool]

        if len(inputs) != spec.input_arity or len(outputs) != len(spec.output_kinds):
            log.append(RepairEntry("malformed", index, tool))
            continue

        ok = True
        for pos, kind in enumerate(spec.input_kinds):
            if kind in LITERAL_KINDS:
                continue
            token = inputs[pos]
            if token in defined:
                continue
            if defined:
                match, distance = closest_match(token, defined)
                if distance < distance_threshold:
                    log.append(RepairEntry("input_typo", index, token, match))
                    inputs[pos] = match
                    continue
            log.append(RepairEntry("input_dropped", index, token))
            ok = False
            break
        if not ok:
            continue

        if any(out in defined or not out for out in outputs) or len(set(outputs)) != len(outputs):
            log.append(RepairEntry("malformed", index, tool))
            continue

        actions.append(Action(tool, inputs, outputs))
        defined.extend(outputs)

    if not actions:
        raise EmptyPlanAfterRepair("no actions survived validation and repair")
    return Plan(actions), log


def _string_list(value) -> list[str] | None:
    if not isinstance(value, list):
        return None
    out = []
    for v in value:
        if isinstance(v, str):
            out.append(v)
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            out.append(str(v))
        else:
            return None
    return out


def generate_plan(
    request: rq.Request,
    scene: Scene,
    backend: LlmBackend,
    config: PlannerConfig | None = None,
    registry: list[ToolSpec] | None = None,
) -> Plan | None:
    """LLM planning loop; returns None (an invalid plan, counted against
    the valid rate) once every attempt fails.

    Temperature starts at the configured initial value and rises by one
    step per failed attempt, capped at the maximum. Backend network errors
    propagate as BackendUnreachable rather than counting as invalid.
    """
    config = config or PlannerConfig()
    config.validate()
    registry = registry or build_registry()
    prompt = build_plan_prompt(request, scene, registry)
    for attempt in range(config.max_attempts):
        temperature = min(
            config.initial_temperature + attempt * config.temperature_step,
            config.max_temperature,
        )
        reply = backend.complete(prompt, temperature)
        try:
            raw = extract_trailing_json(reply)
            plan, _ = validate_and_repair_plan(
                raw,
                registry,
                initial_resources={INPUT_IMAGE},
                distance_threshold=config.repair_distance_threshold,
            )
            return plan
        except (NoJsonFound, NotAnArray, EmptyPlanAfterRepair):
            continue
    return None


def canonical_tool_sequence(rtype: str) -> list[str]:
    """Ground-truth tool sequence for a request type."""
    if rtype == rq.DETECT:
        return [OBJECT_DETECTION]
    if rtype == rq.SEGMENT:
        return [SEMANTIC_SEGMENTATION]
    if rtype in rq.COUNT_TYPES:
        return [OBJECT_DETECTION, COUNT_OBJECTS, SUMMARIZE]
    if rtype in rq.EXISTENCE_TYPES or rtype in rq.AREA_TYPES:
        return [SEMANTIC_SEGMENTATION, COMPUTE_AREA, SUMMARIZE]
    if rtype == rq.RESCUE_PATH:
        return [SEMANTIC_SEGMENTATION, FIND_PATH, SUMMARIZE]
    raise ValueError(f"unknown request type: {rtype!r}")


def rule_based_plan(request: rq.Request) -> Plan:
    """Canonical executable plan for a typed request; no model involved."""
    rtype = request.rtype
    if rtype == rq.DETECT:
        return Plan([Action(OBJECT_DETECTION, [INPUT_IMAGE], ["det1"])])
    if rtype == rq.SEGMENT:
        return Plan([Action(SEMANTIC_SEGMENTATION, [INPUT_IMAGE], ["seg1"])])
    if rtype in rq.COUNT_TYPES:
        return Plan(
            [
                Action(OBJECT_DETECTION, [INPUT_IMAGE], ["det1"]),
                Action(COUNT_OBJECTS, ["det1", request.target_category], ["count1"]),
                Action(SUMMARIZE, ["count1"], ["answer"]),
            ]
        )
    if rtype in rq.EXISTENCE_TYPES or rtype in rq.AREA_TYPES:
        return Plan(
            [
                Action(SEMANTIC_SEGMENTATION, [INPUT_IMAGE], ["seg1"]),
                Action(COMPUTE_AREA, ["seg1", request.target_category], ["area1"]),
                Action(SUMMARIZE, ["area1"], ["answer"]),
            ]
        )
    if rtype == rq.RESCUE_PATH:
        return Plan(
            [
                Action(SEMANTIC_SEGMENTATION, [INPUT_IMAGE], ["seg1"]),
                Action(FIND_PATH, ["seg1", format_points(request.endpoints)], ["path1"]),
                Action(SUMMARIZE, ["path1"], ["answer"]),
            ]
        )
    raise ValueError(f"unknown request type: {rtype!r}")
