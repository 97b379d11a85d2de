"""The six registered tools: perception (detection, segmentation) and
recognition (counting, area, pathfinding, summarization).

All tools are pure functions of their inputs; the LLM-backed summarizer is
the one exception and inherits whatever thread-safety its backend has.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import requests_io as rq
from .categories import category_lookup
from .editdist import levenshtein
from .errors import KindMismatch, MissingDetections, MissingMask
from .llm import LlmBackend
from .pathfinding import PathResult, SNAP_RADIUS
from .pathfinding import find_path as grid_find_path
from .scene import DetectionSet, MaskSet, Scene

OBJECT_DETECTION = "object_detection"
SEMANTIC_SEGMENTATION = "semantic_segmentation"
COUNT_OBJECTS = "count_objects"
COMPUTE_AREA = "compute_area"
FIND_PATH = "find_path"
SUMMARIZE = "summarize"

TRAVERSABLE_CATEGORY = "road_clear"

# Input/output kinds. "category" and "points" are literals supplied inline
# in the plan; everything else names a stored resource.
LITERAL_KINDS = frozenset({"category", "points"})

MIN_TOOL_ID_DISTANCE = 8  # ids this far apart never cross-correct under repair

ACK_ANSWER = "Task completed; results attached."


@dataclass(frozen=True)
class ToolSpec:
    tool_id: str
    description: str
    input_kinds: tuple[str, ...]
    output_kinds: tuple[str, ...]

    @property
    def input_arity(self) -> int:
        return len(self.input_kinds)


def build_registry() -> list[ToolSpec]:
    """The tool registry shown to the planner.

    Ids are checked to be mutually >= 8 edits apart so a typo within the
    repair threshold can never be corrected to the wrong tool.
    """
    registry = [
        ToolSpec(
            OBJECT_DETECTION,
            "Detect objects in the image, returning category, bounding box and "
            "score for each instance.",
            ("image",),
            ("detections",),
        ),
        ToolSpec(
            SEMANTIC_SEGMENTATION,
            "Segment the image into per-category binary masks.",
            ("image",),
            ("masks",),
        ),
        ToolSpec(
            COUNT_OBJECTS,
            "Count detected objects of a given category.",
            ("detections", "category"),
            ("number",),
        ),
        ToolSpec(
            COMPUTE_AREA,
            "Compute the ground area in square meters covered by a category's "
            "segmentation mask.",
            ("masks", "category"),
            ("number",),
        ),
        ToolSpec(
            FIND_PATH,
            "Find a traversable route between two pixel coordinates "
            "('x,y;x,y') over the clear-road mask.",
            ("masks", "points"),
            ("path",),
        ),
        ToolSpec(
            SUMMARIZE,
            "Produce the final natural-language answer from a computed result.",
            ("any",),
            ("text",),
        ),
    ]
    ids = [spec.tool_id for spec in registry]
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if levenshtein(a, b) < MIN_TOOL_ID_DISTANCE:
                raise ValueError(
                    f"tool ids {a!r} and {b!r} closer than {MIN_TOOL_ID_DISTANCE} edits"
                )
    return registry


@dataclass
class ActionRecord:
    """One executed action: tool, resolved inputs, and a result summary.

    Numbers and booleans are recorded verbatim in the summary; large
    artifacts (masks, detection sets) are summarized by shape. `value`
    keeps the raw result in memory and is not serialized.
    """

    tool: str
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    summary: str = ""
    value: object = None

    def to_json_obj(self) -> dict:
        return {
            "tool": self.tool,
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "summary": self.summary,
        }


def summarize_value(value: object) -> str:
    if isinstance(value, MaskSet):
        return f"MaskSet({len(value.masks)} categories, {value.width}x{value.height})"
    if isinstance(value, DetectionSet):
        return f"DetectionSet({len(value)} items)"
    if isinstance(value, PathResult):
        if value.reachable:
            return f"PathResult(reachable, length {value.length_m:.2f} m)"
        return "PathResult(unreachable)"
    if isinstance(value, Scene):
        return f"Image({value.width}x{value.height})"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def run_detection(scene: Scene, score_threshold: float = 0.0) -> DetectionSet:
    """Detections for the scene, filtered by score >= threshold.

    In oracle mode the scene's detection file is the ground truth; in
    adapter mode it is whatever the adapter exported. Either way the file
    already sits behind the scene, so this is a pure filter.
    """
    if scene.detections is None:
        raise MissingDetections(f"scene {scene.scene_id} has no detections")
    items = [d for d in scene.detections.items if d.score >= score_threshold]
    return DetectionSet(items)


def run_segmentation(scene: Scene) -> MaskSet:
    """Per-category binary masks from the scene's id mask; empty categories
    are omitted."""
    if scene.mask is None:
        raise MissingMask(f"scene {scene.scene_id} has no mask")
    return MaskSet.from_id_mask(scene.mask)


def count_objects(dets: DetectionSet, category: str) -> int:
    """Number of detections whose category matches; no spatial dedup."""
    info = category_lookup(category)
    if info.id == 0:
        raise KindMismatch("background is not countable")
    return sum(1 for d in dets.items if d.category_id == info.id)


def compute_area(masks: MaskSet, category: str, gsd: float) -> float:
    """Ground area of a category's mask: set-pixel count * gsd^2 (m^2)."""
    info = category_lookup(category)
    return masks.pixel_count(info.name) * gsd * gsd


def find_path(
    masks: MaskSet,
    start: tuple[int, int],
    dest: tuple[int, int],
    gsd: float,
    snap_radius: int = SNAP_RADIUS,
) -> PathResult:
    """Route between two points over the clear-road mask.

    Blocked roads are not traversable; endpoints within `snap_radius`
    (Chebyshev) of the mask are snapped onto it.
    """
    traversable = masks.get(TRAVERSABLE_CATEGORY)
    if traversable is None:
        traversable = np.zeros((masks.height, masks.width), dtype=bool)
    return grid_find_path(traversable, start, dest, gsd, snap_radius)


def render_template_answer(request: rq.Request, history: list[ActionRecord]) -> str:
    """Deterministic final answer from the action history (no LLM)."""

    def last_value(tool_id: str):
        for record in reversed(history):
            if record.tool == tool_id and record.value is not None:
                return record.value
        raise KindMismatch(f"no {tool_id} result in history for {request.rtype}")

    rtype = request.rtype
    if rtype in rq.EXISTENCE_TYPES:
        return "yes" if last_value(COMPUTE_AREA) > 0 else "no"
    if rtype in rq.COUNT_TYPES:
        return str(int(last_value(COUNT_OBJECTS)))
    if rtype in rq.AREA_TYPES:
        return f"{last_value(COMPUTE_AREA):.2f} square meters"
    if rtype == rq.RESCUE_PATH:
        result = last_value(FIND_PATH)
        if not isinstance(result, PathResult):
            raise KindMismatch("path request needs a find_path result")
        if result.reachable:
            return f"yes, path length {result.length_m:.2f} meters"
        return "no"
    return ACK_ANSWER


def build_summary_prompt(request: rq.Request, history: list[ActionRecord]) -> str:
    lines = [
        "Task Definition:",
        "You are a disaster-interpretation assistant. Provide a final answer "
        "to the user's request based on the actions already performed.",
        "Answer yes/no questions with 'yes' or 'no'; give counts as a plain "
        "integer and areas as a number of square meters.",
        "",
        "Action History:",
    ]
    for i, record in enumerate(history, 1):
        inputs = ", ".join(record.inputs)
        lines.append(f"{i}. {record.tool}({inputs}) -> {record.summary}")
    lines += ["", "User Request:", request.text]
    return "\n".join(lines)


def summarize(
    request: rq.Request,
    history: list[ActionRecord],
    backend: LlmBackend | None = None,
    temperature: float = 0.0,
) -> str:
    """Final answer for a request: LLM completion when a backend is given,
    otherwise the deterministic template rendering."""
    if backend is None:
        return render_template_answer(request, history)
    return backend.complete(build_summary_prompt(request, history), temperature)
