"""Typed interpretation requests and their ground truth.

Requests live one-per-line in requests.jsonl:

    {"request_id": ..., "scene_id": ..., "type": ..., "text": ...,
     "target_category"?: ..., "endpoints"?: [[x,y],[x,y]],
     "gt_plan": [...tool ids...], "gt_answer": bool|int|float|null}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MalformedManifest

DETECT = "detect"
SEGMENT = "segment"
OBJ_EXISTENCE = "obj-existence"
OBJ_COUNT = "obj-count"
OBJ_AREA = "obj-area"
DMG_EXISTENCE = "dmg-existence"
DMG_COUNT = "dmg-count"
DMG_AREA = "dmg-area"
RESCUE_PATH = "rescue-path"

REQUEST_TYPES = (
    DETECT,
    SEGMENT,
    OBJ_EXISTENCE,
    OBJ_COUNT,
    OBJ_AREA,
    DMG_EXISTENCE,
    DMG_COUNT,
    DMG_AREA,
    RESCUE_PATH,
)

EXISTENCE_TYPES = (OBJ_EXISTENCE, DMG_EXISTENCE)
COUNT_TYPES = (OBJ_COUNT, DMG_COUNT)
AREA_TYPES = (OBJ_AREA, DMG_AREA)
CATEGORY_TYPES = EXISTENCE_TYPES + COUNT_TYPES + AREA_TYPES
PERCEPTION_TYPES = (DETECT, SEGMENT)
QA_TYPES = CATEGORY_TYPES + (RESCUE_PATH,)

Point = tuple[int, int]


@dataclass
class Request:
    request_id: str
    scene_id: str
    rtype: str
    text: str
    target_category: str | None = None
    endpoints: tuple[Point, Point] | None = None

    def __post_init__(self):
        if self.rtype not in REQUEST_TYPES:
            raise MalformedManifest(f"{self.request_id}: unknown request type {self.rtype!r}")
        if (self.endpoints is not None) != (self.rtype == RESCUE_PATH):
            raise MalformedManifest(
                f"{self.request_id}: endpoints present iff type is {RESCUE_PATH}"
            )
        if self.rtype in CATEGORY_TYPES and not self.target_category:
            raise MalformedManifest(
                f"{self.request_id}: {self.rtype} requires target_category"
            )


@dataclass
class GroundTruth:
    gt_plan: list[str] = field(default_factory=list)
    gt_answer: bool | int | float | None = None


def answer_kind(rtype: str) -> str | None:
    """Ground-truth answer kind for a request type, None for perception-only."""
    if rtype in EXISTENCE_TYPES or rtype == RESCUE_PATH:
        return "boolean"
    if rtype in COUNT_TYPES:
        return "integer"
    if rtype in AREA_TYPES:
        return "real"
    return None


def _request_to_obj(request: Request, gt: GroundTruth) -> dict:
    obj: dict = {
        "request_id": request.request_id,
        "scene_id": request.scene_id,
        "type": request.rtype,
        "text": request.text,
        "gt_plan": list(gt.gt_plan),
        "gt_answer": gt.gt_answer,
    }
    if request.target_category is not None:
        obj["target_category"] = request.target_category
    if request.endpoints is not None:
        obj["endpoints"] = [list(p) for p in request.endpoints]
    return obj


def _request_from_obj(obj: dict) -> tuple[Request, GroundTruth]:
    endpoints = None
    if obj.get("endpoints") is not None:
        eps = obj["endpoints"]
        if not (isinstance(eps, list) and len(eps) == 2):
            raise MalformedManifest(f"bad endpoints: {eps!r}")
        endpoints = ((int(eps[0][0]), int(eps[0][1])), (int(eps[1][0]), int(eps[1][1])))
    request = Request(
        request_id=str(obj["request_id"]),
        scene_id=str(obj["scene_id"]),
        rtype=str(obj["type"]),
        text=str(obj["text"]),
        target_category=obj.get("target_category"),
        endpoints=endpoints,
    )
    gt = GroundTruth(
        gt_plan=[str(t) for t in obj.get("gt_plan", [])],
        gt_answer=obj.get("gt_answer"),
    )
    return request, gt


def write_requests(path: str | Path, entries: list[tuple[Request, GroundTruth]]) -> None:
    lines = [
        json.dumps(_request_to_obj(req, gt), sort_keys=True) for req, gt in entries
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_requests(path: str | Path) -> list[tuple[Request, GroundTruth]]:
    path = Path(path)
    entries = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except ValueError as e:
            raise MalformedManifest(f"{path}:{lineno}: {e}")
        entries.append(_request_from_obj(obj))
    return entries
