"""Deterministic synthetic scenes, requests, and ground truth.

Scenes are built from a seeded RNG: road corridors (with randomly blocked
segments) first, then non-overlapping rectangle and disc instances per
category. Every placement is recorded in a ledger, detections carry one
box per instance at score 1.0, and ground truth follows the annotation
rules the evaluation assumes: presence from mask non-emptiness, counts
from detections, areas from pixel counts times gsd^2, path reachability
from the clear-road mask.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import requests_io as rq
from .categories import category_lookup
from .errors import PlacementInfeasible
from .pathfinding import find_path
from .planning import canonical_tool_sequence
from .scene import Detection, DetectionSet, Scene, write_scene

ROAD_CLEAR = category_lookup("road_clear").id
ROAD_BLOCKED = category_lookup("road_blocked").id

# (category, shape, min size, max size); sizes are rect sides or disc radii
_RECT = "rect"
_DISC = "disc"
_INSTANCE_SHAPES = {
    "building_no_damage": (_RECT, 8, 14),
    "building_minor_damage": (_RECT, 8, 14),
    "building_major_damage": (_RECT, 8, 14),
    "building_total_destruction": (_RECT, 8, 14),
    "vehicle": (_RECT, 2, 4),
    "pool": (_RECT, 4, 6),
    "tree": (_DISC, 2, 4),
    "water": (_DISC, 5, 9),
}

OBJ_CATEGORIES = ("water", "vehicle", "pool", "tree")
DMG_CATEGORIES = (
    "building_no_damage",
    "building_minor_damage",
    "building_major_damage",
    "building_total_destruction",
)

_REQUEST_TEXTS = {
    rq.DETECT: "Detect all objects in the scene.",
    rq.SEGMENT: "Perform semantic segmentation of the scene.",
    rq.OBJ_EXISTENCE: "Is there any {cat} in the scene?",
    rq.OBJ_COUNT: "How many {cat} objects are in the scene?",
    rq.OBJ_AREA: "What is the total area of {cat} in the scene, in square meters?",
    rq.DMG_EXISTENCE: "Is there any {cat} in the scene?",
    rq.DMG_COUNT: "How many {cat} buildings are in the scene?",
    rq.DMG_AREA: "What is the total area of {cat} in the scene, in square meters?",
    rq.RESCUE_PATH: "Can rescuers travel from ({x1},{y1}) to ({x2},{y2}) along clear roads?",
}


@dataclass
class SynthParams:
    seed: int
    width: int = 96
    height: int = 96
    gsd: float = 0.3
    buildings_per_level: tuple[int, int, int, int] = (1, 1, 1, 1)
    vehicles: int = 3
    trees: int = 4
    pools: int = 1
    water_bodies: int = 1
    road_rows: int = 1
    road_cols: int = 1
    road_width: int = 3
    blocked_prob: float = 0.3
    max_place_attempts: int = 200

    def validate(self) -> None:
        counts = (*self.buildings_per_level, self.vehicles, self.trees,
                  self.pools, self.water_bodies, self.road_rows, self.road_cols)
        if any(c < 0 for c in counts):
            raise ValueError("instance counts must be >= 0")
        if not (0.0 <= self.blocked_prob <= 1.0):
            raise ValueError("blocked_prob must be in [0, 1]")
        if self.width < 32 or self.height < 32:
            raise ValueError("dimensions must be >= 32")
        if self.gsd <= 0:
            raise ValueError("gsd must be > 0")

    def category_counts(self) -> dict[str, int]:
        counts = dict(zip(DMG_CATEGORIES, self.buildings_per_level))
        counts.update(
            vehicle=self.vehicles, tree=self.trees,
            pool=self.pools, water=self.water_bodies,
        )
        return counts


@dataclass
class Placement:
    category: str
    bbox: tuple[int, int, int, int]
    pixels: int


@dataclass
class SceneLedger:
    scene_id: str
    placements: list[Placement] = field(default_factory=list)

    def count(self, category: str) -> int:
        return sum(1 for p in self.placements if p.category == category)

    def to_json_obj(self) -> dict:
        return {
            "scene_id": self.scene_id,
            "placements": [
                {"category": p.category, "bbox": list(p.bbox), "pixels": p.pixels}
                for p in self.placements
            ],
        }


def _draw_roads(canvas: np.ndarray, params: SynthParams, rng: np.random.Generator) -> None:
    height, width = canvas.shape
    w = params.road_width
    rows = [int(rng.integers(8, height - 8 - w)) for _ in range(params.road_rows)]
    cols = [int(rng.integers(8, width - 8 - w)) for _ in range(params.road_cols)]
    for y in rows:
        canvas[y : y + w, :] = ROAD_CLEAR
    for x in cols:
        canvas[:, x : x + w] = ROAD_CLEAR
    # Relabel ~12 px segments along each corridor as blocked.
    seg = 12
    for y in rows:
        for x0 in range(0, width, seg):
            if rng.random() < params.blocked_prob:
                span = canvas[y : y + w, x0 : min(x0 + seg, width)]
                span[span == ROAD_CLEAR] = ROAD_BLOCKED
    for x in cols:
        for y0 in range(0, height, seg):
            if rng.random() < params.blocked_prob:
                span = canvas[y0 : min(y0 + seg, height), x : x + w]
                span[span == ROAD_CLEAR] = ROAD_BLOCKED


def _place_instances(
    canvas: np.ndarray, params: SynthParams, rng: np.random.Generator
) -> list[Placement]:
    height, width = canvas.shape
    placements: list[Placement] = []
    for category, count in params.category_counts().items():
        shape, lo, hi = _INSTANCE_SHAPES[category]
        cid = category_lookup(category).id
        for _ in range(count):
            placed = False
            for _attempt in range(params.max_place_attempts):
                if shape == _RECT:
                    bw = int(rng.integers(lo, hi + 1))
                    bh = int(rng.integers(lo, hi + 1))
                else:
                    r = int(rng.integers(lo, hi + 1))
                    bw = bh = 2 * r + 1
                if width - bw < 2 or height - bh < 2:
                    continue
                x1 = int(rng.integers(1, width - bw))
                y1 = int(rng.integers(1, height - bh))
                x2, y2 = x1 + bw, y1 + bh
                # Expanded box must be empty: keeps instances >= 2 px apart
                # so same-category components never merge, even diagonally.
                if np.any(canvas[y1 - 1 : y2 + 1, x1 - 1 : x2 + 1]):
                    continue
                if shape == _RECT:
                    canvas[y1:y2, x1:x2] = cid
                    pixels = bw * bh
                else:
                    cy, cx = y1 + r, x1 + r
                    ys, xs = np.ogrid[y1:y2, x1:x2]
                    disc = (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r
                    canvas[y1:y2, x1:x2][disc] = cid
                    pixels = int(np.count_nonzero(disc))
                placements.append(Placement(category, (x1, y1, x2, y2), pixels))
                placed = True
                break
            if not placed:
                raise PlacementInfeasible(
                    f"could not place {category} after {params.max_place_attempts} attempts"
                )
    return placements


def synth_scene(params: SynthParams, out_dir: str | Path) -> tuple[Scene, SceneLedger]:
    """Generate one scene deterministically from the seed and write its
    manifest, mask, and detections under `out_dir`."""
    params.validate()
    rng = np.random.default_rng(params.seed)
    canvas = np.zeros((params.height, params.width), dtype=np.uint8)
    _draw_roads(canvas, params, rng)
    placements = _place_instances(canvas, params, rng)

    scene_id = f"scene-{params.seed:04d}"
    detections = DetectionSet(
        [
            Detection(category_lookup(p.category).id, tuple(float(v) for v in p.bbox), 1.0)
            for p in placements
        ]
    )
    scene = Scene(
        scene_id=scene_id,
        width=params.width,
        height=params.height,
        gsd=params.gsd,
        mask=canvas,
        detections=detections,
    )
    manifest_path = write_scene(scene, out_dir)
    scene.mask_path = manifest_path.parent / "mask.pgm"
    scene.detections_path = manifest_path.parent / "detections.json"
    return scene, SceneLedger(scene_id, placements)


def _label_components(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """8-connected component labels (0 = off-mask), BFS flood fill."""
    labels = np.zeros(mask.shape, dtype=np.int32)
    height, width = mask.shape
    current = 0
    for sy in range(height):
        for sx in range(width):
            if not mask[sy, sx] or labels[sy, sx]:
                continue
            current += 1
            queue = deque([(sx, sy)])
            labels[sy, sx] = current
            while queue:
                x, y = queue.popleft()
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        nx, ny = x + dx, y + dy
                        if (
                            0 <= nx < width
                            and 0 <= ny < height
                            and mask[ny, nx]
                            and not labels[ny, nx]
                        ):
                            labels[ny, nx] = current
                            queue.append((nx, ny))
    return labels, current


def _sample_pixel(rng, xs, ys) -> tuple[int, int]:
    i = int(rng.integers(0, len(xs)))
    return int(xs[i]), int(ys[i])


def gen_requests(scene: Scene, seed: int) -> list[rq.Request]:
    """One request per applicable type; path requests need >= 2 clear-road
    pixels, and a second cross-component (unreachable) path request is
    added when the road network is disconnected."""
    rng = np.random.default_rng(seed)
    sid = scene.scene_id
    requests: list[rq.Request] = []

    def add(rtype: str, category: str | None = None, endpoints=None, suffix: str = ""):
        text = _REQUEST_TEXTS[rtype]
        if category is not None:
            text = text.format(cat=category.replace("_", " "))
        if endpoints is not None:
            (x1, y1), (x2, y2) = endpoints
            text = text.format(x1=x1, y1=y1, x2=x2, y2=y2)
        requests.append(
            rq.Request(
                request_id=f"{sid}-{rtype}{suffix}",
                scene_id=sid,
                rtype=rtype,
                text=text,
                target_category=category,
                endpoints=endpoints,
            )
        )

    add(rq.DETECT)
    add(rq.SEGMENT)
    add(rq.OBJ_EXISTENCE, str(rng.choice(OBJ_CATEGORIES)))
    add(rq.OBJ_COUNT, str(rng.choice(("vehicle", "tree", "pool"))))
    add(rq.OBJ_AREA, str(rng.choice(OBJ_CATEGORIES)))
    add(rq.DMG_EXISTENCE, str(rng.choice(DMG_CATEGORIES)))
    add(rq.DMG_COUNT, str(rng.choice(DMG_CATEGORIES)))
    add(rq.DMG_AREA, str(rng.choice(DMG_CATEGORIES)))

    road = scene.mask == ROAD_CLEAR
    if int(np.count_nonzero(road)) >= 2:
        labels, n_components = _label_components(road)
        component = int(rng.integers(1, n_components + 1))
        ys, xs = np.nonzero(labels == component)
        a = _sample_pixel(rng, xs, ys)
        b = _sample_pixel(rng, xs, ys)
        add(rq.RESCUE_PATH, endpoints=(a, b))
        if n_components >= 2:
            other = component % n_components + 1
            oys, oxs = np.nonzero(labels == other)
            c = _sample_pixel(rng, xs, ys)
            d = _sample_pixel(rng, oxs, oys)
            add(rq.RESCUE_PATH, endpoints=(c, d), suffix="-2")
    return requests


def synth_ground_truth(scene: Scene, request: rq.Request) -> rq.GroundTruth:
    """Ground truth from the labels: presence = non-empty mask, count from
    detections, area = pixels * gsd^2, path = A* reachability over clear
    roads."""
    gt_plan = canonical_tool_sequence(request.rtype)
    rtype = request.rtype
    answer: bool | int | float | None = None
    if rtype in rq.EXISTENCE_TYPES:
        cid = category_lookup(request.target_category).id
        answer = bool(np.any(scene.mask == cid))
    elif rtype in rq.COUNT_TYPES:
        answer = len(scene.detections.for_category(request.target_category))
    elif rtype in rq.AREA_TYPES:
        cid = category_lookup(request.target_category).id
        pixels = int(np.count_nonzero(scene.mask == cid))
        answer = pixels * scene.gsd * scene.gsd
    elif rtype == rq.RESCUE_PATH:
        road = scene.mask == ROAD_CLEAR
        start, dest = request.endpoints
        answer = find_path(road, start, dest, scene.gsd).reachable
    return rq.GroundTruth(gt_plan=list(gt_plan), gt_answer=answer)


def _scene_params(seed: int, base: SynthParams) -> SynthParams:
    """Per-scene parameter jitter so a batch covers positives and
    negatives of every category."""
    rng = np.random.default_rng((seed, 0xC0FFEE))
    return SynthParams(
        seed=seed,
        width=base.width,
        height=base.height,
        gsd=round(float(rng.uniform(0.2, 0.6)), 2),
        buildings_per_level=tuple(int(rng.integers(0, 3)) for _ in range(4)),
        vehicles=int(rng.integers(0, 5)),
        trees=int(rng.integers(0, 5)),
        pools=int(rng.integers(0, 3)),
        water_bodies=int(rng.integers(0, 2)),
        road_rows=int(rng.integers(1, 3)),
        road_cols=int(rng.integers(1, 3)),
        road_width=base.road_width,
        blocked_prob=round(float(rng.uniform(0.0, 0.5)), 2),
        max_place_attempts=base.max_place_attempts,
    )


def synth_dataset(
    seeds: int, out_dir: str | Path, base: SynthParams | None = None
) -> dict:
    """Generate a benchmark dataset: scenes/, requests.jsonl, ledger.json.

    Returns summary counts. Identical seeds and base parameters produce
    byte-identical output trees.
    """
    if seeds < 1:
        raise ValueError("seeds must be >= 1")
    base = base or SynthParams(seed=0)
    out_dir = Path(out_dir)
    scenes_dir = out_dir / "scenes"
    scenes_dir.mkdir(parents=True, exist_ok=True)

    entries: list[tuple[rq.Request, rq.GroundTruth]] = []
    ledger: dict[str, dict] = {}
    for seed in range(seeds):
        params = _scene_params(seed, base)
        scene, scene_ledger = synth_scene(params, scenes_dir / f"scene-{seed:04d}")
        ledger[scene.scene_id] = scene_ledger.to_json_obj()
        for request in gen_requests(scene, seed):
            entries.append((request, synth_ground_truth(scene, request)))

    rq.write_requests(out_dir / "requests.jsonl", entries)
    (out_dir / "ledger.json").write_text(
        json.dumps(ledger, indent=2, sort_keys=True) + "\n"
    )
    type_counts: dict[str, int] = {}
    for request, _ in entries:
        type_counts[request.rtype] = type_counts.get(request.rtype, 0) + 1
    return {"scenes": seeds, "requests": len(entries), "types": type_counts}
