"""Scene model and the on-disk exchange format.

A scene is a raster mask of category ids plus a set of ground-truth (or
model-exported) detections, tied together by a JSON manifest:

    {"scene_id": ..., "width": ..., "height": ..., "gsd_m_per_px": ...,
     "mask": "mask.pgm", "detections": "detections.json"}

Paths in the manifest are relative to the manifest's directory. Pixel
coordinates use origin top-left, x rightward, y downward; bboxes are
half-open [x1, x2) x [y1, y2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import categories
from .errors import (
    DimensionMismatch,
    MalformedManifest,
    MissingFile,
    UnknownCategory,
    UnknownCategoryId,
)
from .pgm import read_pgm, write_pgm


@dataclass(frozen=True)
class Detection:
    category_id: int
    bbox: tuple[float, float, float, float]  # x1, y1, x2, y2
    score: float

    @property
    def category_name(self) -> str:
        return categories.category_lookup(self.category_id).name


@dataclass
class DetectionSet:
    items: list[Detection] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.items)

    def for_category(self, name: str) -> list[Detection]:
        cid = categories.category_lookup(name).id
        return [d for d in self.items if d.category_id == cid]

    def to_json_obj(self) -> list[dict]:
        return [
            {
                "category": d.category_name,
                "bbox": [float(v) for v in d.bbox],
                "score": float(d.score),
            }
            for d in self.items
        ]

    @classmethod
    def from_json_obj(cls, obj) -> "DetectionSet":
        if not isinstance(obj, list):
            raise MalformedManifest("detections file must hold a JSON array")
        items = []
        for i, entry in enumerate(obj):
            if not isinstance(entry, dict):
                raise MalformedManifest(f"detection {i} is not an object")
            try:
                cat = entry["category"]
                bbox = entry["bbox"]
                score = entry["score"]
            except KeyError as e:
                raise MalformedManifest(f"detection {i} missing key {e}")
            try:
                cid = categories.category_lookup(str(cat)).id
            except UnknownCategory:
                raise UnknownCategoryId(f"detection {i}: unknown category {cat!r}")
            if not (isinstance(bbox, list) and len(bbox) == 4):
                raise MalformedManifest(f"detection {i}: bbox must be [x1,y1,x2,y2]")
            items.append(
                Detection(cid, tuple(float(v) for v in bbox), float(score))
            )
        return cls(items)


class MaskSet:
    """Per-category binary masks keyed by category name.

    Foreground masks derived from one id mask are pairwise disjoint and,
    together with background, cover every pixel exactly once.
    """

    def __init__(self, masks: dict[str, np.ndarray], width: int, height: int):
        self.masks = masks
        self.width = width
        self.height = height

    def __contains__(self, name: str) -> bool:
        return name in self.masks

    def category_names(self) -> list[str]:
        return sorted(self.masks)

    def get(self, name: str) -> np.ndarray | None:
        return self.masks.get(name)

    def pixel_count(self, name: str) -> int:
        mask = self.masks.get(name)
        return 0 if mask is None else int(np.count_nonzero(mask))

    @classmethod
    def from_id_mask(cls, id_mask: np.ndarray) -> "MaskSet":
        """Split a category-id raster into binary masks, omitting empty ones."""
        masks: dict[str, np.ndarray] = {}
        for cid in np.unique(id_mask):
            info = categories.category_lookup(int(cid))
            if info.kind == categories.KIND_BACKGROUND:
                continue
            masks[info.name] = id_mask == cid
        height, width = id_mask.shape
        return cls(masks, width, height)

    def to_id_mask(self) -> np.ndarray:
        out = np.zeros((self.height, self.width), dtype=np.uint8)
        for name, mask in self.masks.items():
            out[mask] = categories.category_lookup(name).id
        return out


@dataclass
class Scene:
    scene_id: str
    width: int
    height: int
    gsd: float  # meters per pixel
    mask: np.ndarray | None = None
    detections: DetectionSet | None = None
    mask_path: Path | None = None
    detections_path: Path | None = None


@dataclass(frozen=True)
class Finding:
    code: str
    detail: str


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, code: str, detail: str) -> None:
        self.findings.append(Finding(code, detail))


def load_scene(manifest_path: str | Path) -> Scene:
    """Load and validate a scene from its manifest.

    Raises MissingFile, MalformedManifest, DimensionMismatch, or
    UnknownCategoryId; anything loaded successfully satisfies the hard
    invariants (positive finite gsd, matching mask dimensions, known ids).
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise MissingFile(f"no such manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text())
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedManifest(f"{manifest_path}: {e}")
    if not isinstance(manifest, dict):
        raise MalformedManifest(f"{manifest_path}: manifest must be a JSON object")

    for key in ("scene_id", "width", "height", "gsd_m_per_px", "mask", "detections"):
        if key not in manifest:
            raise MalformedManifest(f"{manifest_path}: missing key {key!r}")

    try:
        width = int(manifest["width"])
        height = int(manifest["height"])
        gsd = float(manifest["gsd_m_per_px"])
    except (TypeError, ValueError) as e:
        raise MalformedManifest(f"{manifest_path}: {e}")
    if width <= 0 or height <= 0:
        raise MalformedManifest(f"{manifest_path}: non-positive dimensions")
    if not (math.isfinite(gsd) and gsd > 0):
        raise MalformedManifest(f"{manifest_path}: gsd must be finite and > 0")

    base = manifest_path.parent
    mask_path = base / str(manifest["mask"])
    detections_path = base / str(manifest["detections"])

    mask = read_pgm(mask_path)
    if mask.shape != (height, width):
        raise DimensionMismatch(
            f"{mask_path}: mask is {mask.shape[1]}x{mask.shape[0]}, "
            f"manifest says {width}x{height}"
        )
    bad = np.unique(mask[mask > categories.MAX_CATEGORY_ID])
    if bad.size:
        raise UnknownCategoryId(f"{mask_path}: unknown category ids {bad.tolist()}")

    if not detections_path.is_file():
        raise MissingFile(f"no such detections file: {detections_path}")
    try:
        det_obj = json.loads(detections_path.read_text())
    except (ValueError, UnicodeDecodeError) as e:
        raise MalformedManifest(f"{detections_path}: {e}")
    detections = DetectionSet.from_json_obj(det_obj)
    for i, det in enumerate(detections.items):
        if det.category_id == 0:
            raise UnknownCategoryId(f"detection {i}: background is not a detectable category")

    return Scene(
        scene_id=str(manifest["scene_id"]),
        width=width,
        height=height,
        gsd=gsd,
        mask=mask,
        detections=detections,
        mask_path=mask_path,
        detections_path=detections_path,
    )


def validate_scene(scene: Scene) -> ValidationReport:
    """Check every scene invariant, collecting findings instead of raising."""
    report = ValidationReport()
    if not (math.isfinite(scene.gsd) and scene.gsd > 0):
        report.add("bad gsd", f"gsd must be finite and > 0, got {scene.gsd}")
    if scene.width <= 0 or scene.height <= 0:
        report.add("bad dimensions", f"{scene.width}x{scene.height}")

    if scene.mask is None:
        report.add("missing mask", "scene has no mask loaded")
    else:
        if scene.mask.shape != (scene.height, scene.width):
            report.add(
                "dimension mismatch",
                f"mask is {scene.mask.shape[1]}x{scene.mask.shape[0]}, "
                f"scene says {scene.width}x{scene.height}",
            )
        for cid in np.unique(scene.mask):
            if not categories.is_valid_id(int(cid)):
                report.add("unknown category id", f"mask pixel value {int(cid)}")

    if scene.detections is None:
        report.add("missing detections", "scene has no detections loaded")
    else:
        for i, det in enumerate(scene.detections.items):
            if not categories.is_valid_id(det.category_id) or det.category_id == 0:
                report.add("unknown category id", f"detection {i}: id {det.category_id}")
            x1, y1, x2, y2 = det.bbox
            if not (x1 < x2 and y1 < y2):
                report.add("degenerate bbox", f"detection {i}: {det.bbox}")
            if x1 < 0 or y1 < 0 or x2 > scene.width or y2 > scene.height:
                report.add("bbox out of bounds", f"detection {i}: {det.bbox}")
            if not (0.0 <= det.score <= 1.0):
                report.add("bad score", f"detection {i}: {det.score}")
    return report


def write_scene(scene: Scene, out_dir: str | Path) -> Path:
    """Write manifest + mask + detections; returns the manifest path.

    load_scene(write_scene(s)) reproduces every field byte-exactly.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if scene.mask is None or scene.detections is None:
        raise ValueError("scene must have mask and detections to be written")
    write_pgm(out_dir / "mask.pgm", scene.mask)
    (out_dir / "detections.json").write_text(
        json.dumps(scene.detections.to_json_obj(), indent=2, sort_keys=True) + "\n"
    )
    manifest = {
        "scene_id": scene.scene_id,
        "width": scene.width,
        "height": scene.height,
        "gsd_m_per_px": scene.gsd,
        "mask": "mask.pgm",
        "detections": "detections.json",
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest_path
