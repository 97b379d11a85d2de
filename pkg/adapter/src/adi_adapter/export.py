"""Run inference and export exchange-format files.

Segmentation exports a category-id PGM matching the image dimensions;
detection exports a JSON array of {"category", "bbox", "score"} items
filtered by the configured threshold. A provenance sidecar records the
model id and threshold. validate_export re-checks the orchestrator's
invariants adapter-side so a broken export is caught before hand-off.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .categories import CATEGORY_IDS, is_valid_category, is_valid_id
from .config import AdapterConfig, CategoryMappingError
from .pgm import PgmError, read_pgm, write_pgm
from .stub import InferenceError, load_model

MASK_FILENAME = "mask.pgm"
DETECTIONS_FILENAME = "detections.json"
PROVENANCE_FILENAME = "provenance.json"


@dataclass(frozen=True)
class Finding:
    code: str
    detail: str


def infer_and_export(
    image_path: str | Path, config: AdapterConfig, out_dir: str | Path
) -> dict[str, Path]:
    """Returns the paths written, keyed by role (mask | detections |
    provenance)."""
    config.validate()
    model = load_model(config.checkpoint)
    if model.kind != config.kind:
        raise InferenceError(
            f"config wants a {config.kind} model, checkpoint is {model.kind}"
        )
    image = read_pgm(image_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    paths: dict[str, Path] = {}
    try:
        if config.kind == "segmentation":
            id_mask = np.zeros(image.shape, dtype=np.uint8)
            for model_class, mask in model.infer(image):
                category = config.map_class(model_class)
                id_mask[mask] = CATEGORY_IDS[category]
            paths["mask"] = out_dir / MASK_FILENAME
            write_pgm(paths["mask"], id_mask)
        else:
            items = []
            for model_class, bbox, score in model.infer(image):
                if score < config.score_threshold:
                    continue
                category = config.map_class(model_class)
                if CATEGORY_IDS[category] == 0:
                    continue  # background is not a detectable object
                items.append(
                    {
                        "category": category,
                        "bbox": [float(v) for v in bbox],
                        "score": float(score),
                    }
                )
            paths["detections"] = out_dir / DETECTIONS_FILENAME
            paths["detections"].write_text(json.dumps(items, indent=2, sort_keys=True) + "\n")
    except CategoryMappingError:
        raise
    except Exception as e:
        raise InferenceError(f"{type(e).__name__}: {e}")

    provenance = {
        "model_id": model.model_id,
        "kind": config.kind,
        "score_threshold": config.score_threshold,
        "image": str(image_path),
        "width": int(image.shape[1]),
        "height": int(image.shape[0]),
    }
    paths["provenance"] = out_dir / PROVENANCE_FILENAME
    paths["provenance"].write_text(json.dumps(provenance, indent=2, sort_keys=True) + "\n")
    return paths


def category_pixel_counts(mask_path: str | Path) -> dict[str, int]:
    """Pixel count per (foreground) category name in an exported mask."""
    mask = read_pgm(mask_path)
    counts: dict[str, int] = {}
    for cid in np.unique(mask):
        if int(cid) == 0 or not is_valid_id(int(cid)):
            continue
        name = [n for n, i in CATEGORY_IDS.items() if i == int(cid)][0]
        counts[name] = int(np.count_nonzero(mask == cid))
    return counts


def validate_export(
    mask_path: str | Path | None,
    detections_path: str | Path | None,
    expected_dims: tuple[int, int],
) -> list[Finding]:
    """Invariant checks over exported files; findings are data, not errors.

    expected_dims is (width, height).
    """
    width, height = expected_dims
    findings: list[Finding] = []

    if mask_path is not None:
        try:
            mask = read_pgm(mask_path)
        except PgmError as e:
            findings.append(Finding("unreadable mask", str(e)))
        else:
            if mask.shape != (height, width):
                findings.append(
                    Finding(
                        "dimension mismatch",
                        f"mask is {mask.shape[1]}x{mask.shape[0]}, expected {width}x{height}",
                    )
                )
            for cid in np.unique(mask):
                if not is_valid_id(int(cid)):
                    findings.append(Finding("unknown category id", f"pixel value {int(cid)}"))

    if detections_path is not None:
        try:
            items = json.loads(Path(detections_path).read_text())
        except (OSError, ValueError) as e:
            findings.append(Finding("unreadable detections", str(e)))
            return findings
        if not isinstance(items, list):
            findings.append(Finding("bad detections", "top level must be an array"))
            return findings
        for i, item in enumerate(items):
            if not isinstance(item, dict) or not {"category", "bbox", "score"} <= set(item):
                findings.append(Finding("bad detection item", f"item {i}"))
                continue
            category = item["category"]
            if not is_valid_category(str(category)) or CATEGORY_IDS.get(str(category)) == 0:
                findings.append(Finding("unknown category id", f"item {i}: {category!r}"))
            bbox = item["bbox"]
            if not (isinstance(bbox, list) and len(bbox) == 4):
                findings.append(Finding("bad bbox", f"item {i}: {bbox!r}"))
                continue
            x1, y1, x2, y2 = bbox
            if not (x1 < x2 and y1 < y2):
                findings.append(Finding("degenerate bbox", f"item {i}: {bbox}"))
            if x1 < 0 or y1 < 0 or x2 > width or y2 > height:
                findings.append(Finding("bbox out of bounds", f"item {i}: {bbox}"))
            if not (0.0 <= float(item["score"]) <= 1.0):
                findings.append(Finding("bad score", f"item {i}: {item['score']}"))
    return findings
