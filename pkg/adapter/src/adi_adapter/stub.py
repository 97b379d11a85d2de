"""Deterministic stub models.

Real deployments wrap trained segmentation/detection checkpoints here;
the stubs stand in for them so the adapter (and its consumers) can be
exercised with no weights or accelerator. A stub checkpoint is a small
JSON file:

    {"model_id": ..., "kind": "stub-segmentation",
     "bands": [{"lo": 90, "hi": 110, "class": "water_cls"}, ...]}

Band stubs assign every pixel whose gray value falls in [lo, hi] to the
band's class; the detection variant boxes each 8-connected component of a
band and scores it by mean intensity. "stub-fixed-detections" checkpoints
carry their output verbatim.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class CheckpointLoadError(Exception):
    pass


class InferenceError(Exception):
    pass


@dataclass(frozen=True)
class Band:
    lo: int
    hi: int
    model_class: str


def _connected_components(mask: np.ndarray) -> list[tuple[int, int, int, int]]:
    """Bounding boxes (x1, y1, x2, y2), half-open, of 8-connected blobs."""
    height, width = mask.shape
    labels = np.zeros(mask.shape, dtype=np.int32)
    boxes = []
    for sy in range(height):
        for sx in range(width):
            if not mask[sy, sx] or labels[sy, sx]:
                continue
            label = len(boxes) + 1
            labels[sy, sx] = label
            queue = deque([(sx, sy)])
            x1, y1, x2, y2 = sx, sy, sx + 1, sy + 1
            while queue:
                x, y = queue.popleft()
                x1, y1 = min(x1, x), min(y1, y)
                x2, y2 = max(x2, x + 1), max(y2, y + 1)
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        nx, ny = x + dx, y + dy
                        if (
                            0 <= nx < width
                            and 0 <= ny < height
                            and mask[ny, nx]
                            and not labels[ny, nx]
                        ):
                            labels[ny, nx] = label
                            queue.append((nx, ny))
            boxes.append((x1, y1, x2, y2))
    return boxes


class BandSegmentationModel:
    kind = "segmentation"

    def __init__(self, model_id: str, bands: list[Band]):
        self.model_id = model_id
        self.bands = bands

    def infer(self, image: np.ndarray) -> list[tuple[str, np.ndarray]]:
        """(model class, binary mask) per band, in band order."""
        return [
            (band.model_class, (image >= band.lo) & (image <= band.hi))
            for band in self.bands
        ]


class BandDetectionModel:
    kind = "detection"

    def __init__(self, model_id: str, bands: list[Band]):
        self.model_id = model_id
        self.bands = bands

    def infer(self, image: np.ndarray) -> list[tuple[str, tuple, float]]:
        items = []
        for band in self.bands:
            mask = (image >= band.lo) & (image <= band.hi)
            for box in _connected_components(mask):
                x1, y1, x2, y2 = box
                mean = float(image[y1:y2, x1:x2][mask[y1:y2, x1:x2]].mean())
                items.append((band.model_class, box, round(mean / 255.0, 4)))
        return items


class FixedDetectionModel:
    kind = "detection"

    def __init__(self, model_id: str, items: list[dict]):
        self.model_id = model_id
        self.items = items

    def infer(self, image: np.ndarray) -> list[tuple[str, tuple, float]]:
        return [
            (item["class"], tuple(item["bbox"]), float(item["score"]))
            for item in self.items
        ]


def _parse_bands(obj: dict) -> list[Band]:
    bands = []
    for entry in obj.get("bands", []):
        try:
            bands.append(Band(int(entry["lo"]), int(entry["hi"]), str(entry["class"])))
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointLoadError(f"bad band entry {entry!r}: {e}")
    return bands


def load_model(checkpoint_path: str | Path):
    """Instantiate the model a checkpoint file describes."""
    path = Path(checkpoint_path)
    if not path.is_file():
        raise CheckpointLoadError(f"no such checkpoint: {path}")
    try:
        obj = json.loads(path.read_text())
    except ValueError as e:
        raise CheckpointLoadError(f"{path}: {e}")
    if not isinstance(obj, dict) or "kind" not in obj:
        raise CheckpointLoadError(f"{path}: checkpoint must be an object with a kind")
    model_id = str(obj.get("model_id", path.stem))
    kind = obj["kind"]
    if kind == "stub-segmentation":
        return BandSegmentationModel(model_id, _parse_bands(obj))
    if kind == "stub-detection":
        return BandDetectionModel(model_id, _parse_bands(obj))
    if kind == "stub-fixed-detections":
        items = obj.get("items", [])
        if not isinstance(items, list):
            raise CheckpointLoadError(f"{path}: items must be a list")
        return FixedDetectionModel(model_id, items)
    raise CheckpointLoadError(f"{path}: unknown checkpoint kind {kind!r}")
