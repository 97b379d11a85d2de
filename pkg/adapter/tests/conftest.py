from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from adi_adapter.pgm import write_pgm

# Gray bands for the stub scene generator. Object intensities sit high
# enough that band-mean scores clear the default 0.5 threshold.
BANDS = {
    "water_cls": (130, 150, 140),  # lo, hi, paint value
    "vehicle_cls": (170, 190, 180),
    "tree_cls": (220, 240, 230),
}
CATEGORY_MAP = {
    "water_cls": "water",
    "vehicle_cls": "vehicle",
    "tree_cls": "tree",
}
BACKGROUND_GRAY = 20


def make_stub_image(seed: int, size: int = 96) -> np.ndarray:
    """Deterministic grayscale scene: rectangles in distinct gray bands on
    a flat background, mutually separated so components stay distinct."""
    rng = np.random.default_rng(seed)
    image = np.full((size, size), BACKGROUND_GRAY, dtype=np.uint8)
    occupied = np.zeros((size, size), dtype=bool)
    for _name, (_lo, _hi, value) in sorted(BANDS.items()):
        for _ in range(int(rng.integers(1, 4))):
            for _attempt in range(50):
                w = int(rng.integers(5, 14))
                h = int(rng.integers(5, 14))
                x1 = int(rng.integers(1, size - w - 1))
                y1 = int(rng.integers(1, size - h - 1))
                if occupied[y1 - 1 : y1 + h + 1, x1 - 1 : x1 + w + 1].any():
                    continue
                image[y1 : y1 + h, x1 : x1 + w] = value
                occupied[y1 : y1 + h, x1 : x1 + w] = True
                break
    return image


def write_stub_checkpoint(path: Path, kind: str, model_id: str = "stub-v1") -> Path:
    bands = [
        {"lo": lo, "hi": hi, "class": name}
        for name, (lo, hi, _value) in sorted(BANDS.items())
    ]
    path.write_text(json.dumps({"model_id": model_id, "kind": kind, "bands": bands}))
    return path


def write_adapter_config(
    path: Path, kind: str, checkpoint: Path, threshold: float = 0.5
) -> Path:
    path.write_text(
        json.dumps(
            {
                "kind": kind,
                "checkpoint": str(checkpoint),
                "category_map": CATEGORY_MAP,
                "score_threshold": threshold,
            }
        )
    )
    return path


@pytest.fixture
def stub_setup(tmp_path):
    """Image + segmentation/detection configs ready to run."""
    image_path = tmp_path / "image.pgm"
    write_pgm(image_path, make_stub_image(seed=1))
    seg_ckpt = write_stub_checkpoint(tmp_path / "seg.ckpt.json", "stub-segmentation")
    det_ckpt = write_stub_checkpoint(tmp_path / "det.ckpt.json", "stub-detection")
    seg_config = write_adapter_config(tmp_path / "seg.json", "segmentation", seg_ckpt)
    det_config = write_adapter_config(tmp_path / "det.json", "detection", det_ckpt)
    return tmp_path, image_path, seg_config, det_config
