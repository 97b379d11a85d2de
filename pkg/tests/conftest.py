from __future__ import annotations

import numpy as np
import pytest

from adi.scene import Detection, DetectionSet, Scene


def reference_levenshtein(a: str, b: str) -> int:
    """Independent full-matrix edit distance used as the test oracle."""
    rows, cols = len(a) + 1, len(b) + 1
    dist = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        dist[i][0] = i
    for j in range(cols):
        dist[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            dist[i][j] = min(
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
                dist[i - 1][j - 1] + cost,
            )
    return dist[-1][-1]


def make_scene(
    mask: np.ndarray,
    detections: list[tuple[str, tuple[float, float, float, float], float]] | None = None,
    gsd: float = 0.5,
    scene_id: str = "test-scene",
) -> Scene:
    from adi.categories import category_lookup

    items = [
        Detection(category_lookup(name).id, bbox, score)
        for name, bbox, score in (detections or [])
    ]
    height, width = mask.shape
    return Scene(
        scene_id=scene_id,
        width=width,
        height=height,
        gsd=gsd,
        mask=mask.astype(np.uint8),
        detections=DetectionSet(items),
    )


@pytest.fixture
def scene_3_vehicles(tmp_path):
    """Synthetic scene with exactly 3 vehicles, written to disk."""
    from adi.synth import SynthParams, synth_scene

    params = SynthParams(seed=7, vehicles=3, trees=2, pools=1, water_bodies=1)
    scene, ledger = synth_scene(params, tmp_path / "scene")
    return scene, ledger


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory):
    """Five-scene dataset shared by executor/harness/cli tests."""
    from adi.synth import synth_dataset

    root = tmp_path_factory.mktemp("dataset")
    counts = synth_dataset(5, root)
    return root, counts
