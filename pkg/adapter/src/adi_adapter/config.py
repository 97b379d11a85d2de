"""Adapter configuration: which model to run and how its classes map onto
the exchange-format category table."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .categories import is_valid_category

MODEL_KINDS = ("segmentation", "detection")


class ConfigError(Exception):
    pass


class CategoryMappingError(Exception):
    pass


@dataclass
class AdapterConfig:
    kind: str  # segmentation | detection
    checkpoint: str
    category_map: dict[str, str] = field(default_factory=dict)
    device: str = "cpu"
    score_threshold: float = 0.5

    def validate(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}")
        if not (0.0 <= self.score_threshold <= 1.0):
            raise ConfigError(f"score_threshold must be in [0, 1], got {self.score_threshold}")
        for model_class, category in self.category_map.items():
            if not is_valid_category(category):
                raise CategoryMappingError(
                    f"model class {model_class!r} maps to unknown category {category!r}"
                )

    def map_class(self, model_class: str) -> str:
        if model_class not in self.category_map:
            raise CategoryMappingError(f"model class {model_class!r} has no category mapping")
        return self.category_map[model_class]


def load_adapter_config(path: str | Path) -> AdapterConfig:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}")
    except ValueError as e:
        raise ConfigError(f"bad config JSON: {e}")
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    try:
        config = AdapterConfig(
            kind=obj["kind"],
            checkpoint=str(obj["checkpoint"]),
            category_map=dict(obj.get("category_map", {})),
            device=obj.get("device", "cpu"),
            score_threshold=float(obj.get("score_threshold", 0.5)),
        )
    except KeyError as e:
        raise ConfigError(f"config missing key {e}")
    # Checkpoint paths are relative to the config file.
    checkpoint = Path(config.checkpoint)
    if not checkpoint.is_absolute():
        config.checkpoint = str(path.parent / checkpoint)
    config.validate()
    return config
