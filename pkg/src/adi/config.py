"""Application configuration: backend selection plus planner and tool knobs.

Config files are JSON; every field has a default so an empty object (or no
file at all) yields a fully offline configuration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MalformedManifest
from .executor import ToolConfig
from .llm import LlmBackend, RemoteBackend, ScriptedBackend
from .planning import PlannerConfig

BACKEND_KINDS = ("none", "scripted", "remote")


@dataclass
class AppConfig:
    backend: str = "none"
    remote_url: str | None = None
    remote_model: str = "gpt-4o-mini"
    scripted_map: str | None = None
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    tools: ToolConfig = field(default_factory=ToolConfig)

    def validate(self) -> None:
        if self.backend not in BACKEND_KINDS:
            raise MalformedManifest(f"unknown backend kind {self.backend!r}")
        if self.backend == "remote" and not self.remote_url:
            raise MalformedManifest("remote backend requires a url")
        self.planner.validate()
        if not (0.0 <= self.tools.score_threshold <= 1.0):
            raise MalformedManifest("score_threshold must be in [0, 1]")
        if self.tools.snap_radius < 0:
            raise MalformedManifest("snap_radius must be >= 0")


def load_config(path: str | Path | None) -> AppConfig:
    if path is None:
        config = AppConfig()
        config.validate()
        return config
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as e:
        raise MalformedManifest(f"cannot read config: {e}")
    except ValueError as e:
        raise MalformedManifest(f"bad config JSON: {e}")
    if not isinstance(obj, dict):
        raise MalformedManifest("config must be a JSON object")

    config = AppConfig(
        backend=obj.get("backend", "none"),
        remote_url=obj.get("remote_url"),
        remote_model=obj.get("remote_model", "gpt-4o-mini"),
        scripted_map=obj.get("scripted_map"),
        planner=PlannerConfig(**obj.get("planner", {})),
        tools=ToolConfig(**obj.get("tools", {})),
    )
    config.validate()
    return config


def make_backend(config: AppConfig) -> LlmBackend | None:
    """Backend instance for the configured kind; None means fully offline
    (rule-based planning, template summaries)."""
    if config.backend == "none":
        return None
    if config.backend == "remote":
        return RemoteBackend(url=config.remote_url, model=config.remote_model)
    if config.backend == "scripted":
        if config.scripted_map:
            return ScriptedBackend.from_file(config.scripted_map)
        return ScriptedBackend()
    raise MalformedManifest(f"unknown backend kind {config.backend!r}")
