import json

import pytest

from adi.config import AppConfig, load_config, make_backend
from adi.errors import MalformedManifest
from adi.llm import RemoteBackend, ScriptedBackend


class TestLoadConfig:
    def test_no_file_gives_offline_defaults(self):
        config = load_config(None)
        assert config.backend == "none"
        assert config.planner.initial_temperature == 0.7
        assert config.planner.repair_distance_threshold == 8
        assert config.tools.score_threshold == 0.0

    def test_file_overrides_nested_fields(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(
            json.dumps(
                {
                    "backend": "remote",
                    "remote_url": "http://localhost:9999/v1/chat/completions",
                    "remote_model": "test-model",
                    "planner": {"max_attempts": 2, "initial_temperature": 0.5},
                    "tools": {"score_threshold": 0.5, "snap_radius": 4},
                }
            )
        )
        config = load_config(path)
        assert config.planner.max_attempts == 2
        assert config.tools.snap_radius == 4

    def test_remote_requires_url(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"backend": "remote"}))
        with pytest.raises(MalformedManifest):
            load_config(path)

    def test_unknown_backend_kind(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"backend": "psychic"}))
        with pytest.raises(MalformedManifest):
            load_config(path)

    def test_bad_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{nope")
        with pytest.raises(MalformedManifest):
            load_config(path)

    def test_out_of_range_planner_values(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"planner": {"max_attempts": 0}}))
        with pytest.raises(ValueError):
            load_config(path)


class TestMakeBackend:
    def test_none_kind_gives_no_backend(self):
        assert make_backend(AppConfig()) is None

    def test_remote_kind(self):
        config = AppConfig(backend="remote", remote_url="http://example/chat")
        backend = make_backend(config)
        assert isinstance(backend, RemoteBackend)
        assert backend.model == "gpt-4o-mini"

    def test_scripted_kind_with_map_file(self, tmp_path):
        path = tmp_path / "map.json"
        path.write_text(json.dumps({"abc123": "canned reply"}))
        config = AppConfig(backend="scripted", scripted_map=str(path))
        backend = make_backend(config)
        assert isinstance(backend, ScriptedBackend)
        assert backend.responses == {"abc123": "canned reply"}

    def test_scripted_kind_without_map(self):
        backend = make_backend(AppConfig(backend="scripted"))
        assert isinstance(backend, ScriptedBackend)
        assert backend.complete("anything", 0.7) == ""
