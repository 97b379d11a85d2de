"""Language-model backends used by the planner and summarizer.

Three implementations of the same one-method interface:

* RemoteBackend - POSTs to a chat-completion endpoint (OpenAI wire shape).
* ScriptedBackend - canned completions keyed by SHA-256 of the prompt;
  deterministic, used for offline tests and CI.
* NullBackend - always raises; exercises unreachable-backend paths.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import requests as http_requests

from .errors import BackendUnreachable

API_KEY_ENV = "ADI_LLM_API_KEY"


class LlmBackend:
    def complete(self, prompt: str, temperature: float) -> str:
        raise NotImplementedError


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass
class RemoteBackend(LlmBackend):
    url: str
    model: str
    timeout: float = 60.0
    api_key_env: str = API_KEY_ENV

    def complete(self, prompt: str, temperature: float) -> str:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = {
            "model": self.model,
            "temperature": temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        try:
            resp = http_requests.post(
                self.url, json=body, headers=headers, timeout=self.timeout
            )
            resp.raise_for_status()
            payload = resp.json()
        except (http_requests.RequestException, ValueError) as e:
            raise BackendUnreachable(f"{self.url}: {e}")
        try:
            return str(payload["choices"][0]["message"]["content"])
        except (KeyError, IndexError, TypeError) as e:
            raise BackendUnreachable(f"{self.url}: unexpected response shape ({e})")


@dataclass
class ScriptedBackend(LlmBackend):
    """Deterministic backend: completions looked up by prompt hash.

    Unknown prompts yield an empty completion (a soft planning failure),
    never a network error. Every call is recorded for test instrumentation.
    """

    responses: dict[str, str] = field(default_factory=dict)
    calls: list[tuple[str, float]] = field(default_factory=list)

    def complete(self, prompt: str, temperature: float) -> str:
        key = prompt_hash(prompt)
        self.calls.append((key, temperature))
        return self.responses.get(key, "")

    @classmethod
    def from_file(cls, path) -> "ScriptedBackend":
        with open(path) as fh:
            return cls(responses=dict(json.load(fh)))


class NullBackend(LlmBackend):
    def complete(self, prompt: str, temperature: float) -> str:
        raise BackendUnreachable("null backend")
