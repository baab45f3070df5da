"""Chat-completion backends: an OpenAI-compatible HTTP client and offline stubs."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Protocol, Sequence

import requests

from ..errors import BackendError, HttpStatusError, MalformedResponse, NetworkError
from .spec import Message

DEFAULT_MODEL = "llama3-8b-8192"
GROQ_ENDPOINT = "https://api.groq.com/openai/v1/chat/completions"
API_KEY_ENV = "FINCAST_API_KEY"


class ChatBackend(Protocol):
    def complete(self, messages: Sequence[Message]) -> str: ...


class EchoBackend:
    """Replies with the last user message, prefixed; handy for wiring checks."""

    def complete(self, messages):
        user = [m.content for m in messages if m.author_role == "user"]
        return "ECHO: " + (user[-1] if user else "")


class ScriptedBackend:
    """Returns canned replies in order, one per call."""

    def __init__(self, replies: Sequence[str]):
        self.replies = list(replies)
        self.calls: list[list[Message]] = []

    @classmethod
    def from_file(cls, path) -> "ScriptedBackend":
        """Load ``{"replies": [...]}`` or a bare JSON list of strings."""
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        replies = doc["replies"] if isinstance(doc, dict) else doc
        if not isinstance(replies, list) or not all(isinstance(r, str) for r in replies):
            raise ValueError(f"{path}: expected a list of reply strings")
        return cls(replies)

    def complete(self, messages):
        if len(self.calls) >= len(self.replies):
            raise BackendError(f"scripted backend exhausted after {len(self.replies)} replies")
        self.calls.append(list(messages))
        return self.replies[len(self.calls) - 1]


class HttpChatBackend:
    def __init__(self, endpoint: str, model: str = DEFAULT_MODEL, api_key: str | None = None,
                 temperature: float = 0.0, timeout: float = 60.0):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.temperature = temperature
        self.timeout = timeout

    def request_body(self, messages: Sequence[Message]) -> dict:
        return {
            "model": self.model,
            "messages": [m.to_wire() for m in messages],
            "temperature": self.temperature,
        }

    def complete(self, messages):
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(self.endpoint, json=self.request_body(messages),
                                 headers=headers, timeout=self.timeout)
        except requests.RequestException as exc:
            raise NetworkError(self.endpoint, exc) from exc
        if resp.status_code != 200:
            raise HttpStatusError(resp.status_code, self.endpoint)
        try:
            content = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"unexpected completion payload from {self.endpoint}: {exc}") from exc
        if not isinstance(content, str):
            raise MalformedResponse("completion content is not a string")
        return content


def http_chat_backend(endpoint: str, model: str = DEFAULT_MODEL, api_key: str | None = None,
                      **kwargs) -> HttpChatBackend:
    return HttpChatBackend(endpoint, model, api_key, **kwargs)
