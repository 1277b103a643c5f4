"""Tool-calling chat loop between the user, a model backend, and the map.

The loop is model-agnostic: a backend returns either a final text answer
or a single tool call, and the loop feeds tool results back until an
answer arrives or the tool budget runs out. The scripted backend replays
canned turns keyed by the user's words, which keeps every pipeline test
and benchmark run deterministic and offline; the live backend adapts the
same protocol to an HTTP chat-completions service.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Protocol

from .config import EngineConfig
from .model import MapModel, Point
from .prompts import combined_prompt, position_context, split_combined, system_instructions
from .tools import ToolContext, ToolError, ToolSpec, catalog, dispatch


class BackendError(RuntimeError):
    """The chat backend failed or returned something unusable."""


class ConversationError(RuntimeError):
    """The chat loop could not produce an answer."""


@dataclass(frozen=True)
class ToolCall:
    name: str
    arguments: dict[str, Any]


@dataclass(frozen=True)
class BackendReply:
    """Either a final answer or one tool call, never both."""

    text: str | None = None
    tool_call: ToolCall | None = None
    latency_s: float = 0.0

    def __post_init__(self) -> None:
        if (self.text is None) == (self.tool_call is None):
            raise BackendError("a backend reply carries exactly one of text or tool_call")


class ChatBackend(Protocol):
    def complete(self, system: str, messages: list[dict[str, Any]], tools: list[ToolSpec]) -> BackendReply:
        """One model step given the conversation so far."""


@dataclass(frozen=True)
class TurnResult:
    answer: str
    combined_prompt: str
    tool_calls: tuple[dict[str, Any], ...]
    latency_s: float

    def transcript(self, system: str, preset: int) -> dict[str, Any]:
        return {
            "preset": preset,
            "system_hash": hashlib.sha256(system.encode("utf-8")).hexdigest(),
            "combined_prompt": self.combined_prompt,
            "tool_calls": list(self.tool_calls),
            "answer": self.answer,
            "latency_s": self.latency_s,
        }


class Conversation:
    """A persistent chat over one map at one instruction preset."""

    def __init__(
        self,
        model: MapModel,
        preset: int,
        config: EngineConfig,
        backend: ChatBackend,
        context: ToolContext | None = None,
    ) -> None:
        self.model = model
        self.preset = preset
        self.config = config
        self.backend = backend
        self.context = context if context is not None else ToolContext(model=model, config=config)
        self.system = system_instructions(model, preset)
        self.messages: list[dict[str, Any]] = []

    def ask(
        self,
        user_text: str,
        position: Point | None = None,
        now: datetime | None = None,
    ) -> TurnResult:
        """Run one user turn through the loop until a final answer."""
        self.context.position = position
        self.context.now = now
        prompt = combined_prompt(position_context(self.model, self.preset, position, now), user_text)
        self.messages.append({"role": "user", "content": prompt})

        tools = catalog(self.preset)
        calls: list[dict[str, Any]] = []
        latency = 0.0
        for _ in range(self.config.max_tool_rounds + 1):
            reply = self.backend.complete(self.system, list(self.messages), tools)
            latency += reply.latency_s
            if reply.text is not None:
                self.messages.append({"role": "assistant", "content": reply.text})
                return TurnResult(
                    answer=reply.text,
                    combined_prompt=prompt,
                    tool_calls=tuple(calls),
                    latency_s=latency,
                )
            call = reply.tool_call
            assert call is not None
            if len(calls) >= self.config.max_tool_rounds:
                raise ConversationError(
                    f"no answer after {self.config.max_tool_rounds} tool rounds"
                )
            try:
                result: dict[str, Any] = dispatch(self.context, call.name, call.arguments)
            except ToolError as exc:
                result = {"error": str(exc)}
            calls.append({"name": call.name, "arguments": call.arguments, "result": result})
            self.messages.append(
                {"role": "assistant", "content": "", "tool_call": {"name": call.name, "arguments": call.arguments}}
            )
            self.messages.append(
                {"role": "tool", "name": call.name, "content": json.dumps(result, sort_keys=True)}
            )
        raise ConversationError(f"no answer after {self.config.max_tool_rounds} tool rounds")


# ---------------------------------------------------------------------------
# Backends
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScriptedTurn:
    steps: tuple[ToolCall, ...]
    answer: str
    latency_s: float = 0.0


class ScriptedBackend:
    """Replays canned tool calls and answers keyed by the user's words.

    The script file is a JSON object mapping user text to an entry with
    an ``answer``, optional ``steps`` (tool calls served in order before
    the answer), and an optional ``latency_s`` consumed by the first
    step of the turn. A ``"*"`` entry catches unscripted questions.
    """

    def __init__(self, script: dict[str, Any]) -> None:
        self.turns: dict[str, ScriptedTurn] = {}
        for user_text, raw in script.items():
            if isinstance(raw, str):
                self.turns[user_text] = ScriptedTurn(steps=(), answer=raw)
                continue
            steps = tuple(
                ToolCall(name=s["tool"], arguments=dict(s.get("arguments", {})))
                for s in raw.get("steps", [])
            )
            self.turns[user_text] = ScriptedTurn(
                steps=steps,
                answer=raw["answer"],
                latency_s=float(raw.get("latency_s", 0.0)),
            )

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise BackendError("script file must contain a JSON object")
        return cls(doc)

    def _turn_state(self, messages: list[dict[str, Any]]) -> tuple[str, int]:
        """User text of the open turn and how many tool results it has."""
        last_user = None
        for i in range(len(messages) - 1, -1, -1):
            if messages[i]["role"] == "user":
                last_user = i
                break
        if last_user is None:
            raise BackendError("no user message to respond to")
        _, user_text = split_combined(messages[last_user]["content"])
        served = sum(1 for m in messages[last_user + 1 :] if m["role"] == "tool")
        return user_text, served

    def complete(self, system: str, messages: list[dict[str, Any]], tools: list[ToolSpec]) -> BackendReply:
        user_text, served = self._turn_state(messages)
        turn = self.turns.get(user_text) or self.turns.get("*")
        if turn is None:
            raise BackendError(f"no scripted turn for {user_text!r}")
        latency = turn.latency_s if served == 0 else 0.0
        if served < len(turn.steps):
            allowed = {t.name for t in tools}
            step = turn.steps[served]
            if step.name not in allowed:
                raise BackendError(f"scripted tool {step.name!r} is not in the preset's catalog")
            return BackendReply(tool_call=step, latency_s=latency)
        return BackendReply(text=turn.answer, latency_s=latency)


class LiveBackend:
    """Thin adapter to an HTTP chat-completions endpoint.

    Expects a config like ``{"base_url": ..., "model": ..., "api_key_env":
    ..., "temperature": ...}``; the key is read from the named environment
    variable so it never lands in files or transcripts.
    """

    def __init__(self, settings: dict[str, Any]) -> None:
        import os

        self.base_url = str(settings.get("base_url", "")).rstrip("/")
        if not self.base_url:
            raise BackendError("live backend config needs a base_url")
        self.model_name = str(settings.get("model", ""))
        if not self.model_name:
            raise BackendError("live backend config needs a model")
        self.temperature = float(settings.get("temperature", 0.0))
        key_env = settings.get("api_key_env")
        self.api_key = os.environ.get(key_env, "") if key_env else ""
        self.timeout_s = float(settings.get("timeout_s", 60.0))

    @classmethod
    def from_file(cls, path: str | Path) -> "LiveBackend":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def _wire_messages(self, system: str, messages: list[dict[str, Any]]) -> list[dict[str, Any]]:
        wire: list[dict[str, Any]] = [{"role": "system", "content": system}]
        for m in messages:
            if m["role"] == "assistant" and m.get("tool_call"):
                wire.append(
                    {
                        "role": "assistant",
                        "content": None,
                        "tool_calls": [
                            {
                                "id": f"call_{len(wire)}",
                                "type": "function",
                                "function": {
                                    "name": m["tool_call"]["name"],
                                    "arguments": json.dumps(m["tool_call"]["arguments"]),
                                },
                            }
                        ],
                    }
                )
            elif m["role"] == "tool":
                wire.append({"role": "tool", "tool_call_id": f"call_{len(wire) - 1}", "content": m["content"]})
            else:
                wire.append({"role": m["role"], "content": m["content"]})
        return wire

    def complete(self, system: str, messages: list[dict[str, Any]], tools: list[ToolSpec]) -> BackendReply:
        import time

        import httpx

        payload: dict[str, Any] = {
            "model": self.model_name,
            "temperature": self.temperature,
            "messages": self._wire_messages(system, messages),
        }
        if tools:
            payload["tools"] = [
                {
                    "type": "function",
                    "function": {"name": t.name, "description": t.description, "parameters": t.parameters},
                }
                for t in tools
            ]
        headers = {"content-type": "application/json"}
        if self.api_key:
            headers["authorization"] = f"Bearer {self.api_key}"
        started = time.monotonic()
        try:
            response = httpx.post(
                f"{self.base_url}/chat/completions", json=payload, headers=headers, timeout=self.timeout_s
            )
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise BackendError(f"live backend request failed: {exc}") from exc
        latency = time.monotonic() - started
        try:
            message = response.json()["choices"][0]["message"]
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendError(f"live backend returned an unusable response: {exc}") from exc
        tool_calls = message.get("tool_calls") or []
        if tool_calls:
            fn = tool_calls[0]["function"]
            try:
                arguments = json.loads(fn.get("arguments") or "{}")
            except ValueError as exc:
                raise BackendError(f"live backend tool arguments are not JSON: {exc}") from exc
            return BackendReply(tool_call=ToolCall(name=fn["name"], arguments=arguments), latency_s=latency)
        content = message.get("content")
        if not isinstance(content, str) or not content.strip():
            raise BackendError("live backend returned neither text nor a tool call")
        return BackendReply(text=content, latency_s=latency)
