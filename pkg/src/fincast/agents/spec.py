"""Plain data carried through a crew run."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class AgentSpec:
    role: str
    goal: str
    backstory: str = ""
    tools: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.role.strip() or not self.goal.strip():
            raise ValueError("agent role and goal must be non-empty")
        object.__setattr__(self, "tools", tuple(self.tools))


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    description: str
    expected_output: str
    assigned_agent: str  # an AgentSpec.role


@dataclass(frozen=True)
class Message:
    author_role: str
    content: str

    def __post_init__(self):
        if self.author_role not in ROLES:
            raise ValueError(f"author_role must be one of {ROLES}")
        if not self.content:
            raise ValueError("message content must be non-empty")

    def to_wire(self) -> dict:
        return {"role": self.author_role, "content": self.content}


@dataclass(frozen=True)
class ToolInvocation:
    tool: str
    url: str
    chars: int
    bytes: int
    error: str | None = None


@dataclass(frozen=True)
class LogEntry:
    task_id: str
    agent_role: str
    prompt: str
    reply: str
    tool_invocations: tuple[ToolInvocation, ...] = ()


@dataclass(frozen=True)
class CrewRunLog:
    entries: tuple[LogEntry, ...] = field(default=())

    @property
    def final_answer(self) -> str:
        return self.entries[-1].reply if self.entries else ""

    def to_jsonl(self) -> str:
        """One JSON object per entry, then a closing ``final_answer`` record."""
        lines = [json.dumps({"type": "entry", **asdict(e)}, ensure_ascii=False, sort_keys=True)
                 for e in self.entries]
        lines.append(json.dumps({"type": "final_answer", "content": self.final_answer},
                                ensure_ascii=False, sort_keys=True))
        return "\n".join(lines) + "\n"
