"""Two-agent support crew: a drafting agent with a scrape tool and a reviewing agent."""

from .backends import (ChatBackend, EchoBackend, HttpChatBackend, ScriptedBackend,
                       http_chat_backend)
from .crew import flatten, render_prompt, run_crew
from .prompts import DEFAULT_AGENTS, DEFAULT_TASKS, QA_AGENT, SCRAPE_TOOL, SUPPORT_AGENT
from .scrape import html_to_text, scrape_website
from .spec import AgentSpec, CrewRunLog, LogEntry, Message, TaskSpec, ToolInvocation

__all__ = [
    "AgentSpec", "TaskSpec", "Message", "LogEntry", "ToolInvocation", "CrewRunLog",
    "render_prompt", "run_crew", "flatten",
    "ChatBackend", "EchoBackend", "ScriptedBackend", "HttpChatBackend", "http_chat_backend",
    "scrape_website", "html_to_text",
    "DEFAULT_AGENTS", "DEFAULT_TASKS", "SUPPORT_AGENT", "QA_AGENT", "SCRAPE_TOOL",
]
