"""Sequential two-agent crew: draft with tools, then review."""

from __future__ import annotations

import logging
import string
from typing import Callable, Mapping, Sequence

from ..errors import BackendError, FincastError, MissingPlaceholder, NoTasks
from . import prompts
from .scrape import MAX_CHARS, truncate
from .spec import AgentSpec, CrewRunLog, LogEntry, Message, TaskSpec, ToolInvocation

log = logging.getLogger(__name__)

Tool = Callable[[str], str]


def _fill(template: str, inputs: Mapping[str, str]) -> str:
    names = {f for _, f, _, _ in string.Formatter().parse(template) if f}
    missing = sorted(n for n in names if n not in inputs)
    if missing:
        raise MissingPlaceholder(f"no value for placeholder(s): {', '.join(missing)}")
    return template.format_map({k: str(v) for k, v in inputs.items()})


def render_prompt(agent: AgentSpec, task: TaskSpec, inputs: Mapping[str, str],
                  context: Sequence[tuple[str, str]] = ()) -> list[Message]:
    """Build the system + user messages for one task.

    ``context`` is a list of ``(label, text)`` pairs (tool results, earlier
    task outputs) appended to the user message in order.
    """
    tools_section = (prompts.TOOLS_SECTION_TEMPLATE.format(tool_names=", ".join(agent.tools))
                     if agent.tools else "")
    system = prompts.SYSTEM_TEMPLATE.format(role=agent.role, goal=agent.goal,
                                            backstory=agent.backstory, tools_section=tools_section)
    context_section = ""
    if context:
        context_section = prompts.CONTEXT_HEADER + "".join(
            prompts.CONTEXT_ITEM_TEMPLATE.format(label=label, text=text) for label, text in context)
    user = prompts.USER_TEMPLATE.format(
        description=_fill(task.description, inputs),
        expected_output=_fill(task.expected_output, inputs),
        context_section=context_section,
    )
    return [Message("system", system), Message("user", user)]


def flatten(messages: Sequence[Message]) -> str:
    return "\n\n".join(f"<{m.author_role}>\n{m.content}" for m in messages)


def _run_tools(agent: AgentSpec, tools: Mapping[str, Tool], inputs: Mapping[str, str]):
    url = inputs.get("url")
    context, calls = [], []
    if not url:
        return context, calls
    for name in agent.tools:
        fn = tools.get(name)
        if fn is None:
            continue
        try:
            text = truncate(fn(url), MAX_CHARS)
        except (FincastError, ValueError, OSError) as exc:
            note = prompts.TOOL_FAILURE_NOTE.format(tool=name, url=url, error=exc)
            log.warning(note)
            context.append((f"Tool results: {name} (failed)", note))
            calls.append(ToolInvocation(name, url, 0, 0, str(exc)))
            continue
        context.append((f"Tool results: {name} {url}", text))
        calls.append(ToolInvocation(name, url, len(text), len(text.encode("utf-8"))))
    return context, calls


def run_crew(agents: Sequence[AgentSpec], tasks: Sequence[TaskSpec], backend,
             tools: Mapping[str, Tool] | None = None,
             inputs: Mapping[str, str] | None = None) -> CrewRunLog:
    """Execute ``tasks`` in order; each task sees the replies of all earlier ones.

    Tool failures are recorded and the run continues; backend failures raise
    BackendError tagged with the task id.
    """
    if not tasks:
        raise NoTasks("a crew run needs at least one task")
    by_role = {a.role: a for a in agents}
    for t in tasks:
        if t.assigned_agent not in by_role:
            raise ValueError(f"task {t.task_id!r} is assigned to unknown agent {t.assigned_agent!r}")
    tools = tools or {}
    inputs = dict(inputs or {})

    entries: list[LogEntry] = []
    for task in tasks:
        agent = by_role[task.assigned_agent]
        context, calls = _run_tools(agent, tools, inputs)
        context += [(f"Output of task {e.task_id} ({e.agent_role})", e.reply) for e in entries]
        messages = render_prompt(agent, task, inputs, context)
        try:
            reply = backend.complete(messages)
        except BackendError as exc:
            raise BackendError(str(exc), task.task_id) from exc
        except FincastError as exc:
            raise BackendError(str(exc), task.task_id) from exc
        entries.append(LogEntry(task.task_id, agent.role, flatten(messages), reply, tuple(calls)))
    return CrewRunLog(tuple(entries))
