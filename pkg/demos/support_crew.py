"""
A two-agent support crew
========================

A support representative drafts an answer, optionally reading a web page
first, and a quality reviewer polishes it. This demo runs offline with
scripted replies. Point ``--endpoint`` at any OpenAI-compatible chat
completions URL (key in ``FINCAST_API_KEY``) to use a real model.
"""

# %%
# Backend
# -------

import argparse
import os
from pathlib import Path

from fincast import agents

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

parser = argparse.ArgumentParser()
parser.add_argument("--endpoint")
parser.add_argument("--url", help="page for the scrape tool")
args, _ = parser.parse_known_args()

if args.endpoint:
    backend = agents.http_chat_backend(args.endpoint, api_key=os.environ.get("FINCAST_API_KEY"))
else:
    backend = agents.ScriptedBackend.from_file(FIXTURES / "scripted_chat.json")

# %%
# What the first agent sees
# -------------------------
# Prompts are plain templates. Rendering one shows exactly what goes over
# the wire.

inputs = {"person": "Andrew", "question": "How can I add memory to my crew?"}
if args.url:
    inputs["url"] = args.url
system, user = agents.render_prompt(agents.SUPPORT_AGENT, agents.DEFAULT_TASKS[0], inputs)
print(system.content, "\n")
print(user.content, "\n")

# %%
# Run
# ---
# The tasks run in order. The reviewer's prompt carries the draft as context.

run = agents.run_crew(agents.DEFAULT_AGENTS, agents.DEFAULT_TASKS, backend,
                      {agents.SCRAPE_TOOL: agents.scrape_website}, inputs)
for entry in run.entries:
    print(f"--- {entry.agent_role} ({entry.task_id})")
    for call in entry.tool_invocations:
        print(f"    tool {call.tool}: {call.error or f'{call.chars} chars'}")
    print(entry.reply, "\n")
print("Final answer:\n" + run.final_answer)
