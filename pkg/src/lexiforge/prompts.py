"""Prompt templates, the cumulative prompt chain, and LLM backends.

A chain starts from a base role-assignment prompt and continues through
task templates. Because the model keeps no state between calls, every
step's outgoing prompt embeds the previous prompt and response verbatim:

    sent(1) = rendered base
    sent(k) = sent(k-1) + "\\n\\nRESPONSE: " + response(k-1)
                        + "\\n\\nPROMPT: " + rendered(k)

Backends implement `complete(prompt, params) -> str`. The HTTP backend
talks to a chat-completions-style endpoint; the replay backend answers
from a recorded transcript, which makes runs reproducible and testable
offline. A recording wrapper captures transcripts from any backend.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Protocol

import requests

from .errors import BackendError, RenderError, TranscriptError, UnrecordedPromptError

logger = logging.getLogger(__name__)

API_KEY_ENV = "LEXIFORGE_API_KEY"
TEMPLATE_IDS = ("base", "mwe_generation", "sentence_generation", "validation")
PLACEHOLDER_NAMES = ("seed", "text", "mwe", "mwe_list", "candidates")

_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    body: str

    def placeholders(self) -> set[str]:
        return set(_PLACEHOLDER_RE.findall(self.body))


@dataclass(frozen=True)
class ModelParams:
    model_name: str = "gpt-3.5-turbo"
    temperature: float = 0.0
    max_tokens: int = 512

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be >= 1, got {self.max_tokens}")

    def as_dict(self) -> dict:
        return {
            "model_name": self.model_name,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }


@dataclass(frozen=True)
class ChainTurn:
    prompt: str
    response: str


@dataclass(frozen=True)
class ChainContext:
    """Append-only transcript of one prompt chain."""

    turns: tuple[ChainTurn, ...] = ()

    def compose(self, rendered: str) -> str:
        """The full prompt to send for a step whose template rendered to `rendered`."""
        if not self.turns:
            return rendered
        last = self.turns[-1]
        return f"{last.prompt}\n\nRESPONSE: {last.response}\n\nPROMPT: {rendered}"

    def extended(self, prompt: str, response: str) -> "ChainContext":
        return ChainContext(turns=(*self.turns, ChainTurn(prompt=prompt, response=response)))

    def verify(self) -> None:
        """Assert cumulative embedding: each prompt contains all prior turns."""
        for k in range(1, len(self.turns)):
            prev, cur = self.turns[k - 1], self.turns[k]
            assert prev.prompt in cur.prompt, f"turn {k} prompt dropped turn {k - 1} prompt"
            assert prev.response in cur.prompt, f"turn {k} prompt dropped turn {k - 1} response"


class LlmBackend(Protocol):
    def complete(self, prompt: str, params: ModelParams) -> str: ...


def render(template: PromptTemplate, bindings: dict[str, str]) -> str:
    """Fill every placeholder; strict in both directions.

    Missing bindings and bindings without a matching placeholder are
    errors, and the output may not contain any known placeholder token.
    """
    wanted = template.placeholders()
    missing = wanted - set(bindings)
    if missing:
        raise RenderError(f"{template.template_id}: missing bindings for {sorted(missing)}")
    extra = set(bindings) - wanted
    if extra:
        raise RenderError(f"{template.template_id}: bindings with no placeholder {sorted(extra)}")
    rendered = _PLACEHOLDER_RE.sub(lambda m: bindings[m.group(1)], template.body)
    leftover = [n for n in PLACEHOLDER_NAMES if "{" + n + "}" in rendered]
    if leftover:
        raise RenderError(
            f"{template.template_id}: rendered output still contains placeholder tokens {leftover}"
        )
    return rendered


def run_step(
    backend: LlmBackend,
    ctx: ChainContext,
    template: PromptTemplate,
    bindings: dict[str, str],
    params: ModelParams,
) -> tuple[str, ChainContext]:
    """Render, embed history, send, and append the new turn."""
    sent = ctx.compose(render(template, bindings))
    response = backend.complete(sent, params)
    if not response.strip():
        raise BackendError(f"empty response to {template.template_id} step")
    return response, ctx.extended(sent, response)


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


# --- template configuration -------------------------------------------------

def load_templates(path: str | Path | None = None) -> dict[str, PromptTemplate]:
    """Load the four chain templates from JSON config (or package defaults)."""
    if path is None:
        text = resources.files("lexiforge").joinpath("data/templates.json").read_text("utf-8")
        source = "<package defaults>"
    else:
        try:
            text = Path(path).read_text("utf-8")
        except OSError as exc:
            raise TranscriptError(f"cannot read template config {path}: {exc}") from exc
        source = str(path)
    data = json.loads(text)
    unknown = set(data) - set(TEMPLATE_IDS)
    if unknown:
        raise RenderError(f"{source}: unknown template ids {sorted(unknown)}")
    missing = set(TEMPLATE_IDS) - set(data)
    if missing:
        raise RenderError(f"{source}: missing template ids {sorted(missing)}")
    templates = {tid: PromptTemplate(template_id=tid, body=data[tid]) for tid in TEMPLATE_IDS}
    if templates["base"].placeholders():
        raise RenderError(f"{source}: the base template must not contain placeholders")
    for tid, template in templates.items():
        bad = template.placeholders() - set(PLACEHOLDER_NAMES)
        if bad:
            raise RenderError(f"{source}: template {tid} uses unknown placeholders {sorted(bad)}")
    return templates


# --- backends ---------------------------------------------------------------

class ReplayBackend:
    """Answers by exact-prompt lookup in a recorded transcript."""

    def __init__(self, entries: list[dict], source: str = "<transcript>"):
        self.source = source
        self._by_prompt: dict[str, dict] = {}
        for i, entry in enumerate(entries):
            for key in ("prompt_sha256", "prompt", "response", "params"):
                if key not in entry:
                    raise TranscriptError(f"{source} entry {i}: missing key {key!r}")
            if entry["prompt_sha256"] != prompt_digest(entry["prompt"]):
                raise TranscriptError(f"{source} entry {i}: prompt_sha256 does not match prompt")
            self._by_prompt[entry["prompt"]] = entry

    def complete(self, prompt: str, params: ModelParams) -> str:
        entry = self._by_prompt.get(prompt)
        if entry is None:
            digest = prompt_digest(prompt)
            raise UnrecordedPromptError(
                f"prompt not in transcript {self.source} (sha256 {digest})", digest
            )
        recorded = entry["params"]
        if recorded != params.as_dict():
            raise BackendError(
                f"model params changed since recording: {recorded} != {params.as_dict()}"
            )
        return entry["response"]


def replay_record(path: str | Path) -> ReplayBackend:
    """Open a replay transcript file as a backend."""
    path = Path(path)
    try:
        data = json.loads(path.read_text("utf-8"))
    except OSError as exc:
        raise TranscriptError(f"cannot read transcript {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise TranscriptError(f"{path}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, list):
        raise TranscriptError(f"{path}: transcript must be a JSON array")
    return ReplayBackend(data, source=str(path))


@dataclass
class RecordingBackend:
    """Wraps another backend and captures a replayable transcript."""

    inner: LlmBackend
    entries: list[dict] = field(default_factory=list)

    def complete(self, prompt: str, params: ModelParams) -> str:
        response = self.inner.complete(prompt, params)
        self.entries.append(
            {
                "prompt_sha256": prompt_digest(prompt),
                "prompt": prompt,
                "response": response,
                "params": params.as_dict(),
            }
        )
        return response

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.entries, indent=2, ensure_ascii=False) + "\n", "utf-8"
        )


class HttpBackend:
    """Chat-completions-style HTTP backend.

    POSTs {model, messages, temperature, max_tokens} to the configured
    URL and reads the first choice's message content. Transport errors
    and 429/5xx responses are retried with exponential backoff; other
    HTTP errors fail immediately. Safe to share across threads.
    """

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        max_attempts: int = 3,
        backoff_start: float = 1.0,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.base_url = base_url
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.timeout = timeout
        self.max_attempts = max_attempts
        self.backoff_start = backoff_start
        self._sleep = sleep

    def complete(self, prompt: str, params: ModelParams) -> str:
        body = {
            "model": params.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        delay = self.backoff_start
        last_error = "no attempt made"
        for attempt in range(1, self.max_attempts + 1):
            try:
                resp = requests.post(
                    self.base_url, json=body, headers=headers, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_error = f"transport error: {exc}"
            else:
                if resp.status_code == 200:
                    return self._parse(resp)
                if resp.status_code == 429 or resp.status_code >= 500:
                    last_error = f"HTTP {resp.status_code}"
                else:
                    raise BackendError(f"HTTP {resp.status_code} from {self.base_url}")
            if attempt < self.max_attempts:
                logger.warning("LLM request failed (%s), retrying in %.1fs", last_error, delay)
                self._sleep(delay)
                delay *= 2
        raise BackendError(f"giving up after {self.max_attempts} attempts: {last_error}")

    def _parse(self, resp: requests.Response) -> str:
        try:
            content = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise BackendError(f"malformed completion response: {exc}") from exc
        if not isinstance(content, str) or not content.strip():
            raise BackendError("completion response carried no content")
        return content
