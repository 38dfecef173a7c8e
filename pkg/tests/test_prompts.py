import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from lexiforge.errors import BackendError, RenderError, TranscriptError, UnrecordedPromptError
from lexiforge.prompts import (
    ChainContext,
    HttpBackend,
    ModelParams,
    PromptTemplate,
    RecordingBackend,
    ReplayBackend,
    load_templates,
    prompt_digest,
    render,
    replay_record,
    run_step,
)


class EchoBackend:
    """Deterministic stub: answers with a digest-like tag of the prompt."""

    def complete(self, prompt, params):
        return f"reply-{len(prompt)}"


# --- rendering ---------------------------------------------------------------

def test_render_fills_all_placeholders():
    templates = load_templates()
    out = render(
        templates["mwe_generation"],
        {"seed": "measure", "text": "An actor measured a matter."},
    )
    assert "measure" in out
    assert "An actor measured a matter." in out
    assert "{" not in out


def test_render_base_verbatim():
    templates = load_templates()
    assert render(templates["base"], {}) == templates["base"].body


def test_render_missing_binding():
    templates = load_templates()
    with pytest.raises(RenderError, match="text"):
        render(templates["mwe_generation"], {"seed": "measure"})


def test_render_extra_binding_rejected():
    templates = load_templates()
    with pytest.raises(RenderError, match="mwe"):
        render(
            templates["mwe_generation"],
            {"seed": "x", "text": "y", "mwe": "z"},
        )


def test_render_rejects_placeholder_smuggled_in_value():
    template = PromptTemplate(template_id="sentence_generation", body="Use {mwe} here.")
    with pytest.raises(RenderError):
        render(template, {"mwe": "see {text} later"})


def test_load_templates_validates_ids(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"base": "x"}))
    with pytest.raises(RenderError, match="missing"):
        load_templates(path)
    path.write_text(json.dumps({
        "base": "b", "mwe_generation": "m", "sentence_generation": "s",
        "validation": "v", "bonus": "?",
    }))
    with pytest.raises(RenderError, match="bonus"):
        load_templates(path)


def test_load_templates_base_must_be_placeholder_free(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({
        "base": "hello {seed}", "mwe_generation": "m",
        "sentence_generation": "s", "validation": "v",
    }))
    with pytest.raises(RenderError, match="base"):
        load_templates(path)


# --- chain context -----------------------------------------------------------

def test_first_step_sends_rendered_base():
    templates = load_templates()
    backend = EchoBackend()
    response, ctx = run_step(backend, ChainContext(), templates["base"], {}, ModelParams())
    assert ctx.turns[0].prompt == templates["base"].body
    assert ctx.turns[0].response == response


def test_second_step_embeds_first_turn():
    templates = load_templates()
    backend = EchoBackend()
    _, ctx = run_step(backend, ChainContext(), templates["base"], {}, ModelParams())
    _, ctx = run_step(
        backend, ctx, templates["mwe_generation"],
        {"seed": "guess", "text": "A human being guessed a factor."}, ModelParams(),
    )
    second = ctx.turns[1].prompt
    assert second.startswith(templates["base"].body)
    assert ctx.turns[0].response in second
    assert "RESPONSE: " in second and "PROMPT: " in second
    ctx.verify()


def test_cumulative_embedding_over_long_chain():
    backend = EchoBackend()
    ctx = ChainContext()
    for i in range(5):
        template = PromptTemplate(template_id="base", body=f"step number {i}")
        _, ctx = run_step(backend, ctx, template, {}, ModelParams())
    ctx.verify()
    for k in range(1, 5):
        assert ctx.turns[k - 1].prompt in ctx.turns[k].prompt
        assert ctx.turns[k - 1].response in ctx.turns[k].prompt


def test_empty_response_is_error():
    class SilentBackend:
        def complete(self, prompt, params):
            return "   "

    templates = load_templates()
    with pytest.raises(BackendError, match="empty"):
        run_step(SilentBackend(), ChainContext(), templates["base"], {}, ModelParams())


# --- replay and recording ------------------------------------------------------

def test_replay_round_trip(tmp_path):
    backend = RecordingBackend(EchoBackend())
    params = ModelParams()
    first = backend.complete("ping", params)
    path = tmp_path / "transcript.json"
    backend.save(path)
    replay = replay_record(path)
    assert replay.complete("ping", params) == first
    assert replay.complete("ping", params) == first


def test_replay_fixture_transcripts_are_deterministic(fixtures_dir, replay_runs):
    params = ModelParams()
    for run in replay_runs.values():
        entries = json.loads((fixtures_dir / run["transcript"]).read_text("utf-8"))
        backend = replay_record(fixtures_dir / run["transcript"])
        for entry in entries:
            assert backend.complete(entry["prompt"], params) == entry["response"]


def test_unrecorded_prompt_error_carries_digest(tmp_path):
    backend = RecordingBackend(EchoBackend())
    backend.complete("known", ModelParams())
    path = tmp_path / "t.json"
    backend.save(path)
    replay = replay_record(path)
    with pytest.raises(UnrecordedPromptError) as err:
        replay.complete("unknown", ModelParams())
    assert err.value.prompt_digest == prompt_digest("unknown")


def test_replay_rejects_changed_params(tmp_path):
    backend = RecordingBackend(EchoBackend())
    backend.complete("ping", ModelParams())
    path = tmp_path / "t.json"
    backend.save(path)
    with pytest.raises(BackendError, match="params"):
        replay_record(path).complete("ping", ModelParams(temperature=1.0))


def test_replay_rejects_tampered_transcript(tmp_path):
    entries = [{
        "prompt_sha256": "0" * 64, "prompt": "p", "response": "r",
        "params": ModelParams().as_dict(),
    }]
    path = tmp_path / "t.json"
    path.write_text(json.dumps(entries))
    with pytest.raises(TranscriptError, match="sha256"):
        replay_record(path)


def test_replay_missing_file(tmp_path):
    with pytest.raises(TranscriptError):
        replay_record(tmp_path / "nope.json")


def test_recording_wraps_without_altering(tmp_path):
    recorder = RecordingBackend(EchoBackend())
    direct = EchoBackend().complete("abc", ModelParams())
    assert recorder.complete("abc", ModelParams()) == direct
    assert recorder.entries[0]["prompt_sha256"] == prompt_digest("abc")


# --- HTTP backend --------------------------------------------------------------

class ScriptedHandler(BaseHTTPRequestHandler):
    script: list  # (status, payload) tuples consumed per request
    seen: list

    def do_POST(self):
        length = int(self.headers["Content-Length"])
        body = json.loads(self.rfile.read(length))
        type(self).seen.append(
            {"body": body, "authorization": self.headers.get("Authorization")}
        )
        status, payload = self.script.pop(0) if self.script else (200, self.default_payload(body))
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    @staticmethod
    def default_payload(body):
        content = "echo: " + body["messages"][0]["content"][:20]
        return {"choices": [{"message": {"content": content}}]}

    def log_message(self, *args):
        pass


@pytest.fixture()
def http_server():
    handler = type("Handler", (ScriptedHandler,), {"script": [], "seen": []})
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    url = f"http://127.0.0.1:{server.server_address[1]}/chat/completions"
    yield url, handler
    server.shutdown()


def test_http_backend_success(http_server):
    url, handler = http_server
    backend = HttpBackend(url, api_key="secret-key", sleep=lambda s: None)
    out = backend.complete("hello world", ModelParams(model_name="test-model"))
    assert out.startswith("echo: hello world")
    sent = handler.seen[0]
    assert sent["body"]["model"] == "test-model"
    assert sent["body"]["messages"] == [{"role": "user", "content": "hello world"}]
    assert sent["authorization"] == "Bearer secret-key"


def test_http_backend_retries_on_5xx(http_server):
    url, handler = http_server
    handler.script.append((500, {"error": "boom"}))
    delays = []
    backend = HttpBackend(url, sleep=delays.append)
    assert backend.complete("p", ModelParams()).startswith("echo")
    assert delays == [1.0]


def test_http_backend_retries_on_429(http_server):
    url, handler = http_server
    handler.script.extend([(429, {}), (429, {})])
    delays = []
    backend = HttpBackend(url, sleep=delays.append)
    assert backend.complete("p", ModelParams()).startswith("echo")
    assert delays == [1.0, 2.0]


def test_http_backend_gives_up_after_three_attempts(http_server):
    url, handler = http_server
    handler.script.extend([(503, {})] * 3)
    backend = HttpBackend(url, sleep=lambda s: None)
    with pytest.raises(BackendError, match="giving up"):
        backend.complete("p", ModelParams())
    assert len(handler.seen) == 3


def test_http_backend_fails_fast_on_4xx(http_server):
    url, handler = http_server
    handler.script.append((404, {}))
    backend = HttpBackend(url, sleep=lambda s: None)
    with pytest.raises(BackendError, match="404"):
        backend.complete("p", ModelParams())
    assert len(handler.seen) == 1


def test_http_backend_rejects_empty_content(http_server):
    url, handler = http_server
    handler.script.append((200, {"choices": [{"message": {"content": ""}}]}))
    backend = HttpBackend(url, sleep=lambda s: None)
    with pytest.raises(BackendError, match="content"):
        backend.complete("p", ModelParams())


def test_http_backend_rejects_malformed_payload(http_server):
    url, handler = http_server
    handler.script.append((200, {"unexpected": True}))
    backend = HttpBackend(url, sleep=lambda s: None)
    with pytest.raises(BackendError, match="malformed"):
        backend.complete("p", ModelParams())


def test_http_backend_retries_transport_errors():
    delays = []
    backend = HttpBackend("http://127.0.0.1:1/unreachable", sleep=delays.append, timeout=0.2)
    with pytest.raises(BackendError, match="transport"):
        backend.complete("p", ModelParams())
    assert delays == [1.0, 2.0]


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(temperature=-0.1)
    with pytest.raises(ValueError):
        ModelParams(max_tokens=0)
