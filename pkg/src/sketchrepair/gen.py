"""Candidate-program generators: live chat endpoint, cassette replay and
recording, and scripted replies for tests."""

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import httpx

log = logging.getLogger(__name__)

ENDPOINT_ENV = "REPAIR_LLM_ENDPOINT"
KEY_ENV = "REPAIR_LLM_KEY"


class GenerationError(Exception):
    pass


class NetworkError(GenerationError):
    pass


class EndpointError(GenerationError):
    def __init__(self, status, body=""):
        super().__init__(f"endpoint answered HTTP {status}")
        self.status = status
        self.body = body


class CassetteMiss(GenerationError):
    pass


@dataclass(frozen=True)
class GenParams:
    temperature: float = 0.2
    max_new_tokens: int = 1024
    seed: Optional[int] = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")


@dataclass(frozen=True)
class Reply:
    text: str
    usage: dict = field(default_factory=dict)


def as_messages(conversation):
    msgs = getattr(conversation, "messages", conversation)
    out = []
    for m in msgs:
        if isinstance(m, dict):
            out.append({"role": m["role"], "content": m["content"]})
        else:
            role, text = m
            out.append({"role": role, "content": text})
    if not out:
        raise ValueError("empty conversation")
    return out


def conversation_digest(model_name, conversation):
    payload = {"model": model_name, "messages": as_messages(conversation)}
    raw = json.dumps(payload, sort_keys=True, ensure_ascii=False).encode("utf-8")
    return hashlib.sha256(raw).hexdigest()


class Backend:
    kind = "abstract"
    model_name = ""

    def generate(self, conversation, job=None):
        raise NotImplementedError

    def describe(self):
        return f"{self.kind}:{self.model_name}"


class LiveBackend(Backend):
    """Chat-completion style HTTP endpoint."""

    kind = "live"

    def __init__(self, model_name, endpoint=None, params=GenParams(), api_key=None,
                 transport=None, max_tries=3, backoff=0.5, concurrency=2, timeout=120.0):
        self.model_name = model_name
        self.endpoint = endpoint or os.environ.get(ENDPOINT_ENV)
        if not self.endpoint:
            raise ValueError(f"no endpoint given and {ENDPOINT_ENV} is unset")
        self.params = params
        self._key = api_key if api_key is not None else os.environ.get(KEY_ENV)
        self.max_tries = max_tries
        self.backoff = backoff
        self._slots = threading.BoundedSemaphore(concurrency)
        self._client = httpx.Client(transport=transport, timeout=timeout)

    def request_body(self, conversation):
        body = {
            "model": self.model_name,
            "messages": as_messages(conversation),
            "temperature": self.params.temperature,
            "max_tokens": self.params.max_new_tokens,
        }
        if self.params.seed is not None:
            body["seed"] = self.params.seed
        return body

    def generate(self, conversation, job=None):
        body = self.request_body(conversation)
        headers = {"Authorization": f"Bearer {self._key}"} if self._key else {}
        last = None
        with self._slots:
            for attempt in range(self.max_tries):
                if attempt:
                    time.sleep(self.backoff * 2 ** (attempt - 1))
                try:
                    resp = self._client.post(self.endpoint, json=body, headers=headers)
                except httpx.TransportError as e:
                    last = NetworkError(str(e))
                    log.warning("request to %s failed (%s), attempt %d", self.endpoint, e, attempt + 1)
                    continue
                if resp.status_code == 429 or resp.status_code >= 500:
                    last = EndpointError(resp.status_code, resp.text)
                    continue
                if resp.status_code != 200:
                    raise EndpointError(resp.status_code, resp.text)
                return self._parse(resp)
        raise last

    @staticmethod
    def _parse(resp):
        try:
            data = resp.json()
            choice = data["choices"][0]
            text = choice["message"]["content"] if "message" in choice else choice["text"]
        except (ValueError, KeyError, IndexError, TypeError):
            raise EndpointError(resp.status_code, resp.text) from None
        return Reply(text, dict(data.get("usage") or {}))


class ReplayBackend(Backend):
    """Serves replies recorded in a JSON Lines cassette; never touches the network."""

    kind = "replay"

    def __init__(self, cassette_path, model_name=None):
        self.path = Path(cassette_path)
        self.entries = {}
        models = set()
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip():
                    e = json.loads(line)
                    self.entries[e["digest"]] = e
                    models.add(e["model"])
        if model_name is None:
            model_name = models.pop() if len(models) == 1 else "replay"
        self.model_name = model_name

    def generate(self, conversation, job=None):
        digest = conversation_digest(self.model_name, conversation)
        e = self.entries.get(digest)
        if e is None:
            raise CassetteMiss(f"no recorded reply for {digest[:12]} in {self.path}")
        return Reply(e["reply"], dict(e.get("usage") or {}))


class RecordingBackend(Backend):
    """Wraps a live backend and appends every exchange to a cassette."""

    kind = "recording"

    def __init__(self, live, cassette_path):
        self.live = live
        self.model_name = live.model_name
        self.path = Path(cassette_path)
        self._lock = threading.Lock()

    def generate(self, conversation, job=None):
        reply = self.live.generate(conversation, job)
        entry = {"digest": conversation_digest(self.model_name, conversation),
                 "model": self.model_name, "reply": reply.text, "usage": reply.usage}
        with self._lock, open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
        return reply


def record(live, cassette_path):
    return RecordingBackend(live, cassette_path)


class ScriptedBackend(Backend):
    """Canned replies: the k-th model turn of a conversation gets reply k.

    The position is read from the conversation itself (number of assistant
    turns so far), so one instance serves many jobs at once. Past the end
    the last reply repeats. ``by_job`` maps job tags to their own script.
    """

    kind = "scripted"

    def __init__(self, replies=(), model_name="scripted", delay=0.0, by_job=None):
        self.replies = list(replies)
        self.by_job = dict(by_job or {})
        if not self.replies and not self.by_job:
            raise ValueError("scripted backend needs at least one reply")
        self.model_name = model_name
        self.delay = delay

    @classmethod
    def from_path(cls, path, **kw):
        """A single reply file, or a directory of per-job subdirectories
        (``<job>/1.c``, ``<job>/2.c``, ...) with an optional ``default``."""
        path = Path(path)
        if path.is_file():
            return cls([path.read_text()], **kw)
        by_job = {}
        for sub in sorted(p for p in path.rglob("*") if p.is_dir() or p.is_file()):
            if sub.is_dir():
                files = sorted((f for f in sub.iterdir() if f.is_file()), key=_script_order)
                if files:
                    by_job[sub.relative_to(path).as_posix()] = [f.read_text() for f in files]
        default = by_job.pop("default", ())
        return cls(default, by_job=by_job, **kw)

    def script_for(self, job):
        if job is not None and job in self.by_job:
            return self.by_job[job]
        if not self.replies:
            raise CassetteMiss(f"no scripted replies for job {job!r}")
        return self.replies

    def generate(self, conversation, job=None):
        msgs = as_messages(conversation)
        script = self.script_for(job)
        k = sum(1 for m in msgs if m["role"] == "assistant")
        if self.delay:
            time.sleep(self.delay)
        text = script[min(k, len(script) - 1)]
        return Reply(text, {"prompt_chars": sum(len(m["content"]) for m in msgs),
                            "reply_chars": len(text)})


def _script_order(p):
    stem = p.stem
    return (0, int(stem), p.name) if stem.isdigit() else (1, 0, p.name)


def make_backend(spec, model_name=None, params=GenParams()):
    """Backend from a command-line spec: ``scripted:PATH``, ``replay:CASSETTE``,
    ``live:MODEL`` or ``record:MODEL:CASSETTE``."""
    kind, _, rest = spec.partition(":")
    if kind == "scripted":
        return ScriptedBackend.from_path(rest, model_name=model_name or Path(rest).stem)
    if kind == "replay":
        return ReplayBackend(rest, model_name)
    if kind == "live":
        return LiveBackend(model_name or rest, params=params)
    if kind == "record":
        model, _, cassette = rest.partition(":")
        return record(LiveBackend(model_name or model, params=params), cassette)
    raise ValueError(f"unknown backend spec {spec!r}")
