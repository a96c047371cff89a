"""Generator backends: remote chat-completion service, deterministic mock,
and scripted playback for tests.

All backends share one surface — complete(prompt) -> response text — so the
batch pipeline (prompt, request with retries, JSON extraction, validation)
is identical whichever engine sits behind it. Raw requests and responses can
be appended to a JSON-lines audit log.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import httpx

from leadopt.errors import (
    BackendError,
    BackendTimeoutError,
    MalformedResponseError,
    ValidationError,
)
from leadopt.features import circular_fingerprint, tanimoto_similarity
from leadopt.fragments import stable_hash64
from leadopt.generation import prompts as prompt_mod
from leadopt.generation.mock import mock_generate
from leadopt.generation.mutations import mutate_molecule
from leadopt.generation.parsing import (
    GeneratedBatch,
    parse_generation_response,
    prompt_fingerprint,
)
from leadopt.molgraph import parse_smiles

log = logging.getLogger(__name__)

DEFAULT_AUTH_ENV = "LEADOPT_API_TOKEN"
DEFAULT_MAX_TOKENS = 4096


@dataclass(frozen=True)
class GeneratorBackendConfig:
    kind: str = "mock"                      # remote | mock | scripted
    # remote
    endpoint: str | None = None
    model: str | None = None
    auth_env: str = DEFAULT_AUTH_ENV
    temperature: float = 0.7
    timeout: float = 30.0
    max_tokens: int = DEFAULT_MAX_TOKENS
    # mock
    seed: int | None = 0
    mutation_rate: float = 0.1
    # scripted
    script_path: str | None = None
    # shared retry policy
    max_retries: int = 3
    backoff: float = 0.5
    # remote throttling
    max_concurrent: int = 4
    requests_per_second: float = 2.0

    def __post_init__(self) -> None:
        if self.kind == "remote":
            if not self.endpoint or not self.model:
                raise ValidationError("remote backend needs endpoint and model")
        elif self.kind == "mock":
            if self.seed is None:
                raise ValidationError("mock backend needs a seed")
        elif self.kind == "scripted":
            pass
        else:
            raise ValidationError(f"unknown backend kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "endpoint": self.endpoint,
            "model": self.model,
            "auth_env": self.auth_env,
            "temperature": self.temperature,
            "timeout": self.timeout,
            "max_tokens": self.max_tokens,
            "seed": self.seed,
            "mutation_rate": self.mutation_rate,
            "script_path": self.script_path,
            "max_retries": self.max_retries,
            "backoff": self.backoff,
            "max_concurrent": self.max_concurrent,
            "requests_per_second": self.requests_per_second,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorBackendConfig":
        return cls(**data)


class AuditLog:
    """Append-only JSON-lines record of raw requests and responses."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def record(self, event: str, fingerprint: str, content: str) -> None:
        entry = {
            "ts": datetime.now(timezone.utc).isoformat(),
            "event": event,
            "fingerprint": fingerprint,
            "content": content,
        }
        with self.path.open("a") as fh:
            fh.write(json.dumps(entry) + "\n")


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------

class TokenBucket:
    """Thread-safe token bucket: `capacity` burst tokens refilled at
    `rate` per second; acquire blocks until a token is available."""

    def __init__(self, rate: float, capacity: int):
        self.rate = rate
        self.capacity = capacity
        self.tokens = float(capacity)
        self.updated = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                self.tokens = min(
                    self.capacity, self.tokens + (now - self.updated) * self.rate
                )
                self.updated = now
                if self.tokens >= 1.0:
                    self.tokens -= 1.0
                    return
                wait = (1.0 - self.tokens) / self.rate
            time.sleep(wait)


class RemoteBackend:
    """Chat-completion JSON over HTTPS; the auth token is read from the
    environment variable named in the config. In-flight requests are capped
    and rate-limited so concurrent campaign workers share the quota."""

    def __init__(self, config: GeneratorBackendConfig, temperature: float | None = None):
        self.config = config
        self.temperature = config.temperature if temperature is None else temperature
        self._slots = threading.Semaphore(config.max_concurrent)
        self._bucket = TokenBucket(
            rate=config.requests_per_second,
            capacity=max(1, config.max_concurrent),
        )

    def complete(self, prompt: str) -> str:
        with self._slots:
            self._bucket.acquire()
            return self._request(prompt)

    def _request(self, prompt: str) -> str:
        import os

        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.config.auth_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
            "max_tokens": self.config.max_tokens,
        }
        try:
            response = httpx.post(
                self.config.endpoint,
                json=body,
                headers=headers,
                timeout=self.config.timeout,
            )
            response.raise_for_status()
        except httpx.TimeoutException as exc:
            raise BackendTimeoutError(f"backend timed out: {exc}") from exc
        except httpx.HTTPError as exc:
            raise BackendError(f"backend request failed: {exc}") from exc
        payload = response.json()
        try:
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise MalformedResponseError(
                "unexpected completion payload shape", raw_text=response.text
            ) from exc


class MockBackend:
    """Offline engine: answers generation, prediction, and modification
    prompts deterministically from the prompt text itself.

    The per-call random stream mixes the configured seed with a hash of the
    prompt, so repeated identical calls repeat exactly while different
    prompts diverge.
    """

    def __init__(self, config: GeneratorBackendConfig):
        self.config = config

    def _call_seed(self, prompt: str) -> int:
        return (self.config.seed or 0) ^ stable_hash64(prompt.encode("utf-8")) & 0x7FFFFFFF

    def complete(self, prompt: str) -> str:
        if prompt_mod.LEAD_PREFIX.split(":")[0] in prompt and prompt_mod.EXAMPLES_HEADER in prompt and "JSON array" in prompt:
            return self._generate(prompt)
        if "Query molecule:" in prompt:
            return self._predict(prompt)
        if "Modify the molecule:" in prompt:
            return self._modify(prompt)
        raise BackendError("mock backend cannot interpret this prompt")

    def _examples(self, prompt: str) -> list[tuple[str, float]]:
        lines = prompt.splitlines()
        try:
            start = lines.index(prompt_mod.EXAMPLES_HEADER) + 1
        except ValueError:
            return []
        out = []
        for line in lines[start:]:
            if not line.strip():
                break
            parts = line.split("\t")
            if len(parts) >= 2:
                try:
                    out.append((parts[0], float(parts[1])))
                except ValueError:
                    continue
        return out

    def _generate(self, prompt: str) -> str:
        examples = self._examples(prompt)
        lead_match = re.search(re.escape(prompt_mod.LEAD_PREFIX) + r"(\S+)", prompt)
        batch_match = re.search(r"Propose exactly (\d+)", prompt)
        if not examples or not lead_match or not batch_match:
            raise BackendError("mock backend could not parse the generation prompt")
        smiles_list = mock_generate(
            examples,
            lead_match.group(1),
            int(batch_match.group(1)),
            seed=self._call_seed(prompt),
            mutation_rate=self.config.mutation_rate,
        )
        return json.dumps([{"smiles": s} for s in smiles_list])

    def _predict(self, prompt: str) -> str:
        examples = self._examples(prompt)
        query_match = re.search(r"Query molecule: (\S+)", prompt)
        if not examples or not query_match:
            raise BackendError("mock backend could not parse the prediction prompt")
        query_fp = circular_fingerprint(parse_smiles(query_match.group(1)))
        weights, values = [], []
        for smiles, activity in examples:
            try:
                sim = tanimoto_similarity(
                    query_fp, circular_fingerprint(parse_smiles(smiles))
                )
            except Exception:
                continue
            weights.append(sim + 1e-6)
            values.append(activity)
        if not values:
            raise BackendError("mock backend found no usable examples")
        prediction = sum(w * v for w, v in zip(weights, values)) / sum(weights)
        return json.dumps({"activity": round(prediction, 4)})

    def _modify(self, prompt: str) -> str:
        import random

        target_match = re.search(r"Modify the molecule: (\S+)", prompt)
        if not target_match:
            raise BackendError("mock backend could not parse the modify prompt")
        mol = parse_smiles(target_match.group(1))
        rng = random.Random(self._call_seed(prompt))
        _, smiles = mutate_molecule(mol, rng, n_edits=rng.randint(1, 2))
        return json.dumps({"smiles": smiles})


class ScriptedBackend:
    """Plays back canned responses: first entry whose pattern (a substring
    or regex) matches the prompt wins."""

    def __init__(self, entries: list[tuple[str, str]]):
        self.entries = entries

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        data = json.loads(Path(path).read_text())
        return cls([(e["pattern"], e["response"]) for e in data])

    def complete(self, prompt: str) -> str:
        for pattern, response in self.entries:
            if pattern in prompt or re.search(pattern, prompt, re.DOTALL):
                return response
        raise BackendError("no scripted response matches the prompt")


def make_backend(config: GeneratorBackendConfig, temperature: float | None = None):
    if config.kind == "remote":
        return RemoteBackend(config, temperature=temperature)
    if config.kind == "mock":
        return MockBackend(config)
    if config.script_path is None:
        raise ValidationError("scripted backend needs script_path")
    return ScriptedBackend.from_file(config.script_path)


# ---------------------------------------------------------------------------
# request pipeline
# ---------------------------------------------------------------------------

def complete_with_retries(
    backend,
    prompt: str,
    max_retries: int = 3,
    backoff: float = 0.5,
    audit: AuditLog | None = None,
) -> str:
    """Call the backend, retrying timeouts and malformed payloads with
    exponential backoff; the prompt is never altered between attempts."""
    fingerprint = prompt_fingerprint(prompt)
    if audit:
        audit.record("request", fingerprint, prompt)
    last: Exception | None = None
    for attempt in range(max_retries):
        try:
            raw = backend.complete(prompt)
        except (BackendTimeoutError, MalformedResponseError) as exc:
            last = exc
            if audit:
                audit.record("error", fingerprint, str(exc))
            if attempt + 1 < max_retries:
                time.sleep(backoff * (2 ** attempt))
            continue
        if audit:
            audit.record("response", fingerprint, raw)
        return raw
    assert last is not None
    raise last


def generate_batch(
    config: GeneratorBackendConfig,
    prompt: str,
    audit: AuditLog | None = None,
    backend=None,
) -> GeneratedBatch:
    """Request one batch and parse it into a GeneratedBatch.

    Timeouts and malformed payloads are retried up to config.max_retries
    with the prompt unchanged; the final MalformedResponseError carries the
    raw text. Entries failing SMILES validation are retained with status.
    """
    engine = backend if backend is not None else make_backend(config)
    fingerprint = prompt_fingerprint(prompt)
    if audit:
        audit.record("request", fingerprint, prompt)
    last: Exception | None = None
    for attempt in range(config.max_retries):
        try:
            raw = engine.complete(prompt)
            if audit:
                audit.record("response", fingerprint, raw)
            return parse_generation_response(raw, prompt)
        except (BackendTimeoutError, MalformedResponseError) as exc:
            last = exc
            log.warning("generation attempt %d failed: %s", attempt + 1, exc)
            if audit:
                audit.record("error", fingerprint, str(exc))
            if attempt + 1 < config.max_retries:
                time.sleep(config.backoff * (2 ** attempt))
    assert last is not None
    raise last
