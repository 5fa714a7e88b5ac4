"""Pluggable LLM access: an HTTP chat-completions client and a scripted mock.

Both expose the same `generate` surface and return completions with a
mean per-token log-probability, which the vote tie-break consumes.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol

import httpx

DEFAULT_TEMPERATURE = 0.1
DEFAULT_SAMPLING_N = 5

API_KEY_ENV = "FLEXTAB_API_KEY"


class BackendError(RuntimeError):
    """Backend failed after exhausting retries; attaches to the outcome."""


class BackendTimeout(BackendError):
    """Per-request timeout elapsed; distinguishable from other transport failures."""


class RequestError(ValueError):
    """The generation request violates its own invariants."""


@dataclass(frozen=True)
class GenerationRequest:
    prompt: str
    decoding: str = "greedy"  # "greedy" | "sample"
    temperature: float = DEFAULT_TEMPERATURE
    n_samples: int = 1
    max_tokens: int = 512
    stop_sequences: tuple[str, ...] = ()
    # Routing hints for the table-driven mock; the HTTP client ignores them.
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.decoding not in ("greedy", "sample"):
            raise RequestError(f"unknown decoding {self.decoding!r}")
        if self.n_samples < 1:
            raise RequestError("n_samples must be positive")
        if self.decoding == "greedy" and self.n_samples != 1:
            raise RequestError("greedy decoding requires n_samples = 1")
        if self.temperature < 0:
            raise RequestError("temperature must be non-negative")
        if self.max_tokens < 1:
            raise RequestError("max_tokens must be positive")


@dataclass(frozen=True)
class Completion:
    text: str
    mean_logprob: float = 0.0
    # Set by the mock when the fixture carries an already-resolved answer
    # (lets every pipeline run without the program runner).
    resolved_answer: Optional[str] = None
    resolved_error: Optional[str] = None


class Backend(Protocol):
    def generate(self, request: GenerationRequest) -> list[Completion]: ...


def sample_request(prompt: str, n: int = DEFAULT_SAMPLING_N,
                   temperature: float = DEFAULT_TEMPERATURE, **kw) -> GenerationRequest:
    return GenerationRequest(prompt=prompt, decoding="sample",
                             temperature=temperature, n_samples=n, **kw)


class MockBackend:
    """Table-driven deterministic backend.

    The fixture is a line-delimited file mapping
    (instance_id, format, sample_index) to a completion record:
    {"instance_id", "format", "sample_index", "text", "mean_logprob",
     "answer"?, "error"?}. Requests with no fixture entry fall back to a
    completion that is a pure function of (seed, prompt, sample index).
    """

    def __init__(self, fixture_path: Optional[str | Path] = None, seed: int = 0):
        self.seed = seed
        self.call_count = 0
        self.completion_count = 0
        self._fixture: dict[tuple[str, str, int], dict] = {}
        if fixture_path is not None:
            with open(fixture_path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    rec = json.loads(line)
                    key = (rec["instance_id"], rec["format"],
                           int(rec.get("sample_index", 0)))
                    self._fixture[key] = rec

    def _synthesize(self, prompt: str, index: int) -> Completion:
        digest = hashlib.sha256(
            f"{self.seed}:{index}:{prompt}".encode()).hexdigest()
        logprob = -((int(digest[:8], 16) % 1000) / 1000.0) - 0.001
        return Completion(text=f"so the answer is: mock-{digest[:8]}",
                          mean_logprob=logprob)

    def generate(self, request: GenerationRequest) -> list[Completion]:
        self.call_count += 1
        self.completion_count += request.n_samples
        iid = request.metadata.get("instance_id")
        fmt = request.metadata.get("format")
        out = []
        for idx in range(request.n_samples):
            rec = self._fixture.get((iid, fmt, idx)) if iid and fmt else None
            if rec is None:
                out.append(self._synthesize(request.prompt, idx))
            else:
                out.append(Completion(
                    text=rec.get("text", ""),
                    mean_logprob=float(rec.get("mean_logprob", 0.0)),
                    resolved_answer=rec.get("answer"),
                    resolved_error=rec.get("error"),
                ))
        return out


class HTTPBackend:
    """Chat-completion style HTTP client with retries and log-probabilities."""

    def __init__(self, base_url: str, model: str, api_key: Optional[str] = None,
                 timeout: float = 60.0, retries: int = 3, backoff: float = 1.0,
                 logprob_agg: str = "mean"):
        if logprob_agg not in ("mean", "sum"):
            raise RequestError("logprob_agg must be 'mean' or 'sum'")
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key or os.environ.get(API_KEY_ENV)
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.logprob_agg = logprob_agg
        self._client = httpx.Client(timeout=timeout)

    def _aggregate(self, choice: dict) -> float:
        logprobs = (choice.get("logprobs") or {}).get("content") or []
        values = [t["logprob"] for t in logprobs if "logprob" in t]
        if not values:
            # No token log-probabilities from the endpoint: tie-breaks
            # degrade to canonical format order.
            return 0.0
        total = sum(values)
        return total if self.logprob_agg == "sum" else total / len(values)

    def generate(self, request: GenerationRequest) -> list[Completion]:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "n": request.n_samples,
            "max_tokens": request.max_tokens,
            "logprobs": True,
        }
        if request.decoding == "sample":
            payload["temperature"] = request.temperature
        else:
            payload["temperature"] = 0.0
        if request.stop_sequences:
            payload["stop"] = list(request.stop_sequences)
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        last_error: Exception | None = None
        for attempt in range(self.retries):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                resp = self._client.post(f"{self.base_url}/chat/completions",
                                         json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                last_error = BackendTimeout(
                    f"request timed out after {self.timeout}s (attempt {attempt + 1})")
                last_error.__cause__ = exc
                continue
            except httpx.TransportError as exc:
                last_error = BackendError(
                    f"transport failure (attempt {attempt + 1}): {exc}")
                continue
            if resp.status_code >= 500:
                last_error = BackendError(
                    f"server error {resp.status_code} (attempt {attempt + 1})")
                continue
            if resp.status_code >= 400:
                raise BackendError(f"request rejected: {resp.status_code} {resp.text}")
            body = resp.json()
            return [
                Completion(text=c["message"]["content"] or "",
                           mean_logprob=self._aggregate(c))
                for c in body["choices"]
            ]
        raise last_error if last_error else BackendError("no attempts made")
