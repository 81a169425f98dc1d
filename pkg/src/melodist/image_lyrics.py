"""Lyrics from an image via an external language-model service.

The provider interface is one call: send an image plus a prompt, get text
back. Two implementations exist: an HTTP provider configured entirely from
environment variables, and an offline stub that returns a bundled lyric
fixture so the whole image pipeline runs deterministically with no network.

HTTP provider configuration (all required unless stub mode is used):
  LYRICS_LLM_ENDPOINT  POST target; receives JSON
                       {"model", "prompt", "image_base64", "media_type"}
  LYRICS_LLM_MODEL     model identifier passed through verbatim
  LYRICS_LLM_API_KEY   bearer credential

The response body may be {"text": "..."} or an OpenAI-style
{"choices": [{"message": {"content": "..."}}]}.
"""

from __future__ import annotations

import base64
import json
import os
import re
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from importlib import resources
from typing import Protocol

from .errors import AuthFailure, EmptyGeneration, ProviderUnavailable
from .lyrics import segment_phrases

LENGTH_PHRASE_COUNTS = {"short": 4, "medium": 8, "long": 12}

ENDPOINT_VAR = "LYRICS_LLM_ENDPOINT"
MODEL_VAR = "LYRICS_LLM_MODEL"
API_KEY_VAR = "LYRICS_LLM_API_KEY"

_RETRIES = 2
_BACKOFF_SECONDS = 0.5

_FENCE_RE = re.compile(r"^\s*```.*$")
_NUMBERING_RE = re.compile(r"^\s*(?:\d+[.)]\s*|[-*+]\s+)")


@dataclass(frozen=True)
class LyricsRequest:
    image: bytes
    media_type: str
    length_preference: str = "medium"
    style_hint: str | None = None

    def __post_init__(self) -> None:
        if not self.image:
            raise ValueError("image must be non-empty")
        if self.media_type not in ("image/png", "image/jpeg"):
            raise ValueError(f"unsupported media type: {self.media_type}")
        if self.length_preference not in LENGTH_PHRASE_COUNTS:
            raise ValueError(f"unknown length preference: {self.length_preference}")


@dataclass(frozen=True)
class LyricsResponse:
    lyrics: str
    provider_metadata: str = ""


class LyricsProvider(Protocol):
    def send(self, image: bytes, media_type: str, prompt: str) -> str:
        """Return the model's raw text output."""


def build_prompt(req: LyricsRequest) -> str:
    """Deterministic instruction template for the lyric generation call."""
    phrase_count = LENGTH_PHRASE_COUNTS[req.length_preference]
    lines = [
        "Write song lyrics inspired by the attached image.",
        f"Write exactly {phrase_count} short phrases, one phrase per line.",
        "Return only the lyric lines: no title, no numbering, no quotes,",
        "no markup, and no commentary.",
    ]
    if req.style_hint:
        lines.append(f"Style hint: {req.style_hint}")
    return "\n".join(lines)


def parse_lyrics_response(raw: str) -> str:
    """Clean model output down to bare lyric lines.

    Strips code fences, list numbering/bullets, and surrounding quotes;
    raises EmptyGeneration if fewer than two phrases survive.
    """
    if not raw or not raw.strip():
        raise EmptyGeneration("provider returned no text")
    lines = []
    for line in raw.splitlines():
        if _FENCE_RE.match(line):
            continue
        cleaned = _NUMBERING_RE.sub("", line).strip().strip('"“”').strip()
        if cleaned:
            lines.append(cleaned)
    text = "\n".join(lines)
    if not text:
        raise EmptyGeneration("no usable lyric lines in provider output")
    try:
        phrases = segment_phrases(text)
    except Exception as exc:
        raise EmptyGeneration(f"provider output is not lyric text: {exc}") from exc
    if len(phrases) < 2:
        raise EmptyGeneration("provider output has fewer than two phrases")
    return text


class StubProvider:
    """Offline deterministic provider backed by a bundled fixture."""

    def send(self, image: bytes, media_type: str, prompt: str) -> str:
        del image, media_type, prompt
        return resources.files("melodist.data").joinpath("stub_lyrics.txt").read_text("utf-8")


class HttpProvider:
    """JSON-over-HTTPS provider configured from environment variables."""

    def __init__(
        self,
        endpoint: str | None = None,
        model: str | None = None,
        api_key: str | None = None,
        timeout: float = 60.0,
    ):
        self.endpoint = endpoint or os.environ.get(ENDPOINT_VAR)
        self.model = model or os.environ.get(MODEL_VAR, "")
        self.api_key = api_key or os.environ.get(API_KEY_VAR)
        self.timeout = timeout
        if not self.endpoint:
            raise ProviderUnavailable(f"{ENDPOINT_VAR} is not configured")
        if not self.api_key:
            raise AuthFailure(f"{API_KEY_VAR} is not configured")

    def send(self, image: bytes, media_type: str, prompt: str) -> str:
        body = json.dumps({
            "model": self.model,
            "prompt": prompt,
            "image_base64": base64.b64encode(image).decode("ascii"),
            "media_type": media_type,
        }).encode("utf-8")
        request = urllib.request.Request(
            self.endpoint,
            data=body,
            headers={
                "Content-Type": "application/json",
                "Authorization": f"Bearer {self.api_key}",
            },
            method="POST",
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                payload = json.loads(response.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            if exc.code in (401, 403):
                raise AuthFailure(f"provider rejected credentials: {exc.code}") from exc
            raise ProviderUnavailable(f"provider error {exc.code}") from exc
        except (urllib.error.URLError, TimeoutError) as exc:
            raise ProviderUnavailable(f"provider unreachable: {exc}") from exc
        if isinstance(payload.get("text"), str):
            return payload["text"]
        try:
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderUnavailable("provider response has no text field") from exc


def provider_from_env(stub_mode: bool | None = None) -> LyricsProvider:
    """Stub provider when LYRICS_STUB_MODE is truthy (or requested), else HTTP."""
    if stub_mode is None:
        stub_mode = os.environ.get("LYRICS_STUB_MODE", "").lower() in ("1", "true", "yes")
    return StubProvider() if stub_mode else HttpProvider()


def request_lyrics(req: LyricsRequest, provider: LyricsProvider) -> LyricsResponse:
    """Send the request, retrying transient failures twice with backoff."""
    prompt = build_prompt(req)
    last_error: Exception | None = None
    for attempt in range(_RETRIES + 1):
        try:
            raw = provider.send(req.image, req.media_type, prompt)
            break
        except ProviderUnavailable as exc:
            last_error = exc
            if attempt < _RETRIES:
                time.sleep(_BACKOFF_SECONDS * (2 ** attempt))
    else:
        raise ProviderUnavailable(str(last_error))
    lyrics = parse_lyrics_response(raw)
    return LyricsResponse(lyrics, provider_metadata=type(provider).__name__)
