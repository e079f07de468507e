"""Completion providers: a deterministic offline stub and a remote HTTP client.

The stub is a pure function of (bundle, seed) so the whole primary test suite
runs with no network access; the remote provider speaks the common
chat-completion wire format (ordered role/content messages).
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import threading
from collections import Counter
from typing import Sequence

import httpx

from .engine import (
    DRAFT_ABILITIES_PREFIX,
    DRAFT_DESCRIPTION_PREFIX,
    ENRICH_ATTRIBUTES_PREFIX,
    PromptBundle,
)
from .errors import ProviderError

logger = logging.getLogger(__name__)

_STOPWORDS = frozenset(
    "a all an and any are as at be but by each for from had has have having he her him "
    "his i if in is it its keep like make many me much my never none of on one or other "
    "our she so some take that the their them they this to up very was we were what when "
    "which who will with you your".split()
)

_NAME_RE = re.compile(r"^You are ([^,.;:\n]+)")
_ATTR_RE = re.compile(
    r"age (?P<age>\d+); occupation (?P<occupation>.+?); "
    r"medical condition (?P<condition>.+?); theme (?P<theme>.+?)\.$"
)


def _persona_name(bundle: PromptBundle) -> str:
    match = _NAME_RE.match(bundle.turns[0].content)
    return match.group(1).strip() if match else "Persona"


def _last_user_content(bundle: PromptBundle) -> str:
    for turn in reversed(bundle.turns):
        if turn.role == "user":
            return turn.content
    return ""


def _source_marker(bundle: PromptBundle) -> str:
    if bundle.grounding:
        return f"[source:{bundle.grounding[0].record_id}]"
    return "[ungrounded]"


def _dominant_terms(tokens: Sequence[str], n: int) -> list[str]:
    counts = Counter(t for t in tokens if t not in _STOPWORDS and len(t) > 2)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    terms = [term for term, _ in ranked[:n]]
    fallbacks = ["routine", "practice", "patience"]
    while len(terms) < n:
        terms.append(fallbacks[len(terms) % len(fallbacks)])
    return terms


def _clip(text: str, limit: int = 80) -> str:
    return text if len(text) <= limit else text[: limit - 1] + "…"


class StubProvider:
    """Deterministic template provider for offline runs and tests.

    Output is a pure function of the bundle content and the configured seed;
    replies embed the persona name, the strategy tag, and a marker naming the
    top grounding passage's record so tests can assert grounding.
    """

    identity = "stub"

    def __init__(self, seed: int = 0) -> None:
        self.seed = seed

    def _digest(self, bundle: PromptBundle) -> str:
        payload = json.dumps(
            {"seed": self.seed, "bundle": bundle.to_json()},
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:8]

    def complete(self, bundle: PromptBundle) -> str:
        request = _last_user_content(bundle)
        if request.startswith(DRAFT_ABILITIES_PREFIX):
            return self._draft_abilities(bundle)
        if request.startswith(DRAFT_DESCRIPTION_PREFIX):
            return self._draft_description(bundle)
        if request.startswith(ENRICH_ATTRIBUTES_PREFIX):
            return self._enriched_description(bundle, request)
        return self._chat_reply(bundle, request)

    def _chat_reply(self, bundle: PromptBundle, question: str) -> str:
        name = _persona_name(bundle)
        return (
            f'Speaking as {name}, here is what I can share. You asked: "{_clip(question)}" '
            f"My answer comes from my own story. {_source_marker(bundle)} "
            f"(strategy={bundle.strategy}; stub={self._digest(bundle)})"
        )

    def _draft_description(self, bundle: PromptBundle) -> str:
        name = _persona_name(bundle)
        return f"Hi! I am {name}. I am glad to share my story with you."

    def _enriched_description(self, bundle: PromptBundle, request: str) -> str:
        match = _ATTR_RE.search(request)
        if not match:
            raise ProviderError(f"stub could not parse attribute request: {request!r}")
        name = _persona_name(bundle)
        age = match.group("age")
        occupation = match.group("occupation").lower()
        condition = match.group("condition")
        theme = match.group("theme").lower()
        return (
            f"Hi! I am {name}, a {age}-year-old {occupation} with {condition}. "
            f"I love what I do, and my {theme} story comes from lived experience. "
            f"{_source_marker(bundle)}"
        )

    def _draft_abilities(self, bundle: PromptBundle) -> str:
        if not bundle.grounding:
            return "[]"
        top = bundle.grounding[0]
        first, second, third = _dominant_terms(top.tokens, 3)
        theme = top.theme.value
        entry = {
            "theme": theme,
            "name": first.title(),
            "description": (
                f"Hi! My {first} carries me through my {theme.lower()} days, "
                f"and I am proud of what I can do."
            ),
            "drivers": [
                {
                    "name": f"Support with {second}",
                    "story": (
                        f"When someone walks the {second} part through with me step by "
                        f"step, my {first} really shows."
                    ),
                }
            ],
            "blockers": [
                {
                    "name": f"Rushed {third}",
                    "story": (
                        f"When the {third} part gets rushed, I need extra time before "
                        f"my {first} can work for me."
                    ),
                }
            ],
        }
        return json.dumps([entry], sort_keys=True, ensure_ascii=False)


class RemoteProvider:
    """Client for a chat-completion HTTP endpoint.

    Sends the bundle's ordered role/content messages; fails fast with a
    30-second timeout and a single retry on transient errors.
    """

    identity = "remote"

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str,
        timeout: float = 30.0,
        max_retries: int = 1,
    ) -> None:
        if not base_url:
            raise ProviderError("remote provider needs a base URL")
        if not api_key:
            raise ProviderError("remote provider needs an API key")
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self.max_retries = max_retries

    def complete(self, bundle: PromptBundle) -> str:
        payload = {
            "model": self.model,
            "messages": [t.to_json() for t in bundle.turns],
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        url = f"{self.base_url}/chat/completions"
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            try:
                response = httpx.post(url, json=payload, headers=headers, timeout=self.timeout)
            except httpx.HTTPError as exc:
                last_error = exc
                logger.warning("provider request failed (attempt %d): %s", attempt + 1, exc)
                continue
            if response.status_code >= 500:
                last_error = ProviderError(
                    f"provider returned {response.status_code}", retryable=True
                )
                continue
            if response.status_code != 200:
                raise ProviderError(
                    f"provider returned {response.status_code}: {response.text[:200]}"
                )
            try:
                content = response.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise ProviderError(f"malformed provider response: {exc}") from exc
            if not isinstance(content, str) or not content:
                raise ProviderError("provider returned an empty completion")
            return content
        raise ProviderError(f"provider unreachable after retries: {last_error}", retryable=True)


class BoundedProvider:
    """Caps concurrent in-flight completions around any provider."""

    def __init__(self, inner, max_inflight: int = 4) -> None:
        self._inner = inner
        self._semaphore = threading.Semaphore(max_inflight)

    @property
    def identity(self) -> str:
        return self._inner.identity

    def complete(self, bundle: PromptBundle) -> str:
        with self._semaphore:
            return self._inner.complete(bundle)
