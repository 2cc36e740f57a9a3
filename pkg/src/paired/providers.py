"""LLM provider clients: an offline deterministic stub and an HTTP client.

Selection is driven by the PAIRED_LLM_URL environment variable; the
value ``stub:`` (optionally ``stub:<seed>``) picks the in-tree stub so
every workflow runs offline.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass
from typing import Protocol

from paired.contentgen import PromptBundle, ValidationReport
from paired.errors import ProviderUnavailable

ENV_URL = "PAIRED_LLM_URL"
ENV_KEY = "PAIRED_LLM_KEY"


@dataclass(frozen=True)
class ProviderConfig:
    endpoint: str
    model: str = "default"
    credential: str | None = None
    timeout: float = 30.0
    max_retries: int = 2

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


class Provider(Protocol):
    def complete(self, bundle: PromptBundle, repair: ValidationReport | None = None) -> dict: ...


_OBJECT_LINE = re.compile(r"^- (?P<name>[^|]+?) \|.*?count=(?P<count>\d+)", re.MULTILINE)
_CONCEPT_LINE = re.compile(r"^- (?P<id>\S+) \[level \d+\] (?P<name>[^:]+):", re.MULTILINE)


class StubProvider:
    """Deterministic template-driven provider for offline use.

    Reads the rendered prompt text exactly like a real model would:
    scene objects and the concept list are parsed back out of the
    prompt sections. An optional ``script`` supplies explicit payloads
    (served in order) so tests can stage failure sequences; once the
    script is exhausted the template takes over.
    """

    def __init__(self, script: list[dict] | None = None, seed: str = "") -> None:
        self._script = list(script or [])
        self._seed = seed

    def complete(self, bundle: PromptBundle, repair: ValidationReport | None = None) -> dict:
        if self._script:
            return self._script.pop(0)
        return self._template_payload(bundle)

    def _template_payload(self, bundle: PromptBundle) -> dict:
        concepts = [(m.group("id"), m.group("name").strip()) for m in _CONCEPT_LINE.finditer(bundle.framework_section)]
        if not concepts:
            return {}
        digest = hashlib.sha256((self._seed + bundle.page_image_ref + bundle.visual_section).encode()).digest()
        if bundle.target_concept:
            concept_id, concept_name = next(
                ((cid, name) for cid, name in concepts if cid == bundle.target_concept),
                concepts[0],
            )
        else:
            concept_id, concept_name = concepts[digest[0] % len(concepts)]

        objects = [(m.group("name").strip(), int(m.group("count"))) for m in _OBJECT_LINE.finditer(bundle.visual_section)]

        if objects and (concept_id.endswith("how-many") or (bundle.subject == "math" and not bundle.target_concept)):
            name, count = objects[digest[1] % len(objects)]
            correct = digest[2] % 4
            pool = sorted({count, count + 1, count + 2, max(1, count - 1), count + 3})
            distractors = [n for n in pool if n != count][:3]
            choices = [str(n) for n in distractors]
            choices.insert(correct, str(count))
            return {
                "concept_id": "math.how-many" if any(c[0] == "math.how-many" for c in concepts) else concept_id,
                "question": f"How many {name} can you find on this page?",
                "choices": choices,
                "correct_index": correct,
                "explanation": f"Point to each of the {name} one at a time and count together: you reach {count}.",
                "motivation": f"Great counting! Keep your eyes open for more {name} in the story.",
            }

        subject_word = "letter" if bundle.subject == "literacy" else "number"
        options = ["the red one", "the blue one", "the big one", "the small one"]
        correct = digest[3] % 4
        return {
            "concept_id": concept_id,
            "question": f"Thinking about {concept_name}, which {subject_word} idea fits this page best?",
            "choices": options[correct:] + options[:correct],
            "correct_index": 0,
            "explanation": f"Look back at the picture and talk about {concept_name} to find the answer together.",
            "motivation": "Wonderful thinking! You are becoming a great reader.",
        }


class HttpProvider:
    """JSON-over-HTTP client for a hosted chat-completion endpoint."""

    def __init__(self, config: ProviderConfig) -> None:
        self.config = config

    def complete(self, bundle: PromptBundle, repair: ValidationReport | None = None) -> dict:
        import httpx

        messages = [{"role": "user", "content": bundle.as_text()}]
        if repair is not None:
            messages.append(
                {
                    "role": "user",
                    "content": "The previous response failed validation: "
                    + json.dumps(repair.to_dict())
                    + ". Return a corrected JSON object.",
                }
            )
        headers = {}
        if self.config.credential:
            headers["Authorization"] = f"Bearer {self.config.credential}"
        try:
            response = httpx.post(
                self.config.endpoint,
                json={"model": self.config.model, "messages": messages, "response_format": {"type": "json_object"}},
                headers=headers,
                timeout=self.config.timeout,
            )
            response.raise_for_status()
            body = response.json()
        except Exception as exc:
            raise ProviderUnavailable(f"provider call failed: {exc}") from exc

        content = body.get("content")
        if content is None:
            try:
                content = body["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError):
                raise ProviderUnavailable(f"unrecognized provider response shape: {list(body)}") from None
        if isinstance(content, dict):
            return content
        try:
            return json.loads(content)
        except json.JSONDecodeError:
            return {"raw": content}


def provider_from_env(env: dict[str, str] | None = None) -> Provider:
    """Build a provider from PAIRED_LLM_URL / PAIRED_LLM_KEY."""
    env = env if env is not None else dict(os.environ)
    url = env.get(ENV_URL, "stub:")
    if url.startswith("stub:"):
        return StubProvider(seed=url[len("stub:"):])
    return HttpProvider(ProviderConfig(endpoint=url, credential=env.get(ENV_KEY)))
