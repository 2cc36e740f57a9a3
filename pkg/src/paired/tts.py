"""Text-to-speech provider abstraction with an offline fallback.

The null provider returns a text-passthrough marker so the simulated
robot "speaks" by logging text; the HTTP provider posts to a synthesis
endpoint and stores the returned audio bytes.
"""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from paired.errors import TtsUnavailable

logger = logging.getLogger(__name__)

ENV_TTS_KEY = "PAIRED_TTS_KEY"


@dataclass(frozen=True)
class AudioRef:
    kind: str  # "text" passthrough or "audio"
    text: str
    path: str | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "text": self.text, "path": self.path}


class TtsProvider(Protocol):
    def synthesize(self, text: str) -> AudioRef: ...


class NullTts:
    """Offline provider: every synthesis is a text passthrough."""

    def synthesize(self, text: str) -> AudioRef:
        return AudioRef(kind="text", text=text)


class HttpTts:
    """Posts text to a synthesis endpoint and caches the audio bytes."""

    def __init__(self, url: str, cache_dir: str | Path = "tts-cache", credential: str | None = None, timeout: float = 30.0) -> None:
        self.url = url
        self.cache_dir = Path(cache_dir)
        self.credential = credential if credential is not None else os.environ.get(ENV_TTS_KEY)
        self.timeout = timeout

    def synthesize(self, text: str) -> AudioRef:
        import httpx

        headers = {}
        if self.credential:
            headers["Authorization"] = f"Bearer {self.credential}"
        try:
            response = httpx.post(self.url, json={"text": text}, headers=headers, timeout=self.timeout)
            response.raise_for_status()
        except Exception as exc:
            raise TtsUnavailable(f"tts call failed: {exc}") from exc
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        name = hashlib.sha256(text.encode()).hexdigest()[:16] + ".audio"
        path = self.cache_dir / name
        path.write_bytes(response.content)
        return AudioRef(kind="audio", text=text, path=str(path))


def synthesize(text: str, provider: TtsProvider | None) -> AudioRef:
    """Synthesize with graceful degradation to text passthrough."""
    if provider is None:
        return NullTts().synthesize(text)
    try:
        return provider.synthesize(text)
    except TtsUnavailable as exc:
        logger.warning("TTS unavailable, degrading to text passthrough: %s", exc)
        return NullTts().synthesize(text)
