"""Backtranslation through a pivot language via pluggable providers.

A provider turns (text, src, dst) into a translated string and declares
which language pairs it supports. Three providers ship here:

* IdentityProvider  -- returns the input; the degenerate test double.
* RecordedProvider  -- replays translations recorded in a cache-format
  file; the default for tests and offline runs.
* HttpProvider      -- wire client for a LibreTranslate-shaped endpoint
  (POST {q, source, target, format} -> {translatedText}), with bounded
  retries, exponential backoff, and a persistent content-addressed cache.

Cache files are JSON lines, one record per translation:
``{"text_hash": sha256-hex, "src": ..., "dst": ..., "output": ...}``.
Re-running a pipeline against a warm cache never touches the network.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence

import requests

from .errors import BtFailed, EmptyTranslation, ProviderUnavailable, UnsupportedPair
from .records import AugmentedExample, bt_of

log = logging.getLogger(__name__)

API_KEY_ENV = "BIASCTX_TRANSLATE_API_KEY"
ENDPOINT_ENV = "BIASCTX_TRANSLATE_URL"
DEFAULT_PIVOT = "es"
SOURCE_LANG = "en"


def text_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ProviderCapabilities:
    pairs: frozenset[tuple[str, str]]
    max_text_length: int = 10_000


class TranslationCache:
    """Content-addressed translation store, optionally persisted to disk.

    Safe for concurrent readers and writers; appends are serialized under
    one lock so the on-disk file stays one valid record per line.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, str, str], str] = {}
        if self.path is not None and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rec = json.loads(line)
                self._entries[(rec["text_hash"], rec["src"], rec["dst"])] = rec["output"]

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, text: str, src: str, dst: str) -> str | None:
        return self._entries.get((text_hash(text), src, dst))

    def put(self, text: str, src: str, dst: str, output: str) -> None:
        key = (text_hash(text), src, dst)
        with self._lock:
            if key in self._entries:
                return
            self._entries[key] = output
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(
                        {"text_hash": key[0], "src": src, "dst": dst, "output": output},
                        ensure_ascii=False,
                    ))
                    fh.write("\n")


class TranslationProvider:
    """Interface: concrete providers set ``capabilities`` and ``_translate``."""

    capabilities: ProviderCapabilities

    def translate(self, text: str, src: str, dst: str) -> str:
        raise NotImplementedError


class IdentityProvider(TranslationProvider):
    def __init__(self, pairs: Iterable[tuple[str, str]] = (("en", "es"), ("es", "en"))):
        self.capabilities = ProviderCapabilities(pairs=frozenset(pairs))

    def translate(self, text: str, src: str, dst: str) -> str:
        return text


class RecordedProvider(TranslationProvider):
    """Replays previously recorded translations, keyed by input hash."""

    def __init__(self, recordings: str | Path | TranslationCache,
                 max_text_length: int = 10_000):
        self.cache = (recordings if isinstance(recordings, TranslationCache)
                      else TranslationCache(recordings))
        pairs = frozenset((src, dst) for _, src, dst in self.cache._entries)
        self.capabilities = ProviderCapabilities(
            pairs=pairs, max_text_length=max_text_length)

    def translate(self, text: str, src: str, dst: str) -> str:
        output = self.cache.get(text, src, dst)
        if output is None:
            raise ProviderUnavailable(
                f"no recording for {src}->{dst} hash {text_hash(text)[:12]}"
            )
        return output


class HttpProvider(TranslationProvider):
    """Client for a LibreTranslate-compatible translation endpoint.

    Credentials come from the BIASCTX_TRANSLATE_API_KEY environment
    variable unless given explicitly; the endpoint likewise falls back to
    BIASCTX_TRANSLATE_URL. Transport failures are retried with exponential
    backoff before surfacing as ProviderUnavailable.
    """

    def __init__(self, endpoint: str | None = None, api_key: str | None = None,
                 pairs: Iterable[tuple[str, str]] = (("en", "es"), ("es", "en")),
                 max_text_length: int = 5_000, cache: TranslationCache | None = None,
                 session: requests.Session | None = None, max_retries: int = 3,
                 backoff_base: float = 0.5, timeout: float = 30.0,
                 sleep: Callable[[float], None] = time.sleep):
        endpoint = endpoint or os.environ.get(ENDPOINT_ENV)
        if not endpoint:
            raise ProviderUnavailable(
                f"no translation endpoint configured (set {ENDPOINT_ENV})")
        self.endpoint = endpoint
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.capabilities = ProviderCapabilities(
            pairs=frozenset(pairs), max_text_length=max_text_length)
        self.cache = cache if cache is not None else TranslationCache()
        self.session = session or requests.Session()
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.timeout = timeout
        self._sleep = sleep

    def translate(self, text: str, src: str, dst: str) -> str:
        cached = self.cache.get(text, src, dst)
        if cached is not None:
            return cached

        payload = {"q": text, "source": src, "target": dst, "format": "text"}
        if self.api_key:
            payload["api_key"] = self.api_key
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            if attempt:
                self._sleep(self.backoff_base * 2 ** (attempt - 1))
            try:
                response = self.session.post(self.endpoint, json=payload,
                                             timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = ProviderUnavailable(f"server error {response.status_code}")
                continue
            if response.status_code != 200:
                raise ProviderUnavailable(
                    f"translation request rejected: {response.status_code}")
            try:
                output = response.json()["translatedText"]
            except (ValueError, KeyError) as exc:
                raise ProviderUnavailable(f"malformed provider response: {exc}") from exc
            self.cache.put(text, src, dst, output)
            return output
        raise ProviderUnavailable(
            f"transport failed after {self.max_retries} attempts: {last_error}")


def translate(provider: TranslationProvider, text: str, src: str, dst: str) -> str:
    """Translate through ``provider``, returning its output verbatim."""
    if (src, dst) not in provider.capabilities.pairs:
        raise UnsupportedPair(f"({src}, {dst}) not supported by provider")
    if len(text) > provider.capabilities.max_text_length:
        raise UnsupportedPair(
            f"text of length {len(text)} exceeds provider max "
            f"{provider.capabilities.max_text_length}")
    output = provider.translate(text, src, dst)
    if not output or not output.strip():
        raise EmptyTranslation(f"provider returned empty output for {src}->{dst}")
    return output


class BtPolicy(str, Enum):
    """Which records a backtranslation pass admits."""

    BOTH_KINDS = "both"
    LEX_ONLY = "lex-only"

    def admits(self, kinds: frozenset[str] | set[str]) -> bool:
        if self is BtPolicy.LEX_ONLY:
            return "LEX" in kinds
        return bool(kinds & {"INF", "LEX"})


@dataclass(frozen=True)
class BtExample:
    origin: str
    text: str
    pivot: str
    provenance: str


def backtranslate(example: AugmentedExample, provider: TranslationProvider,
                  pivot: str = DEFAULT_PIVOT, retries: int = 2) -> BtExample:
    """Round-trip one example's text en -> pivot -> en.

    Transient provider failures are retried up to ``retries`` extra times;
    after that BtFailed carries the origin id. Other provider errors
    propagate unchanged.
    """
    if not example.text.strip():
        raise ValueError(f"example {example.id} has empty text")
    if pivot == SOURCE_LANG:
        raise ValueError("pivot language must differ from the source language")

    last_error: Exception | None = None
    for _ in range(retries + 1):
        try:
            pivoted = translate(provider, example.text, SOURCE_LANG, pivot)
            round_tripped = translate(provider, pivoted, pivot, SOURCE_LANG)
        except ProviderUnavailable as exc:
            last_error = exc
            continue
        return BtExample(
            origin=example.id,
            text=round_tripped,
            pivot=pivot,
            provenance=bt_of(example.provenance),
        )
    raise BtFailed(
        f"backtranslation of {example.id} failed after {retries + 1} attempts: {last_error}",
        origin_ids=(example.id,),
    )


def backtranslate_pool(pool: Sequence[AugmentedExample], policy: BtPolicy,
                       provider: TranslationProvider, pivot: str = DEFAULT_PIVOT,
                       fail_threshold: float = 0.0, max_workers: int = 1,
                       retries: int = 2) -> list[BtExample]:
    """Backtranslate every pool member the policy admits.

    Per-example failures are collected and logged; the run only fails when
    the failure ratio over admitted examples exceeds ``fail_threshold``.
    Results come back sorted by origin id, so concurrent execution cannot
    change the output.
    """
    admitted = [ex for ex in pool if policy.admits(ex.kinds)]

    def _run(example: AugmentedExample) -> BtExample | BtFailed:
        try:
            return backtranslate(example, provider, pivot=pivot, retries=retries)
        except (BtFailed, EmptyTranslation) as exc:
            return BtFailed(f"{example.id}: {exc}", origin_ids=(example.id,))

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            outcomes = list(executor.map(_run, admitted))
    else:
        outcomes = [_run(ex) for ex in admitted]

    results = [o for o in outcomes if isinstance(o, BtExample)]
    failures = [o for o in outcomes if isinstance(o, BtFailed)]
    for failure in failures:
        log.warning("backtranslation failure: %s", failure)
    if admitted and len(failures) / len(admitted) > fail_threshold:
        failed_ids = tuple(i for f in failures for i in f.origin_ids)
        raise BtFailed(
            f"{len(failures)}/{len(admitted)} backtranslations failed "
            f"(threshold {fail_threshold})",
            origin_ids=failed_ids,
        )
    results.sort(key=lambda b: b.origin)
    return results
