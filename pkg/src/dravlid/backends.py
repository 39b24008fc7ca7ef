"""Pluggable classifier backends: live endpoint, recorded replay, rule baseline.

Every backend answers classify_word(word, config) -> RawPrediction and
classify_words for batches. The live backend consults the response cache
before the network and persists each fresh reply; replay answers from a
fixed record set and treats a miss as an error, never a network fallback.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from dravlid.baseline import LexiconSet, classify_baseline, default_lexicons
from dravlid.cache import CacheRecord, ResponseCache, cache_key, load_cache_records, make_record
from dravlid.errors import FixtureMissError
from dravlid.prompting import ExperimentConfig, render_prompt
from dravlid.taxonomy import code_for
from dravlid.transport import ChatRequest, ChatTransport

DEFAULT_MAX_WORKERS = 4


@dataclass(frozen=True)
class RawPrediction:
    """The verbatim first-choice reply for one word under one config."""

    word: str
    raw_response: str
    config_label: str
    from_cache: bool


class Backend(Protocol):
    kind: str

    def classify_word(self, word: str, config: ExperimentConfig) -> RawPrediction: ...

    def classify_words(
        self, words: Sequence[str], config: ExperimentConfig
    ) -> list[RawPrediction]: ...


class LiveBackend:
    """Cache-through client for an OpenAI-compatible endpoint."""

    kind = "live"

    def __init__(
        self,
        cache: ResponseCache,
        transport: ChatTransport,
        max_workers: int = DEFAULT_MAX_WORKERS,
    ):
        if max_workers < 1:
            raise ValueError("max_workers must be at least 1")
        self.cache = cache
        self.transport = transport
        self.max_workers = max_workers

    def classify_word(self, word: str, config: ExperimentConfig) -> RawPrediction:
        prompt = render_prompt(word, config.task)
        key = cache_key(config.model_id, config.temperature, prompt)
        cached = self.cache.get(key)
        if cached is not None:
            return RawPrediction(word, cached.raw_response, config.run_label, True)

        raw = self.transport.complete(
            ChatRequest(
                model_id=config.model_id,
                temperature=config.temperature,
                max_output_tokens=config.max_output_tokens,
                user_message=prompt,
            )
        )
        canonical, inserted = self.cache.put_if_absent(
            make_record(config.model_id, config.temperature, prompt, raw)
        )
        return RawPrediction(
            word, canonical.raw_response, config.run_label, not inserted
        )

    def classify_words(
        self, words: Sequence[str], config: ExperimentConfig
    ) -> list[RawPrediction]:
        """Classify a batch, at most max_workers requests in flight.

        Duplicate words are requested once; later occurrences read the
        first occurrence's persisted record. Results come back in input
        order regardless of completion order.
        """
        if self.max_workers == 1 or len(words) <= 1:
            return [self.classify_word(word, config) for word in words]

        first_position: dict[str, int] = {}
        for i, word in enumerate(words):
            first_position.setdefault(word, i)

        unique_words = list(first_position)
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            unique_results = list(
                pool.map(lambda w: self.classify_word(w, config), unique_words)
            )
        by_word = dict(zip(unique_words, unique_results))

        results = []
        for i, word in enumerate(words):
            res = by_word[word]
            if i != first_position[word]:
                res = RawPrediction(word, res.raw_response, res.config_label, True)
            results.append(res)
        return results


class ReplayBackend:
    """Answers exclusively from recorded CacheRecords; misses are errors."""

    kind = "replay"

    def __init__(self, records: Iterable[CacheRecord]):
        self._records: dict[str, CacheRecord] = {}
        for record in records:
            if record.cache_key in self._records:
                raise ValueError(
                    f"duplicate cache key in replay fixture: {record.cache_key}"
                )
            self._records[record.cache_key] = record

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "ReplayBackend":
        return cls(load_cache_records(path))

    def __len__(self) -> int:
        return len(self._records)

    def classify_word(self, word: str, config: ExperimentConfig) -> RawPrediction:
        prompt = render_prompt(word, config.task)
        key = cache_key(config.model_id, config.temperature, prompt)
        record = self._records.get(key)
        if record is None:
            raise FixtureMissError(
                f"no recorded response for word {word!r} "
                f"(model {config.model_id}, temperature {config.temperature})"
            )
        return RawPrediction(word, record.raw_response, config.run_label, True)

    def classify_words(
        self, words: Sequence[str], config: ExperimentConfig
    ) -> list[RawPrediction]:
        return [self.classify_word(word, config) for word in words]


class BaselineBackend:
    """Rule classifier exposed through the backend interface.

    The raw response is the predicted wire code, so downstream
    normalization is exact and the whole path stays offline.
    """

    kind = "baseline"

    def __init__(self, lexicons: LexiconSet | None = None):
        self._lexicons = lexicons

    def classify_word(self, word: str, config: ExperimentConfig) -> RawPrediction:
        lex = self._lexicons if self._lexicons is not None else default_lexicons(config.task)
        category = classify_baseline(word, config.task, lex)
        return RawPrediction(
            word, code_for(category, config.task), config.run_label, False
        )

    def classify_words(
        self, words: Sequence[str], config: ExperimentConfig
    ) -> list[RawPrediction]:
        return [self.classify_word(word, config) for word in words]
