"""Estimator-style classifier API.

Both classifiers follow scikit-learn conventions (constructor params stored
verbatim, get_params/set_params, a no-op fit returning self) so they drop
into Pipeline and clone() without inheriting from sklearn. There is nothing
to train: fit only resolves and validates parameters.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass
from typing import Iterable, Sequence

from dravlid.backends import Backend, RawPrediction
from dravlid.baseline import LexiconSet, classify_baseline
from dravlid.corpus import Dataset
from dravlid.errors import UnparseableResponseError
from dravlid.prompting import (
    DEFAULT_MAX_OUTPUT_TOKENS,
    DEFAULT_MODEL_ID,
    ExperimentConfig,
)
from dravlid.taxonomy import Category, TaskLanguage, code_for, normalize_response, parse_task

FAILURE_POLICIES = ("map_to_other", "strict")


def check_words(X: Sequence[str] | Dataset | Iterable[str]) -> list[str]:
    """Validate classifier input: an iterable of non-empty words (or a
    Dataset, whose surfaces are used)."""
    if isinstance(X, Dataset):
        return X.surfaces()
    if isinstance(X, str):
        raise TypeError("expected an iterable of words, got a single string")
    words = list(X)
    for i, word in enumerate(words):
        if not isinstance(word, str):
            raise TypeError(f"word at position {i} is {type(word).__name__}, not str")
        if not word or not word.strip():
            raise ValueError(f"word at position {i} is empty")
    return words


def check_policy(policy: str) -> str:
    if policy not in FAILURE_POLICIES:
        raise ValueError(
            f"unknown failure policy {policy!r}; expected one of {FAILURE_POLICIES}"
        )
    return policy


@dataclass(frozen=True)
class WordPrediction:
    """Per-word pipeline output: raw reply plus its normalized category."""

    word: str
    raw_response: str
    category: Category
    category_code: str
    from_cache: bool
    unparseable: bool


def resolve_predictions(
    raws: Sequence[RawPrediction],
    task: TaskLanguage,
    failure_policy: str = "map_to_other",
) -> list[WordPrediction]:
    """Normalize raw replies into categories under the failure policy.

    map_to_other turns unrecognizable replies into Other (flagged); strict
    raises on the first one, naming the word and the raw reply.
    """
    check_policy(failure_policy)
    resolved = []
    for raw in raws:
        outcome = normalize_response(raw.raw_response, task)
        if outcome.ok:
            assert outcome.category is not None
            category = outcome.category
            unparseable = False
        elif failure_policy == "strict":
            raise UnparseableResponseError(
                f"could not map reply for word {raw.word!r} to a category "
                f"(raw reply: {raw.raw_response!r})"
            )
        else:
            category = Category.OTHER
            unparseable = True
        resolved.append(
            WordPrediction(
                word=raw.word,
                raw_response=raw.raw_response,
                category=category,
                category_code=code_for(category, task),
                from_cache=raw.from_cache,
                unparseable=unparseable,
            )
        )
    return resolved


class BaseWordClassifier:
    """get_params/set_params over the constructor signature, sklearn-style."""

    @classmethod
    def _param_names(cls) -> list[str]:
        signature = inspect.signature(cls.__init__)
        return [
            name
            for name, p in signature.parameters.items()
            if name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self, deep: bool = True) -> dict:
        params = {}
        for name in self._param_names():
            value = getattr(self, name)
            params[name] = value
            if deep and hasattr(value, "get_params"):
                for sub_name, sub_value in value.get_params().items():
                    params[f"{name}__{sub_name}"] = sub_value
        return params

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}"
                )
            setattr(self, name, value)
        return self

    def fit(self, X=None, y=None):
        """Stateless estimator: validates parameters and returns self."""
        self.task_ = parse_task(self.task)  # type: ignore[attr-defined]
        self.classes_ = tuple(Category)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params(deep=False).items())
        return f"{type(self).__name__}({args})"


class RuleBasedClassifier(BaseWordClassifier):
    """Deterministic lexicon/gazetteer/suffix classifier.

    Parameters
    ----------
    task : "kannada"/"kn" or "tamil"/"tm" (or a TaskLanguage)
    lexicons : optional LexiconSet; bundled lists are used when omitted
    """

    def __init__(self, task: str | TaskLanguage = "kannada", lexicons: LexiconSet | None = None):
        self.task = task
        self.lexicons = lexicons

    def predict(self, X) -> list[Category]:
        task = parse_task(self.task)
        return [classify_baseline(w, task, self.lexicons) for w in check_words(X)]

    def predict_codes(self, X) -> list[str]:
        task = parse_task(self.task)
        return [code_for(c, task) for c in self.predict(X)]


class LLMClassifier(BaseWordClassifier):
    """Prompt-a-model classifier over any backend (live, replay, baseline).

    Parameters
    ----------
    task : "kannada"/"kn" or "tamil"/"tm" (or a TaskLanguage)
    backend : object answering classify_words(words, config)
    model_id, temperature, max_output_tokens : request identity
    failure_policy : "map_to_other" (default) or "strict"
    """

    def __init__(
        self,
        task: str | TaskLanguage = "kannada",
        backend: Backend | None = None,
        model_id: str = DEFAULT_MODEL_ID,
        temperature: float = 0.7,
        max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS,
        failure_policy: str = "map_to_other",
    ):
        self.task = task
        self.backend = backend
        self.model_id = model_id
        self.temperature = temperature
        self.max_output_tokens = max_output_tokens
        self.failure_policy = failure_policy

    def _config(self) -> ExperimentConfig:
        return ExperimentConfig(
            task=parse_task(self.task),
            model_id=self.model_id,
            temperature=self.temperature,
            max_output_tokens=self.max_output_tokens,
        )

    def predict_detailed(self, X) -> list[WordPrediction]:
        if self.backend is None:
            raise ValueError(
                "no backend configured; pass a LiveBackend, ReplayBackend, "
                "or BaselineBackend"
            )
        check_policy(self.failure_policy)
        words = check_words(X)
        config = self._config()
        raws = self.backend.classify_words(words, config)
        return resolve_predictions(raws, config.task, self.failure_policy)

    def predict(self, X) -> list[Category]:
        return [p.category for p in self.predict_detailed(X)]

    def predict_codes(self, X) -> list[str]:
        return [p.category_code for p in self.predict_detailed(X)]
