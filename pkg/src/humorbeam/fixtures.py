"""Access to the bundled fixture lexicon, model, texts and maps."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .hierarchy import AssociationMap, load_association_map, load_exclusions
from .lexicon import Lexicon, load_lexicon, read_text
from .ngram import BigramModel, load_model


def _read(*parts: str) -> str:
    return resources.files("humorbeam").joinpath("data", *parts).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def lexicon() -> Lexicon:
    return load_lexicon(_read("lexicon.tsv"))


@lru_cache(maxsize=None)
def model() -> BigramModel:
    return load_model(_read("model.bigram"))


@lru_cache(maxsize=None)
def association_map() -> AssociationMap:
    return load_association_map(_read("assoc.tsv"))


@lru_cache(maxsize=None)
def exclusions() -> frozenset:
    return load_exclusions(_read("exclusions.tsv"))


def text(name: str) -> list[str]:
    return read_text(_read("texts", f"{name}.txt"))


def mixed_corpus() -> list[tuple[str, list[str]]]:
    names = [ln.strip() for ln in _read("texts", "mixed_corpus.lst").splitlines() if ln.strip()]
    return [(n.removesuffix(".txt"), read_text(_read("texts", n))) for n in names]
