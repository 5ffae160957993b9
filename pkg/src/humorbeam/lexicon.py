"""Symbol alphabet, image alphabet and the symbol -> candidate-image mapping."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

GAP = "__GAP__"
GAP_IMAGE = "__GAP__"


class LexiconError(ValueError):
    """Malformed lexicon document; carries the 1-based line number."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class OutOfVocabulary(KeyError):
    def __init__(self, symbol: str):
        super().__init__(symbol)
        self.symbol = symbol

    def __str__(self) -> str:
        return f"unknown symbol {self.symbol!r}"


def _check_token(tok: str, what: str, lineno: int) -> None:
    if not tok or any(c.isspace() for c in tok):
        raise LexiconError(f"invalid {what} {tok!r}", lineno)


@dataclass(frozen=True)
class Lexicon:
    """Ordered sense sets per symbol.

    ``bonus`` optionally attaches a log-domain weight to each sense (aligned
    with ``entries``); the primary level leaves it empty, the enlarged
    secondary level uses it for the size-rank weighting.
    """

    entries: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    bonus: Mapping[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", {k: tuple(v) for k, v in self.entries.items()})
        object.__setattr__(self, "bonus", {k: tuple(v) for k, v in self.bonus.items()})
        for sym, imgs in self.entries.items():
            if sym == GAP:
                raise ValueError("the GAP symbol is reserved")
            if not imgs:
                raise ValueError(f"empty sense set for {sym!r}")
            if len(set(imgs)) != len(imgs):
                raise ValueError(f"duplicate senses for {sym!r}")
        for sym, w in self.bonus.items():
            if len(w) != len(self.entries[sym]):
                raise ValueError(f"bonus for {sym!r} does not align with senses")

    @property
    def image_inventory(self) -> frozenset[str]:
        return frozenset(img for imgs in self.entries.values() for img in imgs)

    def __contains__(self, symbol: str) -> bool:
        return symbol == GAP or symbol in self.entries

    def senses(self, symbol: str) -> tuple[str, ...]:
        return senses(self, symbol)

    def weights(self, symbol: str) -> tuple[float, ...]:
        if symbol in self.bonus:
            return self.bonus[symbol]
        return (0.0,) * len(self.senses(symbol))

    def __eq__(self, other):
        if not isinstance(other, Lexicon):
            return NotImplemented
        return list(self.entries.items()) == list(other.entries.items()) and dict(
            self.bonus
        ) == dict(other.bonus)

    def __hash__(self):
        return hash(tuple(self.entries.items()))


def senses(lex: Lexicon, symbol: str) -> tuple[str, ...]:
    """Candidate images for ``symbol``; GAP always maps to the GAP image."""
    if symbol == GAP:
        return (GAP_IMAGE,)
    try:
        return lex.entries[symbol]
    except KeyError:
        raise OutOfVocabulary(symbol) from None


def load_lexicon(source: str) -> Lexicon:
    """Parse ``symbol<TAB>image1,image2,...`` lines; ``#`` starts a comment line."""
    entries: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise LexiconError("missing TAB separator", lineno)
        sym, _, rest = line.partition("\t")
        _check_token(sym, "symbol", lineno)
        if sym == GAP:
            raise LexiconError(f"{GAP} is reserved and cannot be a key", lineno)
        if sym in entries:
            raise LexiconError(f"duplicate symbol {sym!r}", lineno)
        imgs = [s.strip() for s in rest.split(",")] if rest.strip() else []
        if not imgs:
            raise LexiconError(f"empty sense list for {sym!r}", lineno)
        for img in imgs:
            _check_token(img, "image", lineno)
        if len(set(imgs)) != len(imgs):
            raise LexiconError(f"duplicate sense in entry {sym!r}", lineno)
        entries[sym] = tuple(imgs)
    return Lexicon(entries)


def dump_lexicon(lex: Lexicon) -> str:
    return "".join(f"{sym}\t{','.join(imgs)}\n" for sym, imgs in lex.entries.items())


def read_text(source: str, gap_token: str = "_") -> list[str]:
    """Whitespace-separated symbols; ``_`` (or the literal GAP name) is a pause."""
    return [GAP if tok in (gap_token, GAP) else tok for tok in source.split()]

