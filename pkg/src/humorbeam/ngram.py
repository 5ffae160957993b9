"""Bigram image-transition model: training, scoring, model files, exact decoding."""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

BOS = "<s>"
NEG_INF = float("-inf")
DEFAULT_ENUMERATION_CAP = 10**6


class UnknownImage(KeyError):
    def __str__(self) -> str:
        return f"unknown image {self.args[0]!r}"


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Smoothing:
    """``Smoothing()`` is maximum likelihood; ``Smoothing.add_one(alpha)`` is additive."""

    alpha: float | None = None

    @classmethod
    def add_one(cls, alpha: float = 1.0) -> "Smoothing":
        if not alpha > 0:
            raise ValueError("additive smoothing needs alpha > 0")
        return cls(float(alpha))

    @classmethod
    def parse(cls, text: str) -> "Smoothing":
        text = text.strip().lower()
        if text == "mle":
            return cls()
        if text.startswith("addone"):
            _, colon, alpha = text.partition(":")
            if text != "addone" and not colon:
                raise ValueError(f"unknown smoothing {text!r}")
            return cls.add_one(float(alpha) if colon else 1.0)
        raise ValueError(f"unknown smoothing {text!r} (expected mle or addone:ALPHA)")

    @property
    def is_mle(self) -> bool:
        return self.alpha is None

    def __str__(self) -> str:
        return "mle" if self.alpha is None else f"addone:{self.alpha:g}"


MLE = Smoothing()


@dataclass(frozen=True)
class BigramModel:
    vocab: frozenset[str]
    rows: Mapping[str, Mapping[str, float]]
    smoothing: Smoothing = MLE
    _log: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if BOS in self.vocab:
            raise ValueError("BOS is implicit and must not be listed in vocab")
        for i, row in self.rows.items():
            if i != BOS and i not in self.vocab:
                raise UnknownImage(i)
            for j, p in row.items():
                if j == BOS:
                    raise ValueError("BOS cannot be a transition destination")
                if j not in self.vocab:
                    raise UnknownImage(j)
                if not 0.0 <= p <= 1.0:
                    raise ValueError(f"probability {p} for {i}->{j} outside [0,1]")

    def prob(self, i: str, j: str) -> float:
        return transition_prob(self, i, j)

    def logp(self, i: str, j: str) -> float:
        key = (i, j)
        try:
            return self._log[key]
        except KeyError:
            p = transition_prob(self, i, j)
            lp = math.log(p) if p > 0.0 else NEG_INF
            self._log[key] = lp
            return lp


def train(
    corpus: Iterable[Sequence[str]],
    smoothing: Smoothing = MLE,
    vocab: Iterable[str] | None = None,
) -> BigramModel:
    """Estimate p_ij from image sequences, each implicitly prefixed by BOS.

    With additive smoothing every row is filled over the full vocabulary
    (``vocab`` extends the images seen in the corpus).
    """
    corpus = [list(seq) for seq in corpus]
    if not corpus:
        raise ValueError("empty corpus")
    counts: dict[str, Counter] = defaultdict(Counter)
    seen: set[str] = set()
    for seq in corpus:
        if BOS in seq:
            raise ValueError("corpus sequence contains the BOS image")
        prev = BOS
        for img in seq:
            counts[prev][img] += 1
            seen.add(img)
            prev = img
    full_vocab = frozenset(seen | set(vocab or ()))
    if BOS in full_vocab:
        raise ValueError("BOS cannot be part of the vocabulary")

    rows: dict[str, dict[str, float]] = {}
    if smoothing.is_mle:
        for i, row in counts.items():
            total = sum(row.values())
            rows[i] = {j: c / total for j, c in row.items()}
    else:
        alpha = smoothing.alpha
        ordered = sorted(full_vocab)
        denom_extra = alpha * len(ordered)
        for i in [BOS, *ordered]:
            row = counts.get(i, Counter())
            total = sum(row.values())
            rows[i] = {j: (row[j] + alpha) / (total + denom_extra) for j in ordered}
    return BigramModel(full_vocab, rows, smoothing)


def transition_prob(m: BigramModel, i: str, j: str) -> float:
    if i != BOS and i not in m.vocab:
        raise UnknownImage(i)
    if j not in m.vocab:
        raise UnknownImage(j)
    row = m.rows.get(i)
    if row is None:
        if m.smoothing.is_mle:
            return 0.0
        return 1.0 / len(m.vocab)
    return row.get(j, 0.0)


def score_trajectory(m: BigramModel, t: Sequence[str]) -> float:
    """Log of p(BOS->t1) * p(t1->t2) * ...; ``-inf`` if any factor is zero."""
    score = 0.0
    prev = BOS
    for img in t:
        if img == BOS:
            raise ValueError("trajectory contains BOS")
        score += m.logp(prev, img)
        prev = img
    return score


@dataclass(frozen=True)
class LatticeWindow:
    """Candidate images per position, with optional log-domain cell weights.

    An empty window (no columns) is allowed so that enlarging an empty
    sequence has a representation; every present column must be nonempty.
    """

    columns: tuple[tuple[str, ...], ...]
    weights: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(tuple(c) for c in self.columns))
        for col in self.columns:
            if not col:
                raise ValueError("lattice column must be nonempty")
        if self.weights is not None:
            w = tuple(tuple(float(x) for x in c) for c in self.weights)
            if [len(c) for c in w] != [len(c) for c in self.columns]:
                raise ValueError("weights do not align with columns")
            object.__setattr__(self, "weights", w)

    @property
    def length(self) -> int:
        return len(self.columns)

    def size(self) -> int:
        return math.prod(len(c) for c in self.columns)

    def weight(self, n: int, k: int) -> float:
        return 0.0 if self.weights is None else self.weights[n][k]


def exact_viterbi(
    m: BigramModel, w: LatticeWindow, cap: int = DEFAULT_ENUMERATION_CAP
) -> tuple[list[str], float]:
    """Most probable path through ``w``.

    Ties are broken toward the lexicographically smallest tuple of column
    indices. Scores accumulate left to right exactly as score_trajectory does,
    so the returned score is bit-identical to rescoring the returned path
    (plus cell weights, when present).
    """
    if w.size() > cap:
        raise ValueError(f"lattice has {w.size()} trajectories, above the cap {cap}")
    if w.length == 0:
        return [], 0.0
    # per state: (score, index path)
    best = [
        (m.logp(BOS, img) + w.weight(0, k), (k,)) for k, img in enumerate(w.columns[0])
    ]
    for n in range(1, w.length):
        prev_col = w.columns[n - 1]
        nxt = []
        for k, img in enumerate(w.columns[n]):
            cand = None
            for pk, (ps, path) in enumerate(best):
                s = ps + m.logp(prev_col[pk], img) + w.weight(n, k)
                if cand is None or s > cand[0] or (s == cand[0] and path < cand[1][:-1]):
                    cand = (s, path + (k,))
            nxt.append(cand)
        best = nxt
    score, path = min(best, key=lambda c: (-c[0], c[1]))
    if score == NEG_INF:
        # every path is impossible, so all tie; pruned prefixes may have had smaller indices
        path = (0,) * w.length
    return [w.columns[n][k] for n, k in enumerate(path)], score


def enumerate_lattice(w: LatticeWindow) -> Iterable[tuple[tuple[int, ...], list[str]]]:
    for idx in itertools.product(*(range(len(c)) for c in w.columns)):
        yield idx, [w.columns[n][k] for n, k in enumerate(idx)]


# --- model file -----------------------------------------------------------

HEADER_PREFIX = "bigram v1 smoothing="


def format_prob(p: float) -> str:
    return f"{p:.12f}"


def dump_model(m: BigramModel) -> str:
    lines = [f"{HEADER_PREFIX}{m.smoothing}"]
    for i in [BOS, *sorted(k for k in m.rows if k != BOS)]:
        row = m.rows.get(i)
        if not row:
            continue
        for j in sorted(row):
            lines.append(f"{i}\t{j}\t{format_prob(row[j])}")
    return "\n".join(lines) + "\n"


def load_model(source: str) -> BigramModel:
    lines = source.splitlines()
    if not lines or not lines[0].startswith(HEADER_PREFIX):
        raise ModelFormatError(f"missing header '{HEADER_PREFIX}<mle|addone:ALPHA>'")
    try:
        smoothing = Smoothing.parse(lines[0][len(HEADER_PREFIX):])
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    rows: dict[str, dict[str, float]] = defaultdict(dict)
    vocab: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ModelFormatError(f"line {lineno}: expected i<TAB>j<TAB>probability")
        i, j, p = parts
        try:
            prob = float(p)
        except ValueError:
            raise ModelFormatError(f"line {lineno}: bad probability {p!r}") from None
        if j in rows[i]:
            raise ModelFormatError(f"line {lineno}: duplicate row {i}->{j}")
        rows[i][j] = prob
        vocab.add(j)
        if i != BOS:
            vocab.add(i)
    try:
        return BigramModel(frozenset(vocab), dict(rows), smoothing)
    except (ValueError, KeyError) as exc:
        raise ModelFormatError(str(exc)) from None


def read_corpus(source: str) -> list[list[str]]:
    return [line.split() for line in source.splitlines() if line.strip()]
