"""Regenerate the bundled fixture lexicon and bigram model.

Run from the repository root: ``python tools/build_fixtures.py``.
Rows are written as relative weights and normalised per source image.
"""

from collections import defaultdict
from pathlib import Path

from humorbeam.lexicon import GAP_IMAGE as GAP, Lexicon, dump_lexicon
from humorbeam.ngram import BOS, BigramModel, dump_model

DATA = Path(__file__).resolve().parents[1] / "src" / "humorbeam" / "data"

weights: dict[str, dict[str, float]] = defaultdict(dict)
lexicon: dict[str, tuple[str, ...]] = {}


def edge(i, j, w=1.0):
    weights[i][j] = weights[i].get(j, 0.0) + w


def chain(*images, w=1.0):
    for a, b in zip(images, images[1:]):
        edge(a, b, w)


def single(*symbols):
    for s in symbols:
        lexicon.setdefault(s, (s,))


# joke 14: "My Uncle William has a new cedar chest." / "... he just had a wooden leg."
lexicon.update({
    "my-uncle": ("uncle",),
    "chest": ("box", "breast"),
    "he-had": ("owned", "bore"),
    "wooden": ("timber", "prosthetic"),
})
single("has", "new", "cedar", "leg")
edge(BOS, "uncle")
chain("uncle", "has")
edge("has", "new", 9)
edge("has", GAP, 1)          # pauses in the telling
edge(GAP, GAP, 5)
edge(GAP, "new", 5)
chain("new", "cedar")
edge("cedar", "box", 9)
edge("cedar", "breast", 1)
edge("box", "owned", 99)
edge("box", "bore", 1)
edge("breast", "bore", 99)
edge("breast", "owned", 1)
edge("owned", "timber", 99)
edge("owned", "prosthetic", 1)
edge("bore", "prosthetic", 99)
edge("bore", "timber", 1)
edge("timber", "leg", 1)
edge("timber", "floor", 99)
edge("prosthetic", "leg", 90)
edge("prosthetic", "stump", 10)

# bush or bear: ambiguity held for a dozen symbols before it resolves
bear_text = "at dusk i see shape near path it stays still it is big and dark then it growls".split()
single("at", "dusk", "i", "see", "growls")
chain(BOS, "at", "dusk", "i", "see")
lexicon["shape"] = ("bush", "bear")
edge("see", "bush", 8)
edge("see", "bear", 2)
thread = bear_text[bear_text.index("shape"):bear_text.index("growls")]
for sym in thread[1:]:
    lexicon[sym] = (f"{sym}~bush", f"{sym}~bear")


def tagged(sym, kind):
    return kind if sym == "shape" else f"{sym}~{kind}"


for a, b in zip(thread, thread[1:]):
    for kind, other in (("bush", "bear"), ("bear", "bush")):
        edge(tagged(a, kind), tagged(b, kind), 1.0)
        edge(tagged(a, kind), tagged(b, other), 0.01)
edge(tagged(thread[-1], "bear"), "growls", 1.0)
edge(tagged(thread[-1], "bush"), "growls", 0.001)

# plain texts
single("we", "sat", "on", "of", "river", "drink", "tea", "the", "sun", "rises", "in", "east")
lexicon["bank"] = ("riverbank", "moneybank")
lexicon["hot"] = ("warm", "spicy")
edge(BOS, "we", 2)
chain("we", "sat", "on")
edge("on", "riverbank", 7)
edge("on", "moneybank", 3)
edge("riverbank", "of")
edge("moneybank", "of")
chain("of", "river")
chain("we", "drink")
edge("drink", "warm", 6)
edge("drink", "spicy", 4)
edge("warm", "tea", 9)
edge("spicy", "tea", 1)
chain(BOS, "the", "sun", "rises", "in", "the", "east")

# ambiguity scheme: "army does not believe in her innocence"
single("girl", "like", "dreifus", "army", "doubts", "her")
lexicon["innocence"] = ("virginity", "guiltlessness")
chain(BOS, "girl", "like")
edge("like", "dreifus", 5)
edge("like", "trial", 5)
chain("dreifus", "army", "doubts", "her")
edge("her", "virginity", 7)
edge("her", "guiltlessness", 3)
edge("trial", "trial", 12)
edge("trial", "acquittal", 6)
edge("trial", "chastity", 1)
for img in ("virginity", "guiltlessness", "acquittal", "chastity"):
    edge(img, GAP)

# enlargement: horns, hoofs, tail -> cow
single("horns", "hoofs", "tail")
chain(BOS, "horns", "hoofs", "tail")
edge(BOS, "cow")
edge("cow", "cow", 9)
edge("cow", "herd", 1)


def build_model() -> BigramModel:
    rows = {}
    vocab = set()
    for i, row in weights.items():
        total = sum(row.values())
        rows[i] = {j: w / total for j, w in row.items()}
        vocab.update(row)
        if i != BOS:
            vocab.add(i)
    return BigramModel(frozenset(vocab), rows)


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "lexicon.tsv").write_text(
        "# bundled fixture lexicon: symbol<TAB>image,image,...\n" + dump_lexicon(Lexicon(lexicon)),
        encoding="utf-8",
    )
    (DATA / "model.bigram").write_text(dump_model(build_model()), encoding="utf-8")


if __name__ == "__main__":
    main()
