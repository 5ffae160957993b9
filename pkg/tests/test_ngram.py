import math

import pytest
from hypothesis import given, strategies as st

from humorbeam.ngram import (
    BOS,
    MLE,
    BigramModel,
    LatticeWindow,
    ModelFormatError,
    Smoothing,
    UnknownImage,
    dump_model,
    exact_viterbi,
    load_model,
    read_corpus,
    score_trajectory,
    train,
    transition_prob,
)

from lattices import brute_force, random_case


class TestTrain:
    def test_mle_counts(self):
        m = train([["a", "b"], ["a", "b"]], MLE)
        assert m.rows["a"]["b"] == 1.0
        assert m.rows[BOS]["a"] == 1.0

    def test_add_one_hand_count(self):
        m = train([["a", "b"], ["a", "b"]], Smoothing.add_one(1.0), vocab={"a", "b"})
        assert m.rows["a"]["b"] == pytest.approx(0.75, abs=1e-15)
        assert m.rows["a"]["a"] == pytest.approx(0.25, abs=1e-15)

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            train([], MLE)

    def test_bos_in_corpus_rejected(self):
        with pytest.raises(ValueError):
            train([["a", BOS]], MLE)

    @given(st.lists(st.lists(st.sampled_from("abcd"), min_size=1, max_size=6), min_size=1, max_size=8),
           st.sampled_from([MLE, Smoothing.add_one(1.0), Smoothing.add_one(0.3)]))
    def test_rows_sum_to_one(self, corpus, smoothing):
        m = train(corpus, smoothing)
        for row in m.rows.values():
            assert sum(row.values()) == pytest.approx(1.0, abs=1e-9)
            assert BOS not in row


class TestTransitionProb:
    def test_seen(self):
        assert transition_prob(train([["a", "b"]]), "a", "b") == 1.0

    def test_unseen_mle(self):
        assert transition_prob(train([["a", "b"]]), "b", "a") == 0.0

    def test_unseen_add_one(self):
        m = train([["a", "b"]], Smoothing.add_one(1.0), vocab={"a", "b"})
        assert transition_prob(m, "b", "a") == pytest.approx(0.5)

    def test_unknown_image(self):
        with pytest.raises(UnknownImage):
            transition_prob(train([["a", "b"]]), "a", "q")


class TestScore:
    def model(self):
        return BigramModel(frozenset("xz"), {BOS: {"x": 0.5, "z": 0.5}, "x": {"z": 0.2, "x": 0.8}})

    def test_product(self):
        assert score_trajectory(self.model(), ["x", "z"]) == pytest.approx(math.log(0.1), abs=1e-12)

    def test_empty(self):
        assert score_trajectory(self.model(), []) == 0.0

    def test_zero_factor(self):
        assert score_trajectory(self.model(), ["z", "x"]) == -math.inf

    @given(st.lists(st.sampled_from("xz"), max_size=6), st.lists(st.sampled_from("xz"), max_size=6))
    def test_additive_under_concatenation(self, s, t):
        m = self.model()
        total = score_trajectory(m, s + t)
        rest, prev = 0.0, (s[-1] if s else BOS)
        for img in t:
            rest += m.logp(prev, img)
            prev = img
        head = score_trajectory(m, s)
        if math.isinf(total):
            assert math.isinf(head + rest)
        else:
            assert total == pytest.approx(head + rest, abs=1e-12)


class TestViterbi:
    def test_single_column(self):
        m = BigramModel(frozenset("xy"), {BOS: {"x": 0.25, "y": 0.75}})
        assert exact_viterbi(m, LatticeWindow((("x",),))) == (["x"], math.log(0.25))

    def test_tie_break_lowest_indices(self):
        rows = {i: {j: 0.5 for j in "ab"} for i in (BOS, "a", "b")}
        m = BigramModel(frozenset("ab"), rows)
        path, _ = exact_viterbi(m, LatticeWindow((("b", "a"), ("b", "a"))))
        assert path == ["b", "b"]

    def test_empty_window(self):
        assert exact_viterbi(train([["a"]]), LatticeWindow(())) == ([], 0.0)

    def test_enumeration_cap(self):
        m = train([["a", "b"]], Smoothing.add_one(1.0))
        with pytest.raises(ValueError):
            exact_viterbi(m, LatticeWindow((("a", "b"),) * 4), cap=8)

    @pytest.mark.parametrize("seed", range(60))
    def test_matches_brute_force(self, seed):
        _, lex, m = random_case(seed, zero_rate=0.3 if seed % 2 else 0.0)
        cols = tuple(lex.entries.values())
        path, score = exact_viterbi(m, LatticeWindow(cols))
        want_path, want_score = brute_force(m, cols)
        assert path == want_path
        if math.isinf(want_score):
            assert score == want_score
        else:
            assert score == pytest.approx(want_score, abs=1e-9)
            assert score == pytest.approx(score_trajectory(m, path), abs=1e-12)


class TestModelFile:
    def test_format(self):
        text = dump_model(train([["a", "b"], ["a", "b"]]))
        assert text.splitlines()[0] == "bigram v1 smoothing=mle"
        assert "a\tb\t1.000000000000" in text.splitlines()

    @pytest.mark.parametrize("smoothing", [MLE, Smoothing.add_one(1.0), Smoothing.add_one(0.5)])
    def test_round_trip(self, smoothing):
        m = train([["a", "b", "c"], ["c", "a"]], smoothing)
        again = load_model(dump_model(m))
        assert again.vocab == m.vocab
        assert str(again.smoothing) == str(m.smoothing)
        for i, row in m.rows.items():
            for j, p in row.items():
                assert again.rows[i][j] == pytest.approx(p, abs=1e-12)

    @pytest.mark.parametrize(
        "doc",
        ["", "bigram v2 smoothing=mle\n", "bigram v1 smoothing=mle\na\tb\n",
         "bigram v1 smoothing=mle\na\tb\tx\n", "bigram v1 smoothing=mle\na\tb\t1.5\n",
         "bigram v1 smoothing=mle\na\t<s>\t1\n", "bigram v1 smoothing=foo\n"],
    )
    def test_malformed(self, doc):
        with pytest.raises(ModelFormatError):
            load_model(doc)


class TestSmoothingParse:
    def test_forms(self):
        assert Smoothing.parse("mle").is_mle
        assert Smoothing.parse("addone:0.5").alpha == 0.5
        assert str(Smoothing.parse("addone:1")) == "addone:1"

    @pytest.mark.parametrize("text", ["add", "addone:", "addone:-1", "addone:0"])
    def test_bad(self, text):
        with pytest.raises(ValueError):
            Smoothing.parse(text)


def test_read_corpus_skips_blank_lines():
    assert read_corpus("a b\n\n c \n") == [["a", "b"], ["c"]]
