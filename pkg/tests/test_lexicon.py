import pytest
from hypothesis import given, strategies as st

from humorbeam import fixtures
from humorbeam.lexicon import (
    GAP,
    Lexicon,
    LexiconError,
    OutOfVocabulary,
    dump_lexicon,
    load_lexicon,
    read_text,
    senses,
)


class TestLoad:
    def test_single_entry(self):
        lex = load_lexicon("chest\tbox,breast\n")
        assert lex.entries["chest"] == ("box", "breast")

    def test_empty_document(self):
        lex = load_lexicon("")
        assert lex.entries == {}
        assert lex.image_inventory == frozenset()

    def test_comments_and_blank_lines(self):
        lex = load_lexicon("# header\n\nchest\tbox,breast\n# tail\n")
        assert list(lex.entries) == ["chest"]

    def test_duplicate_symbol_reports_line(self):
        with pytest.raises(LexiconError) as exc:
            load_lexicon("a\tx\na\ty")
        assert exc.value.lineno == 2

    @pytest.mark.parametrize(
        "doc",
        ["a x", "a\t", "a\tx,,y", "a\tx,x", f"{GAP}\tx"],
    )
    def test_malformed(self, doc):
        with pytest.raises(LexiconError):
            load_lexicon(doc)


class TestSenses:
    def test_fixture_chest(self):
        assert senses(fixtures.lexicon(), "chest") == ("box", "breast")

    def test_gap_is_reserved(self):
        assert senses(Lexicon({}), GAP) == (GAP,)

    def test_missing_symbol(self):
        with pytest.raises(OutOfVocabulary):
            senses(fixtures.lexicon(), "zzz")

    def test_never_empty(self):
        lex = fixtures.lexicon()
        for sym in lex.entries:
            assert len(senses(lex, sym)) >= 1


class TestReadText:
    def test_gap_token(self):
        assert read_text("a _ b") == ["a", GAP, "b"]

    def test_whitespace(self):
        assert read_text("  a\n b\t") == ["a", "b"]


token = st.text(alphabet="abcxyz-~", min_size=1, max_size=5)


@given(st.dictionaries(token, st.lists(token, min_size=1, max_size=4, unique=True), max_size=6))
def test_round_trip_is_order_sensitive_identity(entries):
    lex = Lexicon(entries)
    again = load_lexicon(dump_lexicon(lex))
    assert again == lex
    assert list(again.entries) == list(lex.entries)


def test_fixture_round_trip():
    lex = fixtures.lexicon()
    assert load_lexicon(dump_lexicon(lex)) == lex


def test_reordered_senses_differ():
    assert Lexicon({"a": ("x", "y")}) != Lexicon({"a": ("y", "x")})
