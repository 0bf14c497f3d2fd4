import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arcspace.dyadic import Gen, Window, all_gens, stage_generators
from arcspace.oracles import normal_closure_ball, normal_closure_by_products
from arcspace.words import (
    Letter,
    Word,
    WordSyntaxError,
    detection_level,
    enumerate_reduced,
    format_gen_set,
    nc_member,
    parse_gen_set,
    reduce,
    retract,
    stage_member,
    window_member,
)
from strategies import gen_sets, raw_words, reduced_words

W = Word.parse


class TestGrammar:
    def test_tokens(self):
        w = W("g1.1 g2.1' g3.4")
        assert [str(x) for x in w.letters] == ["g1.1", "g2.1'", "g3.4"]
        assert w.letters[1] == Letter(Gen(2, 1), -1)

    def test_identity_literal(self):
        assert W("1") == Word(())
        assert str(Word(())) == "1"

    def test_whitespace_is_free(self):
        assert W("  g1.1\tg2.2'\n") == W("g1.1 g2.2'")

    @pytest.mark.parametrize("text,column", [
        ("g1.1 x", 6),
        ("g1.1 g2.3", 6),
        ("g1.1g2.1", 1),
        ("", 1),
        ("g0.1", 1),
        ("g1.1 1", 6),
        ("g1.1 ''", 6),
    ])
    def test_syntax_errors_carry_column(self, text, column):
        with pytest.raises(WordSyntaxError) as info:
            W(text)
        assert info.value.column == column

    @given(raw_words())
    def test_text_round_trip(self, w):
        assert W(str(w)) == w

    @given(raw_words())
    def test_json_round_trip(self, w):
        data = json.loads(json.dumps(w.to_json()))
        assert Word.from_json(data) == w
        assert all(set(d) == {"n", "j", "s"} for d in data["letters"])

    def test_json_shape(self):
        assert W("g2.1'").to_json() == {"letters": [{"n": 2, "j": 1, "s": -1}]}

    def test_gen_set_round_trip(self):
        S = {Gen(4, 4), Gen(2, 1)}
        assert format_gen_set(S) == "g2.1,g4.4"
        assert parse_gen_set("g2.1, g4.4") == S
        assert parse_gen_set("{}") == frozenset()


class TestReduce:
    @pytest.mark.parametrize("text,expected", [
        ("g1.1 g1.1'", "1"),
        ("g1.1 g2.1 g2.1' g1.1", "g1.1 g1.1"),
        ("g2.1 g1.1 g1.1' g2.1' g3.1", "g3.1"),
    ])
    def test_examples(self, text, expected):
        assert reduce(W(text)) == W(expected)

    @given(raw_words())
    def test_idempotent_and_reduced(self, w):
        r = reduce(w)
        assert r.is_reduced
        assert reduce(r) == r
        assert len(r) <= len(w)

    @given(raw_words(), raw_words())
    def test_product_is_group_law(self, u, v):
        assert u * v == reduce(u.concat(v))
        assert (u * v) * v.inverse() == reduce(u)
        assert u * u.inverse() == Word(())


class TestRetract:
    @pytest.mark.parametrize("text,level,expected", [
        ("g1.1 g2.1 g1.1' g2.1'", 1, "1"),
        ("g1.1 g2.1 g1.1' g2.1'", 2, "g1.1 g2.1 g1.1' g2.1'"),
        ("g3.4", 2, "1"),
    ])
    def test_examples(self, text, level, expected):
        assert retract(W(text), level) == W(expected)

    @given(raw_words(6), st.integers(0, 7), st.integers(0, 7))
    def test_tower_composition(self, w, M, N):
        assert retract(retract(w, M), N) == retract(w, min(M, N))

    @given(raw_words(6), raw_words(6), st.integers(0, 7))
    def test_homomorphism(self, u, v, N):
        assert retract(u * v, N) == retract(u, N) * retract(v, N)


class TestNormalClosure:
    def test_examples(self):
        assert nc_member(W("g2.1 g4.4 g2.1'"), {Gen(4, 4)})
        assert not nc_member(W("g4.4 g1.1 g4.4'"), {Gen(4, 4)})
        assert nc_member(Word(()), set())

    def test_negative_example_against_product_search(self):
        w = W("g4.4 g1.1 g4.4'")
        assert not normal_closure_by_products(w, {Gen(4, 4)}, 3, 2, [Gen(1, 1), Gen(4, 4)])

    def test_agrees_with_product_search(self):
        # length <= 3 needs at most 3 factors with conjugators of length <= 2,
        # so the bounded product search is complete here
        gens = [Gen(1, 1), Gen(2, 1)]
        S = {Gen(2, 1)}
        ball = normal_closure_ball(S, 3, 2, gens)
        for w in enumerate_reduced(gens, 3):
            assert nc_member(w, S) == (w.codes in ball), str(w)

    @given(reduced_words(4, 6), gen_sets(4), reduced_words(4, 4))
    def test_closed_under_conjugation(self, w, S, c):
        assert nc_member(w, S) == nc_member(c * w * c.inverse(), S)

    @given(reduced_words(4, 6), reduced_words(4, 6), gen_sets(4))
    def test_subgroup(self, u, v, S):
        if nc_member(u, S) and nc_member(v, S):
            assert nc_member(u * v.inverse(), S)


class TestStageMember:
    def test_examples(self):
        assert not stage_member(W("g1.1"), 1, 3)
        assert stage_member(W("g4.4 g4.5"), 2, 4)
        for n in range(1, 5):
            assert stage_member(Word(()), n, 4)

    def test_level_overflow(self):
        with pytest.raises(ValueError):
            stage_member(W("g5.1"), 1, 4)
        with pytest.raises(ValueError):
            window_member(W("g5.1"), Window(1, 1), 4)

    def test_window_member(self):
        assert window_member(W("g2.1 g4.4 g2.1'"), Window(2, 2), 4)
        assert not window_member(W("g1.1"), Window(2, 2), 4)

    @given(reduced_words(5, 6), st.integers(1, 4))
    def test_is_nc_of_stage_generators(self, w, n):
        assert stage_member(w, n, 5) == nc_member(w, stage_generators(n, 5))

    @given(reduced_words(4, 6), st.integers(1, 4))
    def test_stable_in_max_level(self, w, n):
        # raising the ambient level never changes the verdict on a fixed word
        assert stage_member(w, n, 4) == stage_member(w, n, 6)


class TestDetectionLevel:
    @pytest.mark.parametrize("text,expected", [
        ("g1.1 g2.1 g1.1' g2.1'", 2),
        ("g1.1", 1),
        ("1", None),
    ])
    def test_examples(self, text, expected):
        assert detection_level(W(text)) == expected

    @given(raw_words(6))
    def test_bounded_and_minimal(self, w):
        lvl = detection_level(w)
        if not reduce(w):
            assert lvl is None
            return
        assert 1 <= lvl <= reduce(w).max_level
        assert retract(w, lvl)
        assert not retract(w, lvl - 1)


class TestEnumeration:
    def test_counts(self):
        assert sum(1 for _ in enumerate_reduced(all_gens(3), 4)) == 33321
        assert sum(1 for _ in enumerate_reduced([Gen(1, 1), Gen(2, 1), Gen(2, 2)], 8)) == 585937

    def test_all_reduced_and_distinct(self):
        words = list(enumerate_reduced(all_gens(2), 3))
        assert len(set(words)) == len(words)
        assert all(w.is_reduced for w in words)
