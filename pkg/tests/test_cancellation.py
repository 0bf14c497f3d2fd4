import json
from itertools import combinations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from arcspace.cancellation import (
    CancellationDiagram,
    cancellable,
    lift_diagram,
    parent_set,
    search,
    verify,
)
from arcspace.dyadic import Gen, Window, all_gens, stage_windows, window_generators
from arcspace.shift import shift
from arcspace.words import Word, enumerate_reduced, nc_member
from strategies import gen_sets, raw_words, reduced_words

W = Word.parse
G44 = Gen(4, 4)


def all_diagrams(codes, S_ids):
    """Every valid diagram on a short word, by brute-force recursion."""
    def go(i, j):
        if i == j:
            yield [], []
            return
        if abs(codes[i]) in S_ids:
            for p, r in go(i + 1, j):
                yield p, [i + 1] + r
        for k in range(i + 1, j):
            if codes[k] == -codes[i]:
                for p1, r1 in go(i + 1, k):
                    for p2, r2 in go(k + 1, j):
                        yield [(i + 1, k + 1)] + p1 + p2, r1 + r2
    return list(go(0, len(codes)))


class TestVerify:
    def test_nested_on_unreduced_word(self):
        d = CancellationDiagram(4, ((1, 4), (2, 3)), ())
        assert verify(W("g1.1 g2.1 g2.1' g1.1'"), set(), d, require_reduced=False)

    def test_conjugate(self):
        assert verify(W("g2.1 g4.4 g2.1'"), {G44}, CancellationDiagram(3, ((1, 3),), (2,)))

    def test_crossing_rejected(self):
        d = CancellationDiagram(4, ((1, 3), (2, 4)), ())
        assert d.structural_errors()
        assert not verify(W("g1.1 g2.1 g1.1' g2.1'"), set(), d)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            verify(W("g1.1"), set(), CancellationDiagram(2, ((1, 2),), ()))

    def test_non_inverse_pair(self):
        assert not verify(W("g1.1 g2.1"), set(), CancellationDiagram(2, ((1, 2),), ()))

    def test_residual_outside_S(self):
        assert not verify(W("g1.1"), {G44}, CancellationDiagram(1, (), (1,)))

    @pytest.mark.parametrize("d", [
        CancellationDiagram(2, ((1, 2),), (1,)),
        CancellationDiagram(2, (), (1,)),
        CancellationDiagram(2, (), (1, 3)),
    ])
    def test_partition_errors(self, d):
        assert d.structural_errors()

    def test_orientation_normalised(self):
        assert CancellationDiagram(3, ((3, 1),), (2,)).pairs == ((1, 3),)


class TestSearch:
    def test_examples(self):
        d = search(W("g2.1 g4.4 g2.1'"), {G44})
        assert (d.pairs, d.residuals) == (((1, 3),), (2,))
        assert search(W("g4.4 g1.1 g4.4'"), {G44}) is None
        d = search(W("g2.1 g4.4 g4.5 g2.1' g4.4"), {G44, Gen(4, 5)})
        assert (d.pairs, d.residuals) == (((1, 4),), (2, 3, 5))

    def test_rejects_unreduced(self):
        with pytest.raises(ValueError):
            search(W("g1.1 g1.1'"), set())

    def test_empty_word(self):
        assert search(Word(()), set()) == CancellationDiagram(0)

    def test_agrees_with_brute_force_enumeration(self):
        gens = [Gen(1, 1), Gen(2, 1)]
        for r in range(3):
            for S in combinations(gens, r):
                ids = {g.heap_id for g in S}
                for w in enumerate_reduced(gens, 6):
                    found = search(w, S)
                    every = all_diagrams(w.codes, ids)
                    assert (found is not None) == bool(every)
                    if found is not None:
                        assert (list(found.pairs), list(found.residuals)) in [
                            (sorted(p), sorted(r)) for p, r in every
                        ]

    @given(reduced_words(4, 12), gen_sets(4))
    def test_characterisation(self, w, S):
        d = search(w, S)
        assert (d is not None) == nc_member(w, S)
        if d is not None:
            assert verify(w, S, d)
            assert not d.structural_errors()

    @given(reduced_words(4, 8), reduced_words(4, 8), gen_sets(4))
    def test_members_built_from_conjugates(self, c, v, S):
        assume(S)
        s = sorted(S)[0]
        w = c * Word((s.heap_id,)) * c.inverse() * v * Word((-s.heap_id,)) * v.inverse()
        assert search(w, S) is not None

    @given(raw_words(4, 10), gen_sets(4))
    def test_cancellable_matches_on_raw_words(self, w, S):
        # on unreduced input the DP still decides diagram existence
        ids = {g.heap_id for g in S}
        assert cancellable(w, S) == bool(all_diagrams(w.codes, ids))

    @given(reduced_words(4, 10), gen_sets(4))
    def test_deterministic(self, w, S):
        assert search(w, S) == search(w, set(S))


class TestJson:
    def test_shape(self):
        d = CancellationDiagram(5, ((1, 4),), (2, 3, 5))
        assert json.loads(d.dumps()) == {"m": 5, "pairs": [[1, 4]], "residuals": [2, 3, 5]}
        assert list(json.loads(d.dumps())) == ["m", "pairs", "residuals"]

    @given(reduced_words(4, 12), gen_sets(4))
    def test_round_trip(self, w, S):
        d = search(w, S)
        if d is not None:
            assert CancellationDiagram.from_json(d.dumps()) == d
            assert CancellationDiagram.from_json(d.to_json()) == d


class TestLift:
    def test_parent_set(self):
        S = window_generators(Window(2, 2), 5)
        assert parent_set(S) == window_generators(Window(2, 2), 4)

    def test_empty(self):
        assert lift_diagram(CancellationDiagram(0), Word(()), {G44}) == CancellationDiagram(0)

    def test_single_S_letter(self):
        S = window_generators(Window(2, 2), 5)
        w = W("g4.4")
        d = CancellationDiagram(2, (), (1, 2))
        assert lift_diagram(d, w, S) == CancellationDiagram(1, (), (1,))

    def test_rejects_invalid_diagram(self):
        with pytest.raises(ValueError):
            lift_diagram(CancellationDiagram(2, ((1, 2),), ()), W("g1.1"), set())

    @pytest.mark.parametrize("win", stage_windows(2))
    def test_round_trip_over_universe(self, win):
        S = window_generators(win, 4)
        for w in enumerate_reduced(all_gens(3), 3):
            d = search(shift(w), S)
            if d is None:
                continue
            lifted = lift_diagram(d, w, S)
            assert verify(w, parent_set(S), lifted)

    @settings(max_examples=60)
    @given(reduced_words(3, 4), st.integers(1, 3), st.data())
    def test_lift_of_any_valid_diagram(self, w, n, data):
        win = data.draw(st.sampled_from(stage_windows(n)))
        S = window_generators(win, 4)
        img = shift(w)
        ids = {g.heap_id for g in S}
        choices = all_diagrams(img.codes, ids)
        assume(choices)
        p, r = data.draw(st.sampled_from(choices))
        d = CancellationDiagram(len(img), tuple(p), tuple(r))
        assert verify(w, parent_set(S), lift_diagram(d, w, S))
