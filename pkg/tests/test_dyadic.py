from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arcspace.dyadic import (
    Dyadic,
    Gen,
    Span,
    Window,
    all_gens,
    designated_window,
    point_on_arc,
    span_of,
    stage_generators,
    stage_windows,
    window_contains_span,
    window_generators,
)
from arcspace.oracles import brute_window_generators
from strategies import dyadics, gens


def D(text):
    return Dyadic.parse(text)


class TestDyadic:
    def test_canonical_form(self):
        assert Dyadic(6, 3) == Dyadic(3, 2)
        assert (Dyadic(6, 3).num, Dyadic(6, 3).exp) == (3, 2)
        assert (Dyadic(0, 7).num, Dyadic(0, 7).exp) == (0, 0)
        assert (Dyadic(4, 2).num, Dyadic(4, 2).exp) == (1, 0)

    def test_text_format(self):
        assert str(Dyadic(3, 3)) == "3/2^3"
        assert D("3/2^3") == Dyadic(3, 3)
        assert D("3/8") == Dyadic(3, 3)
        assert D("1") == Dyadic(1)
        assert D("-5/2^1") == Dyadic(-5, 1)

    @pytest.mark.parametrize("bad", ["1/3", "x", "", "1/2^", "2^3"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            D(bad)

    @given(dyadics(), dyadics())
    def test_arithmetic_matches_fractions(self, a, b):
        fa, fb = a.to_fraction(), b.to_fraction()
        assert (a + b).to_fraction() == fa + fb
        assert (a - b).to_fraction() == fa - fb
        assert (a * b).to_fraction() == fa * fb
        assert (a < b) == (fa < fb)
        assert (a == b) == (fa == fb)

    @given(dyadics())
    def test_canonical_invariant(self, a):
        assert a.exp == 0 or a.num % 2 == 1
        assert a.exp >= 0

    @given(dyadics())
    def test_round_trip(self, a):
        assert D(str(a)) == a
        assert hash(D(str(a))) == hash(a)

    @given(dyadics(), st.integers(0, 10))
    def test_halve(self, a, k):
        assert a.halve(k).to_fraction() == a.to_fraction() / 2 ** k


class TestGenAndSpan:
    def test_span_examples(self):
        assert span_of(Gen(1, 1)) == Span(Dyadic(0), Dyadic(1))
        assert span_of(Gen(2, 2)) == Span(D("1/2"), Dyadic(1))
        assert span_of(Gen(4, 4)) == Span(D("3/8"), D("1/2"))

    def test_span_matches_arc_endpoints(self):
        g = Gen(4, 4)
        assert point_on_arc(g, 0)[0] == span_of(g).lo
        assert point_on_arc(g, 1)[0] == span_of(g).hi

    @pytest.mark.parametrize("level,index", [(0, 1), (1, 2), (3, 0), (3, 5)])
    def test_malformed_generator(self, level, index):
        with pytest.raises(ValueError):
            Gen(level, index)

    @given(gens(8))
    def test_heap_id_round_trip(self, g):
        assert Gen.from_heap_id(g.heap_id) == g
        assert Gen.parse(str(g)) == g

    @given(gens(7))
    def test_children_split_span(self, g):
        a, b = g.children()
        s, sa, sb = span_of(g), span_of(a), span_of(b)
        assert (sa.lo, sa.hi, sb.hi) == (s.lo, sb.lo, s.hi)
        assert sa.width == s.width.halve()

    def test_all_gens_counts(self):
        assert len(all_gens(3)) == 7
        assert len(all_gens(5)) == 31


class TestWindows:
    def test_containment_examples(self):
        w = Window(2, 2)
        assert window_contains_span(w, span_of(Gen(4, 4)))
        assert not window_contains_span(w, span_of(Gen(3, 2)))
        assert not window_contains_span(Window(1, 1), span_of(Gen(1, 1)))

    def test_window_text(self):
        assert str(Window(2, 2)) == "W2.2"
        assert Window.parse("W2.2") == Window(2, 2)
        assert Window.parse("2,2") == Window(2, 2)
        with pytest.raises(ValueError):
            Window(1, 3)

    def test_edge_windows_keep_formal_endpoints(self):
        assert Window(1, 0).lo == D("-1/2")
        assert Window(2, 4).hi == D("5/4")

    def test_window_generators_examples(self):
        w = Window(2, 2)
        assert window_generators(w, 4) == {Gen(4, 4), Gen(4, 5)}
        expected = {Gen(4, 4), Gen(4, 5)} | {Gen(5, j) for j in range(6, 12)}
        assert window_generators(w, 5) == expected
        assert window_generators(Window(1, 0), 1) == frozenset()

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_window_generators_match_brute_force(self, n):
        for w in stage_windows(n):
            for L in range(1, 7):
                assert window_generators(w, L) == brute_window_generators(w, L)

    @given(st.integers(1, 5), st.integers(1, 6), st.data())
    def test_window_generators_definition(self, n, L, data):
        i = data.draw(st.integers(0, 2 ** n))
        w = Window(n, i)
        got = window_generators(w, L)
        assert got == {g for g in all_gens(L) if window_contains_span(w, span_of(g))}

    def test_stage_generators_is_union(self):
        for n in range(1, 4):
            union = set()
            for w in stage_windows(n):
                union |= window_generators(w, 5)
            assert stage_generators(n, 5) == union

    @given(dyadics(10, 0, 1), st.integers(1, 8))
    def test_designated_window_contains_point(self, x, n):
        w = designated_window(x, n)
        assert w.n == n
        assert w.contains_point(x)

    def test_designated_window_ties_go_left(self):
        # 1/4 is equidistant from the centres 0 and 1/2 at stage 1
        assert designated_window(D("1/4"), 1) == Window(1, 0)
        assert designated_window(D("1/2"), 3) == Window(3, 4)


class TestArcs:
    def test_examples(self):
        assert point_on_arc(Gen(1, 1), D("1/2")) == (D("1/2"), 0.5)
        assert point_on_arc(Gen(1, 1), 0) == (Dyadic(0), 0.0)
        assert point_on_arc(Gen(2, 1), 1) == (D("1/2"), 0.0)

    @pytest.mark.parametrize("t", [D("-1/2^4"), D("17/2^4")])
    def test_out_of_range(self, t):
        with pytest.raises(ValueError):
            point_on_arc(Gen(1, 1), t)

    @given(gens(8), dyadics(10, 0, 1))
    def test_points_lie_on_semicircle(self, g, t):
        x, y = point_on_arc(g, t)
        s = span_of(g)
        centre = float((s.lo + s.hi).halve())
        r = float(s.width.halve())
        assert s.lo <= x <= s.hi
        assert y >= 0
        assert abs((float(x) - centre) ** 2 + y ** 2 - r * r) <= 1e-12 * r * r
        tf = t.to_fraction()
        assert x.to_fraction() == (g.index - 1 + tf) / Fraction(2) ** (g.level - 1)
