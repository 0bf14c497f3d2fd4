import xml.etree.ElementTree as ET

import pytest

from arcspace.acceptance import check_svg_text
from arcspace.cancellation import search
from arcspace.dyadic import Gen
from arcspace.figures import arc_samples, arc_space_svg, chord_svg
from arcspace.words import Word

NS = {"s": "http://www.w3.org/2000/svg"}


@pytest.mark.parametrize("N", range(0, 7))
def test_arc_count_and_coordinates(N):
    assert check_svg_text(arc_space_svg(N), N) == []


def test_checker_catches_bad_points():
    svg = arc_space_svg(2).replace('data-gen="g2.1"', 'data-gen="g2.2"', 1)
    assert check_svg_text(svg, 2)


def test_checker_catches_missing_arc():
    root = ET.fromstring(arc_space_svg(2))
    group = root.find("s:g", NS)
    group.remove(group.findall("s:polyline", NS)[0])
    assert check_svg_text(ET.tostring(root, encoding="unicode"), 2)


def test_samples_are_raw_formula_values():
    pts = arc_samples(Gen(1, 1), 4)
    assert pts[0] == (0.0, 0.0)
    assert pts[2] == (0.5, 0.5)
    assert pts[-1] == (1.0, 0.0)


def test_rejects_bad_sample_count():
    with pytest.raises(ValueError):
        arc_space_svg(2, samples=12)


def test_chord_diagram():
    w = Word.parse("g2.1 g4.4 g4.5 g2.1' g4.4")
    d = search(w, {Gen(4, 4), Gen(4, 5)})
    root = ET.fromstring(chord_svg(w, d))
    assert len(root.findall("s:path[@class='chord']", NS)) == 1
    assert len(root.findall("s:circle[@class='residual']", NS)) == 3
    assert [t.text for t in root.findall("s:text", NS)] == [str(x) for x in w.letters]


def test_chord_length_mismatch():
    w = Word.parse("g1.1")
    with pytest.raises(ValueError):
        chord_svg(w, search(Word.parse("g1.1 g2.1"), {Gen(1, 1), Gen(2, 1)}))
