"""Acceptance suite shared by ``arcspace selftest`` and the pytest harness.

Every check returns a :class:`Result`.  ``full=True`` runs the stated
universes; ``full=False`` shrinks them for a quick smoke run.
"""

from __future__ import annotations

import os
import random
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from itertools import combinations, product

from .cancellation import lift_diagram, parent_set, search_codes, verify
from .dyadic import Dyadic, Gen, all_gens, point_on_arc, stage_windows, window_generators
from .figures import arc_space_svg
from .nerve import (
    build_cover,
    h1_image,
    is_simplicial,
    loop_edge_path,
    nerve,
    refinement_map,
)
from .oracles import britton_trivial, brute_nerve, mixed_items
from .shift import decode_codes, shift_codes, shift_iter
from .torus import (
    MixedWord,
    T,
    T_INV,
    TorusElement,
    equal,
    normalize,
    separating_window,
    torus_window_member,
    undetectable_certificate,
)
from .words import (
    Word,
    code_level,
    codes_reduced,
    detection_level,
    enumerate_reduced,
    free_reduce,
    nc_member,
    nc_member_ids,
    stage_member,
)

DEFAULT_SEED = 20240611


def default_seed() -> int:
    return int(os.environ.get("DYADIC_SEED", DEFAULT_SEED))


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(number: int, name: str):
    def wrap(fn):
        def run(*args, **kwargs):
            start = time.perf_counter()
            passed, detail = fn(*args, **kwargs)
            return Result(number, name, passed, detail, time.perf_counter() - start)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _criterion1_universe(full: bool) -> list[Word]:
    return list(enumerate_reduced(all_gens(3), 4 if full else 3))


@_timed(1, "shift injectivity and reducedness")
def check_shift(full: bool = True):
    words = _criterion1_universe(full)
    failures = 0
    images = set()
    for w in words:
        img = shift_codes(w.codes)
        images.add(img)
        if decode_codes(img) != w.codes or not codes_reduced(img):
            failures += 1
    if len(images) != len(words):
        failures += len(words) - len(images)
    # reflection: a non-reduced word never shifts to a reduced one
    alphabet = [c for g in all_gens(3) for c in (g.heap_id, -g.heap_id)]
    raw = 0
    for length in range(2, (4 if full else 3) + 1):
        for codes in product(alphabet, repeat=length):
            raw += 1
            if codes_reduced(codes) != codes_reduced(shift_codes(codes)):
                failures += 1
    return failures == 0, f"{len(words)} reduced words, {raw} raw words, {failures} failures"


def _random_reduced(rng: random.Random, alphabet: list[int], length: int) -> tuple[int, ...]:
    out: list[int] = []
    while len(out) < length:
        c = rng.choice(alphabet)
        if not out or out[-1] != -c:
            out.append(c)
    return tuple(out)


def _random_member(rng: random.Random, alphabet: list[int], S_ids: list[int],
                   max_len: int) -> tuple[int, ...]:
    """A reduced product of conjugates of S-letters, trimmed to ``max_len``."""
    codes: tuple[int, ...] = ()
    for _ in range(rng.randint(1, 4)):
        conj = _random_reduced(rng, alphabet, rng.randint(0, 4))
        s = rng.choice(S_ids) * rng.choice((1, -1))
        piece = conj + (s,) + tuple(-c for c in reversed(conj))
        new = free_reduce(codes + piece)
        if len(new) > max_len:
            break
        codes = new
    return codes


@_timed(2, "cancellation search agrees with normal-closure membership")
def check_cancellation(full: bool = True, seed: int | None = None):
    seed = default_seed() if seed is None else seed
    gens = [Gen(1, 1), Gen(2, 1), Gen(2, 2)]
    words = [w for w in enumerate_reduced(gens, 8 if full else 6)]
    ids_all = [g.heap_id for g in gens]
    failures = 0
    exhaustive = 0
    for r in range(len(ids_all) + 1):
        for S in combinations(ids_all, r):
            ids = frozenset(S)
            Sg = [Gen.from_heap_id(h) for h in S]
            for w in words:
                exhaustive += 1
                d = search_codes(w.codes, ids)
                if (d is not None) != nc_member_ids(w.codes, ids):
                    failures += 1
                elif d is not None and not verify(w, Sg, d):
                    failures += 1
    rng = random.Random(seed)
    pool = all_gens(4)
    hits = 0
    cases = 100_000 if full else 5_000
    for _ in range(cases):
        gens_k = rng.sample(pool, rng.randint(1, 8))
        alphabet = [c for g in gens_k for c in (g.heap_id, -g.heap_id)]
        S_ids = [g.heap_id for g in gens_k if rng.random() < 0.5] or [gens_k[0].heap_id]
        if rng.random() < 0.5:
            codes = _random_member(rng, alphabet, S_ids, 20)
        else:
            codes = _random_reduced(rng, alphabet, rng.randint(0, 20))
        ids = frozenset(S_ids)
        d = search_codes(codes, ids)
        member = nc_member_ids(codes, ids)
        hits += member
        if (d is not None) != member:
            failures += 1
        elif d is not None and not verify(Word(codes), [Gen.from_heap_id(h) for h in ids], d):
            failures += 1
    return failures == 0, (
        f"{exhaustive} exhaustive + {cases} random cases ({hits} members, seed {seed}), "
        f"{failures} discrepancies"
    )


@_timed(3, "strip stability under shift")
def check_strip(full: bool = True):
    failures = 0
    checked = 0
    lifted = 0
    words = list(enumerate_reduced(all_gens(4), 3 if full else 2))
    for n in range(1, 4 if full else 3):
        for win in stage_windows(n):
            S5 = window_generators(win, 5)
            S4 = window_generators(win, 4)
            for g in S4:
                if not set(g.children()) <= S5:
                    failures += 1
            ids = frozenset(g.heap_id for g in S5)
            for w in words:
                checked += 1
                img = shift_codes(w.codes)
                if nc_member_ids(img, ids):
                    if not nc_member(w, S5):
                        failures += 1
                        continue
                    d = search_codes(img, ids)
                    lift = lift_diagram(d, w, S5)
                    lifted += 1
                    if not verify(w, parent_set(S5), lift):
                        failures += 1
    return failures == 0, f"{checked} (window, word) pairs, {lifted} diagrams lifted, {failures} failures"


@_timed(4, "mapping-torus normal form matches Britton reduction")
def check_torus(full: bool = True):
    # t, t', g1.1, g1.1', g2.1, g2.1'
    alphabet = [T, T_INV, 1, -1, 2, -2]
    max_len = 6 if full else 4
    failures = 0
    count = 0
    for length in range(max_len + 1):
        for items in product(alphabet, repeat=length):
            count += 1
            mw = MixedWord(items)
            trivial = britton_trivial(mixed_items(mw))
            if normalize(mw).is_identity != trivial:
                failures += 1
            for k in range(length + 1):
                left = normalize(MixedWord(items[:k]))
                right = normalize(MixedWord(items[k:]).inverse())
                if equal(left, right) != trivial:
                    failures += 1
    gens = all_gens(4)
    for g in gens:
        for s in (1, -1):
            code = s * g.heap_id
            e = normalize(MixedWord((T_INV, code, T)))
            if (e.a, e.u.codes, e.b) != (0, shift_codes((code,)), 0):
                failures += 1
    return failures == 0, f"{count} mixed words, all split points, {2 * len(gens)} conjugation identities, {failures} failures"


@_timed(5, "g1.1 is stage-invisible yet certified at every stage")
def check_undetectable(full: bool = True):
    w = Word.parse("g1.1")
    problems = []
    ks = []
    for n in range(1, 7):
        if stage_member(w, n, n + 2):
            problems.append(f"stage_member true at n={n}")
        cert = undetectable_certificate(w, n)
        ks.append(cert.k)
        if not cert.check():
            problems.append(f"certificate fails replay at n={n}")
        if cert.k > n + 2:
            problems.append(f"k={cert.k} exceeds n+2 at n={n}")
        if cert.k > 0:
            earlier = shift_iter(w, cert.k - 1).codes
            hosted = all(
                any(Gen.from_heap_id(abs(c)) in window_generators(win, code_level(c))
                    for win in stage_windows(n))
                for c in earlier
            )
            if hosted:
                problems.append(f"k={cert.k} is not minimal at n={n}")
    detail = "k per stage " + ",".join(map(str, ks))
    if problems:
        detail += "; " + "; ".join(problems)
    return not problems, detail


def _random_torus_element(rng: random.Random, max_level: int) -> TorusElement:
    alphabet = [c for g in all_gens(max_level) for c in (g.heap_id, -g.heap_id)]
    while True:
        u = _random_reduced(rng, alphabet, rng.randint(1, 6))
        a = rng.randint(0, 2)
        e = TorusElement.make(a, Word(u), a)
        if not e.is_identity:
            return e


@_timed(6, "point groups are trivial (separating windows)")
def check_point_groups(full: bool = True, seed: int | None = None):
    seed = default_seed() if seed is None else seed
    rng = random.Random(seed)
    elements = [_random_torus_element(rng, 5) for _ in range(100 if full else 20)]
    failures = 0
    deepest = 0
    for x in (Dyadic(0), Dyadic(1, 1), Dyadic(3, 3)):
        for e in elements:
            win = separating_window(x, e)
            deepest = max(deepest, win.n)
            if not win.contains_point(x):
                failures += 1
            verdicts = {torus_window_member(e, win, padding=p) for p in (0, 1, 2)}
            if verdicts != {False}:
                failures += 1
    return failures == 0, (
        f"{3 * len(elements)} (point, element) pairs, deepest stage {deepest}, "
        f"seed {seed}, {failures} failures"
    )


@_timed(7, "detection level bounded by max letter level")
def check_detection(full: bool = True):
    failures = 0
    count = 0
    for w in _criterion1_universe(full):
        if not w:
            continue
        count += 1
        lvl = detection_level(w)
        if lvl is None or lvl > w.max_level:
            failures += 1
    return failures == 0, f"{count} nonidentity words, {failures} failures"


def _brute_matches(n: int, N: int) -> bool:
    nc = nerve(build_cover(n, N))
    ref = brute_nerve(n, N)
    return (
        set(nc.vertices) == ref["vertices"]
        and {frozenset(e) for e in nc.edges} == ref["edges"]
        and {frozenset(t) for t in nc.triangles} == ref["triangles"]
        and [nc.basepoint] == ref["basepoint"]
    )


@_timed(8, "nerve stages match brute force and see g1.1")
def check_nerve(full: bool = True):
    problems = []
    stages = range(1, 4)
    levels = range(0, 5 if full else 3)
    grid = 0
    for n in stages:
        for N in levels:
            grid += 1
            if not _brute_matches(n, N):
                problems.append(f"brute mismatch at n={n}, N={N}")
            cover = build_cover(n, N)
            nc = nerve(cover)
            if N == 0:
                if nc.h1().rank != 0:
                    problems.append(f"N=0 rank nonzero at n={n}")
                continue
            if h1_image(loop_edge_path(Gen(1, 1), cover), nc).is_zero:
                problems.append(f"g1.1 vanishes at n={n}, N={N}")
            contained = set()
            for win in stage_windows(n):
                contained |= window_generators(win, N)
            for g in contained:
                if not h1_image(loop_edge_path(g, cover), nc).is_zero:
                    problems.append(f"{g} nonzero at n={n}, N={N}")
            if n + 1 in stages:
                fine_cover = build_cover(n + 1, N)
                mapping = refinement_map(fine_cover, cover)
                if not is_simplicial(mapping, nerve(fine_cover), nc):
                    problems.append(f"refinement {n + 1}->{n} not simplicial at N={N}")
    detail = f"{grid} (stage, level) pairs"
    if problems:
        detail += "; " + "; ".join(problems[:5])
    return not problems, detail


def check_svg_text(svg: str, N: int, rel_tol: float = 1e-9) -> list[str]:
    """Problems with an arc-space SVG for level ``N``; empty when it is right."""
    problems = []
    root = ET.fromstring(svg)
    ns = {"s": "http://www.w3.org/2000/svg"}
    bases = root.findall(".//s:line[@class='base']", ns)
    arcs = root.findall(".//s:polyline[@class='arc']", ns)
    if len(bases) != 1:
        problems.append(f"{len(bases)} base segments")
    if len(arcs) != 2 ** N - 1:
        problems.append(f"{len(arcs)} arcs, expected {2 ** N - 1}")
    seen = set()
    for el in arcs:
        g = Gen.parse(el.get("data-gen"))
        seen.add(g)
        pts = [tuple(map(float, p.split(","))) for p in el.get("points").split()]
        samples = len(pts) - 1
        radius = 2.0 ** -g.level
        centre = (g.index - 0.5) * 2.0 ** (1 - g.level)
        for k, (x, y) in enumerate(pts):
            ex, ey = point_on_arc(g, Dyadic(k, samples.bit_length() - 1))
            ex = float(ex)
            if abs(x - ex) > rel_tol * max(abs(ex), radius) or abs(y - ey) > rel_tol * max(abs(ey), radius):
                problems.append(f"{g} sample {k} off the formula")
                break
            if abs((x - centre) ** 2 + y ** 2 - radius ** 2) > rel_tol * radius ** 2:
                problems.append(f"{g} sample {k} off the circle")
                break
    if seen != set(all_gens(N)):
        problems.append("arc labels do not cover every generator")
    return problems


@_timed(9, "arc-space figure")
def check_figure(full: bool = True):
    problems = []
    levels = range(0, 7 if full else 4)
    for N in levels:
        problems += [f"N={N}: {p}" for p in check_svg_text(arc_space_svg(N), N)]
    detail = f"levels {levels.start}..{levels.stop - 1}"
    if problems:
        detail += "; " + "; ".join(problems[:5])
    return not problems, detail


CHECKS = [
    check_shift,
    check_cancellation,
    check_strip,
    check_torus,
    check_undetectable,
    check_point_groups,
    check_detection,
    check_nerve,
    check_figure,
]


def run_all(full: bool = True, seed: int | None = None) -> list[Result]:
    out = []
    for check in CHECKS:
        if check in (check_cancellation, check_point_groups):
            out.append(check(full, seed))
        else:
            out.append(check(full))
    return out
