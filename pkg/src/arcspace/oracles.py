"""Slow, independent reference procedures used to cross-check the fast paths.

None of these share code with the routines they check beyond the basic
``Gen`` / ``Word`` containers.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import networkx as nx

from .dyadic import Gen, Window
from .words import Word


def brute_window_generators(w: Window, max_level: int) -> frozenset[Gen]:
    """Test every generator's span against the open window with Fractions."""
    lo = Fraction(w.i - 1, 2 ** w.n)
    hi = Fraction(w.i + 1, 2 ** w.n)
    out = set()
    for k in range(1, max_level + 1):
        for j in range(1, 2 ** (k - 1) + 1):
            a = Fraction(j - 1, 2 ** (k - 1))
            b = Fraction(j, 2 ** (k - 1))
            if lo < a and b < hi:
                out.add(Gen(k, j))
    return frozenset(out)


# -- free group -------------------------------------------------------------

def letter_substitution(letter: tuple[Gen, int]) -> list[tuple[Gen, int]]:
    g, s = letter
    c1 = Gen(g.level + 1, 2 * g.index - 1)
    c2 = Gen(g.level + 1, 2 * g.index)
    return [(c1, 1), (c2, 1)] if s > 0 else [(c2, -1), (c1, -1)]


def _free_reduce(seq):
    out = []
    for x in seq:
        if out and _inverse_items(out[-1], x):
            out.pop()
        else:
            out.append(x)
    return out


def _inverse_items(a, b) -> bool:
    if isinstance(a, str) or isinstance(b, str):
        return {a, b} == {"t", "t'"}
    return a[0] == b[0] and a[1] == -b[1]


def _preimage(seg):
    """Letters whose substitution spells ``seg``, or None."""
    if len(seg) % 2:
        return None
    out = []
    for x, y in zip(seg[::2], seg[1::2]):
        g, s = x
        if g.level == 1:
            return None
        parent = Gen(g.level - 1, (g.index + 1) // 2)
        if letter_substitution((parent, s)) == [x, y]:
            out.append((parent, s))
        else:
            return None
    return out


def britton_trivial(items) -> bool:
    """Decide triviality in the ascending HNN group by pinch reduction.

    ``items`` are ``"t"``, ``"t'"`` or ``(Gen, sign)`` pairs.  By Britton's
    lemma a word for the identity that still has stable letters contains a
    pinch ``t' u t`` (always removable) or ``t u t'`` with ``u`` in the image
    of the substitution.
    """
    seq = _free_reduce(list(items))
    while True:
        ts = [k for k, x in enumerate(seq) if isinstance(x, str)]
        done = True
        for a, b in zip(ts, ts[1:]):
            if seq[a] == seq[b]:
                continue
            middle = _free_reduce(seq[a + 1:b])
            if seq[a] == "t'":
                new = [y for x in middle for y in letter_substitution(x)]
            else:
                new = _preimage(middle)
                if new is None:
                    continue
            seq = _free_reduce(seq[:a] + new + seq[b + 1:])
            done = False
            break
        if done:
            return not seq


def mixed_items(mw) -> list:
    """Convert a ``MixedWord`` into oracle items."""
    out = []
    for x in mw.items:
        if isinstance(x, str):
            out.append(x)
        else:
            out.append((Gen.from_heap_id(abs(x)), 1 if x > 0 else -1))
    return out


def normal_closure_ball(S, max_factors: int, max_conj: int, gens) -> frozenset[tuple[int, ...]]:
    """Reduced code tuples of all products of at most ``max_factors`` conjugates
    ``c s^{+-1} c^-1`` with conjugators of length <= ``max_conj`` over ``gens``."""
    letters = [(g, s) for g in gens for s in (1, -1)]
    conjugators = [()]
    for length in range(1, max_conj + 1):
        conjugators += [c for c in product(letters, repeat=length)
                        if all(not _inverse_items(a, b) for a, b in zip(c, c[1:]))]
    singles = set()
    for c in conjugators:
        inv = [(g, -s) for g, s in reversed(c)]
        for g in S:
            for s in (1, -1):
                singles.add(tuple(_free_reduce(list(c) + [(g, s)] + inv)))
    frontier = {()}
    seen = {()}
    for _ in range(max_factors):
        frontier = {tuple(_free_reduce(list(a) + list(b))) for a in frontier for b in singles} - seen
        seen |= frontier
    return frozenset(tuple(s * g.heap_id for g, s in word) for word in seen)


def normal_closure_by_products(w: Word, S, max_factors: int, max_conj: int, gens) -> bool:
    target = tuple(_free_reduce([(Gen.from_heap_id(abs(c)), 1 if c > 0 else -1) for c in w.codes]))
    target_codes = tuple(s * g.heap_id for g, s in target)
    return target_codes in normal_closure_ball(S, max_factors, max_conj, gens)


# -- nerve ------------------------------------------------------------------

def brute_nerve(n: int, N: int) -> dict:
    """Nerve of the stage-``n`` strip cover of E_N from a sampled graph model.

    E_N is replaced by a graph on sample points (a fine dyadic grid on the
    base and on each arc interior); strip components are connected components
    of induced subgraphs, and simplices are families sharing a sample point.
    """
    step = Fraction(1, 2 ** (max(n, N) + 3))
    count = int(1 / step)
    G = nx.Graph()
    xs = {}
    for m in range(count + 1):
        G.add_node(("B", m))
        xs[("B", m)] = m * step
        if m:
            G.add_edge(("B", m - 1), ("B", m))
    for k in range(1, N + 1):
        for j in range(1, 2 ** (k - 1) + 1):
            lo = Fraction(j - 1, 2 ** (k - 1))
            hi = Fraction(j, 2 ** (k - 1))
            ms = [m for m in range(count + 1) if lo < m * step < hi]
            prev = ("B", int(lo / step))
            for m in ms:
                node = ("A", k, j, m)
                xs[node] = m * step
                G.add_edge(prev, node)
                prev = node
            G.add_edge(prev, ("B", int(hi / step)))

    members: dict[str, set] = {}
    for i in range(2 ** n + 1):
        lo = Fraction(i - 1, 2 ** n)
        hi = Fraction(i + 1, 2 ** n)
        sub = G.subgraph([v for v in G if lo < xs[v] < hi])
        for comp in nx.connected_components(sub):
            if any(v[0] == "B" for v in comp):
                name = f"b{n}.{i}"
            else:
                arcs = {(v[1], v[2]) for v in comp}
                assert len(arcs) == 1
                (k, j), = arcs
                name = f"f{n}.{i}:g{k}.{j}"
            assert name not in members
            members[name] = set(comp)

    names = sorted(members)
    edges = {frozenset(p) for p in combinations(names, 2) if members[p[0]] & members[p[1]]}
    triangles = {
        frozenset(t) for t in combinations(names, 3)
        if members[t[0]] & members[t[1]] & members[t[2]]
    }
    base = [nm for nm in names if ("B", 0) in members[nm]]
    return {"vertices": set(names), "edges": edges, "triangles": triangles, "basepoint": base}
