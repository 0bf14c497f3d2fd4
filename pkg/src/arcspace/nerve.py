"""Stage covers of the truncated arc space E_N and their nerves.

A stage-``n`` cover consists of the path components of E_N inside each strip
``W(n, i) x R``.  Arcs are graphs over the base, so each component is a union
of x-intervals on "carriers": the base segment and individual arcs.  A point
is a pair ``(carrier, x)``; arc carriers only hold interior points, the feet
belong to the base.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .dyadic import Dyadic, Gen, Window, all_gens, designated_window, span_of, stage_windows
from .words import Word

BASE = None  # carrier key of the base segment


@dataclass(frozen=True)
class Interval:
    lo: Dyadic
    hi: Dyadic
    lo_closed: bool = False
    hi_closed: bool = False

    @property
    def empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def __contains__(self, x) -> bool:
        x = Dyadic.coerce(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def __and__(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)

    def issubset(self, other: "Interval") -> bool:
        if self.empty:
            return True
        return (self & other) == self

    def __str__(self):
        return f"{'[' if self.lo_closed else '('}{self.lo}, {self.hi}{']' if self.hi_closed else ')'}"


def _open(w: Window) -> Interval:
    return Interval(w.lo, w.hi)


@dataclass(frozen=True)
class CoverElement:
    """``base(n, i)`` when ``arc`` is None, otherwise ``floating(n, i, arc)``."""

    n: int
    i: int
    arc: Gen | None = None
    level: int = field(default=0, compare=False)

    @property
    def window(self) -> Window:
        return Window(self.n, self.i)

    @property
    def is_base(self) -> bool:
        return self.arc is None

    @property
    def id(self) -> str:
        if self.arc is None:
            return f"b{self.n}.{self.i}"
        return f"f{self.n}.{self.i}:{self.arc}"

    def pieces(self) -> dict[Gen | None, Interval]:
        """Carrier -> x-interval of the points of this element."""
        return self._pieces

    @cached_property
    def _pieces(self) -> dict[Gen | None, Interval]:
        w = _open(self.window)
        if self.arc is not None:
            return {self.arc: w}
        out: dict[Gen | None, Interval] = {
            BASE: w & Interval(Dyadic(0), Dyadic(1), True, True)
        }
        for g in all_gens(self.level):
            s = span_of(g)
            if self.window.contains_point(s.lo) or self.window.contains_point(s.hi):
                out[g] = w & Interval(s.lo, s.hi)
        return out

    def contains_point(self, carrier: Gen | None, x) -> bool:
        piece = self.pieces().get(carrier)
        return piece is not None and x in piece

    def base_extent(self) -> Dyadic:
        piece = self.pieces().get(BASE)
        return piece.hi - piece.lo if piece is not None else Dyadic(0)

    def diameter_bound(self) -> float:
        """Euclidean bound from horizontal extent and the highest arc point held."""
        pieces = self.pieces()
        xs = [float(p.lo) for p in pieces.values()] + [float(p.hi) for p in pieces.values()]
        height = 0.0
        for carrier, p in pieces.items():
            if carrier is None:
                continue
            s = span_of(carrier)
            mid = (s.lo + s.hi).halve()
            x = mid if p.lo < mid < p.hi else (p.lo if abs(float(p.lo - mid)) < abs(float(p.hi - mid)) else p.hi)
            height = max(height, math.sqrt(max(float(x - s.lo) * float(s.hi - x), 0.0)))
        return math.hypot(max(xs) - min(xs), height)

    def __str__(self):
        return self.id


def intersection(elements: Sequence[CoverElement]) -> dict[Gen | None, Interval]:
    common = dict(elements[0].pieces())
    for e in elements[1:]:
        other = e.pieces()
        common = {c: p & other[c] for c, p in common.items() if c in other}
    return {c: p for c, p in common.items() if not p.empty}


def build_cover(n: int, N: int) -> list[CoverElement]:
    """Path components of E_N in every stage-``n`` strip (N = 0 is the bare base)."""
    if n < 1:
        raise ValueError("stage must be >= 1")
    if N < 0:
        raise ValueError("truncation level must be >= 0")
    cover = []
    for w in stage_windows(n):
        cover.append(CoverElement(n, w.i, None, N))
    for w in stage_windows(n):
        for g in all_gens(N):
            s = span_of(g)
            # no foot inside the window but the arc passes over it
            if s.lo <= w.lo and w.hi <= s.hi:
                cover.append(CoverElement(n, w.i, g, N))
    return cover


@dataclass
class NerveComplex:
    vertices: list[str]
    edges: list[tuple[str, str]]
    triangles: list[tuple[str, str, str]]
    basepoint: str
    elements: dict[str, CoverElement] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._edge_set = {frozenset(e) for e in self.edges}

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self._edge_set

    def to_json(self) -> dict:
        return {
            "basepoint": self.basepoint,
            "edges": [list(e) for e in self.edges],
            "triangles": [list(t) for t in self.triangles],
            "vertices": list(self.vertices),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "NerveComplex":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            list(data["vertices"]),
            [tuple(e) for e in data["edges"]],
            [tuple(t) for t in data["triangles"]],
            data["basepoint"],
        )

    def h1(self) -> "H1Group":
        basis, matrix = _cycle_coordinates(self)
        d, _ = smith_normal_form(matrix, len(basis))
        torsion = tuple(x for x in d if x > 1)
        rank = len(basis) - sum(1 for x in d if x != 0)
        return H1Group(rank, torsion)


def nerve(cover: Sequence[CoverElement]) -> NerveComplex:
    """Abstract nerve (2-skeleton) of a cover from :func:`build_cover`."""
    ids = [e.id for e in cover]
    by_id = {e.id: e for e in cover}
    pieces = {e.id: e.pieces() for e in cover}

    def meets(*names):
        common = dict(pieces[names[0]])
        for nm in names[1:]:
            other = pieces[nm]
            common = {c: p & other[c] for c, p in common.items() if c in other}
            if not common:
                return False
        return any(not p.empty for p in common.values())

    edges = [(a, b) for a, b in combinations(ids, 2) if meets(a, b)]
    adj = {frozenset(e) for e in edges}
    triangles = [
        (a, b, c)
        for a, b, c in combinations(ids, 3)
        if frozenset((a, b)) in adj and frozenset((a, c)) in adj and frozenset((b, c)) in adj
        and meets(a, b, c)
    ]
    base = [e.id for e in cover if e.pieces().get(BASE) is not None and Dyadic(0) in e.pieces()[BASE]]
    if len(base) != 1:  # pragma: no cover - guaranteed by the window layout
        raise AssertionError(f"expected one element at the basepoint, found {base}")
    return NerveComplex(ids, edges, triangles, base[0], by_id)


def contains(big: CoverElement, small: CoverElement) -> bool:
    bp = big.pieces()
    for carrier, p in small.pieces().items():
        if p.empty:
            continue
        if carrier not in bp or not p.issubset(bp[carrier]):
            return False
    return True


def refinement_map(fine: Sequence[CoverElement], coarse: Sequence[CoverElement]) -> dict[str, str]:
    """Send each stage-(n+1) element to a stage-n element containing it.

    Base elements go to ``base(n, i'//2)``; floating pieces prefer a floating
    piece of the same arc, then the containing base element.
    """
    coarse_by_key = {(e.i, e.arc): e for e in coarse}
    mapping = {}
    for e in fine:
        lo_i, hi_i = e.i // 2, (e.i + 1) // 2
        candidates = []
        if e.arc is not None:
            candidates += [coarse_by_key.get((k, e.arc)) for k in (lo_i, hi_i)]
        candidates += [coarse_by_key.get((k, None)) for k in (lo_i, hi_i)]
        for c in candidates:
            if c is not None and contains(c, e):
                mapping[e.id] = c.id
                break
        else:
            raise AssertionError(f"no coarse element contains {e.id}")
    return mapping


def is_simplicial(mapping: dict[str, str], fine: NerveComplex, coarse: NerveComplex) -> bool:
    def ok(simplex):
        img = {mapping[v] for v in simplex}
        if len(img) == 1:
            return True
        if len(img) == 2:
            return coarse.adjacent(*img)
        a, b, c = sorted(img)
        return (a, b, c) in coarse_tri
    coarse_tri = {tuple(sorted(t)) for t in coarse.triangles}
    if mapping.get(fine.basepoint) != coarse.basepoint:
        return False
    return all(ok(e) for e in fine.edges) and all(ok(t) for t in fine.triangles)


# -- loops as edge paths ----------------------------------------------------

def _critical(cover: Sequence[CoverElement]) -> list[Dyadic]:
    pts = set()
    for e in cover:
        pts.add(e.window.lo)
        pts.add(e.window.hi)
    return sorted(pts)


def _samples(a: Dyadic, b: Dyadic, critical: list[Dyadic], include_ends: bool) -> list[Dyadic]:
    """Points from ``a`` to ``b`` (either direction) hitting every critical value and gap."""
    lo, hi = (a, b) if a <= b else (b, a)
    marks = [lo] + [c for c in critical if lo < c < hi] + [hi]
    pts = []
    for p, q in zip(marks, marks[1:]):
        pts.append(p)
        pts.append((p + q).halve())
    pts.append(hi)
    if not include_ends:
        pts = pts[1:-1]
    return pts if a <= b else pts[::-1]


def _walk(points, cover, start: CoverElement) -> list[str]:
    path = [start.id]
    cur = start
    prev = None
    for carrier, x in points:
        if not cur.contains_point(carrier, x):
            for e in cover:
                if e.contains_point(carrier, x) and (prev is None or e.contains_point(*prev)):
                    cur = e
                    break
            else:  # pragma: no cover - consecutive samples always share an element
                raise AssertionError(f"no element holds consecutive samples at {x}")
            path.append(cur.id)
        prev = (carrier, x)
    return path


def loop_edge_path(g: Gen, cover: Sequence[CoverElement]) -> list[str]:
    """Chain of cover elements met by the loop: base to the left foot, over the arc, base home."""
    N = cover[0].level
    if g.level > N:
        raise ValueError(f"generator {g} is above the cover's truncation level {N}")
    crit = _critical(cover)
    s = span_of(g)
    zero = Dyadic(0)
    points = [(BASE, x) for x in _samples(zero, s.lo, crit, True)]
    points += [(g, x) for x in _samples(s.lo, s.hi, crit, False)]
    points += [(BASE, x) for x in _samples(s.hi, zero, crit, True)]
    start = next(e for e in cover if e.contains_point(BASE, zero))
    path = _walk(points, cover, start)
    if path[-1] != start.id:  # pragma: no cover
        raise AssertionError("loop did not return to the basepoint element")
    return path


def word_edge_path(w: Word, cover: Sequence[CoverElement]) -> list[str]:
    start = next(e for e in cover if e.contains_point(BASE, Dyadic(0)))
    path = [start.id]
    cache: dict[int, list[str]] = {}
    for c in w.codes:
        h = abs(c)
        if h not in cache:
            cache[h] = loop_edge_path(Gen.from_heap_id(h), cover)
        piece = cache[h] if c > 0 else cache[h][::-1]
        path.extend(piece[1:])
    return path


# -- integer homology -------------------------------------------------------

@dataclass(frozen=True)
class H1Group:
    rank: int
    torsion: tuple[int, ...] = ()


@dataclass(frozen=True)
class H1Class:
    """Coordinates in ``Z^rank + (+) Z/d``; ``torsion`` entries are ``(value, d)``."""

    free: tuple[int, ...]
    torsion: tuple[tuple[int, int], ...] = ()

    @property
    def is_zero(self) -> bool:
        return not any(self.free) and not any(v for v, _ in self.torsion)

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": [list(t) for t in self.torsion]}


def _spanning_tree(nc: NerveComplex) -> set[frozenset]:
    nbrs: dict[str, list[str]] = {v: [] for v in nc.vertices}
    for a, b in nc.edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    tree = set()
    seen = set()
    for root in [nc.basepoint] + nc.vertices:
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            for u in nbrs[v]:
                if u not in seen:
                    seen.add(u)
                    tree.add(frozenset((v, u)))
                    queue.append(u)
    return tree


def _orient(a: str, b: str, order: dict[str, int]) -> tuple[tuple[str, str], int]:
    return ((a, b), 1) if order[a] < order[b] else ((b, a), -1)


def _cycle_coordinates(nc: NerveComplex):
    """Non-tree edge basis of the cycle space and the triangle boundary matrix in it."""
    order = {v: k for k, v in enumerate(nc.vertices)}
    tree = _spanning_tree(nc)
    basis = [_orient(a, b, order)[0] for a, b in nc.edges if frozenset((a, b)) not in tree]
    index = {e: k for k, e in enumerate(basis)}
    columns = []
    for a, b, c in nc.triangles:
        col = [0] * len(basis)
        for (x, y), sgn in ((( a, b), 1), ((b, c), 1), ((a, c), -1)):
            e, o = _orient(x, y, order)
            if e in index:
                col[index[e]] += sgn * o
        columns.append(col)
    matrix = [[columns[j][i] for j in range(len(columns))] for i in range(len(basis))]
    return basis, matrix


def smith_normal_form(matrix: list[list[int]], rows: int) -> tuple[list[int], list[list[int]]]:
    """Diagonal of the Smith form of an integer matrix and the left transform ``U``.

    ``U @ matrix @ V`` is diagonal with ``d[0] | d[1] | ...``; only ``U`` is
    tracked since classes are read off as ``U @ z``.
    """
    A = [list(r) for r in matrix]
    cols = len(A[0]) if A else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    diag = []
    t = 0
    while t < rows and t < cols:
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        U[t], U[pi] = U[pi], U[t]
        for r in A:
            r[t], r[pj] = r[pj], r[t]
        while True:
            changed = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        U[t], U[i] = U[i], U[t]
                        changed = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for r in A:
                        r[j] -= q * r[t]
                    if A[t][j]:
                        for r in A:
                            r[t], r[j] = r[j], r[t]
                        changed = True
            if changed:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            i, _ = bad
            A[t] = [x + y for x, y in zip(A[t], A[i])]
            U[t] = [x + y for x, y in zip(U[t], U[i])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    return diag, U


def h1_image(edge_path: Sequence[str], nc: NerveComplex) -> H1Class:
    """Class of a closed edge path at the basepoint in H1(nerve; Z)."""
    if not edge_path or edge_path[0] != nc.basepoint or edge_path[-1] != nc.basepoint:
        raise ValueError("edge path must start and end at the basepoint vertex")
    order = {v: k for k, v in enumerate(nc.vertices)}
    basis, matrix = _cycle_coordinates(nc)
    index = {e: k for k, e in enumerate(basis)}
    z = [0] * len(basis)
    for a, b in zip(edge_path, edge_path[1:]):
        if a == b:
            continue
        if not nc.adjacent(a, b):
            raise ValueError(f"{a} and {b} are not joined by an edge")
        e, o = _orient(a, b, order)
        if e in index:
            z[index[e]] += o
    diag, U = smith_normal_form(matrix, len(basis))
    y = [sum(u * v for u, v in zip(row, z)) for row in U]
    torsion = tuple((y[k] % d, d) for k, d in enumerate(diag) if d > 1)
    return H1Class(tuple(y[len(diag):]), torsion)


def designated_element(carrier: Gen | None, x, cover: Sequence[CoverElement]) -> CoverElement:
    """The element standing for a point of E_N.

    Base points use the nearest window centre (ties go left); arc points use
    their floating piece when there is one, else the first element holding them.
    """
    x = Dyadic.coerce(x)
    if carrier is None:
        w = designated_window(x, cover[0].n)
        return next(e for e in cover if e.is_base and e.i == w.i)
    holders = [e for e in cover if e.contains_point(carrier, x)]
    if not holders:
        raise ValueError(f"point {x} on {carrier} is not in E_{cover[0].level}")
    floating = [e for e in holders if e.arc == carrier]
    return (floating or holders)[0]
