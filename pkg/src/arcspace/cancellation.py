"""Cancellation diagrams: non-crossing inverse matchings with a residual set.

A diagram on a word of length ``m`` pairs some positions (1-based) so that
paired letters are mutually inverse and no two chords cross; every unpaired
position is a residual and must carry a letter of ``S``.  A reduced word has
such a diagram exactly when it lies in the normal closure of ``S``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .dyadic import Gen
from .shift import shift_codes
from .words import Word


@dataclass(frozen=True)
class CancellationDiagram:
    length: int
    pairs: tuple[tuple[int, int], ...] = ()
    residuals: tuple[int, ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((min(p), max(p)) for p in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "residuals", tuple(sorted(self.residuals)))

    def structural_errors(self) -> list[str]:
        """Violations of the partition and non-crossing invariants."""
        errors = []
        used = [p for pair in self.pairs for p in pair] + list(self.residuals)
        if any(not 1 <= p <= self.length for p in used):
            errors.append("position out of range")
        if len(used) != len(set(used)):
            errors.append("position used twice")
        if set(used) != set(range(1, self.length + 1)):
            errors.append("positions not partitioned")
        if any(i == j for i, j in self.pairs):
            errors.append("degenerate chord")
        for a, (i, j) in enumerate(self.pairs):
            for k, l in self.pairs[a + 1:]:
                if i < k < j < l or k < i < l < j:
                    errors.append(f"chords ({i},{j}) and ({k},{l}) cross")
        return errors

    def to_json(self) -> dict:
        return {
            "m": self.length,
            "pairs": [list(p) for p in self.pairs],
            "residuals": list(self.residuals),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "CancellationDiagram":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            data["m"],
            tuple(tuple(p) for p in data["pairs"]),
            tuple(data["residuals"]),
        )


def _ids(S: Iterable[Gen]) -> frozenset[int]:
    return frozenset(g.heap_id for g in S)


def verify(w: Word, S: Iterable[Gen], d: CancellationDiagram,
           require_reduced: bool = True) -> bool:
    if len(w) != d.length:
        raise ValueError(f"diagram length {d.length} does not match word length {len(w)}")
    if require_reduced and not w.is_reduced:
        raise ValueError(f"verify needs a reduced word, got {w}")
    if d.structural_errors():
        return False
    ids = _ids(S)
    codes = w.codes
    for i, j in d.pairs:
        if codes[i - 1] != -codes[j - 1]:
            return False
    return all(abs(codes[r - 1]) in ids for r in d.residuals)


def _reach_table(codes: tuple[int, ...], ids: frozenset[int]) -> list[int]:
    """``reach[i]`` has bit ``j`` set iff ``codes[i:j]`` is cancellable."""
    m = len(codes)
    reach = [0] * (m + 1)
    reach[m] = 1 << m
    for i in range(m - 1, -1, -1):
        inner = reach[i + 1]
        r = 1 << i
        if abs(codes[i]) in ids:
            r |= inner
        target = -codes[i]
        for k in range(i + 1, m):
            if codes[k] == target and inner >> k & 1:
                r |= reach[k + 1]
        reach[i] = r
    return reach


def search_codes(codes: tuple[int, ...], ids: frozenset[int]) -> CancellationDiagram | None:
    m = len(codes)
    reach = _reach_table(codes, ids)
    if not reach[0] >> m & 1:
        return None
    pairs, residuals = [], []
    todo = [(0, m)]
    while todo:
        i, j = todo.pop()
        if i == j:
            continue
        # residual first, then the smallest matching partner
        if abs(codes[i]) in ids and reach[i + 1] >> j & 1:
            residuals.append(i + 1)
            todo.append((i + 1, j))
            continue
        target = -codes[i]
        for k in range(i + 1, j):
            if codes[k] == target and reach[i + 1] >> k & 1 and reach[k + 1] >> j & 1:
                pairs.append((i + 1, k + 1))
                todo.append((k + 1, j))
                todo.append((i + 1, k))
                break
        else:  # pragma: no cover - the table said this interval is cancellable
            raise AssertionError("inconsistent cancellation table")
    return CancellationDiagram(m, tuple(pairs), tuple(residuals))


def search(w: Word, S: Iterable[Gen]) -> CancellationDiagram | None:
    """Find a cancellation diagram of ``w`` relative to ``S``, or None.

    Interval DP over ``cancellable(i, j)``: the first letter is either a
    residual S-letter or matched to an inverse letter at some ``k``, with both
    sides of the chord cancellable.  Reconstruction prefers the residual
    branch, then the smallest ``k``.
    """
    if not w.is_reduced:
        raise ValueError(f"search needs a reduced word, got {w}")
    return search_codes(w.codes, _ids(S))


def cancellable(w: Word, S: Iterable[Gen]) -> bool:
    codes = w.codes
    return bool(_reach_table(codes, _ids(S))[0] >> len(codes) & 1)


def parent_set(S: Iterable[Gen]) -> frozenset[Gen]:
    """Generators both of whose shift children lie in ``S``."""
    S = frozenset(S)
    return frozenset(g for g in (h for c in S for h in _parent(c)) if set(g.children()) <= S)


def _parent(g: Gen) -> list[Gen]:
    if g.level == 1:
        return []
    return [Gen(g.level - 1, (g.index + 1) // 2)]


def lift_diagram(d: CancellationDiagram, w: Word, S: Iterable[Gen]) -> CancellationDiagram:
    """Lift a diagram for ``shift(w)`` relative to ``S`` to one for ``w``.

    The result is relative to :func:`parent_set` of ``S``.  Chords are first
    normalised so every S-letter of ``shift(w)`` is a residual; the surviving
    letters then cancel block by block, because distinct generators have
    children on disjoint alphabets, and each block chord lifts to a chord
    between the parent letters.  A parent with exactly one surviving child is
    the interval-shaped component of the preimage and gets absorbed into the
    matching through that child.
    """
    S = frozenset(S)
    if not w.is_reduced:
        raise ValueError(f"lift_diagram needs a reduced word, got {w}")
    image = Word(shift_codes(w.codes))
    if d.length != len(image):
        raise ValueError("diagram length does not match shift(w)")
    if not verify(image, S, d):
        raise ValueError("diagram is not a valid cancellation of shift(w)")
    ids = _ids(S)
    parent_ids = _ids(parent_set(S))
    codes = image.codes

    # d already certifies that shift(w) with its S-letters deleted is trivial;
    # the stack matching of the survivors is the canonical non-crossing one
    survivors = [p for p, c in enumerate(codes) if abs(c) not in ids]
    stack: list[int] = []
    partner: dict[int, int] = {}
    for p in survivors:
        if stack and codes[stack[-1]] == -codes[p]:
            q = stack.pop()
            partner[p], partner[q] = q, p
        else:
            stack.append(p)
    if stack:  # pragma: no cover - excluded by verify()
        raise AssertionError("valid diagram but survivors do not cancel")

    pairs = set()
    residuals = []
    for p, c in enumerate(w.codes):
        children = (2 * p, 2 * p + 1)
        if abs(c) in parent_ids:
            residuals.append(p + 1)
            continue
        targets = {partner[q] // 2 for q in children if q in partner}
        if len(targets) != 1:
            raise ValueError(
                f"letter {p + 1} has children outside S on both sides but no "
                f"consistent partner; S is not shift-closed over this word"
            )
        q = targets.pop()
        pairs.add((min(p, q) + 1, max(p, q) + 1))
    out = CancellationDiagram(len(w), tuple(sorted(pairs)), tuple(residuals))
    if not verify(w, parent_set(S), out):
        raise ValueError("lifted diagram failed verification; S is not shift-closed")
    return out
