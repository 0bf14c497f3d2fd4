"""Free-group words over the arc generators, retractions and stage tests.

A word is stored as a tuple of signed integer codes: the generator ``g(n, j)``
has code ``h = 2^(n-1) + j - 1`` (its heap id) and its inverse has code
``-h``.  The level of a code is ``abs(code).bit_length()``, so truncation to
E_N is the filter ``abs(code) < 2^N``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .dyadic import Gen, Window, stage_generators, window_generators


class WordSyntaxError(ValueError):
    """Raised on malformed word text; ``column`` is 1-based."""

    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column}: {text!r}")
        self.text = text
        self.column = column


@dataclass(frozen=True, slots=True)
class Letter:
    gen: Gen
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {self.sign}")

    @property
    def code(self) -> int:
        return self.sign * self.gen.heap_id

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        if code == 0:
            raise ValueError("0 is not a letter code")
        return cls(Gen.from_heap_id(abs(code)), 1 if code > 0 else -1)

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def sort_key(self) -> tuple[int, int, int]:
        return (self.gen.level, self.gen.index, self.sign)

    def __str__(self):
        return str(self.gen) + ("'" if self.sign < 0 else "")


_TOKEN = re.compile(r"\S+")
_LETTER = re.compile(r"g(\d+)\.(\d+)('?)")


def _letter_code(level: int, index: int, inverse: bool) -> int:
    h = Gen(level, index).heap_id
    return -h if inverse else h


def code_level(code: int) -> int:
    return abs(code).bit_length()


def code_str(code: int) -> str:
    return str(Letter.from_code(code))


def parse_codes(text: str, extra: dict[str, int] | None = None) -> list[int]:
    """Tokenise word text into letter codes.

    ``extra`` maps additional literal tokens (``t``, ``t'`` for mixed words) to
    reserved codes.  Errors carry the column of the offending token.
    """
    tokens = list(_TOKEN.finditer(text))
    if len(tokens) == 1 and tokens[0].group() == "1":
        return []
    codes = []
    for m in tokens:
        tok = m.group()
        if extra and tok in extra:
            codes.append(extra[tok])
            continue
        lm = _LETTER.fullmatch(tok)
        if not lm:
            raise WordSyntaxError(f"unexpected token {tok!r}", text, m.start() + 1)
        try:
            codes.append(_letter_code(int(lm.group(1)), int(lm.group(2)), bool(lm.group(3))))
        except ValueError as exc:
            raise WordSyntaxError(str(exc), text, m.start() + 1) from None
    if not tokens:
        raise WordSyntaxError("empty input (use '1' for the identity)", text, 1)
    return codes


def free_reduce(codes: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for c in codes:
        if stack and stack[-1] == -c:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def codes_reduced(codes: tuple[int, ...]) -> bool:
    return all(a != -b for a, b in zip(codes, codes[1:]))


@dataclass(frozen=True, slots=True)
class Word:
    """A (not necessarily reduced) word; equality is letter-for-letter."""

    codes: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.codes, tuple):
            object.__setattr__(self, "codes", tuple(self.codes))
        if 0 in self.codes:
            raise ValueError("0 is not a letter code")

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def from_letters(cls, letters: Iterable[Letter]) -> "Word":
        return cls(tuple(x.code for x in letters))

    @classmethod
    def of(cls, *items) -> "Word":
        """Build from Gen/Letter objects or tokens, e.g. ``Word.of("g1.1", "g2.1'")``."""
        codes = []
        for item in items:
            if isinstance(item, Letter):
                codes.append(item.code)
            elif isinstance(item, Gen):
                codes.append(item.heap_id)
            else:
                codes.extend(parse_codes(str(item)))
        return cls(tuple(codes))

    @classmethod
    def parse(cls, text: str) -> "Word":
        return cls(tuple(parse_codes(text)))

    @property
    def letters(self) -> tuple[Letter, ...]:
        return tuple(Letter.from_code(c) for c in self.codes)

    @property
    def is_reduced(self) -> bool:
        return codes_reduced(self.codes)

    @property
    def max_level(self) -> int:
        return max((code_level(c) for c in self.codes), default=0)

    def gens(self) -> frozenset[Gen]:
        return frozenset(Gen.from_heap_id(abs(c)) for c in self.codes)

    def inverse(self) -> "Word":
        return Word(tuple(-c for c in reversed(self.codes)))

    def concat(self, other: "Word") -> "Word":
        return Word(self.codes + other.codes)

    def __mul__(self, other: "Word") -> "Word":
        """Group product (concatenate, then freely reduce)."""
        return Word(free_reduce(self.codes + other.codes))

    def __len__(self):
        return len(self.codes)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __bool__(self):
        return bool(self.codes)

    def __str__(self):
        if not self.codes:
            return "1"
        return " ".join(code_str(c) for c in self.codes)

    def to_json(self) -> dict:
        return {
            "letters": [
                {"j": x.gen.index, "n": x.gen.level, "s": x.sign} for x in self.letters
            ]
        }

    @classmethod
    def from_json(cls, data) -> "Word":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_letters(Letter(Gen(d["n"], d["j"]), d["s"]) for d in data["letters"])


def reduce(w: Word) -> Word:
    return Word(free_reduce(w.codes))


def retract(w: Word, level: int) -> Word:
    """Image under the retraction onto E_level: drop deeper letters, then reduce."""
    bound = 1 << level
    return Word(free_reduce(c for c in w.codes if abs(c) < bound))


def _gen_ids(S: Iterable[Gen]) -> frozenset[int]:
    return frozenset(g.heap_id for g in S)


def nc_member(w: Word, S: Iterable[Gen]) -> bool:
    """Is ``w`` in the normal closure of the basis subset ``S``?

    For a subset of a free basis the normal closure is the kernel of the
    retraction killing it, so deleting the S-letters and reducing decides it.
    """
    return nc_member_ids(w.codes, _gen_ids(S))


def nc_member_ids(codes: tuple[int, ...], ids: frozenset[int]) -> bool:
    return not free_reduce(c for c in codes if abs(c) not in ids)


def stage_member(w: Word, n: int, max_level: int) -> bool:
    """Membership in the product of pi(U) over the stage-``n`` window cover."""
    if w.max_level > max_level:
        raise ValueError(
            f"word has letters of level {w.max_level} above max_level={max_level}"
        )
    return nc_member(w, stage_generators(n, max_level))


def window_member(w: Word, window: Window, max_level: int) -> bool:
    if w.max_level > max_level:
        raise ValueError(
            f"word has letters of level {w.max_level} above max_level={max_level}"
        )
    return nc_member(w, window_generators(window, max_level))


def detection_level(w: Word) -> int | None:
    """Smallest N with ``retract(w, N)`` nontrivial, or None for the identity."""
    w = reduce(w)
    for level in range(1, w.max_level + 1):
        if retract(w, level):
            return level
    return None


def enumerate_reduced(gens: Iterable[Gen], max_length: int) -> Iterator[Word]:
    """All reduced words over ``gens`` of length <= ``max_length`` (shortlex order)."""
    alphabet = sorted({c for g in gens for c in (g.heap_id, -g.heap_id)},
                      key=lambda c: (abs(c), -c))
    layer = [()]
    yield Word(())
    for _ in range(max_length):
        nxt = []
        for codes in layer:
            last = codes[-1] if codes else 0
            for c in alphabet:
                if c != -last:
                    nxt.append(codes + (c,))
        for codes in nxt:
            yield Word(codes)
        layer = nxt


def format_gen_set(S: Iterable[Gen]) -> str:
    return ",".join(str(g) for g in sorted(S))


def parse_gen_set(text: str) -> frozenset[Gen]:
    text = text.strip()
    if not text or text == "{}":
        return frozenset()
    return frozenset(Gen.parse(tok) for tok in re.split(r"[\s,]+", text.strip("{}")) if tok)
