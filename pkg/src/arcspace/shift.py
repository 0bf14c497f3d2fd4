"""The shift substitution on words and its unique decoding.

Each arc is sent to the concatenation of its two half-size children:
``g(n,j) -> g(n+1,2j-1) g(n+1,2j)``.  In heap ids that is ``h -> 2h, 2h+1``,
and an inverse letter ``-h`` goes to ``-(2h+1), -2h``.
"""

from __future__ import annotations

from .words import Word, codes_reduced


def shift_codes(codes) -> tuple[int, ...]:
    out = []
    for c in codes:
        if c > 0:
            out.append(2 * c)
            out.append(2 * c + 1)
        else:
            out.append(2 * c - 1)
            out.append(2 * c)
    return tuple(out)


def shift(w: Word) -> Word:
    """Letterwise substitution; no reduction is applied to the result."""
    return Word(shift_codes(w.codes))


def shift_iter(w: Word, k: int) -> Word:
    if k < 0:
        raise ValueError(f"iterate count must be >= 0, got {k}")
    codes = w.codes
    for _ in range(k):
        codes = shift_codes(codes)
    return Word(codes)


def decode_codes(codes: tuple[int, ...]) -> tuple[int, ...] | None:
    if len(codes) % 2:
        return None
    out = []
    for a, b in zip(codes[::2], codes[1::2]):
        # a positive image is (2h, 2h+1); a negative one is (-(2h+1), -2h)
        if a > 0 and a % 2 == 0 and b == a + 1 and a >= 2:
            out.append(a // 2)
        elif a < 0 and a % 2 == 1 and b == a + 1 and b <= -2:
            out.append(b // 2)
        else:
            return None
    return tuple(out)


def decode(w: Word) -> Word | None:
    """The unique ``u`` with ``shift(u) == w``, or None.

    Images of letters form a length-2 code, so the pair boundaries are forced.
    """
    if not codes_reduced(w.codes):
        raise ValueError(f"decode needs a reduced word, got {w}")
    codes = decode_codes(w.codes)
    return None if codes is None else Word(codes)
