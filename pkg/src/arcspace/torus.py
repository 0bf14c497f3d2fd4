"""Finite-level model of the mapping-torus group.

The group is ``<F, t | t^-1 g t = shift(g)>`` where ``t`` is the class of the
time loop through the basepoint.  Every element is ``t^a u t^-b`` with ``u``
a reduced word, unique once ``(a, u, b)`` cannot be shortened by decoding
``u`` while ``a > 0`` and ``b > 0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .dyadic import Dyadic, Window, designated_window, window_generators
from .shift import decode_codes, shift_codes, shift_iter
from .words import (
    Letter,
    Word,
    WordSyntaxError,
    code_str,
    free_reduce,
    nc_member,
    parse_codes,
)

# reserved codes for the stable letter inside mixed words
T = "t"
T_INV = "t'"
_MIXED_EXTRA = {T: T, T_INV: T_INV}


@dataclass(frozen=True)
class MixedWord:
    """Raw input over ``{t, t'}`` and generator letters.

    Items are letter codes (ints) or the strings ``"t"`` / ``"t'"``.
    """

    items: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "MixedWord":
        return cls(tuple(parse_codes(text, extra=_MIXED_EXTRA)))

    def inverse(self) -> "MixedWord":
        out = []
        for x in reversed(self.items):
            if x == T:
                out.append(T_INV)
            elif x == T_INV:
                out.append(T)
            else:
                out.append(-x)
        return MixedWord(tuple(out))

    def __add__(self, other: "MixedWord") -> "MixedWord":
        return MixedWord(self.items + other.items)

    def __len__(self):
        return len(self.items)

    def __str__(self):
        if not self.items:
            return "1"
        return " ".join(x if isinstance(x, str) else code_str(x) for x in self.items)


@dataclass(frozen=True)
class TorusElement:
    """``t^a . u . t^-b``; construct through :func:`normalize` or :meth:`make`."""

    a: int
    u: Word
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("t-exponents must be non-negative")
        if not self.u.is_reduced:
            raise ValueError(f"middle word must be reduced, got {self.u}")

    @classmethod
    def make(cls, a: int, u: Word, b: int) -> "TorusElement":
        """Minimal form of ``t^a u t^-b`` for any word ``u``."""
        return _minimise(a, free_reduce(u.codes), b)

    @property
    def is_minimal(self) -> bool:
        return self.a == 0 or self.b == 0 or decode_codes(self.u.codes) is None

    @property
    def is_identity(self) -> bool:
        return self.a == self.b and not self.u

    def to_mixed(self) -> MixedWord:
        return MixedWord((T,) * self.a + self.u.codes + (T_INV,) * self.b)

    def padded(self, extra: int) -> tuple[int, Word, int]:
        """The equivalent triple ``(a+extra, shift^extra(u), b+extra)``."""
        return self.a + extra, shift_iter(self.u, extra), self.b + extra

    def __str__(self):
        return str(self.to_mixed())

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "u": str(self.u)}


def _minimise(a: int, codes: tuple[int, ...], b: int) -> TorusElement:
    while a > 0 and b > 0:
        pre = decode_codes(codes)
        if pre is None:
            break
        codes, a, b = pre, a - 1, b - 1
    return TorusElement(a, Word(codes), b)


def normalize(mw: MixedWord | str) -> TorusElement:
    """Left-to-right rewriting into ``t^a u t^-b``.

    Appending a letter ``x`` to ``t^a u t^-b`` gives ``t^a (u shift^b(x)) t^-b``;
    appending ``t`` cancels a trailing ``t'`` or, when ``b == 0``, turns
    ``t^a u t`` into ``t^(a+1) shift(u)``.
    """
    if isinstance(mw, str):
        mw = MixedWord.parse(mw)
    a, b = 0, 0
    u: list[int] = []
    for x in mw.items:
        if x == T:
            if b > 0:
                b -= 1
            else:
                a += 1
                u = list(shift_codes(u))
        elif x == T_INV:
            b += 1
        else:
            img = (x,)
            for _ in range(b):
                img = shift_codes(img)
            for c in img:
                if u and u[-1] == -c:
                    u.pop()
                else:
                    u.append(c)
    return _minimise(a, tuple(u), b)


def t_exponent(e: TorusElement) -> int:
    return e.a - e.b


def equal(e1: TorusElement, e2: TorusElement) -> bool:
    if t_exponent(e1) != t_exponent(e2):
        return False
    top = max(e1.a, e2.a)
    _, u1, _ = e1.padded(top - e1.a)
    _, u2, _ = e2.padded(top - e2.a)
    return free_reduce(u1.codes) == free_reduce(u2.codes)


def multiply(e1: TorusElement, e2: TorusElement) -> TorusElement:
    return normalize(e1.to_mixed() + e2.to_mixed())


def inverse(e: TorusElement) -> TorusElement:
    return TorusElement.make(e.b, e.u.inverse(), e.a)


def balanced_word(e: TorusElement, padding: int = 0) -> Word:
    """The ``u`` of ``t^k u t^-k``, padded ``padding`` extra times beyond minimal."""
    if t_exponent(e) != 0:
        raise ValueError("only elements with t-exponent 0 have a balanced form")
    return e.padded(padding)[1]


def torus_window_member(e: TorusElement, window: Window, max_level: int | None = None,
                        padding: int = 0) -> bool:
    """Membership of ``e`` in pi(U+) for the strip neighbourhood of ``window``.

    Tested on the balanced form; by downward stability of strip windows the
    verdict does not depend on ``padding``.  ``max_level`` bounds the letters of
    the minimal balanced word and is raised by ``padding`` for padded tests.
    """
    if t_exponent(e) != 0:
        return False
    u = balanced_word(e, padding)
    if max_level is None:
        level = max(u.max_level, 1)
    else:
        if e.u.max_level > max_level:
            raise ValueError(
                f"element has letters of level {e.u.max_level} above max_level={max_level}"
            )
        level = max_level + padding
    return nc_member(u, window_generators(window, level))


@dataclass(frozen=True)
class Factor:
    conjugator: Word
    letter: Letter
    window: Window

    def word(self) -> Word:
        c = self.conjugator
        return c * Word((self.letter.code,)) * c.inverse()

    def to_json(self) -> dict:
        return {"conj": str(self.conjugator), "letter": str(self.letter), "window": str(self.window)}


@dataclass(frozen=True)
class Certificate:
    """``w = t^k (prod of factors) t^-k`` with every factor a conjugate of a window letter."""

    word: Word
    stage: int
    k: int
    factors: tuple[Factor, ...]

    def replay(self) -> Word:
        out = Word(())
        for f in self.factors:
            out = out * f.word()
        return out

    def check(self) -> bool:
        target = shift_iter(self.word, self.k)
        if self.replay() != Word(free_reduce(target.codes)):
            return False
        for f in self.factors:
            if f.window.n != self.stage:
                return False
            if f.letter.gen not in window_generators(f.window, f.letter.gen.level):
                return False
        element = normalize(MixedWord((T,) * self.k) + self.replay_mixed() +
                            MixedWord((T_INV,) * self.k))
        return equal(element, normalize(MixedWord(self.word.codes)))

    def replay_mixed(self) -> MixedWord:
        items: tuple = ()
        for f in self.factors:
            items += f.word().codes
        return MixedWord(items)

    def to_json(self) -> dict:
        return {"k": self.k, "factors": [f.to_json() for f in self.factors]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data, word: Word, stage: int) -> "Certificate":
        if isinstance(data, str):
            data = json.loads(data)
        factors = tuple(
            Factor(Word.parse(f["conj"]), Letter.from_code(Word.parse(f["letter"]).codes[0]),
                   Window.parse(f["window"]))
            for f in data["factors"]
        )
        return cls(word, stage, data["k"], factors)


def _hosting_window(code: int, n: int) -> Window | None:
    g = Letter.from_code(code).gen
    for i in range((1 << n) + 1):
        w = Window(n, i)
        if g in window_generators(w, g.level):
            return w
    return None


def undetectable_certificate(w: Word, n: int) -> Certificate:
    """Witness that ``w`` lies in the stage-``n`` product of pi(V+).

    ``k`` is the least shift count for which every letter of ``shift^k(w)``
    fits strictly inside a stage-``n`` window.  Listing the factors
    ``P_{i-1} x_i P_{i-1}^-1`` (``P_i`` the i-th prefix) from last to first
    multiplies out to ``shift^k(w)``.
    """
    if not w or not w.is_reduced:
        raise ValueError("certificate needs a nonempty reduced word")
    if n < 1:
        raise ValueError("stage must be >= 1")
    k = 0
    while True:
        codes = shift_iter(w, k).codes
        hosts = [_hosting_window(c, n) for c in codes]
        if all(h is not None for h in hosts):
            break
        k += 1
    factors = []
    for i in range(len(codes) - 1, -1, -1):
        factors.append(Factor(Word(codes[:i]), Letter.from_code(codes[i]), hosts[i]))
    return Certificate(w, n, k, tuple(factors))


def separating_window(x, e: TorusElement, max_stage: int | None = None) -> Window:
    """A window around ``x`` whose pi(U+) misses ``e``.

    Scans stages upward using the designated (nearest-centre) window at each
    stage; windows eventually shrink below every letter span of the balanced
    word, so the scan terminates.
    """
    x = Dyadic.coerce(x)
    if e.is_identity:
        raise ValueError("the identity lies in every pi(W)")
    if t_exponent(e) != 0:
        raise ValueError("element must have t-exponent 0")
    u = balanced_word(e)
    if max_stage is None:
        max_stage = u.max_level + 2
    for n in range(1, max_stage + 1):
        w = designated_window(x, n)
        if not torus_window_member(e, w):
            return w
    raise RuntimeError(f"no separating window up to stage {max_stage}")  # pragma: no cover


def parse_torus(text: str) -> TorusElement:
    return normalize(MixedWord.parse(text))


__all__ = [
    "Certificate",
    "Factor",
    "MixedWord",
    "TorusElement",
    "WordSyntaxError",
    "balanced_word",
    "equal",
    "inverse",
    "multiply",
    "normalize",
    "parse_torus",
    "separating_window",
    "t_exponent",
    "torus_window_member",
    "undetectable_certificate",
]
