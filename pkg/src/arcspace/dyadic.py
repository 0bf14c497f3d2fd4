"""Exact dyadic geometry of the arc space: arcs, spans and strip windows.

The arc of generator ``g(n, j)`` is the upper semicircle over the dyadic
interval ``[(j-1)/2^(n-1), j/2^(n-1)]``.  Everything used by a decision
procedure here is exact; floats only appear in :func:`point_on_arc`, which
exists for drawing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering


@total_ordering
@dataclass(frozen=True, slots=True, init=False)
class Dyadic:
    """The rational ``num / 2**exp`` kept in lowest terms.

    Canonical form has ``exp == 0`` or an odd ``num``, so structural equality
    and hashing agree with numeric equality.
    """

    num: int
    exp: int

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num, exp = num << -exp, 0
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1):
                raise ValueError(f"{value} is not a dyadic rational")
            return cls(value.numerator, den.bit_length() - 1)
        raise TypeError(f"cannot convert {value!r} to Dyadic")

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Read ``<num>/2^<exp>``, ``<num>/<power of two>`` or an integer."""
        s = text.strip()
        m = re.fullmatch(r"([+-]?\d+)/2\^(\d+)", s)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        try:
            return cls.coerce(Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a dyadic rational: {text!r}") from None

    def _aligned(self, other: "Dyadic") -> tuple[int, int, int]:
        e = max(self.exp, other.exp)
        return self.num << (e - self.exp), other.num << (e - other.exp), e

    def __add__(self, other):
        other = Dyadic.coerce(other)
        a, b, e = self._aligned(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = Dyadic.coerce(other)
        a, b, e = self._aligned(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        return Dyadic.coerce(other) - self

    def __mul__(self, other):
        other = Dyadic.coerce(other)
        return Dyadic(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __lt__(self, other):
        if not isinstance(other, (Dyadic, int, Fraction)):
            return NotImplemented
        a, b, _ = self._aligned(Dyadic.coerce(other))
        return a < b

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            try:
                return self == Dyadic.coerce(other)
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.exp))

    def halve(self, times: int = 1) -> "Dyadic":
        return Dyadic(self.num, self.exp + times)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self):
        return math.ldexp(self.num, -self.exp)

    def __str__(self):
        return f"{self.num}/2^{self.exp}"

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"


@dataclass(frozen=True, slots=True, order=True)
class Gen:
    """Loop generator ``g(level, index)``: the class of arc D_{level,index}."""

    level: int
    index: int

    def __post_init__(self):
        if not isinstance(self.level, int) or not isinstance(self.index, int):
            raise TypeError("generator level and index must be integers")
        if self.level < 1:
            raise ValueError(f"generator level must be >= 1, got {self.level}")
        if not 1 <= self.index <= 1 << (self.level - 1):
            raise ValueError(
                f"generator index {self.index} out of range 1..{1 << (self.level - 1)} "
                f"at level {self.level}"
            )

    @property
    def heap_id(self) -> int:
        """Position in the binary heap of arcs; children are ``2h`` and ``2h+1``."""
        return (1 << (self.level - 1)) + self.index - 1

    @classmethod
    def from_heap_id(cls, h: int) -> "Gen":
        level = h.bit_length()
        return cls(level, h - (1 << (level - 1)) + 1)

    def children(self) -> tuple["Gen", "Gen"]:
        return (Gen(self.level + 1, 2 * self.index - 1), Gen(self.level + 1, 2 * self.index))

    @classmethod
    def parse(cls, token: str) -> "Gen":
        m = re.fullmatch(r"g(\d+)\.(\d+)", token.strip())
        if not m:
            raise ValueError(f"not a generator token: {token!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return f"g{self.level}.{self.index}"


def all_gens(max_level: int) -> list[Gen]:
    """Every generator of level at most ``max_level``, in heap order."""
    return [Gen.from_heap_id(h) for h in range(1, 1 << max_level)]


@dataclass(frozen=True, slots=True)
class Span:
    """Closed base interval ``[lo, hi]``."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty span [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo


@dataclass(frozen=True, slots=True)
class Window:
    """Open base interval ``((i-1)/2^n, (i+1)/2^n)`` for ``0 <= i <= 2^n``."""

    n: int
    i: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"window stage must be >= 1, got {self.n}")
        if not 0 <= self.i <= 1 << self.n:
            raise ValueError(f"window index {self.i} out of range 0..{1 << self.n}")

    @property
    def lo(self) -> Dyadic:
        return Dyadic(self.i - 1, self.n)

    @property
    def hi(self) -> Dyadic:
        return Dyadic(self.i + 1, self.n)

    def contains_point(self, x) -> bool:
        x = Dyadic.coerce(x)
        return self.lo < x < self.hi

    @classmethod
    def parse(cls, token: str) -> "Window":
        s = token.strip()
        m = re.fullmatch(r"W(\d+)\.(\d+)", s) or re.fullmatch(r"(\d+)\s*,\s*(\d+)", s)
        if not m:
            raise ValueError(f"not a window token: {token!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return f"W{self.n}.{self.i}"


def stage_windows(n: int) -> list[Window]:
    return [Window(n, i) for i in range((1 << n) + 1)]


def span_of(g: Gen) -> Span:
    return Span(Dyadic(g.index - 1, g.level - 1), Dyadic(g.index, g.level - 1))


def window_contains_span(w: Window, s: Span) -> bool:
    # strict on both sides: a foot on the boundary is outside the open strip
    return w.lo < s.lo and s.hi < w.hi


def point_on_arc(g: Gen, t) -> tuple[Dyadic, float]:
    """Evaluate the arc parametrisation ``l_{n,j}(t)``; ``x`` is exact."""
    t = Dyadic.coerce(t)
    if t < 0 or t > 1:
        raise ValueError(f"arc parameter must lie in [0, 1], got {t}")
    scale = g.level - 1
    x = (Dyadic(g.index - 1) + t).halve(scale)
    tf = float(t)
    y = math.ldexp(math.sqrt(tf - tf * tf), -scale)
    return x, y


def window_generators(w: Window, max_level: int) -> frozenset[Gen]:
    """Generators of level <= ``max_level`` whose span lies strictly inside ``w``."""
    if max_level < 1:
        raise ValueError("max_level must be >= 1")
    found = []
    for k in range(1, max_level + 1):
        # span of g(k, j) is [(j-1), j] / 2^(k-1); compare against (i-1, i+1) / 2^n
        # on the common grid 2^-(max(k-1, n))
        e = max(k - 1, w.n)
        a = (w.i - 1) << (e - w.n)
        b = (w.i + 1) << (e - w.n)
        step = 1 << (e - (k - 1))
        # need (j-1)*step > a and j*step < b
        j_min = a // step + 2
        j_max = -(-b // step) - 1
        j_min = max(j_min, 1)
        j_max = min(j_max, 1 << (k - 1))
        found.extend(Gen(k, j) for j in range(j_min, j_max + 1))
    return frozenset(found)


def stage_generators(n: int, max_level: int) -> frozenset[Gen]:
    """Union of :func:`window_generators` over every stage-``n`` window."""
    out: set[Gen] = set()
    for w in stage_windows(n):
        out |= window_generators(w, max_level)
    return frozenset(out)


def designated_window(x, n: int) -> Window:
    """The stage-``n`` window whose centre is nearest ``x`` (ties go left)."""
    x = Dyadic.coerce(x)
    if x < 0 or x > 1:
        raise ValueError(f"point {x} is not on the base [0, 1]")
    scaled = x.halve(-n)  # x * 2^n
    fl = scaled.num >> scaled.exp
    frac = scaled - fl
    i = fl + 1 if frac > Dyadic(1, 1) else fl
    return Window(n, i)
