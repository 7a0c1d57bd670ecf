"""Finitely described sets of integers and concrete windows over them.

Three representations are supported:

* :class:`EventuallyPeriodic` -- membership below a threshold is given by a
  finite transient set, and from the threshold on by residues mod a period.
  These are the sets every exact density/structure operation works on.
* :class:`BlockFamily` -- a builtin union of disjoint intervals
  ``[s_n, s_n + l_n)``; only window-based analysis applies.
* :class:`Explicit` -- a finite sorted list.

Sets are parsed from and rendered to a one-line mini-language::

    periodic p=<int> r=<int>,<int>,... [from=<int>] [plus=<int>,...]
    explicit <int>,<int>,...
    blocks <generator-id>
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Iterator, Union

from .errors import EmptyWindowError, ResourceLimitExceeded, SpecSyntaxError

DEFAULT_MAX_WINDOW = 10**7


@dataclass(frozen=True)
class EventuallyPeriodic:
    """``n < threshold``: member iff ``n in transient``; otherwise iff ``n % period in residues``."""

    period: int
    residues: frozenset = frozenset()
    threshold: int = 0
    transient: frozenset = frozenset()

    def __post_init__(self):
        if self.period < 1:
            raise ValueError(f"period must be positive, got {self.period}")
        object.__setattr__(self, "residues", frozenset(self.residues))
        object.__setattr__(self, "transient", frozenset(self.transient))
        for r in self.residues:
            if not 0 <= r < self.period:
                raise ValueError(f"residue {r} outside 0..{self.period - 1}")
        for t in self.transient:
            if t >= self.threshold:
                raise ValueError(f"transient element {t} not below threshold {self.threshold}")

    def __contains__(self, n: int) -> bool:
        if n < self.threshold:
            return n in self.transient
        return n % self.period in self.residues

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.residues), self.period)

    def complement(self) -> "EventuallyPeriodic":
        """Complement relative to ``[min(transient, threshold), +inf)``."""
        lo = min(self.transient, default=self.threshold)
        return EventuallyPeriodic(
            self.period,
            frozenset(range(self.period)) - self.residues,
            self.threshold,
            frozenset(range(lo, self.threshold)) - self.transient,
        )

    def bits(self, lo: int, hi: int) -> bytes:
        out = bytearray(hi - lo + 1)
        for t in self.transient:
            if lo <= t <= hi:
                out[t - lo] = 1
        start = max(lo, self.threshold)
        if start <= hi:
            pattern = bytes(1 if r in self.residues else 0 for r in range(self.period))
            offset = start % self.period
            n = hi - start + 1
            reps = (offset + n) // self.period + 1
            tiled = (pattern * reps)[offset:offset + n]
            out[start - lo:] = tiled
        return bytes(out)


_GENERATOR_RE = re.compile(r"pow(\d+)$")


@dataclass(frozen=True)
class BlockFamily:
    """Union of the blocks ``[b**n, b**n + n)`` for ``n >= 1`` (generator id ``pow<b>``)."""

    generator: str

    def __post_init__(self):
        m = _GENERATOR_RE.match(self.generator)
        if not m or int(m.group(1)) < 2:
            raise ValueError(f"unknown block generator {self.generator!r}")

    @property
    def base(self) -> int:
        return int(self.generator[3:])

    def block(self, n: int) -> tuple[int, int]:
        """``(start, length)`` of block ``n >= 1``."""
        if n < 1:
            raise ValueError("blocks are indexed from 1")
        return self.base**n, n

    def blocks(self) -> Iterator[tuple[int, int]]:
        n = 1
        while True:
            yield self.block(n)
            n += 1

    def __contains__(self, x: int) -> bool:
        for start, length in self.blocks():
            if x < start:
                return False
            if x < start + length:
                return True
        raise AssertionError("unreachable")

    def bits(self, lo: int, hi: int) -> bytes:
        out = bytearray(hi - lo + 1)
        for start, length in self.blocks():
            if start > hi:
                break
            for x in range(max(start, lo), min(start + length - 1, hi) + 1):
                out[x - lo] = 1
        return bytes(out)


@dataclass(frozen=True)
class Explicit:
    elements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))

    def __contains__(self, n: int) -> bool:
        i = bisect_left(self.elements, n)
        return i < len(self.elements) and self.elements[i] == n

    def bits(self, lo: int, hi: int) -> bytes:
        out = bytearray(hi - lo + 1)
        for x in self.elements[bisect_left(self.elements, lo):]:
            if x > hi:
                break
            out[x - lo] = 1
        return bytes(out)


IntegerSet = Union[EventuallyPeriodic, BlockFamily, Explicit]


@dataclass(frozen=True)
class WindowSample:
    """Membership bits of a set on the closed interval ``[lo, hi]``."""

    lo: int
    hi: int
    bits: bytes = field(repr=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window: lo={self.lo} > hi={self.hi}")
        object.__setattr__(self, "bits", bytes(self.bits))
        if len(self.bits) != self.hi - self.lo + 1:
            raise ValueError("bits length does not match window length")

    @classmethod
    def from_members(cls, lo: int, hi: int, members) -> "WindowSample":
        out = bytearray(hi - lo + 1)
        for x in members:
            if lo <= x <= hi:
                out[x - lo] = 1
        return cls(lo, hi, bytes(out))

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi and self.bits[n - self.lo] == 1

    def members(self) -> list[int]:
        return [self.lo + i for i, b in enumerate(self.bits) if b]

    def prefix_counts(self) -> list[int]:
        """``pc[i]`` = number of members among the first ``i`` positions."""
        return [0, *accumulate(self.bits)]

    def count(self, a: int, b: int) -> int:
        """Members in ``[a, b]`` clipped to the window."""
        a, b = max(a, self.lo), min(b, self.hi)
        if a > b:
            return 0
        return sum(self.bits[a - self.lo:b - self.lo + 1])

    def sub(self, a: int, b: int) -> "WindowSample":
        if not self.lo <= a <= b <= self.hi:
            raise ValueError(f"[{a},{b}] not inside [{self.lo},{self.hi}]")
        return WindowSample(a, b, self.bits[a - self.lo:b - self.lo + 1])


def member(s: IntegerSet, n: int) -> bool:
    return n in s


def window(s: IntegerSet, lo: int, hi: int, max_window: int = DEFAULT_MAX_WINDOW) -> WindowSample:
    if lo > hi:
        raise ValueError(f"lo={lo} > hi={hi}")
    if hi - lo + 1 > max_window:
        raise ResourceLimitExceeded(f"window of {hi - lo + 1} elements exceeds limit {max_window}")
    return WindowSample(lo, hi, s.bits(lo, hi))


def max_gap(w: WindowSample) -> int:
    """Longest run of non-members, edges of the window included."""
    best = run = 0
    seen = False
    for b in w.bits:
        if b:
            seen = True
            run = 0
        else:
            run += 1
            best = max(best, run)
    if not seen:
        raise EmptyWindowError(f"window [{w.lo},{w.hi}] has no members")
    return best


def longest_run(w: WindowSample) -> tuple[int, int]:
    """Leftmost longest run of members as ``(start, length)``; ``(lo, 0)`` if none."""
    best_start, best_len = w.lo, 0
    run_start, run = w.lo, 0
    for i, b in enumerate(w.bits):
        if b:
            if run == 0:
                run_start = w.lo + i
            run += 1
            if run > best_len:
                best_start, best_len = run_start, run
        else:
            run = 0
    return best_start, best_len


# -- mini-language ---------------------------------------------------------

_INT = r"-?\d+"
_INT_LIST_RE = re.compile(rf"^(?:{_INT}(?:,{_INT})*)?$")


def _tokens(text: str) -> list[tuple[int, str]]:
    return [(m.start(), m.group()) for m in re.finditer(r"\S+", text)]


def _int_list(tok: str, text: str, pos: int) -> list[int]:
    if not _INT_LIST_RE.match(tok):
        raise SpecSyntaxError("expected comma-separated integers", text, pos)
    return [int(x) for x in tok.split(",")] if tok else []


def parse_set_spec(text: str) -> IntegerSet:
    toks = _tokens(text)
    if not toks:
        raise SpecSyntaxError("empty set spec", text, 0)
    (pos0, kind), rest = toks[0], toks[1:]

    if kind == "explicit":
        if len(rest) > 1:
            raise SpecSyntaxError("explicit takes one comma-separated list", text, rest[1][0])
        values = _int_list(rest[0][1], text, rest[0][0]) if rest else []
        return Explicit(tuple(values))

    if kind == "blocks":
        if len(rest) != 1:
            raise SpecSyntaxError("blocks takes exactly one generator id", text, pos0)
        pos, gen = rest[0]
        try:
            return BlockFamily(gen)
        except ValueError as exc:
            raise SpecSyntaxError(str(exc), text, pos) from None

    if kind == "periodic":
        opts: dict[str, tuple[int, list[int]]] = {}
        for pos, tok in rest:
            key, eq, val = tok.partition("=")
            if not eq or key not in ("p", "r", "from", "plus"):
                raise SpecSyntaxError(f"unexpected token {tok!r}", text, pos)
            if key in opts:
                raise SpecSyntaxError(f"duplicate option {key!r}", text, pos)
            opts[key] = (pos, _int_list(val, text, pos + len(key) + 1))
        for key in ("p", "r"):
            if key not in opts:
                raise SpecSyntaxError(f"missing required option {key}=", text, len(text))
        for key in ("p", "from"):
            if key in opts and len(opts[key][1]) != 1:
                raise SpecSyntaxError(f"{key}= takes a single integer", text, opts[key][0])
        period = opts["p"][1][0]
        if period <= 0:
            raise SpecSyntaxError("period must be positive", text, opts["p"][0])
        residues = opts["r"][1]
        for r in residues:
            if not 0 <= r < period:
                raise SpecSyntaxError(f"residue {r} not in 0..{period - 1}", text, opts["r"][0])
        threshold = opts["from"][1][0] if "from" in opts else 0
        plus = opts["plus"][1] if "plus" in opts else []
        for t in plus:
            if t >= threshold:
                raise SpecSyntaxError(f"plus element {t} must be below from={threshold}",
                                      text, opts["plus"][0])
        return EventuallyPeriodic(period, frozenset(residues), threshold, frozenset(plus))

    raise SpecSyntaxError(f"unknown set kind {kind!r}", text, pos0)


def render(s: IntegerSet) -> str:
    def ints(xs):
        return ",".join(str(x) for x in sorted(xs))

    if isinstance(s, EventuallyPeriodic):
        out = f"periodic p={s.period} r={ints(s.residues)}"
        if s.threshold != 0:
            out += f" from={s.threshold}"
        if s.transient:
            out += f" plus={ints(s.transient)}"
        return out
    if isinstance(s, Explicit):
        return f"explicit {ints(s.elements)}".rstrip()
    if isinstance(s, BlockFamily):
        return f"blocks {s.generator}"
    raise TypeError(f"not an IntegerSet: {s!r}")
