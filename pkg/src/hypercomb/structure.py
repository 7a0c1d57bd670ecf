"""Thick / syndetic / piecewise syndetic structure and finite embeddability.

Finite-scale conventions: a window ``[lo, hi]`` is *k-gap-bounded* for a set
when every subinterval of length ``k`` inside it meets the set, i.e. the set
never misses ``k`` consecutive integers there (window edges included).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import EmptyWindowError
from .intsets import EventuallyPeriodic, IntegerSet, WindowSample


@dataclass(frozen=True)
class Classification:
    thick: bool
    syndetic: bool
    ps: bool


@dataclass(frozen=True)
class PSWitness:
    lo: int
    hi: int
    gap_bound: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty witness interval")
        if self.gap_bound < 1:
            raise ValueError("gap bound must be positive")

    @property
    def interval(self) -> tuple[int, int]:
        return self.lo, self.hi

    def __len__(self):
        return self.hi - self.lo + 1

    def to_json(self) -> dict:
        return {"interval": [self.lo, self.hi], "gap_bound": self.gap_bound}


@dataclass(frozen=True)
class Shift:
    t: int


def classify_ep(s: EventuallyPeriodic) -> Classification:
    full = len(s.residues) == s.period
    syndetic = bool(s.residues)
    return Classification(thick=full, syndetic=syndetic, ps=syndetic)


def gap_bounded(members: Iterable[int], lo: int, hi: int, k: int) -> bool:
    """Does every length-``k`` subinterval of ``[lo, hi]`` meet ``members``?"""
    prev = lo - 1
    for x in sorted(m for m in members if lo <= m <= hi):
        if x - prev - 1 >= k:
            return False
        prev = x
    return hi - prev < k


def verify_ps_witness(w: WindowSample, witness: PSWitness) -> bool:
    if not w.lo <= witness.lo <= witness.hi <= w.hi:
        return False
    return gap_bounded(w.members(), witness.lo, witness.hi, witness.gap_bound)


def _first_bad_at_or_after(bits: bytes, k: int) -> list[int]:
    """``nxt[i]`` = least start ``j >= i`` of a member-free run of length ``k`` (or ``len``)."""
    n = len(bits)
    bad = [False] * n
    run = 0
    for i, b in enumerate(bits):
        run = 0 if b else run + 1
        if run >= k:
            bad[i - k + 1] = True
    nxt = [n] * (n + 1)
    for i in range(n - 1, -1, -1):
        nxt[i] = i if bad[i] else nxt[i + 1]
    return nxt


def is_ps_window(w: WindowSample, k: int, length: int) -> Optional[PSWitness]:
    """Leftmost k-gap-bounded subinterval of ``w`` with at least ``length`` elements.

    The returned interval is extended as far right as the bound allows.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if length > len(w):
        raise ValueError(f"L={length} larger than window of {len(w)}")
    if k > length:
        raise ValueError(f"k={k} larger than L={length}")
    n = len(w)
    nxt = _first_bad_at_or_after(w.bits, k)
    for a in range(n - length + 1):
        b = n - 1 if nxt[a] == n else nxt[a] + k - 2
        if b - a + 1 >= length:
            return PSWitness(w.lo + a, w.lo + b, k)
    return None


def ps_partition_split(w: WindowSample, part: Mapping[int, int], k: int, big_k: int
                       ) -> tuple[int, PSWitness]:
    """Finite partition-regularity step for piecewise syndetic sets.

    ``w`` must be k-gap-bounded and ``part`` assigns colour 1 or 2 to each
    member of ``w``. If colour 1 is ``big_k``-gap-bounded on ``w`` it wins
    with ``w`` itself. Otherwise some stretch of at least ``big_k`` positions
    avoids colour 1; every member there has colour 2, so colour 2 inherits the
    bound ``k`` on the longest such stretch.
    """
    members = w.members()
    if not members:
        raise EmptyWindowError("window has no members")
    if big_k < k:
        raise ValueError(f"K={big_k} must be at least k={k}")
    if not gap_bounded(members, w.lo, w.hi, k):
        raise ValueError(f"window [{w.lo},{w.hi}] is not {k}-gap-bounded")
    colors = {}
    for x in members:
        c = part[x]
        if c not in (1, 2):
            raise ValueError(f"colour of {x} must be 1 or 2, got {c}")
        colors[x] = c

    red = [x for x in members if colors[x] == 1]
    if gap_bounded(red, w.lo, w.hi, big_k):
        return 1, PSWitness(w.lo, w.hi, big_k)

    # leftmost longest colour-1-free stretch; its length is at least big_k
    best_lo, best_len = w.lo, 0
    prev = w.lo - 1
    for x in red + [w.hi + 1]:
        gap = x - prev - 1
        if gap > best_len:
            best_lo, best_len = prev + 1, gap
        prev = x
    return 2, PSWitness(best_lo, best_lo + best_len - 1, k)


def _shift_range(bound: int) -> range:
    return range(-bound, bound + 1)


def finite_embeds(F: Iterable[int], Y: IntegerSet, bound: int) -> Optional[Shift]:
    """Least ``t`` in ``[-bound, bound]`` with ``t + F`` inside ``Y``.

    ``None`` only means no shift exists within the bound; see
    :func:`embeds_decision` for a proof of impossibility.
    """
    F = sorted(set(F))
    if not F:
        raise ValueError("F must be non-empty")
    span = F[-1] - F[0]
    lo, hi = -bound + F[0], bound + F[-1]
    bits = Y.bits(lo, hi)
    offsets = [f - F[0] for f in F]
    for start in range(0, hi - lo - span + 1):
        if all(bits[start + o] for o in offsets):
            return Shift(lo + start - F[0])
    return None


def count_shifts(F: Iterable[int], Y: IntegerSet, bound: int) -> int:
    """Number of ``t`` in ``[-bound, bound]`` with ``t + F`` inside ``Y``."""
    F = sorted(set(F))
    if not F:
        raise ValueError("F must be non-empty")
    return sum(1 for t in _shift_range(bound) if all((t + f) in Y for f in F))


def embeds_decision(F: Iterable[int], Y: IntegerSet) -> Optional[bool]:
    """Exact answer to "does some shift of F fit in Y" when Y is eventually periodic.

    Large shifts only see residues, so one period of candidate shifts decides
    the question. Returns ``None`` for other representations.
    """
    F = sorted(set(F))
    if not F:
        raise ValueError("F must be non-empty")
    if not isinstance(Y, EventuallyPeriodic):
        return None

    def fits(t):
        return all((t + f) in Y for f in F)

    base = Y.threshold - F[0]
    if any(fits(t) for t in range(base, base + Y.period)):
        return True
    # a smaller shift puts t + min(F) in the finite transient part
    return any(fits(tau - F[0]) for tau in Y.transient)


def fe_difference_property(X: Iterable[int], Y: IntegerSet, bound: int) -> bool:
    """Check that each difference of X is a difference of two members of Y in ``[-bound, bound]``."""
    X = sorted(set(X))
    diffs = sorted({a - b for a in X for b in X})
    reach = max(abs(d) for d in diffs)
    lo, hi = -bound - reach, bound + reach
    bits = Y.bits(lo, hi)
    ys = [y for y in range(-bound, bound + 1) if bits[y - lo]]
    return all(any(bits[y + d - lo] for y in ys) for d in diffs)


def has_kap(F: Iterable[int], k: int) -> Optional[tuple[int, int]]:
    """Least ``(a, d)`` with ``d >= 1`` and ``a, a+d, ..., a+(k-1)d`` in F."""
    if k < 2:
        raise ValueError("progressions need k >= 2")
    s = set(F)
    for a in sorted(s):
        for d in range(1, (max(s) - a) // max(k - 1, 1) + 1):
            if all(a + i * d in s for i in range(k)):
                return a, d
    return None
