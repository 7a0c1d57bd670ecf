"""Exact Schnirelmann, upper asymptotic and upper Banach densities.

All values are :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import UnsupportedSetError
from .intsets import BlockFamily, EventuallyPeriodic, Explicit, IntegerSet, WindowSample

Witness = Union[int, tuple, None]


@dataclass(frozen=True)
class DensityReport:
    value: Fraction
    witness: Witness = None
    method: str = "exact"

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError(f"density {self.value} outside [0, 1]")
        if self.method not in ("exact", "windowed"):
            raise ValueError(f"unknown method {self.method!r}")

    def to_json(self) -> dict:
        w = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        return {
            "value": {"num": self.value.numerator, "den": self.value.denominator},
            "witness": w,
            "method": self.method,
        }


def _has_negative_members(s: IntegerSet) -> bool:
    if isinstance(s, Explicit):
        return bool(s.elements) and s.elements[0] < 0
    if isinstance(s, EventuallyPeriodic):
        if any(t < 0 for t in s.transient):
            return True
        if s.threshold >= 0 or not s.residues:
            return False
        return any(n in s for n in range(s.threshold, min(-1, s.threshold + s.period - 1) + 1))
    return False


def _stable_tail(s: EventuallyPeriodic, n0: int) -> bool:
    """Every prefix count in the last period block grows by |residues| over one period.

    When this holds each residue class of prefix ratios ``(c + q*m)/(n + q*p)``
    is a monotone Mobius sequence in ``q`` heading to the limit density, so the
    running minimum up to ``n0`` together with the limit is the infimum.
    """
    m, p = len(s.residues), s.period
    lo = n0 - p + 1
    if lo - p < max(s.threshold - 1, 0):
        return False
    return all(s.bits(n - p + 1, n).count(1) == m for n in range(lo, n0 + 1))


def schnirelmann(s: IntegerSet) -> DensityReport:
    """``inf |A cap [1, n]| / n`` over ``n >= 1``."""
    if isinstance(s, BlockFamily):
        raise UnsupportedSetError("Schnirelmann density needs an eventually periodic or explicit set")
    if _has_negative_members(s):
        raise ValueError("Schnirelmann density is defined for subsets of N only")

    if isinstance(s, Explicit):
        if 1 not in s:
            return DensityReport(Fraction(0), 1)
        # every prefix ratio is positive and tends to 0: unattained infimum
        return DensityReport(Fraction(0), None)

    delta = s.density
    t, p = s.threshold, s.period
    n0 = max(t + p * max(2, t), max(t, 1) + 2 * p)
    while not _stable_tail(s, n0):
        n0 += p

    bits = s.bits(1, n0)
    best_num, best_den = 2, 1  # sentinel above every ratio
    count = 0
    for n, b in enumerate(bits, start=1):
        count += b
        if count * best_den < best_num * n:
            best_num, best_den = count, n
    best = Fraction(best_num, best_den)
    if best <= delta:
        return DensityReport(best, best_den)
    return DensityReport(delta, None)


def upper_density(s: IntegerSet) -> DensityReport:
    """``limsup |A cap [1, n]| / n``; the limit exists for the supported sets."""
    if isinstance(s, EventuallyPeriodic):
        return DensityReport(s.density)
    if isinstance(s, Explicit):
        return DensityReport(Fraction(0))
    raise UnsupportedSetError("upper density is exact only for eventually periodic sets; "
                              "use best_window_density on a window")


def banach_density(s: IntegerSet, witness_length: int = 10) -> DensityReport:
    """Upper Banach density.

    For a block family with unbounded block lengths the value is 1 and the
    witness is the first block of length at least ``witness_length``.
    """
    if isinstance(s, EventuallyPeriodic):
        return DensityReport(s.density)
    if isinstance(s, Explicit):
        return DensityReport(Fraction(0))
    if isinstance(s, BlockFamily):
        for start, length in s.blocks():
            if length >= witness_length:
                return DensityReport(Fraction(1), (start, start + length - 1))
    raise UnsupportedSetError(f"unsupported representation {type(s).__name__}")


def best_window_density(w: WindowSample, length: int) -> tuple[int, Fraction]:
    """Leftmost ``x`` maximising the member count of ``[x+1, x+length]`` inside ``w``."""
    if length < 1:
        raise ValueError("length must be positive")
    if length > len(w):
        raise ValueError(f"length {length} larger than window of {len(w)}")
    bits = w.bits
    cur = sum(bits[:length])
    best, best_i = cur, 0
    for i in range(1, len(w) - length + 1):
        cur += bits[i + length - 1] - bits[i - 1]
        if cur > best:
            best, best_i = cur, i
    return w.lo + best_i - 1, Fraction(best, length)


def windowed_report(w: WindowSample, length: int) -> DensityReport:
    x, value = best_window_density(w, length)
    return DensityReport(value, (x + 1, x + length), "windowed")


def density_summary(s: IntegerSet) -> dict[str, Optional[DensityReport]]:
    """All three exact densities, ``None`` where the representation does not support one."""
    out: dict[str, Optional[DensityReport]] = {}
    for name, fn in (("schnirelmann", schnirelmann), ("upper_density", upper_density),
                     ("banach_density", banach_density)):
        try:
            out[name] = fn(s)
        except (UnsupportedSetError, ValueError):
            out[name] = None
    return out
