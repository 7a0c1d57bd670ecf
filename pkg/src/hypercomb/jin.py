"""Finite version of the density-embedding construction for sets of positive Banach density.

Given a window of ``A`` on ``[1, M]``, :func:`jin_xi_search` looks for a start
``xi`` whose forward prefix densities ``|A cap [xi, xi+i)| / i`` all stay at or
above ``beta - 1/k`` for ``i = 1..k``. When no such start exists,
:func:`jin_stepping_refuter` replays the greedy stepping argument and produces
a trace showing the whole window is too sparse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._parallel import ordered_results
from .intsets import WindowSample

_CHUNK = 4096


@dataclass(frozen=True)
class JinCertificate:
    xi: int
    k: int
    beta: Fraction
    prefix_ratios: tuple
    E: tuple

    def to_json(self) -> dict:
        return {
            "xi": self.xi,
            "k": self.k,
            "beta": str(self.beta),
            "threshold": str(self.beta - Fraction(1, self.k)),
            "prefix_ratios": [str(r) for r in self.prefix_ratios],
            "E": list(self.E),
        }


@dataclass(frozen=True)
class SteppingStep:
    xi: int
    n: int
    count: int


@dataclass(frozen=True)
class SteppingTrace:
    k: int
    beta: Fraction
    lo: int
    hi: int
    steps: tuple
    final_xi: int
    window_count: int

    @property
    def threshold(self) -> Fraction:
        return self.beta - Fraction(1, self.k)

    @property
    def stepped_count(self) -> int:
        return sum(s.count for s in self.steps)

    @property
    def aggregate(self) -> Fraction:
        return Fraction(self.window_count, self.hi - self.lo + 1)

    @property
    def bound(self) -> Fraction:
        """``beta - 1/k`` plus the edge slack ``2k/M``."""
        return self.threshold + Fraction(2 * self.k, self.hi - self.lo + 1)

    @property
    def holds(self) -> bool:
        return self.aggregate < self.bound

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "beta": str(self.beta),
            "steps": [[s.xi, s.n, s.count] for s in self.steps],
            "final_xi": self.final_xi,
            "stepped_count": self.stepped_count,
            "window_count": self.window_count,
            "aggregate": str(self.aggregate),
            "bound": str(self.bound),
            "holds": self.holds,
        }


def _check_args(w: WindowSample, k: int, beta: Fraction) -> Fraction:
    beta = Fraction(beta)
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if k < 1:
        raise ValueError("k must be positive")
    if k > len(w):
        raise ValueError(f"k={k} larger than window of {len(w)}")
    return beta


def _scan(pc: list, k: int, num: int, den: int, start: int, stop: int) -> Optional[int]:
    """Least offset ``a`` in ``[start, stop)`` whose first k prefix counts meet ``num/den``."""
    for a in range(start, stop):
        base = pc[a]
        for i in range(1, k + 1):
            if (pc[a + i] - base) * den < i * num:
                break
        else:
            return a
    return None


def jin_xi_search(w: WindowSample, k: int, beta, threads: int = 1) -> Optional[JinCertificate]:
    """Least ``xi`` in ``[lo, hi - k]`` certifying the prefix-density bound."""
    beta = _check_args(w, k, beta)
    thr = beta - Fraction(1, k)
    pc = w.prefix_counts()
    n_starts = len(w) - k  # xi ranges over [lo, hi - k]
    chunks = [(pc, k, thr.numerator, thr.denominator, s, min(s + _CHUNK, n_starts))
              for s in range(0, n_starts, _CHUNK)]
    for a in ordered_results(_scan, chunks, threads):
        if a is not None:
            break
    else:
        return None
    ratios = tuple(Fraction(pc[a + i] - pc[a], i) for i in range(1, k + 1))
    E = tuple(n for n in range(k) if w.bits[a + n])
    return JinCertificate(w.lo + a, k, beta, ratios, E)


def jin_stepping_refuter(w: WindowSample, k: int, beta, threads: int = 1) -> Optional[SteppingTrace]:
    """Greedy stepping trace when no certifying ``xi`` exists; ``None`` otherwise."""
    beta = _check_args(w, k, beta)
    if jin_xi_search(w, k, beta, threads) is not None:
        return None
    thr = beta - Fraction(1, k)
    num, den = thr.numerator, thr.denominator
    pc = w.prefix_counts()
    steps = []
    a = 0
    last_start = len(w) - k - 1
    while a <= last_start:
        for n in range(1, k + 1):
            c = pc[a + n] - pc[a]
            if c * den < n * num:
                steps.append(SteppingStep(w.lo + a, n, c))
                a += n
                break
        else:  # pragma: no cover - excluded by the failed search
            raise AssertionError(f"no sparse step at xi={w.lo + a}")
    return SteppingTrace(k, beta, w.lo, w.hi, tuple(steps), w.lo + a, pc[-1])


def jin_embed_check(cert: JinCertificate, A) -> bool:
    """Recheck a certificate against ``A`` (anything supporting ``in``).

    ``xi + E`` must be exactly the members of ``A`` in ``[xi, xi + k)``, and
    ``E`` shifted to start at 1 must have every Schnirelmann prefix ratio up
    to ``k`` at least ``beta - 1/k``.
    """
    k, xi = cert.k, cert.xi
    thr = cert.beta - Fraction(1, k)
    E = set(cert.E)
    if any(not 0 <= e < k for e in E):
        return False
    if any((xi + e) not in A for e in E):
        return False
    if E != {n for n in range(k) if (xi + n) in A}:
        return False
    ratios = []
    count = 0
    for n in range(1, k + 1):
        count += (n - 1) in E
        ratios.append(Fraction(count, n))
    if any(r < thr for r in ratios):
        return False
    return tuple(ratios) == tuple(cert.prefix_ratios)
