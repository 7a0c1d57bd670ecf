"""Finite Ramsey-type extraction: longest tree branches, monochromatic cliques, 3-APs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .errors import HypercombError


@dataclass(frozen=True)
class LevelTree:
    """Levels ``T_1..T_d``; ``parent`` maps every node below level 1 to a node one level up."""

    levels: tuple
    parent: Mapping[Hashable, Hashable] = field(default_factory=dict)

    def __post_init__(self):
        levels = tuple(tuple(level) for level in self.levels)
        object.__setattr__(self, "levels", levels)
        for i, level in enumerate(levels[1:], start=1):
            above = set(levels[i - 1])
            for node in level:
                if self.parent.get(node) not in above:
                    raise ValueError(f"node {node!r} at level {i + 1} lacks a parent at level {i}")

    @property
    def depth(self) -> int:
        return len(self.levels)


def koenig_branch(t: LevelTree) -> list:
    """Root-to-deepest branch, walking parents up from the first deepest node."""
    if not t.levels or any(len(level) == 0 for level in t.levels):
        raise HypercombError("every level of the tree must be non-empty")
    node = t.levels[-1][0]
    branch = [node]
    for _ in range(t.depth - 1):
        node = t.parent[node]
        branch.append(node)
    return branch[::-1]


class PairColoring:
    """Colouring of the unordered pairs of ``[1, N]`` with colours ``1..r``.

    Stored as a flat ``N*N`` byte table indexed by ``(min, max)``.
    """

    def __init__(self, N: int, r: int, table: bytes):
        if N < 1 or r < 1 or r > 255:
            raise ValueError("need N >= 1 and 1 <= r <= 255")
        if len(table) != N * N:
            raise ValueError("table must have N*N entries")
        self.N, self.r, self._table = N, r, bytes(table)

    @classmethod
    def from_function(cls, N: int, r: int, f: Callable[[int, int], int]) -> "PairColoring":
        table = bytearray(N * N)
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                c = f(i, j)
                if not 1 <= c <= r:
                    raise ValueError(f"colour {c} of {{{i},{j}}} outside 1..{r}")
                table[(i - 1) * N + (j - 1)] = c
        return cls(N, r, bytes(table))

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[int, int, int]], r: int,
                     N: Optional[int] = None) -> "PairColoring":
        triples = list(triples)
        if N is None:
            N = max((max(i, j) for i, j, _ in triples), default=0)
        seen = {}
        for i, j, c in triples:
            if i == j or not (1 <= i <= N and 1 <= j <= N):
                raise ValueError(f"bad pair {{{i},{j}}}")
            seen[(min(i, j), max(i, j))] = c
        missing = N * (N - 1) // 2 - len(seen)
        if missing:
            raise ValueError(f"{missing} pairs of [1,{N}] have no colour")
        return cls.from_function(N, r, lambda i, j: seen[(i, j)])

    @classmethod
    def random(cls, N: int, r: int, rng) -> "PairColoring":
        # only the upper triangle is read
        lut = bytes(b % r + 1 for b in range(256))
        return cls(N, r, rng.randbytes(N * N).translate(lut))

    def color(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("pairs need distinct elements")
        if i > j:
            i, j = j, i
        return self._table[(i - 1) * self.N + (j - 1)]


def ramsey_greedy(pc: PairColoring) -> tuple[list[int], int]:
    """Monochromatic set by majority focusing.

    Repeatedly take the least candidate ``a``, keep the largest colour class of
    the remaining candidates as seen from ``a`` (ties to the smaller colour) and
    record that colour. Every later pick is joined to ``a`` in the recorded
    colour, so the picks sharing the most frequent colour, plus the final pick,
    form a monochromatic set. For two colours this has at least
    ``floor(log2(N) / 2)`` elements.
    """
    if pc.N < 2:
        raise ValueError("need N >= 2")
    picks: list[tuple[int, int]] = []
    cand = list(range(1, pc.N + 1))
    while len(cand) > 1:
        a, rest = cand[0], cand[1:]
        classes: dict[int, list[int]] = {}
        for x in rest:
            classes.setdefault(pc.color(a, x), []).append(x)
        c = max(sorted(classes), key=lambda col: len(classes[col]))
        picks.append((a, c))
        cand = classes[c]
    counts = Counter(c for _, c in picks)
    color = max(sorted(counts), key=lambda col: counts[col])
    H = [a for a, c in picks if c == color] + cand
    return H, color


def is_monochromatic(pc: PairColoring, H: Sequence[int]) -> Optional[int]:
    """Common colour of all pairs of ``H`` or ``None``."""
    colors = {pc.color(a, b) for i, a in enumerate(H) for b in H[i + 1:]}
    return colors.pop() if len(colors) == 1 else None


def find_mono_3ap(colors: Sequence[int]) -> Optional[tuple[int, int]]:
    """Least ``(a, d)``, ``d >= 1``, with ``a, a+d, a+2d`` equally coloured.

    ``colors[i]`` is the colour of ``i + 1``.
    """
    N = len(colors)
    for a in range(1, N - 1):
        ca = colors[a - 1]
        for d in range(1, (N - a) // 2 + 1):
            if colors[a + d - 1] == ca and colors[a + 2 * d - 1] == ca:
                return a, d
    return None
