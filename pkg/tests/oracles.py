"""Brute-force reference implementations used to cross-check the library."""

from fractions import Fraction
from itertools import product


def prefix_ratios(member, horizon):
    out, count = [], 0
    for n in range(1, horizon + 1):
        count += member(n)
        out.append(Fraction(count, n))
    return out


def max_gap(bits):
    best = run = 0
    for b in bits:
        run = 0 if b else run + 1
        best = max(best, run)
    return best


def longest_run(lo, bits):
    best = (lo, 0)
    for i in range(len(bits)):
        j = i
        while j < len(bits) and bits[j]:
            j += 1
        if j - i > best[1]:
            best = (lo + i, j - i)
    return best


def meets_every_subinterval(members, lo, hi, k):
    """Every length-k subinterval of [lo, hi] contains a member."""
    s = set(members)
    if hi - lo + 1 < k:
        return any(lo <= x <= hi for x in s)
    return all(any(x in s for x in range(a, a + k)) for a in range(lo, hi - k + 2))


def first_mono_solution(holds, arity, colors, injective):
    """Lexicographically least monochromatic solution; colors[i] is the colour of i+1."""
    N = len(colors)
    for xs in product(range(1, N + 1), repeat=arity):
        if injective and len(set(xs)) < arity:
            continue
        if len({colors[x - 1] for x in xs}) == 1 and holds(xs):
            return xs
    return None


def first_mono_3ap(colors):
    N = len(colors)
    for a in range(1, N + 1):
        for d in range(1, N):
            if a + 2 * d > N:
                break
            if colors[a - 1] == colors[a + d - 1] == colors[a + 2 * d - 1]:
                return a, d
    return None


def avoiding_colorings(holds, arity, r, N, injective=False):
    """All colourings of [1, N] with r colours lacking a monochromatic solution."""
    out = []
    for colors in product(range(1, r + 1), repeat=N):
        if first_mono_solution(holds, arity, colors, injective) is None:
            out.append(colors)
    return out
