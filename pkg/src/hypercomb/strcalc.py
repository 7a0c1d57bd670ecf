"""The equivalence of integer coefficient strings.

Two strings are equivalent when one can be turned into the other by inserting
or deleting zeros and by duplicating an entry or merging two adjacent equal
entries. A string ``<a0, a1, ..., ak>`` stands for the linear combination
``a0*x + a1*(*x) + ... + ak*(k-fold *x)`` of iterated extensions of one
idempotent element.

Every class has a unique zero-free, run-free representative
(:func:`canonical_form`). :func:`closure_oracle` explores a class by brute
force from the generating rewrites alone and is used to check the normal form.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable

from .errors import ResourceLimitExceeded

CoeffString = tuple


def canonical_form(s: Iterable[int]) -> tuple:
    out = tuple(s)
    while True:
        nxt = tuple(k for k, _ in groupby(x for x in out if x != 0))
        if nxt == out:
            return out
        out = nxt


def equivalent(s: Iterable[int], t: Iterable[int]) -> bool:
    return canonical_form(s) == canonical_form(t)


def rewrites(s: tuple, max_len: int, alphabet: frozenset) -> set:
    """All strings one generating rewrite away from ``s`` within the length cap."""
    out = set()
    n = len(s)
    if n + 1 <= max_len:
        if 0 in alphabet:
            for i in range(n + 1):
                out.add(s[:i] + (0,) + s[i:])
        for i in range(n):
            out.add(s[:i + 1] + (s[i],) + s[i + 1:])
    for i in range(n):
        if s[i] == 0:
            out.add(s[:i] + s[i + 1:])
        if i + 1 < n and s[i] == s[i + 1]:
            out.add(s[:i] + s[i + 1:])
    out.discard(s)
    return out


@dataclass(frozen=True)
class Closure:
    strings: frozenset
    truncated: bool  # some rewrite was cut off by the length cap

    def __contains__(self, item) -> bool:
        return tuple(item) in self.strings

    def __iter__(self):
        return iter(self.strings)

    def __len__(self):
        return len(self.strings)


def closure_oracle(s: Iterable[int], max_len: int, alphabet: Iterable[int],
                   max_states: int = 10**6) -> Closure:
    """Breadth-first closure of ``s`` under single rewrites, strings of length ``<= max_len``."""
    s = tuple(s)
    alphabet = frozenset(alphabet)
    if not set(s) <= alphabet:
        raise ValueError("alphabet must contain every entry of s")
    if len(s) > max_len:
        raise ValueError("s is longer than max_len")
    seen = {s}
    queue = deque([s])
    truncated = False
    while queue:
        cur = queue.popleft()
        if len(cur) == max_len:
            truncated = True
        for nxt in rewrites(cur, max_len, alphabet):
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > max_states:
                    raise ResourceLimitExceeded(f"closure exceeded {max_states} strings")
                queue.append(nxt)
    return Closure(frozenset(seen), truncated)


def combo_to_string(coeffs: Iterable[int]) -> tuple:
    """Coefficients of ``a0*x + a1*(*x) + ...`` as a string."""
    return tuple(coeffs)


def indiscernible_combo(u: Iterable[int], v: Iterable[int]) -> bool:
    return equivalent(combo_to_string(u), combo_to_string(v))


def format_string(s: Iterable[int]) -> str:
    return "<" + ",".join(str(x) for x in s) + ">"


def parse_string(text: str) -> tuple:
    text = text.strip().strip("<>")
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))
