"""Partition regularity at desk scale.

Rado's single-equation condition, monochromatic solution search, exhaustive
search for colourings that avoid monochromatic solutions, the base-5 colouring
that blocks ``x + y = z**2``, and the coefficient construction making
``c1*x1 + ... + cn*xn = 0`` injectively partition regular when the
coefficients sum to zero.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd, isqrt, lcm
from typing import Iterator, Optional, Sequence, Union

from . import strcalc
from ._parallel import ordered_results
from .errors import HypercombError, ResourceLimitExceeded, VerificationError

DEFAULT_MAX_NODES = 10**8


# -- equations and colourings ------------------------------------------------

@dataclass(frozen=True)
class Linear:
    """``c1*x1 + ... + cn*xn = 0``."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("a linear equation needs at least two variables")
        if 0 in self.coeffs:
            raise ValueError("coefficients must be non-zero")

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    def holds(self, xs: Sequence[int]) -> bool:
        return sum(c * x for c, x in zip(self.coeffs, xs)) == 0

    def complete(self, prefix: Sequence[int]) -> Optional[int]:
        """The last variable forced by the others, if it is a positive integer."""
        s = sum(c * x for c, x in zip(self.coeffs, prefix))
        q, r = divmod(-s, self.coeffs[-1])
        return q if r == 0 and q >= 1 else None

    def __str__(self):
        terms = " ".join(f"{c:+d}*x{i}" for i, c in enumerate(self.coeffs, start=1))
        return f"{terms} = 0"


@dataclass(frozen=True)
class SumEqualsSquare:
    """``x + y = z**2``."""

    @property
    def arity(self) -> int:
        return 3

    def holds(self, xs: Sequence[int]) -> bool:
        x, y, z = xs
        return x + y == z * z

    def complete(self, prefix: Sequence[int]) -> Optional[int]:
        t = prefix[0] + prefix[1]
        z = isqrt(t)
        return z if z * z == t else None

    def __str__(self):
        return "x + y = z^2"


Equation = Union[Linear, SumEqualsSquare]


@dataclass(frozen=True)
class Coloring:
    """Colours of ``1..N``; ``assign[i]`` is the colour of ``i + 1``."""

    N: int
    r: int
    assign: tuple

    def __post_init__(self):
        object.__setattr__(self, "assign", tuple(self.assign))
        if len(self.assign) != self.N:
            raise ValueError("assign must colour every element of [1, N]")
        if any(not 1 <= c <= self.r for c in self.assign):
            raise ValueError(f"colours must lie in 1..{self.r}")

    def __call__(self, n: int) -> int:
        return self.assign[n - 1]

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for n, c in enumerate(self.assign, start=1):
            out.setdefault(c, []).append(n)
        return out


# -- Rado ---------------------------------------------------------------------

def rado_condition(c: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Lexicographically least non-empty 1-based index set with zero coefficient sum."""
    c = tuple(c)
    if 0 in c:
        raise ValueError("coefficients must be non-zero")
    best = None
    for size in range(1, len(c) + 1):
        for idx in combinations(range(len(c)), size):
            if sum(c[i] for i in idx) == 0:
                cand = tuple(i + 1 for i in idx)
                if best is None or cand < best:
                    best = cand
                break  # later combinations of this size are lexicographically larger
    return best


def _next_prime(n: int) -> int:
    p = n + 1
    while p < 2 or any(p % d == 0 for d in range(2, isqrt(p) + 1)):
        p += 1
    return p


def rado_padic_coloring(c: Sequence[int], N: int) -> "Coloring":
    """Colour ``n`` by its last non-zero digit in base ``p``, ``p`` the least prime above ``sum |c_i|``.

    When no non-empty subset of ``c`` sums to zero this ``(p-1)``-colouring has
    no monochromatic solution: among the variables of least ``p``-adic
    valuation the shared digit ``d`` gives ``d * sum_F c_i = 0 (mod p)`` with
    ``0 < |sum_F c_i| < p``.
    """
    c = tuple(c)
    if rado_condition(c) is not None:
        raise ValueError(f"{c} satisfies the Rado condition; no colouring avoids it")
    p = _next_prime(sum(abs(x) for x in c))
    assign = []
    for n in range(1, N + 1):
        while n % p == 0:
            n //= p
        assign.append(n % p)
    return Coloring(N, p - 1, tuple(assign))


# -- monochromatic solutions --------------------------------------------------

def _solutions_from(e: Equation, pools: Sequence[Sequence[int]], N: int,
                    injective: bool) -> Iterator[tuple]:
    """Lexicographic solutions whose first ``n-1`` entries come from ``pools``."""
    n = e.arity

    def rec(prefix):
        if len(prefix) == n - 1:
            last = e.complete(prefix)
            if last is None or last > N or last not in members:
                return
            sol = (*prefix, last)
            if injective and len(set(sol)) < n:
                return
            yield sol
            return
        for x in pools[len(prefix)]:
            if injective and x in prefix:
                continue
            yield from rec((*prefix, x))

    members = set(pools[-1]) if pools else set()
    yield from rec(())


def find_mono_solution(e: Equation, col: Coloring, injective: bool = False) -> Optional[tuple]:
    """Least monochromatic solution in ``[1, N]^n`` (distinct entries if ``injective``)."""
    N = col.N
    classes = col.classes()
    for x1 in range(1, N + 1):
        pool = classes[col(x1)]
        pools = [[x1]] + [pool] * (e.arity - 1)
        for sol in _solutions_from(e, pools, N, injective):
            return sol
    return None


def all_solutions(e: Equation, N: int, injective: bool = False) -> Iterator[tuple]:
    full = list(range(1, N + 1))
    yield from _solutions_from(e, [full] * e.arity, N, injective)


def solution_sets(e: Equation, N: int, injective: bool = False) -> list[int]:
    """Distinct element sets of solutions in ``[1, N]`` as bitmasks (bit ``x`` for element ``x``)."""
    masks = set()
    for sol in all_solutions(e, N, injective):
        m = 0
        for x in sol:
            m |= 1 << x
        masks.add(m)
    return sorted(masks)


# -- avoiding colouring search ----------------------------------------------

class _Search:
    """Backtracking over ``1..N`` in order with forward checking on solution sets."""

    def __init__(self, N, r, masks, max_nodes, deadline):
        self.N, self.r = N, r
        self.max_nodes, self.deadline = max_nodes, deadline
        self.by_elem = [[] for _ in range(N + 1)]
        for m in masks:
            x = m
            while x:
                low = x & -x
                self.by_elem[low.bit_length() - 1].append(m)
                x ^= low
        self.color = [0] * (N + 1)
        self.colmask = [0] * (r + 1)
        self.assigned = 0
        self.forbidden = [0] * (N + 1)  # bit c set: colour c would complete a mono set
        self.nodes = 0
        full = ((1 << r) - 1) << 1
        for m in masks:
            if m & (m - 1) == 0:  # one-element solution: monochromatic under any colouring
                self.forbidden[m.bit_length() - 1] = full

    def assign(self, m: int, c: int, trail: list) -> bool:
        """Colour ``m`` with ``c``; push forbidding changes on ``trail``; False on wipe-out."""
        self.color[m] = c
        bit = 1 << m
        self.assigned |= bit
        self.colmask[c] |= bit
        cbit = 1 << c
        full = ((1 << self.r) - 1) << 1
        ok = True
        for s in self.by_elem[m]:
            rest = s & ~bit
            done = rest & self.assigned
            if done & ~self.colmask[c]:
                continue
            free = rest & ~self.assigned
            if free and free & (free - 1) == 0:
                u = free.bit_length() - 1
                if not self.forbidden[u] & cbit:
                    self.forbidden[u] |= cbit
                    trail.append((u, cbit))
                    if self.forbidden[u] == full:
                        ok = False
        return ok

    def unassign(self, m: int, c: int, trail: list):
        for u, cbit in trail:
            self.forbidden[u] &= ~cbit
        bit = 1 << m
        self.assigned &= ~bit
        self.colmask[c] &= ~bit
        self.color[m] = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceLimitExceeded(f"search exceeded {self.max_nodes} nodes")
        if self.deadline is not None and self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            raise ResourceLimitExceeded("search exceeded its time budget")

    def try_color(self, m: int, c: int) -> Optional[list]:
        """Assign if allowed; return the trail, or None (state unchanged) if it fails."""
        if self.forbidden[m] & (1 << c):
            return None
        self.tick()
        trail: list = []
        if self.assign(m, c, trail):
            return trail
        self.unassign(m, c, trail)
        return None

    def run(self, start: int, used: int) -> bool:
        """Extend a consistent colouring of ``1..start-1`` using colours ``1..used``."""
        if start > self.N:
            return True
        for c in range(1, min(self.r, used + 1) + 1):
            trail = self.try_color(start, c)
            if trail is None:
                continue
            if self.run(start + 1, max(used, c)):
                return True
            self.unassign(start, c, trail)
        return False


def _canonical_prefixes(N: int, r: int, depth: int) -> list[tuple]:
    """Symmetry-broken colour prefixes of length ``depth`` in colour-sequence order."""
    out = []

    def rec(prefix, used):
        if len(prefix) == depth:
            out.append(tuple(prefix))
            return
        for c in range(1, min(r, used + 1) + 1):
            rec(prefix + [c], max(used, c))

    rec([], 0)
    return out


def _search_chunk(N, r, masks, prefix, max_nodes, deadline):
    """Search below a fixed prefix; returns ``(colouring or None, nodes)``."""
    s = _Search(N, r, masks, max_nodes, deadline)
    used = 0
    for m, c in enumerate(prefix, start=1):
        if s.try_color(m, c) is None:
            return None, s.nodes
        used = max(used, c)
    found = s.run(len(prefix) + 1, used)
    return (tuple(s.color[1:]) if found else None), s.nodes


def search_avoiding_coloring(e: Equation, r: int, N: int, injective: bool = False,
                             max_nodes: int = DEFAULT_MAX_NODES,
                             time_budget: Optional[float] = None,
                             threads: int = 1, stats: Optional[dict] = None) -> Optional[Coloring]:
    """Least colouring of ``[1, N]`` (colour-sequence order) with no monochromatic solution.

    Element 1 always gets colour 1 and colour ``k+1`` is only used after colour
    ``k``. ``None`` means the canonical enumeration was exhausted. Work is
    split on the colours of the first few elements; the split does not depend
    on ``threads`` and the node budget is charged in split order, so the answer
    and any limit error are the same for every thread count.
    """
    if r < 1 or N < 1:
        raise ValueError("need r >= 1 and N >= 1")
    masks = solution_sets(e, N, injective)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    depth = min(N, 6)
    chunks = [(N, r, masks, p, max_nodes, deadline) for p in _canonical_prefixes(N, r, depth)]
    total = 0
    result = None
    for found, nodes in ordered_results(_search_chunk, chunks, threads):
        total += nodes
        if total > max_nodes:
            raise ResourceLimitExceeded(f"search exceeded {max_nodes} nodes")
        if found is not None:
            result = Coloring(N, r, found)
            break
    if stats is not None:
        stats["nodes"] = total
        stats["solution_sets"] = len(masks)
    if result is not None and find_mono_solution(e, result, injective) is not None:
        raise VerificationError("search returned a colouring with a monochromatic solution")
    return result


# -- the base-5 colouring against x + y = z^2 -----------------------------------

def quintic_color(n: int) -> tuple[int, int]:
    """``(n mod 5, m mod 5)`` where ``n - n mod 5 = 5**a * m`` with ``5 !| m``.

    Numbers below 5 (where ``n - n mod 5 = 0``) get the reserved second
    coordinate 0.
    """
    if n < 1:
        raise ValueError("n must be positive")
    i = n % 5
    m = n - i
    if m == 0:
        return i, 0
    while m % 5 == 0:
        m //= 5
    return i, m % 5


@dataclass(frozen=True)
class QuinticScan:
    N: int
    count: int            # non-trivial monochromatic solutions (x, y, z)
    examples: tuple       # the first few of them in scan order
    trivial: tuple        # constant solutions x = y = z, monochromatic under any colouring
    classes_used: int

    @property
    def ok(self) -> bool:
        return self.count == 0

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "monochromatic_count": self.count,
            "examples": [list(t) for t in self.examples],
            "trivial": [list(t) for t in self.trivial],
            "classes_used": self.classes_used,
            "obstruction_holds": self.ok,
        }


def quintic_scan(N: int, limit: int = 10) -> QuinticScan:
    """All monochromatic ``x + y = z**2`` with ``x, y, z <= N`` under :func:`quintic_color`.

    Only ``2 + 2 = 2**2`` is constant; it is listed separately. All
    non-trivial solutions are counted and the first ``limit`` kept.
    """
    if N < 1:
        raise ValueError("N must be positive")
    col = [None] + [quintic_color(n) for n in range(1, N + 1)]
    count, bad, trivial = 0, [], []
    for z in range(1, min(N, isqrt(2 * N)) + 1):
        target, cz = z * z, col[z]
        for x in range(max(1, target - N), min(N, target - 1) + 1):
            if col[x] == cz and col[target - x] == cz:
                if x == z == target - x:
                    trivial.append((x, x, x))
                    continue
                count += 1
                if len(bad) < limit:
                    bad.append((x, target - x, z))
    return QuinticScan(N, count, tuple(bad), tuple(trivial), len(set(col[1:])))


def verify_quintic_obstruction(N: int) -> bool:
    """No non-trivial monochromatic ``x + y = z**2`` in ``[1, N]`` under the base-5 colouring."""
    return quintic_scan(N, limit=0).ok


# -- coefficients for injective partition regularity -------------------------

class CoeffSearchError(HypercombError):
    pass


def _middle_system(c: Sequence[int], a: Sequence[int]) -> list[int]:
    """Residuals of the ``n-2`` middle equations for coefficients ``c`` in row order."""
    n = len(c)
    prefix = [0]
    for x in c:
        prefix.append(prefix[-1] + x)
    total = prefix[-1]
    res = []
    for j in range(1, n - 1):
        # (c1+..+c_{n-j-1}) a_{j+1} + (c_{n-j+1}+..+c_n) a_j
        res.append(prefix[n - j - 1] * a[j] + (total - prefix[n - j]) * a[j - 1])
    return res


def _solve_in_order(c: Sequence[int]) -> Optional[tuple]:
    """Primitive positive solution of the middle equations, if one exists."""
    n = len(c)
    prefix = [0]
    for x in c:
        prefix.append(prefix[-1] + x)
    total = prefix[-1]
    a = [Fraction(1)]
    for j in range(1, n - 1):
        lead = prefix[n - j - 1]
        if lead == 0:
            return None  # forces a_j = 0
        nxt = -(total - prefix[n - j]) * a[j - 1] / lead
        if nxt <= 0:
            return None
        a.append(nxt)
    den = lcm(*(x.denominator for x in a))
    ints = [int(x * den) for x in a]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class CoeffSolution:
    """``a1..a_{n-1}`` plus the variable receiving each matrix row.

    ``order[m]`` is the 0-based index of the variable assigned row ``m+1``.
    """

    c: tuple
    a: tuple
    order: tuple

    def ordered_coeffs(self) -> tuple:
        return tuple(self.c[i] for i in self.order)

    def check(self) -> bool:
        return (all(x > 0 for x in self.a)
                and all(v == 0 for v in _middle_system(self.ordered_coeffs(), self.a)))

    def to_json(self) -> dict:
        return {"c": list(self.c), "a": list(self.a),
                "variable_for_row": [i + 1 for i in self.order]}


def _distinct_orders(c: Sequence[int]) -> Iterator[tuple]:
    seen = set()
    for order in permutations(range(len(c))):
        key = tuple(c[i] for i in order)
        if key not in seen:
            seen.add(key)
            yield order


def _sign_orders(c: Sequence[int]) -> list[tuple]:
    pos = [i for i, x in enumerate(c) if x > 0]
    neg = [i for i, x in enumerate(c) if x < 0]
    return [tuple(pos + neg), tuple(neg + pos)]


def injective_pr_coeffs(c: Sequence[int], max_a1: int = 10**6,
                        max_exhaustive: int = 7) -> CoeffSolution:
    """Positive ``a1..a_{n-1}`` making the matrix rows combine to zero.

    The system is solved by back-substitution from ``a1`` and scaled to the
    least positive integer solution. Positive solutions need the leading
    partial sums in row order to share one sign, so if the given variable
    order does not admit one, the variables are reordered: all distinct
    orders for ``n <= max_exhaustive`` (positives-first / negatives-first
    beyond), keeping the solution with least ``a1``, then least ``a``, then
    least order.
    """
    c = tuple(int(x) for x in c)
    n = len(c)
    if n < 3:
        raise ValueError("need at least three coefficients")
    if 0 in c:
        raise ValueError("coefficients must be non-zero")
    if sum(c) != 0:
        raise ValueError("coefficients must sum to zero")

    ident = tuple(range(n))
    a = _solve_in_order(c)
    if a is not None:
        best = (a, ident)
    else:
        orders = _distinct_orders(c) if n <= max_exhaustive else _sign_orders(c)
        cands = []
        for order in orders:
            sol = _solve_in_order([c[i] for i in order])
            if sol is not None:
                cands.append((sol[0], sol, order))
        if not cands:
            raise CoeffSearchError(f"no positive solution for {c}")
        _, *best = min(cands)
        best = tuple(best)
    sol = CoeffSolution(c, *best)
    if sol.a[0] > max_a1:
        raise CoeffSearchError(f"least solution has a1={sol.a[0]} above the scan bound {max_a1}")
    if not sol.check():
        raise VerificationError(f"solver produced a non-solution {sol}")
    return sol


def mu_rows(a: Sequence[int]) -> list[tuple]:
    """The ``n`` coefficient rows over ``x, *x, ..., (n-1)-fold *x`` for ``a1..a_{n-1}``."""
    a = tuple(a)
    n = len(a) + 1
    rows = [a + (a[-1],)]
    for m in range(2, n):
        z = n - m
        rows.append(a[:z] + (0,) + a[z:])
    rows.append((a[0],) + a)
    return rows


@dataclass(frozen=True)
class MuMatrix:
    c: tuple
    a: tuple
    order: tuple
    rows: tuple

    def combination(self) -> tuple:
        """``sum_i c_i * (row of variable i)``."""
        n = len(self.rows)
        out = [0] * n
        for m, row in enumerate(self.rows):
            coef = self.c[self.order[m]]
            for j, v in enumerate(row):
                out[j] += coef * v
        return tuple(out)

    def variable_rows(self) -> list[tuple]:
        """Rows re-indexed by variable: entry ``i`` is the row of ``x_{i+1}``."""
        out = [None] * len(self.rows)
        for m, i in enumerate(self.order):
            out[i] = self.rows[m]
        return out

    def to_json(self) -> dict:
        return {
            "rows": [list(r) for r in self.rows],
            "variable_for_row": [i + 1 for i in self.order],
            "combination": list(self.combination()),
            "canonical": list(strcalc.canonical_form(self.a)),
        }


def build_mu_matrix(c: Sequence[int], a: Union[CoeffSolution, Sequence[int]]) -> MuMatrix:
    """Rows of the construction with its three postconditions checked.

    ``a`` may be a :class:`CoeffSolution` or a bare ``a1..a_{n-1}``; in the
    latter case the first variable order (lexicographic) that makes the rows
    combine to zero is used.
    """
    c = tuple(c)
    if isinstance(a, CoeffSolution):
        order, a = a.order, a.a
    else:
        a = tuple(a)
        order = next((o for o in _distinct_orders(c)
                      if all(v == 0 for v in _middle_system([c[i] for i in o], a))), None)
        if order is None:
            raise VerificationError(f"no variable order makes {a} a solution for {c}")
    if len(a) != len(c) - 1:
        raise ValueError("need exactly n-1 values a")
    mat = MuMatrix(c, tuple(a), tuple(order), tuple(mu_rows(a)))
    if any(mat.combination()):
        raise VerificationError(f"rows do not combine to zero: {mat.combination()}")
    target = strcalc.canonical_form(a)
    if any(strcalc.canonical_form(r) != target for r in mat.rows):
        raise VerificationError("rows are not all equivalent to <a1, ..., a_{n-1}>")
    if len(set(mat.rows)) != len(mat.rows):
        raise VerificationError("rows are not pairwise distinct")
    return mat
