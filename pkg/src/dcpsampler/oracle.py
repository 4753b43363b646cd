"""Independent verification: convexity checkers, exact counts, enumeration.

Two deliberately redundant NW-convexity algorithms live here: a
word-combinatorial one (factorization into primitive segment words) and a
geometric one (no unit cell fits between the path and its upper convex
hull).  Disagreement between them is a bug, never a tie to break.
"""

from dataclasses import dataclass
from math import gcd

from .christoffel import (
    CoprimeSegment,
    PathWord,
    SegmentMultiset,
    christoffel_word,
    is_christoffel_primitive,
    slope_compare,
)
from .gfseries import totient_sieve

ENUMERATION_LIMIT = 14


@dataclass(frozen=True, slots=True)
class CountTable:
    """Exact path counts by size, arbitrary precision."""

    limit: int
    counts: list[int]


def count_paths(limit: int) -> CountTable:
    """Coefficients of prod (1 - z^n)^(-phi(n)) up to z^limit.

    Factor-by-factor multiplication with the negative-binomial expansion
    (1-y)^(-e) = sum C(e-1+j, j) y^j, all in exact integers.
    """
    if limit < 0:
        raise ValueError("limit must be >= 0")
    coeffs = [0] * (limit + 1)
    coeffs[0] = 1
    phi = totient_sieve(max(limit, 1)).values
    for n in range(1, limit + 1):
        e = phi[n]
        top = limit // n
        binom = 1
        new = coeffs[:]
        for j in range(1, top + 1):
            binom = binom * (e - 1 + j) // j
            off = j * n
            old = coeffs
            for k in range(off, limit + 1):
                new[k] += binom * old[k - off]
        coeffs = new
    return CountTable(limit, coeffs)


def _lyndon_factors(s: str) -> list[str]:
    """Duval's factorization into non-increasing Lyndon words over 0 < 1."""
    out = []
    k = 0
    n = len(s)
    while k < n:
        i, j = k, k + 1
        while j < n and s[i] <= s[j]:
            i = k if s[i] < s[j] else i + 1
            j += 1
        step = j - i
        while k <= i:
            out.append(s[k : k + step])
            k += step
    return out


def christoffel_factorization(w: PathWord) -> SegmentMultiset | None:
    """Canonical multiset of w if it is NW-convex, else None.

    The leading north step is stripped; the remainder must factor into
    primitive segment words of strictly decreasing slope (repeats of one
    word are its multiplicity).
    """
    if not w or w[0] != "1":
        return None
    rest = w[1:]
    if not rest:
        return SegmentMultiset((), 0)
    entries: list[tuple[CoprimeSegment, int]] = []
    prev_word = None
    for factor in _lyndon_factors(rest):
        if factor == prev_word:
            seg, mult = entries[-1]
            entries[-1] = (seg, mult + 1)
            continue
        if not is_christoffel_primitive(factor):
            return None
        ones = factor.count("1")
        seg = CoprimeSegment(len(factor) - ones, ones)
        if entries and slope_compare(entries[-1][0], seg) <= 0:
            return None
        entries.append((seg, 1))
        prev_word = factor
    return SegmentMultiset(tuple(entries), len(w) - 1)


def is_nw_convex(w: PathWord) -> bool:
    """Word-combinatorial NW-convexity test."""
    return christoffel_factorization(w) is not None


def _upper_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def is_nw_convex_geometric(w: PathWord) -> bool:
    """Geometric NW-convexity test, independent of the factorization.

    Builds the column heights of the path, the upper convex hull of its
    vertices, and rejects exactly when some unit cell fits on or above the
    path while staying weakly under the hull.  All arithmetic is integer:
    the hull height at abscissa x between vertices (x1,y1)-(x2,y2) is
    compared against a bound b via y1*(x2-x1) + (y2-y1)*(x-x1) >= b*(x2-x1).
    """
    if not w or w[0] != "1" or w[-1] != "1":
        return False
    tops = []  # height of the east step over each column, then the endpoint
    y = 0
    for ch in w:
        if ch == "1":
            y += 1
        else:
            tops.append(y)
    easts = len(tops)
    tops.append(y)  # final height at x = easts
    if easts == 0:
        return True

    hull = _upper_hull(list(enumerate(tops)))

    def hull_at_least(x: int, bound: int, seg_i: int) -> bool:
        x1, y1 = hull[seg_i]
        x2, y2 = hull[seg_i + 1]
        return y1 * (x2 - x1) + (y2 - y1) * (x - x1) >= bound * (x2 - x1)

    seg_i = 0
    for col in range(easts):
        bound = tops[col] + 1
        while hull[seg_i + 1][0] < col:
            seg_i += 1
        j = seg_i
        while hull[j + 1][0] < col + 1:
            j += 1
        if hull_at_least(col, bound, seg_i) and hull_at_least(col + 1, bound, j):
            return False  # a whole cell fits between path and hull
    return True


def enumerate_paths(n: int) -> list[SegmentMultiset]:
    """Every multiset of primitive segments with total size n, slope-sorted.

    Exhaustive recursion, guarded to n <= ENUMERATION_LIMIT; the list
    length equals count_paths(n).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration guarded to n <= {ENUMERATION_LIMIT}")
    if n == 0:
        return [SegmentMultiset((), 0)]

    segs = [CoprimeSegment(0, 1)]
    for total in range(2, n + 1):
        for p in range(1, total):
            q = total - p
            if gcd(p, q) == 1:
                segs.append(CoprimeSegment(p, q))
    segs.sort(key=lambda s: s.slope, reverse=True)

    out: list[SegmentMultiset] = []
    stack: list[tuple[CoprimeSegment, int]] = []

    def rec(idx: int, remaining: int) -> None:
        if remaining == 0:
            out.append(SegmentMultiset(tuple(stack), n))
            return
        for i in range(idx, len(segs)):
            s = segs[i].size
            if s > remaining:
                continue
            for mult in range(1, remaining // s + 1):
                stack.append((segs[i], mult))
                rec(i + 1, remaining - mult * s)
                stack.pop()

    rec(0, n)
    return out


def count_table_text(table: CountTable) -> str:
    """Two-column serialization (n, exact count)."""
    return "\n".join(f"{n},{c}" for n, c in enumerate(table.counts)) + "\n"
