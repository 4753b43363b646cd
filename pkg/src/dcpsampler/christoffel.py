"""Primitive Christoffel segments, their binary words, and slope ordering.

A coprime pair (p, q) codes the highest monotone lattice path from (0, 0)
to (p, q) that stays weakly below the straight segment between those two
points.  Words are plain strings over '0'/'1' with 0 = east and 1 = north.
"""

from dataclasses import dataclass
from math import gcd, inf

PathWord = str


@dataclass(frozen=True, slots=True)
class CoprimeSegment:
    """Discrete irreducible segment: p east steps, q north steps, gcd(p, q) = 1."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 1:
            raise ValueError(f"segment needs p >= 0 and q >= 1, got ({self.p}, {self.q})")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not coprime")

    @property
    def size(self) -> int:
        return self.p + self.q

    @property
    def slope(self) -> float:
        # Exact as an ordering key while p, q stay below ~2**25: distinct
        # primitive slopes q/p and q'/p' differ by >= 1/(p*p'), far above
        # float spacing in that range.
        return inf if self.p == 0 else self.q / self.p


def christoffel_word(seg: CoprimeSegment) -> PathWord:
    """Word of length p+q coding the highest path under the segment's line.

    Letter i (1-indexed) is '1' exactly when floor(i*q/(p+q)) increases;
    the result always ends with '1'.
    """
    p, q = seg.p, seg.q
    n = p + q
    out = []
    prev = 0
    for i in range(1, n + 1):
        cur = (i * q) // n
        out.append("1" if cur > prev else "0")
        prev = cur
    return "".join(out)


def is_christoffel_primitive(w: PathWord) -> bool:
    """True iff w codes a primitive segment (coprime step counts, word matches)."""
    if not w:
        return False
    ones = w.count("1")
    zeros = len(w) - ones
    if ones < 1 or gcd(zeros, ones) != 1:
        return False
    return w == christoffel_word(CoprimeSegment(zeros, ones))


def slope_compare(a: CoprimeSegment, b: CoprimeSegment) -> int:
    """Exact three-way comparison of slopes q/p; p = 0 sorts as +infinity.

    Cross-multiplication avoids any division, so the (0, 1) segment needs
    no special casing; equality holds only for identical segments.
    """
    lhs = a.q * b.p
    rhs = b.q * a.p
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True, slots=True)
class SegmentMultiset:
    """Multiset of primitive segments in strictly decreasing slope order.

    This is the canonical form of an NW-convex path with its initial north
    step removed; ``size`` is the total step count over all multiplicities.
    """

    entries: tuple[tuple[CoprimeSegment, int], ...]
    size: int

    def __post_init__(self):
        total = 0
        prev = None
        for seg, mult in self.entries:
            if mult < 1:
                raise ValueError("multiplicities must be >= 1")
            if prev is not None and slope_compare(prev, seg) <= 0:
                raise ValueError("entries must be strictly decreasing in slope")
            prev = seg
            total += seg.size * mult
        if total != self.size:
            raise ValueError(f"declared size {self.size} != computed {total}")

    @classmethod
    def from_counts(cls, counts: dict[CoprimeSegment, int]) -> "SegmentMultiset":
        entries = tuple(sorted(counts.items(), key=lambda e: e[0].slope, reverse=True))
        size = sum(seg.size * mult for seg, mult in entries)
        return cls(entries, size)

    def east(self) -> int:
        return sum(seg.p * mult for seg, mult in self.entries)

    def north(self) -> int:
        return sum(seg.q * mult for seg, mult in self.entries)

    def multiplicity(self, seg: CoprimeSegment) -> int:
        for s, mult in self.entries:
            if s == seg:
                return mult
        return 0

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


EMPTY_MULTISET = SegmentMultiset((), 0)
