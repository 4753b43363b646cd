"""Boltzmann samplers: coprime pairs, segment multisets, NW-convex paths.

Every path object of size m is produced with probability x^m / S(x).  The
multiset sampler draws a maximal replication index K (P(K <= k) equals
exp(-T_k) with T_k the lambda tail sums), Poisson-many components at each
index below K, a zero-truncated Poisson count at K itself, and replicates
a component drawn at index j exactly j times.

Size convention: "size" is the multiset size, i.e. word length minus the
prepended north step, which is what S(x) counts.
"""

import json
import math
from bisect import bisect_left
from dataclasses import dataclass

from .christoffel import (
    EMPTY_MULTISET,
    CoprimeSegment,
    PathWord,
    SegmentMultiset,
    christoffel_word,
)
from .gfseries import GfContext
from .rng import RngStream

DEFAULT_DRAW_BUDGET = 1_000_000_000

# Sequential Poisson inversion needs exp(-lam) > 0 in float64; above this
# the draw is split using Poisson(a+b) = Poisson(a) + Poisson(b).
_POISSON_SPLIT = 500.0


class TrialCapExceeded(RuntimeError):
    """Rejection sampling gave up: the elementary-draw budget ran out."""

    def __init__(self, message: str, trials: int, draws: int):
        super().__init__(message)
        self.trials = trials
        self.draws = draws


@dataclass(slots=True)
class SampleReport:
    """One accepted sample plus the cost of producing it.

    trials counts rejection rounds (>= 1); size is the multiset size of
    the accepted object; segments carries the canonical multiset when the
    value is a path word.
    """

    value: object
    trials: int
    size: int
    segments: SegmentMultiset | None = None


def _poisson(lam: float, rng: RngStream) -> int:
    if lam > _POISSON_SPLIT:
        parts = math.ceil(lam / _POISSON_SPLIT)
        return sum(_poisson(lam / parts, rng) for _ in range(parts))
    u = rng.random()
    term = math.exp(-lam)
    acc = term
    k = 0
    limit = int(lam + 40.0 * math.sqrt(lam) + 100.0)
    while u > acc and k < limit:
        k += 1
        term *= lam / k
        acc += term
    return k


def _poisson_positive(lam: float, rng: RngStream) -> int:
    """Zero-truncated Poisson.  Rejection for lam >= 1 (at most e/(e-1)
    expected rounds); conditioned inversion below that, where exp(-lam)
    is well away from underflow."""
    if lam >= 1.0:
        while True:
            k = _poisson(lam, rng)
            if k:
                return k
    u = rng.random() * -math.expm1(-lam)
    term = math.exp(-lam) * lam
    acc = term
    k = 1
    while u > acc and k < 200:
        k += 1
        term *= lam / k
        acc += term
    return k


def sample_size_index(ctx: GfContext, rng: RngStream) -> int:
    """Segment size n drawn with probability phi(n) x^n / A(x), by binary
    search on the precomputed size CDF."""
    return bisect_left(ctx.size_cdf, rng.random()) + 1


def _size_at_index(ctx: GfContext, index: int, rng: RngStream) -> int:
    """Segment size under parameter x^index.

    index 1 reuses the precomputed CDF; higher indices use sequential
    inversion against A(x^index) = index * lambdas[index-1], whose walk
    stays short because x^index is far from 1.
    """
    if index == 1:
        return bisect_left(ctx.size_cdf, rng.random()) + 1
    y = ctx.x**index
    target = rng.random() * (ctx.lambdas[index - 1] * index)
    phi = ctx.totients.values
    acc = 0.0
    yn = 1.0
    for n in range(1, ctx.trunc_n + 1):
        yn *= y
        acc += phi[n] * yn
        if acc >= target:
            return n
    return ctx.trunc_n


def _split_uniform(n: int, rng: RngStream) -> tuple[int, int, int]:
    """(east, north, rejects): p uniform in 1..n re-drawn until coprime
    with n; east = n - p so that n = 1 yields the (0, 1) segment."""
    rejects = 0
    while True:
        p = rng.randint(1, n)
        if math.gcd(p, n) == 1:
            return n - p, p, rejects
        rejects += 1


def sample_coprime_pair(ctx: GfContext, rng: RngStream) -> tuple[CoprimeSegment, int]:
    """One primitive segment with P(seg) proportional to x^(p+q), plus the
    number of rejected uniform splits."""
    n = sample_size_index(ctx, rng)
    east, north, rejects = _split_uniform(n, rng)
    return CoprimeSegment(east, north), rejects


def _multiset_counts(ctx: GfContext, rng: RngStream) -> tuple[dict, int, int]:
    """Raw multiset draw: {(east, north): multiplicity}, size, #components."""
    cut = -math.log(rng.random())
    tail = ctx.lambda_tail
    lo, hi = 0, ctx.k_max
    while lo < hi:  # smallest k with tail[k] <= cut
        mid = (lo + hi) // 2
        if tail[mid] <= cut:
            hi = mid
        else:
            lo = mid + 1
    k_top = lo

    counts: dict[tuple[int, int], int] = {}
    size = 0
    components = 0
    for j in range(1, k_top + 1):
        lam = ctx.lambdas[j - 1]
        c = _poisson_positive(lam, rng) if j == k_top else _poisson(lam, rng)
        components += c
        for _ in range(c):
            n = _size_at_index(ctx, j, rng)
            east, north, _ = _split_uniform(n, rng)
            key = (east, north)
            counts[key] = counts.get(key, 0) + j
            size += n * j
    return counts, size, components


def sample_multiset(ctx: GfContext, rng: RngStream) -> SegmentMultiset:
    """Multiset m of primitive segments with P(m) = x^size(m) / S(x)."""
    counts, size, _ = _multiset_counts(ctx, rng)
    if not counts:
        return EMPTY_MULTISET
    return SegmentMultiset.from_counts(
        {CoprimeSegment(e, n): m for (e, n), m in counts.items()}
    )


def assemble_path(m: SegmentMultiset) -> PathWord:
    """Word of the NW-convex path: a prepended north step, then each
    segment's word repeated by multiplicity in decreasing slope order."""
    parts = ["1"]
    for seg, mult in m.entries:
        parts.append(christoffel_word(seg) * mult)
    return "".join(parts)


def sample_path_free(ctx: GfContext, rng: RngStream) -> SampleReport:
    m = sample_multiset(ctx, rng)
    return SampleReport(value=assemble_path(m), trials=1, size=m.size, segments=m)


def _rejection_loop(ctx, rng, accept, what: str, draw_budget: int) -> SampleReport:
    draws = 0
    trials = 0
    while True:
        trials += 1
        counts, size, components = _multiset_counts(ctx, rng)
        draws += size + components + 2
        if accept(size):
            if not counts:
                m = EMPTY_MULTISET
            else:
                m = SegmentMultiset.from_counts(
                    {CoprimeSegment(e, n): c for (e, n), c in counts.items()}
                )
            return SampleReport(value=assemble_path(m), trials=trials, size=size, segments=m)
        if draws > draw_budget:
            raise TrialCapExceeded(
                f"{what}: no acceptance within {draw_budget} elementary draws "
                f"({trials} trials)",
                trials=trials,
                draws=draws,
            )


def sample_path_exact(
    ctx: GfContext, n: int, rng: RngStream, draw_budget: int = DEFAULT_DRAW_BUDGET
) -> SampleReport:
    """Uniform sample among size-n paths, by rejection of free samples."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _rejection_loop(ctx, rng, lambda s: s == n, f"exact size {n}", draw_budget)


def sample_path_approx(
    ctx: GfContext,
    n: int,
    eps: float,
    rng: RngStream,
    draw_budget: int = DEFAULT_DRAW_BUDGET,
) -> SampleReport:
    """Rejection until the size lands in [(1-eps) n, (1+eps) n]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    lo = (1.0 - eps) * n
    hi = (1.0 + eps) * n
    return _rejection_loop(
        ctx, rng, lambda s: lo <= s <= hi, f"approximate size {n}±{eps:g}", draw_budget
    )


def sample_record(report: SampleReport, stream: int = 0) -> str:
    """One line-structured record: size, trials, word, segment triples."""
    segs = []
    if report.segments is not None:
        segs = [[seg.p, seg.q, mult] for seg, mult in report.segments.entries]
    return json.dumps(
        {
            "size": report.size,
            "trials": report.trials,
            "stream": stream,
            "word": report.value,
            "segments": segs,
        },
        separators=(",", ":"),
    )
