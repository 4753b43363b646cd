"""Totient table, truncated generating-function context, and parameter tuning.

The path class has counting series S(x) = prod_{n>=1} (1 - x^n)^(-phi(n)),
whose single-segment layer is A(x) = sum phi(n) x^n.  Everything here is
evaluated from truncated series with an explicit analytic tail bound, and
S itself is only ever handled through log S (the product overflows long
before x reaches the values needed for large samples).
"""

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import NamedTuple

ZETA3 = 1.2020569031595942854

# Hard ceiling on series truncation; beyond this the context would not fit
# a sane memory budget and the float slope keys in christoffel would start
# to lose exactness.
MAX_TRUNC = 1 << 25


class ResourceLimitError(RuntimeError):
    """Raised when the tail-bound target cannot be met within MAX_TRUNC terms."""


class Moments(NamedTuple):
    mu1: float
    sigma: float


@dataclass(frozen=True, slots=True)
class TotientTable:
    limit: int
    values: list[int]


def totient_sieve(limit: int) -> TotientTable:
    """Exact Euler totients for 1..limit by an in-place prime sieve."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    phi = list(range(limit + 1))
    for p in range(2, limit + 1):
        if phi[p] == p:  # p prime
            for m in range(p, limit + 1, p):
                phi[m] -= phi[m] // p
    return TotientTable(limit, phi)


@dataclass(frozen=True, slots=True)
class GfContext:
    """Frozen numeric context for one Boltzmann parameter x.

    Treat as read-only after construction; it can then be shared freely
    across concurrent samplers.

    size_weights[n-1] = phi(n) x^n, size_cdf its normalized prefix sums,
    lambdas[k-1] = A(x^k)/k, lambda_tail[k] = sum_{j>k} lambdas[j], and
    log_s = lambda_tail[0] = log S(x).
    """

    x: float
    tail_tol: float
    trunc_n: int
    totients: TotientTable
    size_weights: list[float]
    size_cdf: list[float]
    lambdas: list[float]
    lambda_tail: list[float]
    log_s: float

    @property
    def k_max(self) -> int:
        return len(self.lambdas)

    @property
    def a_value(self) -> float:
        """A(x) over the truncated range."""
        return self.lambdas[0]


def _geom_tail(x: float, m: int) -> float:
    """Closed form of sum_{n>m} n x^n (the phi(n) <= n majorant of the tail)."""
    return x ** (m + 1) * ((m + 1) * (1.0 - x) + x) / (1.0 - x) ** 2


def _required_trunc(x: float, tail_tol: float) -> tuple[int, TotientTable]:
    # A(x) <= sum n x^n = x/(1-x)^2 forces x^(m+1) < tail_tol, which gives
    # a cheap lower bound on m before any sieving happens.
    m_floor = math.log(tail_tol) / math.log(x) - 1.0
    if m_floor > MAX_TRUNC:
        raise ResourceLimitError(
            f"tail bound {tail_tol:g} needs more than {MAX_TRUNC} terms at x={x}"
        )
    m = 64
    while True:
        tot = totient_sieve(m)
        a_m = math.fsum(tot.values[n] * x**n for n in range(1, m + 1))
        if _geom_tail(x, m) < tail_tol * a_m:
            return m, tot
        if m >= MAX_TRUNC:
            raise ResourceLimitError(
                f"tail bound {tail_tol:g} unreachable within {MAX_TRUNC} terms at x={x}"
            )
        m *= 2


def _a_at(phi: list[int], y: float, trunc: int) -> float:
    """Truncated A(y) with early exit once terms stop mattering."""
    acc = 0.0
    yn = 1.0
    for n in range(1, trunc + 1):
        yn *= y
        t = phi[n] * yn
        acc += t
        if t < 1e-17 * acc and n >= 32:
            break
    return acc


def build_context(x: float, tail_tol: float = 1e-12) -> GfContext:
    """Build the frozen series context for parameter x.

    trunc_n is the first power-of-two order at which the analytic tail
    bound sum_{n>trunc} n x^n falls below tail_tol * A(x); the replication
    layers lambda_k are kept until lambda_{k+1} < tail_tol * lambda_1.

    Raises ValueError outside 0 < x < 1 or 0 < tail_tol < 1e-3, and
    ResourceLimitError when the tail bound cannot be met.
    """
    if not 0.0 < x < 1.0:
        raise ValueError(f"x must lie in (0, 1), got {x}")
    if not 0.0 < tail_tol < 1e-3:
        raise ValueError(f"tail_tol must lie in (0, 1e-3), got {tail_tol}")

    trunc, tot = _required_trunc(x, tail_tol)
    phi = tot.values

    weights = []
    xn = 1.0
    for n in range(1, trunc + 1):
        xn *= x
        weights.append(phi[n] * xn)
    a_x = math.fsum(weights)

    cdf = []
    acc = 0.0
    for w in weights:
        acc += w
        cdf.append(acc / a_x)
    cdf[-1] = 1.0

    # Stop once the next layer is negligible both against lambda_1 and,
    # through the rigorous tail bound sum_{j>k} lambda_j <= lambda_{k+1}/(1-x),
    # against the accumulated log S.
    lambdas = [a_x]
    acc = a_x
    k = 1
    while True:
        k += 1
        lam_k = _a_at(phi, x**k, trunc) / k
        if lam_k < tail_tol * a_x and lam_k < tail_tol * (1.0 - x) * acc:
            break
        lambdas.append(lam_k)
        acc += lam_k

    k_max = len(lambdas)
    tail = [0.0] * (k_max + 1)
    for i in range(k_max - 1, -1, -1):
        tail[i] = tail[i + 1] + lambdas[i]

    return GfContext(
        x=x,
        tail_tol=tail_tol,
        trunc_n=trunc,
        totients=tot,
        size_weights=weights,
        size_cdf=cdf,
        lambdas=lambdas,
        lambda_tail=tail,
        log_s=tail[0],
    )


def _mean_from_series(phi: list[int], x: float, trunc: int) -> float:
    acc = 0.0
    xn = 1.0
    for n in range(1, trunc + 1):
        xn *= x
        t = phi[n] * n * xn / (1.0 - xn)
        acc += t
        if t < 1e-17 * acc and n >= 32:
            break
    return acc


def mean_size(ctx: GfContext) -> float:
    """Expected output size x S'(x)/S(x) = sum phi(n) n x^n/(1-x^n), exactly
    from the truncated series (not the asymptotic approximation)."""
    return _mean_from_series(ctx.totients.values, ctx.x, ctx.trunc_n)


def size_variance(ctx: GfContext) -> Moments:
    """Mean and standard deviation of the Boltzmann output size.

    sigma^2 is the second derivative of log S with respect to log x:
    sum phi(n) n^2 x^n / (1-x^n)^2.
    """
    phi = ctx.totients.values
    x = ctx.x
    acc = 0.0
    xn = 1.0
    for n in range(1, ctx.trunc_n + 1):
        xn *= x
        t = phi[n] * n * n * xn / (1.0 - xn) ** 2
        acc += t
        if t < 1e-17 * acc and n >= 32:
            break
    return Moments(mu1=mean_size(ctx), sigma=math.sqrt(acc))


def tune_parameter(n: int, refine: bool = False, tail_tol: float = 1e-12) -> float:
    """Boltzmann parameter targeting mean output size n.

    Closed form: x_n = 1 - (12 zeta(3) / (n pi^2))^(1/3).  With refine the
    closed form seeds a bisection on the exact mean (which is increasing
    in x) down to relative gap 1e-6.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x_cf = 1.0 - (12.0 * ZETA3 / (n * math.pi**2)) ** (1.0 / 3.0)
    if not refine:
        return x_cf

    lo = max(x_cf, 1e-12) if x_cf > 0 else 1e-12
    hi = 1.0 - (1.0 - lo) / 2.0
    trunc, tot = _required_trunc(hi, tail_tol)
    phi = tot.values
    while _mean_from_series(phi, hi, trunc) < n:
        hi = 1.0 - (1.0 - hi) / 2.0
        trunc, tot = _required_trunc(hi, tail_tol)
        phi = tot.values
    if _mean_from_series(phi, lo, trunc) > n:
        lo = 1e-12

    x = lo
    for _ in range(200):
        x = 0.5 * (lo + hi)
        m = _mean_from_series(phi, x, trunc)
        if abs(m - n) <= 1e-6 * n:
            return x
        if m < n:
            lo = x
        else:
            hi = x
    return x


def series_identity_check(ctx: GfContext) -> float:
    """Max relative gap between two summations of the same series.

    Left side: sum over n of x^n/(1-x^n) times the exhaustively computed
    sum of east components over coprime splits p+q=n.  Right side:
    sum of n phi(n) x^n / (2 (1-x^n)).  Checked per term and in total.
    """
    phi = ctx.totients.values
    x = ctx.x
    worst = 0.0
    left_total = 0.0
    right_total = 0.0
    xn = x
    for n in range(2, ctx.trunc_n + 1):
        xn *= x
        right = n * phi[n] * xn / (2.0 * (1.0 - xn))
        coprime_east = sum(p for p in range(1, n) if math.gcd(p, n) == 1)
        left = coprime_east * xn / (1.0 - xn)
        left_total += left
        right_total += right
        worst = max(worst, abs(left - right) / right)
        if right < 1e-15 * right_total and n >= 32:
            break
    if right_total > 0.0:
        worst = max(worst, abs(left_total - right_total) / right_total)
    return worst


def sample_size_cdf_index(cdf: list[float], u: float) -> int:
    """Inverse-CDF lookup: smallest n (1-based) with cdf[n-1] >= u."""
    return bisect_left(cdf, u) + 1
