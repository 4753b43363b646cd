"""Asymptotic counts, bumpy moments, average laws, and the limit shape.

The renormalized coordinate convention throughout: path size n is the
multiset size (word length minus the prepended north step), abscissae are
east displacements divided by n, heights are north displacements divided
by n.  The limit profile is height(z) = sqrt(2 z) - z on 0 <= z <= 1/2,
whose slope at abscissa z is 1/sqrt(2 z) - 1; the point where the slope
passes s sits at abscissa 1/(2 (1+s)^2) and height (1 - (s/(1+s))^2)/2.
"""

import math
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .boltzmann import SampleReport, sample_path_approx
from .gfseries import GfContext, Moments
from .rng import RngStream

ZETA3 = 1.2020569031595942854
ZETA_PRIME_MINUS1 = -0.16542114370045092921


def _count_prefactor() -> float:
    # exp(-2 zeta'(-1)) * zeta(3)^(1/9) * 2^(-4/9) * 3^(-7/18) * pi^(-8/9);
    # fixes the constant so that exact counts / asym_count(n) -> 1.
    return (
        math.exp(-2.0 * ZETA_PRIME_MINUS1)
        * ZETA3 ** (1.0 / 9.0)
        * 2.0 ** (-4.0 / 9.0)
        * 3.0 ** (-7.0 / 18.0)
        * math.pi ** (-8.0 / 9.0)
    )


def _growth_exponent() -> float:
    # 3/2^(2/3) * (zeta(3)/zeta(2))^(1/3) with zeta(2) = pi^2/6
    return 3.0 / 2.0 ** (2.0 / 3.0) * (ZETA3 / (math.pi**2 / 6.0)) ** (1.0 / 3.0)


def _trial_constant() -> float:
    # 2^(1/6) * 3^(1/3) * pi^(5/6) / zeta(3)^(1/6)
    return (
        2.0 ** (1.0 / 6.0)
        * 3.0 ** (1.0 / 3.0)
        * math.pi ** (5.0 / 6.0)
        / ZETA3 ** (1.0 / 6.0)
    )


@dataclass(frozen=True)
class AsymptoticConstants:
    """Fixed constants of the asymptotic laws.

    alpha: prefactor of the count asymptotics (see decisions on its value),
    beta: coefficient of n^(2/3) in the exponent, kappa: exact-size trial
    constant kappa * n^(2/3).
    """

    zeta3: float = ZETA3
    zeta_prime_minus1: float = ZETA_PRIME_MINUS1
    alpha: float = field(default_factory=_count_prefactor)
    beta: float = field(default_factory=_growth_exponent)
    kappa: float = field(default_factory=_trial_constant)


CONSTANTS = AsymptoticConstants()


def asym_count_log(n: int) -> float:
    """log of the asymptotic number of size-n paths:
    log alpha - (11/18) log n + beta n^(2/3)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = CONSTANTS
    return math.log(c.alpha) - 11.0 / 18.0 * math.log(n) + c.beta * n ** (2.0 / 3.0)


def asym_count(n: int) -> float:
    """Asymptotic count alpha * n^(-11/18) * exp(beta * n^(2/3)); overflows
    float range for n beyond roughly 8000 (use asym_count_log there)."""
    return math.exp(asym_count_log(n))


def asym_moments(x: float) -> Moments:
    """Closed-form asymptotic mean and standard deviation of the output
    size: 12 zeta(3) / ((1-x)^3 pi^2) and 6 sqrt(zeta(3) x) / (pi (1-x)^2)."""
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0, 1)")
    mu = 12.0 * ZETA3 / ((1.0 - x) ** 3 * math.pi**2)
    sigma = 6.0 * math.sqrt(ZETA3 * x) / (math.pi * (1.0 - x) ** 2)
    return Moments(mu1=mu, sigma=sigma)


def expected_initial_steps(n: int) -> float:
    """Asymptotic mean length of the leading north run (excluding the
    prepended step): (18 pi^2 n)^(1/3) / (6 zeta(3)^(1/3))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (18.0 * math.pi**2 * n) ** (1.0 / 3.0) / (6.0 * ZETA3 ** (1.0 / 3.0))


def limit_shape(z: float) -> float:
    """Limit profile sqrt(2 z) - z; defined on [0, 1/2], clamped above."""
    if z < 0.0:
        raise ValueError("z must be >= 0")
    z = min(z, 0.5)
    return math.sqrt(2.0 * z) - z


def abscissa_of_slope(s: float) -> float:
    """Limit height at which the path slope falls through s:
    (1 - (s/(1+s))^2) / 2.  At s = 0 this is the endpoint value 1/2."""
    if s < 0.0:
        raise ValueError("s must be >= 0")
    if math.isinf(s):
        return 0.0
    r = s / (1.0 + s)
    return 0.5 * (1.0 - r * r)


def coprime_slope_sum(n: int, s: float) -> float:
    """Exact north-step mass of steep splits against its asymptotic law.

    Sums q over coprime splits p + q = n with q/p > s and returns the
    ratio to (1 - (s/(1+s))^2)/2 * n * phi(n); the ratio tends to 1.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if s < 0.0:
        raise ValueError("s must be >= 0")
    total = 0
    phi_n = 0
    for p in range(1, n):
        if gcd(p, n) == 1:
            phi_n += 1
            q = n - p
            if q > s * p:
                total += q
    return total / (abscissa_of_slope(s) * n * phi_n)


def initial_rise(m) -> int:
    """Multiplicity of the pure-north segment, i.e. the leading north run
    of the assembled word minus the prepended step."""
    if len(m) and m.entries[0][0].p == 0:
        return m.entries[0][1]
    return 0


@dataclass(frozen=True)
class ShapeProfile:
    """Averaged renormalized height profile of sampled paths."""

    grid: tuple[float, ...]
    mean_heights: tuple[float, ...]
    samples: int
    n: int
    eps: float
    endpoint_mean: tuple[float, float]
    slope_one_height: float
    mean_initial_rise: float


def _heights_on_grid(report: SampleReport, grid: np.ndarray) -> np.ndarray:
    word = report.value
    size = report.size
    bits = np.frombuffer(word.encode("ascii"), dtype=np.uint8) - ord("0")
    norths = np.cumsum(bits)
    east_pos = np.nonzero(bits == 0)[0]
    easts = east_pos.size
    total_north = int(norths[-1])
    if easts == 0:
        return np.full(grid.shape, total_north / size)
    col_height = norths[east_pos]  # height of the east step over each column
    k = np.floor(grid * size).astype(np.int64)
    inside = k < easts
    h = np.where(inside, col_height[np.minimum(k, easts - 1)], total_north)
    return h / size


def shape_profile(
    ctx: GfContext,
    n: int,
    samples: int,
    grid_points: int,
    rng: RngStream,
    eps: float = 0.05,
) -> ShapeProfile:
    """Mean renormalized height at grid abscissae over approximate-size
    samples, with the endpoint mean, the mean height of the slope-1
    crossing, and the mean leading-run length recorded alongside.

    Height interpolation is piecewise constant on unit steps; each path is
    renormalized by its own (multiset) size.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    grid = np.linspace(0.0, 0.5, grid_points)
    acc = np.zeros(grid_points)
    end_e = end_n = 0.0
    crossing = 0.0
    rise = 0.0
    for _ in range(samples):
        report = sample_path_approx(ctx, n, eps, rng)
        acc += _heights_on_grid(report, grid)
        m = report.segments
        size = report.size
        east = m.east()
        end_e += east / size
        end_n += (size - east + 1) / size
        steep_north = sum(seg.q * mult for seg, mult in m.entries if seg.q > seg.p)
        crossing += (steep_north + 1) / size
        rise += initial_rise(m)
    return ShapeProfile(
        grid=tuple(grid.tolist()),
        mean_heights=tuple((acc / samples).tolist()),
        samples=samples,
        n=n,
        eps=eps,
        endpoint_mean=(end_e / samples, end_n / samples),
        slope_one_height=crossing / samples,
        mean_initial_rise=rise / samples,
    )


def profile_csv(profile: ShapeProfile) -> str:
    """Comma-separated table with a reference column from limit_shape.

    The leading comment line records the sampling metadata, including the
    size convention used for renormalization.
    """
    lines = [
        f"# n={profile.n} samples={profile.samples} eps={profile.eps:g} "
        f"size=multiset (word length minus leading north step)",
        "z,mean_height,reference,n,samples",
    ]
    for z, h in zip(profile.grid, profile.mean_heights):
        lines.append(
            f"{z:.6f},{h:.6f},{limit_shape(z):.6f},{profile.n},{profile.samples}"
        )
    return "\n".join(lines) + "\n"
