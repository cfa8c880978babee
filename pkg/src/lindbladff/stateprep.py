"""Binomial-amplitude and discrete-Gaussian state synthesis.

The binomial register state carries amplitude sqrt(C(N, m)) / 2^(N/2) at m;
coefficients are evaluated in the log domain so the construction survives far
past the overflow point of C(N, m).  The lattice Gaussian is the periodized
Gaussian on Z_N, normalized by the theta-function sum f(mu, sigma), and comes
with a recursive rotation-angle schedule that synthesizes it one address bit
at a time (low bit first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .config import TOL
from .errors import ValidationError


@dataclass(frozen=True)
class GaussianParams:
    """Periodized-Gaussian parameters: center mu, width sigma, period N."""

    mu: float
    sigma: float
    n: int

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if self.n < 2:
            raise ValidationError(f"period must be >= 2, got {self.n}")


def log_binom(n: int, m) -> np.ndarray:
    """log C(n, m) via log-gamma; vectorized over m."""
    m = np.asarray(m, dtype=float)
    return gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1)


def binomial_amplitudes(n: int) -> np.ndarray:
    """Amplitudes sqrt(C(n, m)) / 2^(n/2) for m = 0..n (unit norm)."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    m = np.arange(n + 1)
    return np.exp(0.5 * log_binom(n, m) - 0.5 * n * math.log(2.0))


def f_mu_sigma(mu: float, sigma: float) -> float:
    """Gaussian lattice normalizer sqrt(2 pi sigma^2) (1 + 2 sum_l cos(2 pi l mu) q^(l^2)).

    The theta series is truncated once the next term drops below the series
    cutoff; for sigma >~ 1 a single term already suffices.
    """
    if sigma <= 0:
        raise ValidationError(f"sigma must be positive, got {sigma}")
    base = math.sqrt(2.0 * math.pi * sigma ** 2)
    total = 1.0
    l = 1
    while True:
        mag = 2.0 * math.exp(-2.0 * math.pi ** 2 * l ** 2 * sigma ** 2)
        if mag < TOL.series_cutoff:
            break
        total += mag * math.cos(2.0 * math.pi * l * mu)
        l += 1
    return base * total


def discrete_gaussian_amplitudes(params: GaussianParams) -> np.ndarray:
    """Amplitudes of the periodized Gaussian on {0, ..., N-1} (unit norm).

    xi^2(m) = sum_l exp(-(m + l N - mu)^2 / (2 sigma^2)) / f(mu, sigma); the
    image sum is truncated once its tail falls below the series cutoff.
    """
    mu, sigma, n = params.mu, params.sigma, params.n
    m = np.arange(n, dtype=float)
    # images with |m + l n - mu| > reach contribute below the cutoff
    reach = sigma * math.sqrt(-2.0 * math.log(TOL.series_cutoff)) + 1.0
    l_lo = int(math.floor((mu - reach) / n)) - 1
    l_hi = int(math.ceil((mu + reach + n) / n)) + 1
    total = np.zeros(n)
    for l in range(l_lo, l_hi + 1):
        total += np.exp(-((m + l * n - mu) ** 2) / (2.0 * sigma ** 2))
    xi_sq = total / f_mu_sigma(mu, sigma)
    return np.sqrt(xi_sq)


def kw_angle_schedule(params: GaussianParams, depth: int) -> list[np.ndarray]:
    """Rotation angles of the bit-recursive Gaussian synthesis.

    Level k holds 2^k nodes indexed by the low k address bits already fixed;
    the node angle alpha = arccos(sqrt(f(mu/2, sigma/2) / f(mu, sigma)))
    splits the remaining mass between the even (cos) and odd (sin) sublattice,
    where odd-branch recursion continues with (mu - 1) / 2.  Intermediate mu
    values are kept as exact reals (no rounding at odd mu).
    """
    if params.n != 2 ** depth:
        raise ValidationError(f"period {params.n} is not 2^depth for depth {depth}")
    mus = np.array([params.mu], dtype=float)
    sigma = params.sigma
    schedule = []
    for _ in range(depth):
        f_parent = np.array([f_mu_sigma(mu, sigma) for mu in mus])
        f_even = np.array([f_mu_sigma(mu / 2.0, sigma / 2.0) for mu in mus])
        ratio = f_even / f_parent
        bad = np.max(np.abs(np.clip(ratio, 0.0, 1.0) - ratio))
        if bad > 1e-12:
            raise ValidationError(f"branch ratio escapes [0, 1] by {bad:.3e}")
        schedule.append(np.arccos(np.sqrt(np.clip(ratio, 0.0, 1.0))))
        # path p picking bit b moves to p + b * 2^level, so the next level's
        # nodes are the even children followed by the odd children
        children = np.empty(2 * len(mus))
        children[: len(mus)] = mus / 2.0          # next bit 0
        children[len(mus):] = (mus - 1.0) / 2.0   # next bit 1
        mus = children
        sigma /= 2.0
    return schedule


def kw_synthesize(schedule: list[np.ndarray]) -> np.ndarray:
    """Replay an angle schedule into the 2^depth amplitude vector."""
    depth = len(schedule)
    n = 2 ** depth
    amps = np.ones(n)
    for level, angles in enumerate(schedule):
        path = np.arange(n) & ((1 << level) - 1)
        bit = (np.arange(n) >> level) & 1
        a = angles[path]
        amps *= np.where(bit == 0, np.cos(a), np.sin(a))
    return amps


def binomial_gaussian_distance(n: int) -> float:
    """l2 gap between the binomial amplitudes (restricted to m < N) and the
    matched periodized Gaussian (mu = N/2, sigma = sqrt(N)/2)."""
    if n % 2 != 0:
        raise ValidationError(f"n must be even, got {n}")
    a = binomial_amplitudes(n)[:n]
    xi = discrete_gaussian_amplitudes(GaussianParams(n / 2.0, math.sqrt(n) / 2.0, n))
    return float(np.linalg.norm(a - xi))
