"""Exact binomial tails and the matching concentration bounds.

These are reusable test oracles: the tail sums are exact log-domain
evaluations of the pmf, against which the Bernstein-style and Hoeffding
bounds are checked.  The Bernstein variant uses the sigma^2 = p(1-p)/4
convention in its denominator, validated empirically rather than re-derived.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ValidationError
from .stateprep import log_binom


def _pmf(n: int, p: float) -> np.ndarray:
    m = np.arange(n + 1)
    if p == 0.0 or p == 1.0:
        out = np.zeros(n + 1)
        out[n if p == 1.0 else 0] = 1.0
        return out
    logpmf = log_binom(n, m) + m * math.log(p) + (n - m) * math.log1p(-p)
    return np.exp(logpmf)


def binomial_tail(n: int, p: float, c: float) -> float:
    """Exact mass of |m - N p| >= c N under Binomial(N, p)."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must be in [0, 1], got {p}")
    if c < 0:
        raise ValidationError(f"c must be nonnegative, got {c}")
    m = np.arange(n + 1)
    tail = np.abs(m - n * p) >= c * n
    return float(np.sum(_pmf(n, p)[tail]))


def bernstein_bound(n: int, p: float, c: float) -> float:
    """2 exp(-N c^2 / (p(1-p)/2 + 2c/3))."""
    if c == 0:
        return 2.0
    return 2.0 * math.exp(-n * c ** 2 / (0.5 * p * (1.0 - p) + 2.0 * c / 3.0))


def hoeffding_bound(n: int, c: float) -> float:
    """2 exp(-2 c^2 N)."""
    return 2.0 * math.exp(-2.0 * c ** 2 * n)


def dml_gap(n: int, p: float) -> float:
    """Largest pointwise gap between the Binomial(N, p) pmf and the Gaussian
    density with matched mean and variance."""
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must be in (0, 1), got {p}")
    m = np.arange(n + 1)
    mu = n * p
    var = n * p * (1.0 - p)
    pdf = np.exp(-((m - mu) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
    return float(np.max(np.abs(_pmf(n, p) - pdf)))
