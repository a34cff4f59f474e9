"""Closed-form limit-law targets and the normalizations leading to them.

Both fringe and random target selections lead, after scaling by log(n)/n,
to the beta(ell, 1) law; the root selection leads, after an affine
normalization, to the spectrally negative stable law with characteristic
quadruple (0, pi/2, 1, -1).  All logs are natural.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from math import comb, factorial

from rrt_cut.splitting import Rat


def beta_moment(ell: int, s: int):
    """s-th moment of the beta(ell, 1) law: ell / (ell + s)."""
    if ell < 1 or s < 1:
        raise ValueError("need ell >= 1 and s >= 1")
    return Rat(ell, ell + s)


def beta_cdf(ell: int, x: float) -> float:
    """CDF of beta(ell, 1): clamp(x)^ell."""
    if ell < 1:
        raise ValueError("need ell >= 1")
    return min(max(x, 0.0), 1.0) ** ell


def stable_cf(t: float) -> complex:
    """Characteristic function of the limiting stable law:
    exp(i t log|t| - (pi/2) |t|), with value 1 at t = 0."""
    if t == 0:
        return complex(1.0)
    return cmath.exp(complex(-(math.pi / 2) * abs(t), t * math.log(abs(t))))


def normalize_R(x: float, n: int, ell: int) -> float:
    """Affine normalization of the root-rule cut count:
    (x - (ell-1) - n/log n - n log log n / log^2 n) / (n / log^2 n)."""
    if n < 3:
        raise ValueError("need n >= 3 so that log log n is defined and positive")
    ln = math.log(n)
    a_n = n / ln + n * math.log(ln) / ln**2
    b_n = n / ln**2
    return (x - (ell - 1) - a_n) / b_n


def scale_LY(x: float, n: int) -> float:
    """Scaling for the fringe / random rules: (log n / n) * x."""
    return math.log(n) / n * x


def leading_moment(rule: str, n: int, ell: int, s: int) -> float:
    """Leading asymptotic term of the s-th moment of the cut count."""
    if n < 2 or s < 1:
        raise ValueError("need n >= 2 and s >= 1")
    lead = (n / math.log(n)) ** s
    if rule == "first":
        return lead
    if rule in ("last", "random"):
        return ell / (ell + s) * lead
    raise ValueError(f"unknown rule {rule!r}")


def alpha_closed(ell: int, s: int):
    """Leading singular coefficient of the random-rule moment generating
    functions: (s! / (ell+s)) * C(ell+s-1, s)."""
    if ell < 1 or s < 0:
        raise ValueError("need ell >= 1 and s >= 0")
    return Rat(factorial(s) * comb(ell + s - 1, s), ell + s)


@lru_cache(maxsize=None)
def alpha_recurrence(ell: int, s: int):
    """Same numbers from their convolution recurrence, seeded at s = 0
    with 1/ell."""
    if ell < 1 or s < 0:
        raise ValueError("need ell >= 1 and s >= 0")
    if s == 0:
        return Rat(1, ell)
    acc = s * (ell + s - 1) ** 2 * alpha_recurrence(ell, s - 1)
    for r in range(1, ell):
        for s1 in range(0, s + 1):
            s2 = s - s1
            acc = acc + (
                comb(s, s1)
                * (r + s1)
                * alpha_recurrence(r, s1)
                * (ell - r + s2)
                * alpha_recurrence(ell - r, s2)
            )
    return acc / ((ell + s) * (ell + s - 1))
