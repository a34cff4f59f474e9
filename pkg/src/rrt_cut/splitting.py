"""Exact splitting probabilities and the joint distributions driving the
cut-count recurrences.

All values are exact rationals.  ``Rat`` is gmpy2's mpq when available (an
order of magnitude faster on the deep convolutions) and falls back to
``fractions.Fraction``; both reduce automatically and compare equal to each
other, so callers never need to care which one they got.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    Rat = Fraction

__all__ = [
    "Rat",
    "binom",
    "falling",
    "p_split",
    "p_root",
    "joint_R",
    "joint_L",
    "joint_Y",
    "joint_support",
    "verify_against_enumeration",
]


def binom(a: int, b: int) -> int:
    """Binomial coefficient with the zero convention for b < 0 or b > a."""
    if b < 0 or b > a:
        return 0
    return comb(a, b)


def falling(x: int, k: int):
    """Falling factorial x(x-1)...(x-k+1) for k >= 0.

    For k = -p < 0 the reciprocal-of-rising-factorial extension is used:
    x^(-p) = 1 / ((x+1)(x+2)...(x+p)).  Never analytic continuation.
    """
    if k >= 0:
        out = 1
        for i in range(k):
            out *= x - i
        return out
    p = -k
    den = 1
    for i in range(1, p + 1):
        den *= x + i
    return Rat(1, den)


def _check_split_args(n: int, ell: int, k: int, r: int) -> None:
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= ell <= n:
        raise ValueError("need 1 <= ell <= n")
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    if not 1 <= r <= min(k, ell):
        raise ValueError("need 1 <= r <= min(k, ell)")


def p_split(n: int, ell: int, k: int, r: int):
    """Probability that after one random cut of a random size-n recursive
    tree the component containing node ``ell`` has size ``k`` and node
    ``ell`` is the ``r``-th smallest retained label in it (two-case closed
    form; out-of-range binomials evaluate to 0)."""
    _check_split_args(n, ell, k, r)
    common = Rat(factorial(k - 1) * factorial(n - k - 1), (n - 1) * factorial(n - 1))
    if r == ell:
        count = (ell - 1) * binom(n - ell, n - k) + binom(n - ell + 1, n - k + 1)
    else:
        count = (binom(ell - 1, r) + binom(ell - 1, r - 2)) * binom(n - ell, k - r)
    return count * common


def p_root(n: int, k: int):
    """Probability that the root-side component of one random cut of a
    random size-n recursive tree has size ``k``."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    return Rat(n, (n - 1) * (n - k + 1) * (n - k))


def joint_R(n: int, ell: int, k: int, r: int):
    """Joint law of (component size, target-label rank) for the node-ell
    tracking split, in simplified falling-factorial form.  Identical to
    ``p_split``."""
    _check_split_args(n, ell, k, r)
    if r == ell:
        return (
            ((ell - 1) + Rat(n - ell + 1, n - k + 1))
            * falling(k - 1, ell - 1)
            / ((n - 1) * (n - k) * falling(n - 1, ell - 1))
        )
    return Rat(
        (binom(ell - 1, r) + binom(ell - 1, r - 2))
        * falling(k - 1, r - 1)
        * falling(n - k - 1, ell - r - 1),
        (n - 1) * falling(n - 1, ell - 1),
    )


def joint_L(n: int, ell: int, k: int, r: int):
    """Joint law of (component size, contained-target count) when tracking
    node n+1-ell; uses negative-exponent falling factorials plus a
    Kronecker-delta correction.  Equals p_split(n, n+1-ell, k, k+1-r)."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= ell <= n:
        raise ValueError("need 1 <= ell <= n")
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    if not 1 <= r <= min(k, ell):
        raise ValueError("need 1 <= r <= min(k, ell)")
    num = binom(ell - 1, r - 1) * (
        falling(k - 1, r - 2) * falling(n - k - 1, ell - r)
        + falling(k - 1, r) * falling(n - k - 1, ell - r - 2)
    )
    out = num * Rat(1, (n - 1) * falling(n - 1, ell - 1))
    if r < ell and k == n + r - ell:
        out += Rat(
            binom(ell, r - 1) * factorial(ell - r - 1), (n - 1)
        ) / falling(n - 1, ell - r)
    return out


def joint_Y(n: int, ell: int, k: int, r: int):
    """Joint law of (root-side size, selected labels on the root side) for
    a uniformly selected ell-subset of targets: hypergeometric placement
    times the root splitting probability."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= ell <= n:
        raise ValueError("need 1 <= ell <= n")
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    if not max(0, ell - (n - k)) <= r <= min(k, ell):
        raise ValueError("need max(0, ell-(n-k)) <= r <= min(k, ell)")
    return Rat(binom(k, r) * binom(n - k, ell - r), binom(n, ell)) * p_root(n, k)


def joint_support(rule: str, n: int, ell: int):
    """(k, r) pairs carrying the joint splitting law for one rule.

    The joint formulas are only meaningful on these pairs; in particular the
    negative-falling-factorial terms of the fringe form do not vanish
    outside the region, so the support must be explicit.  The tracked-node
    rules force r >= 1 and need n-k >= ell-r targets on the other side; the
    random rule allows r = 0.
    """
    if rule in ("first", "last"):
        for r in range(1, ell + 1):
            for k in range(r, min(n - 1, n - ell + r) + 1):
                yield k, r
    elif rule == "random":
        for k in range(1, n):
            for r in range(max(0, ell - (n - k)), min(k, ell) + 1):
                yield k, r
    else:
        raise ValueError(f"unknown rule {rule!r}")


def verify_against_enumeration(n: int, ell: int) -> dict:
    """Brute-force check of the splitting probabilities for one (n, ell).

    Counts, over all (n-1)! trees and all n-1 edges, the events
    {subtree containing node ell has size k, rank of ell in it is r},
    divides by (n-1)!(n-1) and compares exactly with ``p_split``.
    """
    from rrt_cut.trees import BudgetExceededError, enumerate_all

    if n > 8:
        raise BudgetExceededError("enumeration check capped at n <= 8")
    counts: dict[tuple[int, int], int] = {}
    total = 0
    for tree in enumerate_all(n):
        ch = tree.children_map()
        for _, w in tree.edges():
            # nodes of the subtree hanging below the removed edge
            sub = set()
            stack = [w]
            while stack:
                x = stack.pop()
                sub.add(x)
                stack.extend(ch[x])
            comp = sub if ell in sub else set(range(1, n + 1)) - sub
            k = len(comp)
            r = sum(1 for x in comp if x <= ell)
            counts[(k, r)] = counts.get((k, r), 0) + 1
            total += 1
    mismatches = []
    for k in range(1, n):
        for r in range(1, min(k, ell) + 1):
            expected = p_split(n, ell, k, r)
            observed = Rat(counts.get((k, r), 0), total)
            if expected != observed:
                mismatches.append((k, r, observed, expected))
    stray = [kr for kr in counts if not 1 <= kr[1] <= min(kr[0], ell)]
    return {
        "n": n,
        "ell": ell,
        "pairs_checked": total,
        "mismatches": mismatches,
        "out_of_range_events": stray,
        "ok": not mismatches and not stray,
    }
